fn main() {
    std::process::exit(mgmmf::cli::run(std::env::args_os()));
}

//! Command-line front end. [`run`] takes the full argument vector and returns
//! the process exit code.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::filter::{dedup_matchings, mgmmf_with_jitter, default_soft_jitter, MatchRanking};
use crate::generators::{
    gen_correlated_er_pair, gen_me_instance, gen_ms_instance, plant_template, CorrelatedErSpec, Instance, MeModelSpec,
    MsModelSpec, PlantSpec,
};
use crate::io::{format_mx, format_truth, parse_pairs, parse_soft_seeds, parse_truth, read_mx, read_text, write_text};
use crate::lab::{
    brute_force_global_min, check_condition_me, check_condition_ms, delta_counts, enumerate_perm_classes,
    expected_xp_ms, run_figure1_experiment, run_figure2_experiment, run_planted_experiment, summarize, xp_statistic,
    ConditionParams, Figure1Config, Figure2Config, MeCondition, Model, MsCondition, PlantedConfig,
};
use crate::lab::experiments::{rows_from_csv, rows_to_csv};
use crate::mfaq::{SeedSpec, SolverConfig};
use crate::multiplex::{pad, ChannelWeights, PaddingScheme, Role};
use crate::rng::seeded;

/// Comma-separated list given as one flag value.
#[derive(Debug, Clone, PartialEq)]
pub struct List<T>(pub Vec<T>);

impl<T: FromStr> FromStr for List<T> {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        s.split(',')
            .map(|x| x.trim().parse::<T>().map_err(|_| format!("bad list element {x:?}")))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(List)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threads {
    Auto,
    Count(usize),
}

impl FromStr for Threads {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            return Ok(Threads::Auto);
        }
        match s.parse::<usize>() {
            Ok(0) | Err(_) => Err(format!("expected a positive integer or `auto`, got {s:?}")),
            Ok(k) => Ok(Threads::Count(k)),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "mgmmf", version, about = "Multiplex graph matching matched filters")]
#[command(args_override_self = true)]
struct Cli {
    /// Master random seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads: a positive integer or `auto`.
    #[arg(long, global = true, default_value = "auto")]
    threads: Threads,
    /// File of `key = value` lines applied as flags before the command line.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search a background for a template with the matched filter.
    Match(MatchArgs),
    /// Write a random instance and its alignment.
    Generate(GenerateArgs),
    /// Run an experiment sweep and write CSVs.
    Experiment(ExperimentArgs),
    /// Exhaustive matchability report for a small instance.
    Analyze(AnalyzeArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Padding {
    Naive,
    Centered,
    Generalized,
}

fn scheme(p: Padding, w: Option<f64>) -> Result<PaddingScheme> {
    match (p, w) {
        (Padding::Naive, None) => Ok(PaddingScheme::Naive),
        (Padding::Centered, None) => Ok(PaddingScheme::Centered),
        (Padding::Generalized, Some(w)) => PaddingScheme::generalized(w),
        (Padding::Generalized, None) => Err(Error::InvalidConfig("--padding generalized needs --w".into())),
        (_, Some(_)) => Err(Error::InvalidConfig("--w only applies to generalized padding".into())),
    }
}

#[derive(Args, Debug)]
struct MatchArgs {
    #[arg(long)]
    template: PathBuf,
    #[arg(long)]
    background: PathBuf,
    #[arg(long, value_enum, default_value = "centered")]
    padding: Padding,
    /// Template non-edge weight for generalized padding.
    #[arg(long)]
    w: Option<f64>,
    #[arg(long, default_value_t = 100)]
    restarts: usize,
    /// Ranking JSON.
    #[arg(long)]
    out: PathBuf,
    /// Per-restart CSV log (default: next to --out).
    #[arg(long)]
    log: Option<PathBuf>,
    /// Known `template background` pairs, one per line.
    #[arg(long)]
    hard_seeds: Option<PathBuf>,
    /// Soft-seed CSV of `template,background,weight` rows.
    #[arg(long)]
    soft_seeds: Option<PathBuf>,
    /// Soft-seed start perturbation (default 1/n).
    #[arg(long)]
    jitter: Option<f64>,
    /// Collapse restarts that agree on every template label.
    #[arg(long)]
    dedup: bool,
    /// Alignment to score the rank-1 entry against.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Per-channel weights.
    #[arg(long)]
    weights: Option<List<f64>>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum GenModel {
    Ms,
    Me,
    CorrEr,
    Plant,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    model: GenModel,
    /// Writes PREFIX.template.mx, PREFIX.background.mx and PREFIX.truth.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Channel count; single-valued lists are repeated to this length.
    #[arg(long)]
    c: Option<usize>,
    #[arg(long)]
    p: Option<List<f64>>,
    #[arg(long)]
    s: Option<List<f64>>,
    #[arg(long)]
    q: Option<List<f64>>,
    #[arg(long)]
    r: Option<List<f64>>,
    #[arg(long)]
    t: Option<List<f64>>,
    #[arg(long)]
    rho: Option<List<f64>>,
    #[arg(long)]
    background_density: Option<List<f64>>,
    #[arg(long)]
    template_density: Option<List<f64>>,
    #[arg(long)]
    noise: Option<List<f64>>,
    #[arg(long)]
    drop_fraction: Option<f64>,
    /// Relabel the background randomly (the truth file follows).
    #[arg(long)]
    shuffle: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum ExperimentKind {
    Fig1,
    Fig2,
    Planted,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(long, value_enum)]
    kind: ExperimentKind,
    /// Raw per-replicate CSV.
    #[arg(long)]
    out: PathBuf,
    /// Per-cell summary CSV (fig1/fig2).
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Reuse rows already present in --out.
    #[arg(long)]
    resume: bool,
    /// Record wall_time_ms (makes output run-dependent).
    #[arg(long)]
    wall_time: bool,
    #[arg(long)]
    replicates: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    /// Hard seeds on the first labels.
    #[arg(long)]
    seeds: Option<usize>,
    /// fig1 channel counts.
    #[arg(long)]
    cs: Option<List<usize>>,
    /// fig1 correlations.
    #[arg(long)]
    rhos: Option<List<f64>>,
    /// fig2 channel count.
    #[arg(long)]
    c: Option<usize>,
    /// fig2 correlation magnitudes.
    #[arg(long)]
    rs: Option<List<f64>>,
    /// fig2 numbers of negatively correlated channels.
    #[arg(long)]
    c_bs: Option<List<usize>>,
    /// planted: restarts per filter run.
    #[arg(long)]
    restarts: Option<usize>,
    /// planted: generalized padding weights.
    #[arg(long)]
    ws: Option<List<f64>>,
    /// planted: template order.
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[arg(long)]
    template: PathBuf,
    #[arg(long)]
    background: PathBuf,
    /// JSON report.
    #[arg(long)]
    out: PathBuf,
    /// Template flip rates (enables expected X_P and condition checks).
    #[arg(long)]
    s: Option<List<f64>>,
    /// Background flip rates.
    #[arg(long)]
    q: Option<List<f64>>,
    /// Source densities (enables the Erdős–Rényi condition).
    #[arg(long)]
    p: Option<List<f64>>,
    /// Edge-dependent template rates for the ME Erdős–Rényi condition.
    #[arg(long)]
    r: Option<List<f64>>,
    #[arg(long)]
    t: Option<List<f64>>,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
}

/// Splices `key = value` lines from the `--config` file in right after the
/// subcommand name, so flags given on the command line take precedence.
fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        let s = a.to_string_lossy();
        if s == "--config" {
            path = args.get(i + 1).map(PathBuf::from);
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(PathBuf::from(p));
        }
    }
    let Some(path) = path else { return Ok(args) };
    let text = read_text(&path)?;
    let mut injected = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or(Error::Parse {
            line: i + 1,
            msg: format!("{}: expected `key = value`", path.display()),
        })?;
        let flag = format!("--{}", k.trim().replace('_', "-"));
        match v.trim() {
            "true" => injected.push(OsString::from(flag)),
            "false" => {}
            v => {
                injected.push(OsString::from(flag));
                injected.push(OsString::from(v));
            }
        }
    }
    let commands = ["match", "generate", "experiment", "analyze"];
    let at = args
        .iter()
        .position(|a| commands.contains(&a.to_string_lossy().as_ref()))
        .map_or(args.len(), |i| i + 1);
    let mut out = args[..at].to_vec();
    out.extend(injected);
    out.extend_from_slice(&args[at..]);
    Ok(out)
}

/// Parses and runs a command line (`args[0]` is the program name).
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let threads = match cli.threads {
        Threads::Auto => 0,
        Threads::Count(k) => k,
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker threads: {e}");
            return 1;
        }
    };
    let seed = cli.seed;
    let outcome = pool.install(|| match cli.command {
        Command::Match(a) => cmd_match(a, seed),
        Command::Generate(a) => cmd_generate(a, seed),
        Command::Experiment(a) => cmd_experiment(a, seed),
        Command::Analyze(a) => cmd_analyze(a),
    });
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn log_path(out: &Path) -> PathBuf {
    out.with_extension("restarts.csv")
}

#[derive(Serialize)]
struct RestartLogRow {
    restart_id: usize,
    objective: f64,
    iterations: usize,
    mean_recovery: f64,
}

fn cmd_match(a: MatchArgs, seed: u64) -> Result<()> {
    let tpl = read_mx(&a.template)?;
    let bg = read_mx(&a.background)?;
    if tpl.channel_count() != bg.channel_count() {
        return Err(Error::ChannelCountMismatch {
            template: tpl.channel_count(),
            background: bg.channel_count(),
        });
    }
    let (m, n) = (tpl.n_total(), bg.n_total());
    let scheme = scheme(a.padding, a.w)?;
    let mut cfg = SolverConfig::for_problem(n, tpl.channel_count());
    if let Some(k) = a.max_iters {
        cfg.max_iters = k;
    }
    if let Some(e) = a.epsilon {
        cfg.epsilon = e;
    }
    if let Some(List(w)) = a.weights {
        cfg.weights = ChannelWeights::new(w)?;
    }
    let mut seeds = SeedSpec::default();
    if let Some(p) = &a.hard_seeds {
        seeds.hard = parse_pairs(&read_text(p)?)?;
    }
    if let Some(p) = &a.soft_seeds {
        seeds.soft = Some(parse_soft_seeds(&read_text(p)?, m, n)?);
    }
    let jitter = a.jitter.unwrap_or_else(|| default_soft_jitter(n));
    let ranking = mgmmf_with_jitter(&tpl, &bg, scheme, &cfg, a.restarts, &seeds, seed, jitter)?;

    let mut log: Vec<RestartLogRow> = ranking
        .entries
        .iter()
        .map(|e| RestartLogRow {
            restart_id: e.restart_id,
            objective: e.objective,
            iterations: e.iterations,
            mean_recovery: e.mean_recovery(),
        })
        .collect();
    log.sort_by_key(|r| r.restart_id);
    let log_file = a.log.clone().unwrap_or_else(|| log_path(&a.out));
    write_text(&log_file, &rows_to_csv(&log)?)?;

    let ranking: MatchRanking = if a.dedup { dedup_matchings(&ranking) } else { ranking };
    write_text(&a.out, &ranking.to_json())?;

    let best = ranking.best().expect("at least one restart");
    let recovery: Vec<String> = best.recovery.iter().map(|r| format!("{r:.4}")).collect();
    println!(
        "rank 1: restart {} objective {} recovery [{}]",
        best.restart_id,
        best.objective,
        recovery.join(", ")
    );
    if let Some(p) = &a.truth {
        let truth = parse_truth(&read_text(p)?, m)?;
        let hits = (0..m).filter(|&j| best.matching[j] == truth[j]).count();
        println!("rank 1 matches {hits}/{m} template labels to their true images");
    }
    Ok(())
}

/// Repeats a single value to `c` entries; otherwise requires length `c`.
fn per_channel(name: &str, v: Option<List<f64>>, c: usize, default: f64) -> Result<Vec<f64>> {
    match v {
        None => Ok(vec![default; c]),
        Some(List(v)) if v.len() == 1 => Ok(vec![v[0]; c]),
        Some(List(v)) if v.len() == c => Ok(v),
        Some(List(v)) => Err(Error::InvalidParameter(format!(
            "--{name} has {} values for {c} channels",
            v.len()
        ))),
    }
}

fn channel_count(a: &GenerateArgs, default: usize) -> usize {
    a.c.unwrap_or_else(|| {
        [&a.p, &a.s, &a.q, &a.r, &a.t, &a.rho, &a.background_density, &a.template_density, &a.noise]
            .iter()
            .filter_map(|l| l.as_ref().map(|l| l.0.len()))
            .filter(|&k| k > 1)
            .max()
            .unwrap_or(default)
    })
}

fn cmd_generate(a: GenerateArgs, seed: u64) -> Result<()> {
    let mut rng = seeded(seed);
    let c = channel_count(&a, 3);
    let single = |name: &str, v: &Option<List<f64>>, default: f64| -> Result<f64> {
        match v {
            None => Ok(default),
            Some(List(v)) if v.len() == 1 => Ok(v[0]),
            Some(_) => Err(Error::InvalidParameter(format!("--{name} takes one value here"))),
        }
    };
    let inst = match a.model {
        GenModel::Ms => {
            let spec = MsModelSpec {
                n: a.n.unwrap_or(100),
                m: a.m.unwrap_or(20),
                p: per_channel("p", a.p.clone(), c, 0.5)?,
                s: per_channel("s", a.s.clone(), c, 0.05)?,
                q: per_channel("q", a.q.clone(), c, 0.05)?,
            };
            gen_ms_instance(&spec, &mut rng)?
        }
        GenModel::Me => {
            let spec = MeModelSpec {
                n: a.n.unwrap_or(100),
                m: a.m.unwrap_or(20),
                p: single("p", &a.p, 0.5)?,
                s: per_channel("s", a.s.clone(), c, 0.05)?,
                q: per_channel("q", a.q.clone(), c, 0.05)?,
                r: per_channel("r", a.r.clone(), c, 0.05)?,
                t: per_channel("t", a.t.clone(), c, 0.05)?,
            };
            gen_me_instance(&spec, &mut rng)?
        }
        GenModel::CorrEr => {
            let n = a.n.unwrap_or(100);
            if a.m.is_some_and(|m| m != n) {
                return Err(Error::InvalidParameter("correlated pairs have m = n".into()));
            }
            let spec = CorrelatedErSpec {
                n,
                p: single("p", &a.p, 0.5)?,
                rhos: per_channel("rho", a.rho.clone(), c, 0.5)?,
            };
            let (g, h) = gen_correlated_er_pair(&spec, &mut rng)?;
            Instance {
                template: g,
                background: h,
                truth: (0..n).collect(),
            }
        }
        GenModel::Plant => {
            let d = PlantSpec::default();
            let c = a.c.map_or(d.channel_count(), |_| c);
            let spec = PlantSpec {
                n: a.n.unwrap_or(d.n),
                m: a.m.unwrap_or(d.m),
                background_density: per_channel("background-density", a.background_density.clone(), c, d.background_density[0])?,
                template_density: per_channel("template-density", a.template_density.clone(), c, d.template_density[0])?,
                noise: per_channel("noise", a.noise.clone(), c, d.noise[0])?,
                drop_fraction: a.drop_fraction.unwrap_or(0.0),
            };
            plant_template(&spec, &mut rng)?
        }
    };
    let inst = if a.shuffle { inst.shuffled(&mut rng)? } else { inst };
    let prefix = a.out.to_string_lossy().into_owned();
    write_text(Path::new(&format!("{prefix}.template.mx")), &format_mx(&inst.template))?;
    write_text(Path::new(&format!("{prefix}.background.mx")), &format_mx(&inst.background))?;
    write_text(Path::new(&format!("{prefix}.truth")), &format_truth(&inst.truth))?;
    println!(
        "wrote {prefix}.{{template.mx,background.mx,truth}}: m = {}, n = {}, c = {}",
        inst.template.n_total(),
        inst.background.n_total(),
        inst.template.channel_count()
    );
    Ok(())
}

fn cmd_experiment(a: ExperimentArgs, seed: u64) -> Result<()> {
    let existing = if a.resume && a.out.exists() {
        rows_from_csv(&read_text(&a.out)?)?
    } else {
        Vec::new()
    };
    let rows = match a.kind {
        ExperimentKind::Fig1 => {
            let d = Figure1Config::default();
            let cfg = Figure1Config {
                cs: a.cs.map_or(d.cs, |l| l.0),
                rhos: a.rhos.map_or(d.rhos, |l| l.0),
                n: a.n.unwrap_or(d.n),
                p: a.p.unwrap_or(d.p),
                n_seeds: a.seeds.unwrap_or(d.n_seeds),
                replicates: a.replicates.unwrap_or(d.replicates),
                record_wall_time: a.wall_time,
            };
            run_figure1_experiment(&cfg, seed, &existing)?
        }
        ExperimentKind::Fig2 => {
            let d = Figure2Config::default();
            let cfg = Figure2Config {
                c: a.c.unwrap_or(d.c),
                rs: a.rs.map_or(d.rs, |l| l.0),
                c_bs: a.c_bs.map_or(d.c_bs, |l| l.0),
                n: a.n.unwrap_or(d.n),
                p: a.p.unwrap_or(d.p),
                n_seeds: a.seeds.unwrap_or(d.n_seeds),
                replicates: a.replicates.unwrap_or(d.replicates),
                record_wall_time: a.wall_time,
            };
            run_figure2_experiment(&cfg, seed, &existing)?
        }
        ExperimentKind::Planted => {
            let d = PlantedConfig::default();
            let cfg = PlantedConfig {
                spec: PlantSpec {
                    n: a.n.unwrap_or(d.spec.n),
                    m: a.m.unwrap_or(d.spec.m),
                    ..d.spec
                },
                restarts: a.restarts.unwrap_or(d.restarts),
                replicates: a.replicates.unwrap_or(d.replicates),
                ws: a.ws.map_or(d.ws, |l| l.0),
            };
            let rows = run_planted_experiment(&cfg, seed)?;
            write_text(&a.out, &rows_to_csv(&rows)?)?;
            println!("wrote {} rows to {}", rows.len(), a.out.display());
            return Ok(());
        }
    };
    write_text(&a.out, &rows_to_csv(&rows)?)?;
    if let Some(p) = &a.summary {
        write_text(p, &rows_to_csv(&summarize(&rows))?)?;
    }
    println!("wrote {} rows to {}", rows.len(), a.out.display());
    Ok(())
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|&x| x + 1).collect()
}

fn cmd_analyze(a: AnalyzeArgs) -> Result<()> {
    let tpl = read_mx(&a.template)?;
    let bg = read_mx(&a.background)?;
    let (m, n, c) = (tpl.n_total(), bg.n_total(), tpl.channel_count());
    let a_hat = pad(&tpl, m, PaddingScheme::Centered, Role::Template)?;
    let b_hat = pad(&bg, n, PaddingScheme::Centered, Role::Background)?;
    let brute = brute_force_global_min(&a_hat, &b_hat, &ChannelWeights::uniform(c))?;
    let params = ConditionParams {
        alpha: a.alpha,
        beta: a.beta,
        gamma: a.gamma,
    };
    let rates = match (&a.s, &a.q) {
        (Some(List(s)), Some(List(q))) => {
            if s.len() != c || q.len() != c {
                return Err(Error::DimensionMismatch(format!("--s and --q need {c} values")));
            }
            Some((s.clone(), q.clone()))
        }
        (None, None) => None,
        _ => return Err(Error::InvalidConfig("--s and --q go together".into())),
    };

    let mut classes = Vec::new();
    let mut nonpositive = 0usize;
    for k in 1..=m {
        for p in enumerate_perm_classes(n, m, k)? {
            let xp = xp_statistic(&a_hat, &b_hat, &p)?;
            if xp <= 0.0 {
                nonpositive += 1;
            }
            let counts = delta_counts(&a_hat, &b_hat, &p, Model::Ms, None)?;
            let mut row = json!({
                "k": k,
                "match": one_based(&p.restrict(m)),
                "xp": xp,
                "delta_total": counts.total,
                "delta_per_channel": counts.per_channel.iter().map(|d| [d.d0, d.d1, d.d2, d.d3]).collect::<Vec<_>>(),
            });
            if let Some((s, q)) = &rates {
                row["expected_xp"] = json!(expected_xp_ms(&counts, s, q)?);
                let cond = MsCondition::Counts { counts: &counts, k, s, q };
                row["counts_condition"] = json!(check_condition_ms(cond, &params, m, c)?);
            }
            classes.push(row);
        }
    }

    let mut report = json!({
        "template_order": m,
        "background_order": n,
        "channels": c,
        "brute_force": {
            "min_objective": brute.min_objective,
            "minimizers": brute.minimizers_mod_equiv.iter().map(|f| one_based(f)).collect::<Vec<_>>(),
            "in_target_set": brute.in_target_set,
        },
        "classes_with_nonpositive_xp": nonpositive,
        "classes": classes,
    });
    if let (Some(List(p)), Some((s, q))) = (&a.p, &rates) {
        let cond = MsCondition::ErRates { p, s, q };
        report["er_condition_ms"] = json!(check_condition_ms(cond, &params, m, c)?);
    }
    if let (Some(List(p)), Some((s, q)), Some(List(r)), Some(List(t))) = (&a.p, &rates, &a.r, &a.t) {
        if p.len() != 1 {
            return Err(Error::InvalidParameter("the ME condition takes a single source density".into()));
        }
        let cond = MeCondition::ErRates { p: p[0], s, q, r, t };
        report["er_condition_me"] = json!(check_condition_me(cond, &params, m, c)?);
    }
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    write_text(&a.out, &text)?;
    println!(
        "global minimum {} ({} minimizer classes, in target set: {})",
        brute.min_objective,
        brute.minimizers_mod_equiv.len(),
        brute.in_target_set
    );
    Ok(())
}

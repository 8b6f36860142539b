use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use mgmmf::filter::mgmmf;
use mgmmf::io::parse_mx;
use mgmmf::{PaddingScheme, SeedSpec, SolverConfig};
use mgmmf_ffi::*;

// a 4-cycle template planted on labels 1..=4 of a 7-label background, two channels
const TEMPLATE: &str = "4 2\n1 1 2\n1 2 3\n1 3 4\n1 4 1\n2 1 3\n";
const BACKGROUND: &str = "7 2\n1 1 2\n1 2 3\n1 3 4\n1 4 1\n1 5 6\n1 6 7\n1 5 2\n2 1 3\n2 5 7\n2 6 4\n";

fn graph(text: &str) -> *mut MgmmfGraph {
    let c = CString::new(text).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { mgmmf_graph_from_mx(c.as_ptr(), &mut g) }, MgmmfStatus::Ok);
    g
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(mgmmf_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn ranking_matches_the_library() {
    let (t, b) = (graph(TEMPLATE), graph(BACKGROUND));
    unsafe {
        assert_eq!(mgmmf_graph_order(t), 4);
        assert_eq!(mgmmf_graph_order(b), 7);
        assert_eq!(mgmmf_graph_channel_count(b), 2);
    }
    let mut opts = mgmmf_match_options_default();
    opts.restarts = 12;
    opts.seed = 42;
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { mgmmf_match(t, b, &opts, &mut r) }, MgmmfStatus::Ok);

    let (tpl, bg) = (parse_mx(TEMPLATE).unwrap(), parse_mx(BACKGROUND).unwrap());
    let want = mgmmf(&tpl, &bg, PaddingScheme::Centered, &SolverConfig::for_problem(7, 2), 12, &SeedSpec::default(), 42).unwrap();

    unsafe {
        assert_eq!(mgmmf_ranking_len(r), 12);
        assert_eq!(mgmmf_ranking_template_order(r), 4);
        for (i, e) in want.entries.iter().enumerate() {
            let (mut obj, mut id, mut mult) = (0.0, 0, 0);
            assert_eq!(mgmmf_ranking_entry(r, i, &mut obj, &mut id, &mut mult), MgmmfStatus::Ok);
            assert_eq!((obj, id, mult), (e.objective, e.restart_id, e.multiplicity));
            let mut labels = [0usize; 4];
            assert_eq!(mgmmf_ranking_matching(r, i, labels.as_mut_ptr(), 4), MgmmfStatus::Ok);
            let one_based: Vec<usize> = e.matching.iter().map(|v| v + 1).collect();
            assert_eq!(labels.to_vec(), one_based);
            let mut rec = [0.0; 2];
            assert_eq!(mgmmf_ranking_recovery(r, i, rec.as_mut_ptr(), 2), MgmmfStatus::Ok);
            assert_eq!(rec.to_vec(), e.recovery);
        }
        let js = mgmmf_ranking_to_json(r);
        assert_eq!(CStr::from_ptr(js).to_str().unwrap(), want.to_json());
        mgmmf_string_free(js);

        let mut labels = [0usize; 3];
        assert_eq!(mgmmf_ranking_matching(r, 0, labels.as_mut_ptr(), 3), MgmmfStatus::ShapeMismatch);
        assert_eq!(mgmmf_ranking_entry(r, 12, ptr::null_mut(), ptr::null_mut(), ptr::null_mut()), MgmmfStatus::IndexOutOfRange);
        assert!(last_error().contains("12"));

        mgmmf_ranking_free(r);
        mgmmf_graph_free(t);
        mgmmf_graph_free(b);
    }
}

#[test]
fn errors_are_reported_not_raised() {
    let (t, b) = (graph(TEMPLATE), graph("7 1\n1 1 2\n1 2 3\n1 3 4\n1 4 5\n1 5 6\n1 6 7\n"));
    let mut r = ptr::null_mut();
    unsafe {
        assert_eq!(mgmmf_match(t, b, ptr::null(), &mut r), MgmmfStatus::ShapeMismatch);
        assert!(r.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(mgmmf_match(ptr::null(), b, ptr::null(), &mut r), MgmmfStatus::NullPointer);

        let big = graph("3 2\n1 1 2\n2 2 3\n");
        let mut opts = mgmmf_match_options_default();
        opts.restarts = 2;
        let tb = graph(BACKGROUND);
        assert_eq!(mgmmf_match(tb, big, &opts, &mut r), MgmmfStatus::ShapeMismatch);

        opts.padding = 9;
        assert_eq!(mgmmf_match(t, tb, &opts, &mut r), MgmmfStatus::InvalidInput);
        opts.padding = MgmmfPadding::Generalized as u32;
        opts.w = 1.5;
        assert_eq!(mgmmf_match(t, tb, &opts, &mut r), MgmmfStatus::InvalidInput);

        // a self-loop is malformed input
        let bad = CString::new("3 1\n1 2 2\n").unwrap();
        let mut g = ptr::null_mut();
        assert_eq!(mgmmf_graph_from_mx(bad.as_ptr(), &mut g), MgmmfStatus::InvalidInput);
        let missing = CString::new("/nonexistent/graph.mx").unwrap();
        assert_eq!(mgmmf_graph_load(missing.as_ptr(), &mut g), MgmmfStatus::Io);
        assert!(g.is_null());

        // a successful call clears the message
        assert_eq!(mgmmf_graph_order(t), 4);
        let ok = graph("2 1\n1 1 2\n");
        assert_eq!(last_error(), "");

        mgmmf_ranking_free(ptr::null_mut());
        mgmmf_string_free(ptr::null_mut());
        for g in [t, b, big, tb, ok] {
            mgmmf_graph_free(g);
        }
    }
}

#[test]
fn loads_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bg.mx");
    std::fs::write(&path, BACKGROUND).unwrap();
    let c = CString::new(path.to_str().unwrap()).unwrap();
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(mgmmf_graph_load(c.as_ptr(), &mut g), MgmmfStatus::Ok);
        assert_eq!(mgmmf_graph_order(g), 7);
        mgmmf_graph_free(g);
    }
}

fn static_lib() -> Option<PathBuf> {
    // the test binary and the static library share target/<profile>/deps
    let exe = std::env::current_exe().ok()?;
    let lib = exe.parent()?.join("libmgmmf_ffi.a");
    lib.exists().then_some(lib)
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "mgmmf.h"

int main(void) {
    MgmmfGraph *t = NULL, *b = NULL;
    MgmmfRanking *r = NULL;
    if (mgmmf_graph_from_mx("4 1\n1 1 2\n1 2 3\n1 3 4\n", &t) != MGMMF_STATUS_OK) return 10;
    if (mgmmf_graph_from_mx("6 1\n1 1 2\n1 2 3\n1 3 4\n1 5 6\n", &b) != MGMMF_STATUS_OK) return 11;
    MgmmfMatchOptions o = mgmmf_match_options_default();
    o.restarts = 8;
    o.padding = MGMMF_PADDING_GENERALIZED;
    o.w = 0.5;
    if (mgmmf_match(t, b, &o, &r) != MGMMF_STATUS_OK) return 12;
    size_t labels[4];
    double obj;
    if (mgmmf_ranking_entry(r, 0, &obj, NULL, NULL) != MGMMF_STATUS_OK) return 13;
    if (mgmmf_ranking_matching(r, 0, labels, 4) != MGMMF_STATUS_OK) return 14;
    printf("%g %zu %zu %zu %zu\n", obj, labels[0], labels[1], labels[2], labels[3]);
    mgmmf_graph_free(t);
    if (mgmmf_graph_from_mx("bad", &t) == MGMMF_STATUS_OK || t != NULL) return 15;
    if (mgmmf_last_error()[0] == '\0') return 16;
    mgmmf_ranking_free(r);
    mgmmf_graph_free(b);
    return 0;
}
"#;

#[test]
fn header_compiles_and_links_from_c() {
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let header = std::fs::read_to_string(include.join("mgmmf.h")).unwrap();
    for sym in ["mgmmf_match", "mgmmf_ranking_to_json", "MgmmfMatchOptions", "MGMMF_STATUS_SHAPE_MISMATCH"] {
        assert!(header.contains(sym), "header lacks {sym}");
    }
    let Some(lib) = static_lib() else {
        panic!("static library not found next to the test binary");
    };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let cc = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(cc.status.success(), "{}", String::from_utf8_lossy(&cc.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "C program exited with {:?}", run.status.code());
    // the path 1-2-3-4 sits on labels 1..=4 of the background, in either direction
    let out = String::from_utf8_lossy(&run.stdout);
    let labels: Vec<&str> = out.split_whitespace().skip(1).collect();
    assert!(labels == ["1", "2", "3", "4"] || labels == ["4", "3", "2", "1"], "{out}");
}

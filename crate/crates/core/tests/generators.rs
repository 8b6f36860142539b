//! Monte Carlo checks of the random graph models against closed forms.

mod common;

use common::er_graph;
use mgmmf::filter::recovered_signal_stats;
use mgmmf::generators::*;
use mgmmf::*;
use ndarray::Array2;

/// Mean and standard error.
fn mean_se(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let v = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

fn within(x: &[f64], target: f64) {
    let (m, se) = mean_se(x);
    assert!((m - target).abs() <= 3.0 * se.max(1e-12), "mean {m} vs {target} (se {se})");
}

fn indicator(g: &MultiplexGraph, ch: usize, u: usize, v: usize) -> f64 {
    if g.channel(ch).has_edge(u, v) {
        1.0
    } else {
        0.0
    }
}

#[test]
fn error_channel_flips_at_the_requested_rate() {
    let mut rng = rng::seeded(1);
    let g = er_graph(50, 1, 0.5, &mut rng);
    let a = pad(&g, 50, PaddingScheme::Centered, Role::Background).unwrap();
    let a = embed_oplus_zero(&a.matrices[0], 52).unwrap();
    let e = Array2::from_shape_fn((52, 52), |(i, j)| if i == j { 0.0 } else { 0.3 });
    let mut frac = Vec::new();
    for _ in 0..10_000 {
        let out = apply_error_channel(&a, &e, &mut rng).unwrap();
        let mut flipped = 0usize;
        for i in 0..52 {
            for j in i + 1..52 {
                if a[[i, j]] == 0.0 {
                    assert_eq!(out[[i, j]], 0.0);
                } else if out[[i, j]] != a[[i, j]] {
                    assert_eq!(out[[i, j]], -a[[i, j]]);
                    flipped += 1;
                }
                assert_eq!(out[[i, j]], out[[j, i]]);
            }
        }
        frac.push(flipped as f64 / 1225.0);
    }
    within(&frac, 0.3);
    assert!(apply_error_channel(&a, &Array2::zeros((3, 3)), &mut rng).is_err());
}

#[test]
fn correlated_er_has_the_requested_correlation() {
    let mut rng = rng::seeded(2);
    for (p, rho) in [(0.5, 0.0), (0.5, 0.3), (0.2, 0.6)] {
        let spec = CorrelatedErSpec { n: 100, p, rhos: vec![rho] };
        // one edge pair per draw keeps the samples independent
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for _ in 0..10_000 {
            let (g, h) = gen_correlated_er_pair(&spec, &mut rng).unwrap();
            xs.push(indicator(&g, 0, 3, 17));
            ys.push(indicator(&h, 0, 3, 17));
        }
        within(&xs, p);
        within(&ys, p);
        let prod: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| x * y).collect();
        // E[XY] = p² + ρ p (1 - p)
        within(&prod, p * p + rho * p * (1.0 - p));
    }
    let bad = CorrelatedErSpec { n: 10, p: 0.8, rhos: vec![-0.9] };
    assert!(matches!(gen_correlated_er_pair(&bad, &mut rng), Err(Error::InfeasibleRho { .. })));
}

#[test]
fn ms_model_marginals_and_covariance() {
    let spec = MsModelSpec {
        n: 6,
        m: 4,
        p: vec![0.4, 0.7],
        s: vec![0.1, 0.25],
        q: vec![0.2, 0.05],
    };
    let mut rng = rng::seeded(3);
    for ch in 0..2 {
        let (p, s, q) = (spec.p[ch], spec.s[ch], spec.q[ch]);
        let (mut t, mut b, mut tb) = (Vec::new(), Vec::new(), Vec::new());
        for _ in 0..10_000 {
            let inst = gen_ms_instance(&spec, &mut rng).unwrap();
            let (x, y) = (indicator(&inst.template, ch, 0, 2), indicator(&inst.background, ch, 0, 2));
            t.push(x);
            b.push(y);
            tb.push(x * y);
        }
        within(&t, p * (1.0 - s) + (1.0 - p) * s);
        within(&b, p * (1.0 - q) + (1.0 - p) * q);
        let et = p * (1.0 - s) + (1.0 - p) * s;
        let eb = p * (1.0 - q) + (1.0 - p) * q;
        // Cov = p(1 - p)(1 - 2s)(1 - 2q)
        within(&tb, et * eb + p * (1.0 - p) * (1.0 - 2.0 * s) * (1.0 - 2.0 * q));
    }
}

#[test]
fn me_model_marginals_and_covariance() {
    let spec = MeModelSpec {
        n: 6,
        m: 4,
        p: 0.3,
        s: vec![0.1, 0.4],
        q: vec![0.05, 0.2],
        r: vec![0.2, 0.1],
        t: vec![0.15, 0.3],
    };
    let mut rng = rng::seeded(4);
    let mut draws = Vec::new();
    for _ in 0..10_000 {
        draws.push(gen_me_instance(&spec, &mut rng).unwrap());
    }
    let p = spec.p;
    for ch in 0..2 {
        let (s, q, r, t) = (spec.s[ch], spec.q[ch], spec.r[ch], spec.t[ch]);
        let tv: Vec<f64> = draws.iter().map(|i| indicator(&i.template, ch, 1, 3)).collect();
        let bv: Vec<f64> = draws.iter().map(|i| indicator(&i.background, ch, 1, 3)).collect();
        let eb = p * (1.0 - s) + (1.0 - p) * q;
        let et = p * (1.0 - r) + (1.0 - p) * t;
        within(&bv, eb);
        within(&tv, et);
        let prod: Vec<f64> = tv.iter().zip(&bv).map(|(x, y)| x * y).collect();
        within(&prod, et * eb + p * (1.0 - p) * (1.0 - r - t) * (1.0 - s - q));
    }
    // channels share one source, so they are correlated with each other
    let c0: Vec<f64> = draws.iter().map(|i| indicator(&i.background, 0, 0, 5)).collect();
    let c1: Vec<f64> = draws.iter().map(|i| indicator(&i.background, 1, 0, 5)).collect();
    let prod: Vec<f64> = c0.iter().zip(&c1).map(|(x, y)| x * y).collect();
    let (e0, e1) = (p * 0.9 + 0.7 * 0.05, p * 0.6 + 0.7 * 0.2);
    within(&prod, e0 * e1 + p * (1.0 - p) * (1.0 - 0.1 - 0.05) * (1.0 - 0.4 - 0.2));
}

#[test]
fn generators_are_deterministic_and_shuffle_tracks_truth() {
    let spec = MsModelSpec {
        n: 30,
        m: 10,
        p: vec![0.5; 3],
        s: vec![0.0; 3],
        q: vec![0.0; 3],
    };
    let a = gen_ms_instance(&spec, &mut rng::seeded(5)).unwrap();
    let b = gen_ms_instance(&spec, &mut rng::seeded(5)).unwrap();
    assert_eq!(a, b);
    let sh = a.shuffled(&mut rng::seeded(6)).unwrap();
    assert_ne!(sh.truth, a.truth);
    // noise free, so the truth carries every template edge
    let rec = recovered_signal_stats(&sh.template, &sh.background, &sh.truth).unwrap();
    assert_eq!(rec, vec![1.0; 3]);
}

#[test]
fn planted_default_profile() {
    let spec = PlantSpec::default();
    assert_eq!((spec.n, spec.m, spec.channel_count()), (500, 35, 3));
    let mut recov = Vec::new();
    for r in 0..20 {
        let inst = plant_template(&spec, &mut rng::substream(7, r)).unwrap();
        assert_eq!(inst.template.n_total(), 35);
        assert_eq!(inst.background.n_total(), 500);
        recov.extend(recovered_signal_stats(&inst.template, &inst.background, &inst.truth).unwrap());
    }
    // template edges present in the background under the true alignment:
    // d(1 - e) / (d(1 - e) + (1 - d)e) with block density d and noise e
    let (d, e) = (spec.template_density[0], spec.noise[0]);
    let expect = d * (1.0 - e) / (d * (1.0 - e) + (1.0 - d) * e);
    let (m, _) = mean_se(&recov);
    assert!((m - expect).abs() < 0.02, "truth recovery {m} vs {expect}");
}

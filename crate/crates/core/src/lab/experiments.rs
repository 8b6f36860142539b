//! Monte Carlo sweeps over correlated Erdős–Rényi multiplex pairs and the
//! planted-template filter benchmark.
//!
//! Every replicate draws from stream `replicate` of a seed derived from the
//! master seed and the cell's generating parameters, so cells can be run in
//! any order, resumed, or shared between sweeps.

use std::collections::HashMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filter::{induced_match_quality, mgmmf, MatchRanking};
use crate::generators::{gen_correlated_er_pair, plant_template, CorrelatedErSpec, Instance, PlantSpec};
use crate::mfaq::{mfaq, seeded_flat_start, SeedSpec, SolverConfig};
use crate::multiplex::{objective, pad, PaddingScheme, Role};
use crate::rng::{keyed_seed, substream};

/// One replicate of one cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub experiment: String,
    pub c: usize,
    pub rho_profile: String,
    pub c_b: usize,
    pub replicate: usize,
    pub seed_count: usize,
    /// Fraction of unseeded vertices matched to their true image.
    pub accuracy_nonseed: f64,
    pub accuracy_all: f64,
    pub objective: f64,
    /// Left empty unless timing was requested, so outputs stay reproducible.
    pub wall_time_ms: Option<f64>,
}

impl ExperimentRow {
    fn key(&self) -> (String, usize, String, usize, usize) {
        (
            self.experiment.clone(),
            self.c,
            self.rho_profile.clone(),
            self.c_b,
            self.replicate,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub experiment: String,
    pub c: usize,
    pub rho_profile: String,
    pub c_b: usize,
    pub replicates: usize,
    pub mean_accuracy_nonseed: f64,
    pub sd_accuracy_nonseed: f64,
    pub mean_accuracy_all: f64,
    pub sd_accuracy_all: f64,
    pub mean_objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure1Config {
    pub cs: Vec<usize>,
    pub rhos: Vec<f64>,
    pub n: usize,
    pub p: f64,
    pub n_seeds: usize,
    pub replicates: usize,
    pub record_wall_time: bool,
}

impl Default for Figure1Config {
    fn default() -> Self {
        Figure1Config {
            cs: (1..=10).collect(),
            rhos: vec![0.1, 0.2, 0.3, 0.4, 0.5],
            n: 100,
            p: 0.5,
            n_seeds: 10,
            replicates: 100,
            record_wall_time: false,
        }
    }
}

/// `c` channels, the first `c - c_b` with correlation `r` and the rest `-r`.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure2Config {
    pub c: usize,
    pub rs: Vec<f64>,
    pub c_bs: Vec<usize>,
    pub n: usize,
    pub p: f64,
    pub n_seeds: usize,
    pub replicates: usize,
    pub record_wall_time: bool,
}

impl Default for Figure2Config {
    fn default() -> Self {
        Figure2Config {
            c: 10,
            rs: vec![0.5],
            c_bs: (0..=9).collect(),
            n: 100,
            p: 0.5,
            n_seeds: 10,
            replicates: 100,
            record_wall_time: false,
        }
    }
}

#[derive(Debug, Clone)]
struct Cell {
    experiment: &'static str,
    c_b: usize,
    rhos: Vec<f64>,
}

/// Runs of equal values as `value` (single run) or `v1xk1;v2xk2`.
pub fn rho_profile(rhos: &[f64]) -> String {
    let mut runs: Vec<(f64, usize)> = Vec::new();
    for &r in rhos {
        match runs.last_mut() {
            Some((v, k)) if *v == r => *k += 1,
            _ => runs.push((r, 1)),
        }
    }
    if runs.len() == 1 {
        return format!("{}", runs[0].0);
    }
    runs.iter()
        .map(|(v, k)| format!("{v}x{k}"))
        .collect::<Vec<_>>()
        .join(";")
}

fn cell_seed(master: u64, n: usize, p: f64, rhos: &[f64]) -> u64 {
    keyed_seed(master, &format!("corr-er/n={n}/p={p}/rhos={rhos:?}"))
}

struct SweepShape {
    n: usize,
    p: f64,
    n_seeds: usize,
    replicates: usize,
    record_wall_time: bool,
}

fn check_shape(s: &SweepShape) -> Result<()> {
    if s.n == 0 || s.n_seeds > s.n || s.replicates == 0 {
        return Err(Error::InvalidParameter(format!(
            "need n >= 1, seeds <= n and at least one replicate (n = {}, seeds = {}, replicates = {})",
            s.n, s.n_seeds, s.replicates
        )));
    }
    Ok(())
}

/// Solves one correlated pair with hard seeds on the first template labels
/// and a barycenter start on the free block.
fn run_replicate(cell: &Cell, shape: &SweepShape, master: u64, replicate: usize) -> Result<ExperimentRow> {
    let started = Instant::now();
    let n = shape.n;
    let c = cell.rhos.len();
    let mut rng = substream(cell_seed(master, n, shape.p, &cell.rhos), replicate as u64);
    let spec = CorrelatedErSpec {
        n,
        p: shape.p,
        rhos: cell.rhos.clone(),
    };
    let (g, h) = gen_correlated_er_pair(&spec, &mut rng)?;
    let inst = Instance {
        template: g,
        background: h,
        truth: (0..n).collect(),
    }
    .shuffled(&mut rng)?;
    let hard: Vec<(usize, usize)> = (0..shape.n_seeds).map(|j| (j, inst.truth[j])).collect();
    let a = pad(&inst.template, n, PaddingScheme::Centered, Role::Template)?;
    let b = pad(&inst.background, n, PaddingScheme::Centered, Role::Background)?;
    let cfg = SolverConfig::for_problem(n, c);
    let p0 = seeded_flat_start(n, &hard);
    let (perm, _) = mfaq(&a, &b, &p0, &cfg, &SeedSpec::hard(hard))?;
    let hits: Vec<bool> = (0..n).map(|j| perm.get(j) == inst.truth[j]).collect();
    let all = hits.iter().filter(|&&h| h).count();
    let seeded = hits[..shape.n_seeds].iter().filter(|&&h| h).count();
    let free = n - shape.n_seeds;
    let value = objective(&a, &b, &perm, &cfg.weights)?;
    Ok(ExperimentRow {
        experiment: cell.experiment.to_string(),
        c,
        rho_profile: rho_profile(&cell.rhos),
        c_b: cell.c_b,
        replicate,
        seed_count: shape.n_seeds,
        accuracy_nonseed: if free == 0 { 1.0 } else { (all - seeded) as f64 / free as f64 },
        accuracy_all: all as f64 / n as f64,
        objective: value,
        wall_time_ms: shape
            .record_wall_time
            .then(|| started.elapsed().as_secs_f64() * 1e3),
    })
}

fn run_cells(cells: &[Cell], shape: &SweepShape, master: u64, existing: &[ExperimentRow]) -> Result<Vec<ExperimentRow>> {
    check_shape(shape)?;
    let done: HashMap<_, &ExperimentRow> = existing.iter().map(|r| (r.key(), r)).collect();
    let tasks: Vec<(&Cell, usize)> = cells
        .iter()
        .flat_map(|cell| (0..shape.replicates).map(move |r| (cell, r)))
        .collect();
    tasks
        .par_iter()
        .map(|&(cell, r)| {
            let key = (
                cell.experiment.to_string(),
                cell.rhos.len(),
                rho_profile(&cell.rhos),
                cell.c_b,
                r,
            );
            match done.get(&key) {
                Some(row) => Ok((*row).clone()),
                None => run_replicate(cell, shape, master, r),
            }
        })
        .collect()
}

fn fig1_cells(cfg: &Figure1Config) -> Result<Vec<Cell>> {
    let mut cells = Vec::new();
    for &rho in &cfg.rhos {
        for &c in &cfg.cs {
            if c == 0 {
                return Err(Error::InvalidParameter("channel counts must be >= 1".into()));
            }
            cells.push(Cell {
                experiment: "fig1",
                c_b: 0,
                rhos: vec![rho; c],
            });
        }
    }
    Ok(cells)
}

/// Accuracy of seeded matching as the number of equally correlated channels
/// grows. Rows from `existing` with matching keys are reused verbatim;
/// output order is canonical (ρ, then c, then replicate).
pub fn run_figure1_experiment(cfg: &Figure1Config, master: u64, existing: &[ExperimentRow]) -> Result<Vec<ExperimentRow>> {
    let shape = SweepShape {
        n: cfg.n,
        p: cfg.p,
        n_seeds: cfg.n_seeds,
        replicates: cfg.replicates,
        record_wall_time: cfg.record_wall_time,
    };
    run_cells(&fig1_cells(cfg)?, &shape, master, existing)
}

fn fig2_cells(cfg: &Figure2Config) -> Result<Vec<Cell>> {
    let mut cells = Vec::new();
    for &r in &cfg.rs {
        for &c_b in &cfg.c_bs {
            if c_b > cfg.c {
                return Err(Error::InvalidParameter(format!("c_b = {c_b} exceeds c = {}", cfg.c)));
            }
            let mut rhos = vec![r; cfg.c - c_b];
            rhos.extend(std::iter::repeat_n(-r, c_b));
            cells.push(Cell {
                experiment: "fig2",
                c_b,
                rhos,
            });
        }
    }
    Ok(cells)
}

/// Accuracy as channels with negated correlation replace good ones. A cell
/// with `c_b = 0` draws exactly the instances of the matching Figure 1 cell.
pub fn run_figure2_experiment(cfg: &Figure2Config, master: u64, existing: &[ExperimentRow]) -> Result<Vec<ExperimentRow>> {
    let shape = SweepShape {
        n: cfg.n,
        p: cfg.p,
        n_seeds: cfg.n_seeds,
        replicates: cfg.replicates,
        record_wall_time: cfg.record_wall_time,
    };
    run_cells(&fig2_cells(cfg)?, &shape, master, existing)
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Per-cell means and sample standard deviations, cells in first-seen order.
pub fn summarize(rows: &[ExperimentRow]) -> Vec<SummaryRow> {
    let mut order = Vec::new();
    let mut groups: HashMap<(String, usize, String, usize), Vec<&ExperimentRow>> = HashMap::new();
    for r in rows {
        let key = (r.experiment.clone(), r.c, r.rho_profile.clone(), r.c_b);
        groups
            .entry(key.clone())
            .or_insert_with(|| {
                order.push(key);
                Vec::new()
            })
            .push(r);
    }
    order
        .into_iter()
        .map(|key| {
            let g = &groups[&key];
            let nonseed: Vec<f64> = g.iter().map(|r| r.accuracy_nonseed).collect();
            let all: Vec<f64> = g.iter().map(|r| r.accuracy_all).collect();
            let (mn, sn) = mean_sd(&nonseed);
            let (ma, sa) = mean_sd(&all);
            SummaryRow {
                experiment: key.0,
                c: key.1,
                rho_profile: key.2,
                c_b: key.3,
                replicates: g.len(),
                mean_accuracy_nonseed: mn,
                sd_accuracy_nonseed: sn,
                mean_accuracy_all: ma,
                sd_accuracy_all: sa,
                mean_objective: g.iter().map(|r| r.objective).sum::<f64>() / g.len() as f64,
            }
        })
        .collect()
}

pub fn rows_to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn rows_from_csv(text: &str) -> Result<Vec<ExperimentRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize()
        .map(|row| {
            row.map_err(|e| Error::Parse {
                line: e.position().map_or(0, |p| p.line() as usize),
                msg: e.to_string(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedConfig {
    pub spec: PlantSpec,
    pub restarts: usize,
    pub replicates: usize,
    /// Generalized padding weights; `1` is centered padding.
    pub ws: Vec<f64>,
}

impl Default for PlantedConfig {
    fn default() -> Self {
        PlantedConfig {
            spec: PlantSpec::default(),
            restarts: 100,
            replicates: 20,
            ws: vec![0.0, 0.25, 0.5, 1.0],
        }
    }
}

/// Filter outcome for one replicate and one padding weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedRow {
    pub experiment: String,
    pub replicate: usize,
    pub w: f64,
    pub rank1_objective: f64,
    /// Mean per-channel recovery of the lowest-objective entry.
    pub rank1_recovery: f64,
    /// Highest mean per-channel recovery over all entries.
    pub best_recovery: f64,
    /// Per-channel recovery of that entry, `;`-separated.
    pub best_recovery_per_channel: String,
    /// Edge/non-edge agreement of the lowest-objective entry.
    pub rank1_induced_quality: f64,
    /// Fraction of template labels the lowest-objective entry maps to their
    /// true images.
    pub rank1_truth_accuracy: f64,
}

fn planted_row(inst: &Instance, ranking: &MatchRanking, replicate: usize, w: f64) -> Result<PlantedRow> {
    let rank1 = ranking.best().expect("at least one restart");
    let best = ranking.best_by_recovery().expect("at least one restart");
    let m = inst.truth.len();
    let correct = (0..m).filter(|&j| rank1.matching[j] == inst.truth[j]).count();
    Ok(PlantedRow {
        experiment: "planted".into(),
        replicate,
        w,
        rank1_objective: rank1.objective,
        rank1_recovery: rank1.mean_recovery(),
        best_recovery: best.mean_recovery(),
        best_recovery_per_channel: best
            .recovery
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(";"),
        rank1_induced_quality: induced_match_quality(&inst.template, &inst.background, &rank1.matching)?,
        rank1_truth_accuracy: correct as f64 / m as f64,
    })
}

/// Plants a template per replicate, shuffles the background and runs the
/// matched filter once per padding weight. All weights of a replicate share
/// the same restart seeds.
pub fn run_planted_experiment(cfg: &PlantedConfig, master: u64) -> Result<Vec<PlantedRow>> {
    cfg.spec.validate()?;
    if cfg.replicates == 0 || cfg.restarts == 0 || cfg.ws.is_empty() {
        return Err(Error::InvalidParameter("need replicates, restarts and weights".into()));
    }
    let schemes = cfg
        .ws
        .iter()
        .map(|&w| PaddingScheme::generalized(w))
        .collect::<Result<Vec<_>>>()?;
    let instance_seed = keyed_seed(master, "planted/instance");
    let solver = SolverConfig::for_problem(cfg.spec.n, cfg.spec.channel_count());
    let per_replicate = (0..cfg.replicates)
        .map(|r| {
            let mut rng = substream(instance_seed, r as u64);
            let inst = plant_template(&cfg.spec, &mut rng)?.shuffled(&mut rng)?;
            let filter_seed = keyed_seed(master, &format!("planted/filter/{r}"));
            cfg.ws
                .iter()
                .zip(&schemes)
                .map(|(&w, &scheme)| {
                    let ranking = mgmmf(
                        &inst.template,
                        &inst.background,
                        scheme,
                        &solver,
                        cfg.restarts,
                        &SeedSpec::default(),
                        filter_seed,
                    )?;
                    planted_row(&inst, &ranking, r, w)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_replicate.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles() {
        assert_eq!(rho_profile(&[0.5; 3]), "0.5");
        assert_eq!(rho_profile(&[0.5, 0.5, -0.5]), "0.5x2;-0.5x1");
    }

    #[test]
    fn perfect_correlation_is_recovered() {
        let cfg = Figure1Config {
            cs: vec![2],
            rhos: vec![1.0],
            n: 20,
            n_seeds: 3,
            replicates: 2,
            ..Figure1Config::default()
        };
        let rows = run_figure1_experiment(&cfg, 1, &[]).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.accuracy_all == 1.0 && r.wall_time_ms.is_none()));
    }

    #[test]
    fn csv_round_trip_and_resume() {
        let cfg = Figure1Config {
            cs: vec![1, 2],
            rhos: vec![0.6],
            n: 15,
            n_seeds: 2,
            replicates: 2,
            ..Figure1Config::default()
        };
        let rows = run_figure1_experiment(&cfg, 4, &[]).unwrap();
        let text = rows_to_csv(&rows).unwrap();
        assert!(text.starts_with("experiment,c,rho_profile,c_b,replicate,seed_count,"));
        let back = rows_from_csv(&text).unwrap();
        assert_eq!(back, rows);
        let mut partial = back[..2].to_vec();
        partial[0].objective = -1.0; // reused, not recomputed
        let resumed = run_figure1_experiment(&cfg, 4, &partial).unwrap();
        assert_eq!(resumed[0].objective, -1.0);
        assert_eq!(resumed[1..], rows[1..]);
    }

    #[test]
    fn summary_statistics() {
        let mk = |rep, acc| ExperimentRow {
            experiment: "fig1".into(),
            c: 1,
            rho_profile: "0.5".into(),
            c_b: 0,
            replicate: rep,
            seed_count: 0,
            accuracy_nonseed: acc,
            accuracy_all: acc,
            objective: 2.0,
            wall_time_ms: None,
        };
        let s = summarize(&[mk(0, 0.2), mk(1, 0.4)]);
        assert_eq!(s.len(), 1);
        assert!((s[0].mean_accuracy_nonseed - 0.3).abs() < 1e-12);
        assert!((s[0].sd_accuracy_nonseed - 0.02f64.sqrt()).abs() < 1e-12);
    }
}

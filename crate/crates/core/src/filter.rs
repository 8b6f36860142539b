//! The matched filter: many randomly started M-FAQ solves, ranked by the
//! padded matching objective.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mfaq::{mfaq, seeded_random_start, soft_seed_start_seeded, SeedSpec, SolverConfig};
use crate::multiplex::{objective, pad, MultiplexGraph, PaddingScheme, Role};
use crate::rng::substream;

/// One solver outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedMatch {
    pub restart_id: usize,
    pub multiplicity: usize,
    pub objective: f64,
    /// Background label of every template label.
    pub matching: Vec<usize>,
    /// Per-channel fraction of template edges landing on background edges.
    pub recovery: Vec<f64>,
    /// Frank-Wolfe iterations used (not serialized).
    pub iterations: usize,
}

impl RankedMatch {
    pub fn mean_recovery(&self) -> f64 {
        if self.recovery.is_empty() {
            return 0.0;
        }
        self.recovery.iter().sum::<f64>() / self.recovery.len() as f64
    }
}

/// Solver outcomes sorted by `(objective, restart_id)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MatchRanking {
    pub entries: Vec<RankedMatch>,
}

#[derive(Serialize, Deserialize)]
struct JsonEntry {
    rank: usize,
    restart_id: usize,
    multiplicity: usize,
    objective: f64,
    #[serde(rename = "match")]
    matching: Vec<usize>,
    recovery: Vec<f64>,
}

impl MatchRanking {
    pub fn best(&self) -> Option<&RankedMatch> {
        self.entries.first()
    }

    /// The entry with the highest mean per-channel recovery (earliest rank
    /// on ties).
    pub fn best_by_recovery(&self) -> Option<&RankedMatch> {
        let mut best: Option<&RankedMatch> = None;
        for e in &self.entries {
            if best.is_none_or(|b| e.mean_recovery() > b.mean_recovery()) {
                best = Some(e);
            }
        }
        best
    }

    /// JSON array with 1-based labels.
    pub fn to_json(&self) -> String {
        let rows: Vec<JsonEntry> = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| JsonEntry {
                rank: i + 1,
                restart_id: e.restart_id,
                multiplicity: e.multiplicity,
                objective: e.objective,
                matching: e.matching.iter().map(|&b| b + 1).collect(),
                recovery: e.recovery.clone(),
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&rows).expect("ranking serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rows: Vec<JsonEntry> =
            serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
        let mut entries = Vec::with_capacity(rows.len());
        for r in rows {
            let matching = r
                .matching
                .iter()
                .map(|&b| {
                    b.checked_sub(1).ok_or(Error::Parse {
                        line: 0,
                        msg: "labels are 1-based".into(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            entries.push(RankedMatch {
                restart_id: r.restart_id,
                multiplicity: r.multiplicity,
                objective: r.objective,
                matching,
                recovery: r.recovery,
                iterations: 0,
            });
        }
        Ok(MatchRanking { entries })
    }
}

fn check_match(bg: &MultiplexGraph, matching: &[usize]) -> Result<()> {
    let mut used = vec![false; bg.n_total()];
    for &b in matching {
        if b >= bg.n_total() {
            return Err(Error::DimensionMismatch(format!(
                "match target {} exceeds background order {}",
                b + 1,
                bg.n_total()
            )));
        }
        if std::mem::replace(&mut used[b], true) {
            return Err(Error::NonInjectiveMatch(b + 1));
        }
    }
    Ok(())
}

/// Per-channel fraction of template edges whose image is a background edge
/// of the same channel. Channels without template edges report 1.
pub fn recovered_signal_stats(
    tpl: &MultiplexGraph,
    bg: &MultiplexGraph,
    matching: &[usize],
) -> Result<Vec<f64>> {
    if tpl.channel_count() != bg.channel_count() {
        return Err(Error::ChannelCountMismatch {
            template: tpl.channel_count(),
            background: bg.channel_count(),
        });
    }
    if matching.len() != tpl.n_total() {
        return Err(Error::OrderMismatch {
            template: tpl.n_total(),
            background: matching.len(),
        });
    }
    check_match(bg, matching)?;
    Ok(tpl
        .channels()
        .iter()
        .zip(bg.channels())
        .map(|(t, b)| {
            let total = t.edge_count();
            if total == 0 {
                return 1.0;
            }
            let hit = t
                .edges()
                .filter(|&(u, v)| b.has_edge(matching[u], matching[v]))
                .count();
            hit as f64 / total as f64
        })
        .collect())
}

/// Fraction of template vertex pairs whose edge status agrees with the
/// matched background pair, averaged over channels. Pairs are those inside
/// each template channel's vertex set.
pub fn induced_match_quality(
    tpl: &MultiplexGraph,
    bg: &MultiplexGraph,
    matching: &[usize],
) -> Result<f64> {
    recovered_signal_stats(tpl, bg, matching)?;
    let mut sum = 0.0;
    for (t, b) in tpl.channels().iter().zip(bg.channels()) {
        let members: Vec<usize> = t.vertices().collect();
        let (mut agree, mut pairs) = (0usize, 0usize);
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                pairs += 1;
                if t.has_edge(u, v) == b.has_edge(matching[u], matching[v]) {
                    agree += 1;
                }
            }
        }
        sum += if pairs == 0 { 1.0 } else { agree as f64 / pairs as f64 };
    }
    Ok(sum / tpl.channel_count() as f64)
}

/// Collapses entries that agree on every template label, keeping the first
/// (lowest objective) and counting the group.
pub fn dedup_matchings(r: &MatchRanking) -> MatchRanking {
    let mut index: HashMap<&[usize], usize> = HashMap::new();
    let mut entries: Vec<RankedMatch> = Vec::new();
    for e in &r.entries {
        match index.get(e.matching.as_slice()) {
            Some(&i) => entries[i].multiplicity += e.multiplicity,
            None => {
                index.insert(&e.matching, entries.len());
                entries.push(e.clone());
            }
        }
    }
    MatchRanking { entries }
}

/// Default soft-seed jitter: the size of a flat entry.
pub fn default_soft_jitter(n: usize) -> f64 {
    1.0 / n.max(1) as f64
}

/// Runs the matched filter with the default soft-seed jitter.
pub fn mgmmf(
    tpl: &MultiplexGraph,
    bg: &MultiplexGraph,
    scheme: PaddingScheme,
    cfg: &SolverConfig,
    n_restarts: usize,
    seeds: &SeedSpec,
    seed: u64,
) -> Result<MatchRanking> {
    let jitter = default_soft_jitter(bg.n_total());
    mgmmf_with_jitter(tpl, bg, scheme, cfg, n_restarts, seeds, seed, jitter)
}

/// Pads both graphs, runs `n_restarts` solves from independent starts and
/// ranks them by the objective of the same padding.
///
/// Restart `k` draws its start from stream `k` of `seed`, so the ranking
/// does not depend on the thread count. With a soft prior every start is the
/// prior perturbed by `U[0, jitter)` noise; otherwise starts are random
/// blends of the barycenter and a permutation on the unseeded block.
#[allow(clippy::too_many_arguments)]
pub fn mgmmf_with_jitter(
    tpl: &MultiplexGraph,
    bg: &MultiplexGraph,
    scheme: PaddingScheme,
    cfg: &SolverConfig,
    n_restarts: usize,
    seeds: &SeedSpec,
    seed: u64,
    jitter: f64,
) -> Result<MatchRanking> {
    if tpl.channel_count() != bg.channel_count() {
        return Err(Error::ChannelCountMismatch {
            template: tpl.channel_count(),
            background: bg.channel_count(),
        });
    }
    if tpl.n_total() > bg.n_total() {
        return Err(Error::OrderMismatch {
            template: tpl.n_total(),
            background: bg.n_total(),
        });
    }
    if n_restarts == 0 {
        return Err(Error::InvalidConfig("need at least one restart".into()));
    }
    cfg.validate()?;
    let (m, n) = (tpl.n_total(), bg.n_total());
    seeds.validate(m, n)?;
    let a = pad(tpl, m, scheme, Role::Template)?;
    let b = pad(bg, n, scheme, Role::Background)?;

    let mut entries = (0..n_restarts)
        .into_par_iter()
        .map(|k| {
            let mut rng = substream(seed, k as u64);
            let p0 = match &seeds.soft {
                Some(soft) => soft_seed_start_seeded(soft, &seeds.hard, jitter, &mut rng)?,
                None => seeded_random_start(n, &seeds.hard, &mut rng),
            };
            let (perm, trace) = mfaq(&a, &b, &p0, cfg, seeds)?;
            let value = objective(&a, &b, &perm, &cfg.weights)?;
            let matching = perm.restrict(m);
            let recovery = recovered_signal_stats(tpl, bg, &matching)?;
            Ok(RankedMatch {
                restart_id: k,
                multiplicity: 1,
                objective: value,
                matching,
                recovery,
                iterations: trace.iterations_used,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    entries.sort_by(|x, y| {
        x.objective
            .total_cmp(&y.objective)
            .then(x.restart_id.cmp(&y.restart_id))
    });
    Ok(MatchRanking { entries })
}

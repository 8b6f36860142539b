//! The X_P statistic and the pair sets it decomposes over.
//!
//! For a permutation σ and template order m, Δ_P holds the template pairs
//! `{j, l}` with `{j, l} ≠ {σ(j), σ(l)}`. X_P is a quarter of the objective
//! gap between σ and the identity alignment under centered padding.

use ndarray::Array2;

use crate::assignment::Permutation;
use crate::error::{Error, Result};
use crate::multiplex::{check_pair, embed_oplus_zero, objective, ChannelWeights, MultiplexGraph, PaddedMultiplex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Ms,
    Me,
}

/// Per-channel split of Δ_P by the padded source entries: `d0` pairs with a
/// nonzero template entry, split into `d1` (aligned background entry has the
/// opposite sign), `d2` (aligned entry is zero) and `d3` (agreement).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ChannelDelta {
    pub d0: usize,
    pub d1: usize,
    pub d2: usize,
    pub d3: usize,
}

/// Δ_P split by the monoplex sources `T` and `W`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MeCounts {
    /// `T` edge, aligned `W` non-edge.
    pub d1: usize,
    /// `T` non-edge, aligned `W` edge.
    pub d2: usize,
    /// Both edges.
    pub d3: usize,
    /// Both non-edges.
    pub d4: usize,
    pub e_p: usize,
    pub n_p: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaCounts {
    pub total: usize,
    pub per_channel: Vec<ChannelDelta>,
    pub me: Option<MeCounts>,
}

/// Pairs of Δ_P in lexicographic order.
pub fn delta_pairs(m: usize, p: &Permutation) -> Vec<(usize, usize)> {
    let sigma = p.as_slice();
    let mut out = Vec::new();
    for j in 0..m {
        for l in j + 1..m {
            let (a, b) = (sigma[j], sigma[l]);
            if (a, b) != (j, l) && (a, b) != (l, j) {
                out.push((j, l));
            }
        }
    }
    out
}

fn check_perm(bg_order: usize, p: &Permutation) -> Result<()> {
    if p.len() != bg_order {
        return Err(Error::OrderMismatch {
            template: p.len(),
            background: bg_order,
        });
    }
    Ok(())
}

/// Counts the Δ_P sets. `sources` (template source `T` on `0..m`, background
/// source `W`, one channel each) is required for the ME split.
pub fn delta_counts(
    tpl_c: &PaddedMultiplex,
    bg_d: &PaddedMultiplex,
    p: &Permutation,
    model: Model,
    sources: Option<(&MultiplexGraph, &MultiplexGraph)>,
) -> Result<DeltaCounts> {
    check_pair(tpl_c, bg_d)?;
    check_perm(bg_d.order, p)?;
    let m = tpl_c.order;
    let sigma = p.as_slice();
    let pairs = delta_pairs(m, p);
    let per_channel = tpl_c
        .matrices
        .iter()
        .zip(&bg_d.matrices)
        .map(|(c, d)| {
            let mut cd = ChannelDelta::default();
            for &(j, l) in &pairs {
                let cv = c[[j, l]];
                if cv == 0.0 {
                    continue;
                }
                cd.d0 += 1;
                let dv = d[[sigma[j], sigma[l]]];
                if dv == 0.0 {
                    cd.d2 += 1;
                } else if dv != cv {
                    cd.d1 += 1;
                } else {
                    cd.d3 += 1;
                }
            }
            cd
        })
        .collect();
    let me = match model {
        Model::Ms => None,
        Model::Me => {
            let (t, w) = sources.ok_or(Error::MissingSources)?;
            if t.n_total() != m || w.n_total() != bg_d.order {
                return Err(Error::DimensionMismatch(format!(
                    "sources of order {} and {} for a {m}-into-{} problem",
                    t.n_total(),
                    w.n_total(),
                    bg_d.order
                )));
            }
            let (t, w) = (t.channel(0), w.channel(0));
            let mut mc = MeCounts::default();
            for &(j, l) in &pairs {
                let te = t.has_edge(j, l);
                let we = w.has_edge(sigma[j], sigma[l]);
                match (te, we) {
                    (true, false) => mc.d1 += 1,
                    (false, true) => mc.d2 += 1,
                    (true, true) => mc.d3 += 1,
                    (false, false) => mc.d4 += 1,
                }
                if te {
                    mc.e_p += 1;
                } else {
                    mc.n_p += 1;
                }
            }
            Some(mc)
        }
    };
    Ok(DeltaCounts {
        total: pairs.len(),
        per_channel,
        me,
    })
}

/// X_P evaluated three independent ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XpForms {
    /// `(1/4)[Σ‖Â − PB̂Pᵀ‖² − Σ‖Â − B̂‖²]`
    pub frobenius: f64,
    /// `(1/2) Σ [tr(ÂB̂) − tr(ÂPB̂Pᵀ)]`
    pub trace: f64,
    /// `Σ_i Σ_{Δ_P} Â(j,l) [B̂(j,l) − B̂(σj,σl)]`
    pub delta_sum: f64,
}

/// X_P by the Frobenius form.
pub fn xp_statistic(a_hat: &PaddedMultiplex, b_hat: &PaddedMultiplex, p: &Permutation) -> Result<f64> {
    check_pair(a_hat, b_hat)?;
    check_perm(b_hat.order, p)?;
    let w = ChannelWeights::uniform(a_hat.channel_count());
    let n = b_hat.order;
    let moved = objective(a_hat, b_hat, p, &w)?;
    let base = objective(a_hat, b_hat, &Permutation::identity(n), &w)?;
    Ok((moved - base) / 4.0)
}

pub fn xp_forms(a_hat: &PaddedMultiplex, b_hat: &PaddedMultiplex, p: &Permutation) -> Result<XpForms> {
    let frobenius = xp_statistic(a_hat, b_hat, p)?;
    let n = b_hat.order;
    let pm = p.to_matrix();
    let mut trace = 0.0;
    for (a, b) in a_hat.matrices.iter().zip(&b_hat.matrices) {
        let a = embed_oplus_zero(a, n)?;
        let pbpt: Array2<f64> = pm.dot(b).dot(&pm.t());
        trace += 0.5 * (a.dot(b).diag().sum() - a.dot(&pbpt).diag().sum());
    }
    let sigma = p.as_slice();
    let pairs = delta_pairs(a_hat.order, p);
    let mut delta_sum = 0.0;
    for (a, b) in a_hat.matrices.iter().zip(&b_hat.matrices) {
        for &(j, l) in &pairs {
            delta_sum += a[[j, l]] * (b[[j, l]] - b[[sigma[j], sigma[l]]]);
        }
    }
    Ok(XpForms {
        frobenius,
        trace,
        delta_sum,
    })
}

fn check_rates(c: usize, lists: &[&[f64]]) -> Result<()> {
    if lists.iter().any(|l| l.len() != c) {
        return Err(Error::DimensionMismatch(format!(
            "rate lists must have one entry per channel ({c})"
        )));
    }
    Ok(())
}

/// Expected X_P under uniform per-channel flips: template rate `s`,
/// background rate `q`.
pub fn expected_xp_ms(counts: &DeltaCounts, s: &[f64], q: &[f64]) -> Result<f64> {
    check_rates(counts.per_channel.len(), &[s, q])?;
    Ok(counts
        .per_channel
        .iter()
        .zip(s.iter().zip(q))
        .map(|(cd, (&s, &q))| (2 * cd.d1 + cd.d2) as f64 * (1.0 - 2.0 * s) * (1.0 - 2.0 * q))
        .sum())
}

/// Expected X_P under edge-dependent flips: the background flips source
/// edges with `s` and non-edges with `q`; the template flips edges with `r`
/// and non-edges with `t`.
pub fn expected_xp_me(counts: &DeltaCounts, s: &[f64], q: &[f64], r: &[f64], t: &[f64]) -> Result<f64> {
    let me = counts.me.ok_or(Error::MissingSources)?;
    let c = s.len();
    check_rates(c, &[q, r, t])?;
    Ok((0..c)
        .map(|i| {
            2.0 * (1.0 - s[i] - q[i])
                * (me.d1 as f64 * (1.0 - 2.0 * r[i]) + me.d2 as f64 * (1.0 - 2.0 * t[i]))
        })
        .sum())
}

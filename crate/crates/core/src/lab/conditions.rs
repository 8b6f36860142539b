//! Numeric evaluators for the matchability sufficient conditions.
//!
//! The theorem constants are inputs; nothing here asserts the asymptotic
//! statements, it only evaluates both sides of each inequality.

use serde::Serialize;

use super::stats::DeltaCounts;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionParams {
    /// `α ≤ 1`.
    pub alpha: f64,
    /// `β > 0`.
    pub beta: f64,
    /// `γ > 0`.
    pub gamma: f64,
}

impl ConditionParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha <= 1.0) || !(self.beta > 0.0) || !(self.gamma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "need alpha <= 1, beta > 0, gamma > 0; got {:?}",
                self
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionResult {
    pub satisfied: bool,
    pub lhs: f64,
    pub rhs: f64,
}

/// Conditions for uniform per-channel flips (template `s`, background `q`).
#[derive(Debug, Clone, Copy)]
pub enum MsCondition<'a> {
    /// Counts form for one permutation moving `k` template labels.
    Counts {
        counts: &'a DeltaCounts,
        k: usize,
        s: &'a [f64],
        q: &'a [f64],
    },
    /// Erdős–Rényi sources with per-channel densities `p`.
    ErRates {
        p: &'a [f64],
        s: &'a [f64],
        q: &'a [f64],
    },
    /// `c1` channels with background rate `q`, `c2` with `1 − q`, `bad`
    /// whitened channels.
    GoodVsBad {
        s: f64,
        q: f64,
        c1: usize,
        c2: usize,
        bad: usize,
    },
    /// All `c` channels good.
    StrengthInNumbers { s: f64, q: f64 },
}

/// Conditions for edge-dependent flips.
#[derive(Debug, Clone, Copy)]
pub enum MeCondition<'a> {
    Counts {
        counts: &'a DeltaCounts,
        k: usize,
        s: &'a [f64],
        q: &'a [f64],
        r: &'a [f64],
        t: &'a [f64],
    },
    ErRates {
        p: f64,
        s: &'a [f64],
        q: &'a [f64],
        r: &'a [f64],
        t: &'a [f64],
    },
    /// Channel classes `c[0..4]` with deviations `e1` (from `s + q = 1`)
    /// and `e2` (from `r + t = 1`); classes 3 and 4 carry signal.
    GoodVsBad { p: f64, e1: f64, e2: f64, c: [usize; 4] },
}

/// A channel is whitened when either of its flip rates is one half.
fn is_bad(s: f64, q: f64) -> bool {
    s == 0.5 || q == 0.5
}

fn same_len(c: usize, lists: &[&[f64]]) -> Result<()> {
    if lists.iter().any(|l| l.len() != c) {
        return Err(Error::DimensionMismatch(format!(
            "every rate list needs {c} entries"
        )));
    }
    Ok(())
}

fn at_least(lhs: f64, rhs: f64) -> ConditionResult {
    ConditionResult {
        satisfied: lhs >= rhs,
        lhs,
        rhs,
    }
}

fn greater(lhs: f64, rhs: f64) -> ConditionResult {
    ConditionResult {
        satisfied: lhs > rhs,
        lhs,
        rhs,
    }
}

/// `k √(672 m^{1+α} c / β)`
fn counts_rhs(params: &ConditionParams, k: usize, m: usize, c: usize) -> f64 {
    k as f64 * (672.0 * (m as f64).powf(1.0 + params.alpha) * c as f64 / params.beta).sqrt()
}

/// `√(6048 m^{α−1} c / β)`
fn er_rhs(params: &ConditionParams, m: usize, c: usize) -> f64 {
    (6048.0 * (m as f64).powf(params.alpha - 1.0) * c as f64 / params.beta).sqrt()
}

/// `γ √(m^{α−1} c)`
fn theorem_rhs(params: &ConditionParams, m: usize, c: usize) -> f64 {
    params.gamma * ((m as f64).powf(params.alpha - 1.0) * c as f64).sqrt()
}

pub fn check_condition_ms(
    cond: MsCondition,
    params: &ConditionParams,
    m: usize,
    c: usize,
) -> Result<ConditionResult> {
    params.validate()?;
    Ok(match cond {
        MsCondition::Counts { counts, k, s, q } => {
            same_len(counts.per_channel.len(), &[s, q])?;
            let lhs = counts
                .per_channel
                .iter()
                .enumerate()
                .filter(|&(i, _)| !is_bad(s[i], q[i]))
                .map(|(i, cd)| (2 * cd.d1 + cd.d2) as f64 * (1.0 - 2.0 * s[i]) * (1.0 - 2.0 * q[i]))
                .sum();
            at_least(lhs, counts_rhs(params, k, m, c))
        }
        MsCondition::ErRates { p, s, q } => {
            same_len(p.len(), &[s, q])?;
            let lhs = (0..p.len())
                .filter(|&i| !is_bad(s[i], q[i]))
                .map(|i| p[i] * (1.0 - 2.0 * s[i]) * (1.0 - 2.0 * q[i]))
                .sum();
            at_least(lhs, er_rhs(params, m, c))
        }
        MsCondition::GoodVsBad { s, q, c1, c2, bad } => {
            let total = c1 + c2 + bad;
            let lhs = (0.5 - s) * (0.5 - q) * (c1 as f64 - c2 as f64);
            greater(lhs, theorem_rhs(params, m, total))
        }
        MsCondition::StrengthInNumbers { s, q } => {
            let lhs = (0.5 - s) * (0.5 - q) * (c as f64).sqrt();
            let rhs = params.gamma * (m as f64).powf(params.alpha - 1.0).sqrt();
            greater(lhs, rhs)
        }
    })
}

pub fn check_condition_me(
    cond: MeCondition,
    params: &ConditionParams,
    m: usize,
    c: usize,
) -> Result<ConditionResult> {
    params.validate()?;
    Ok(match cond {
        MeCondition::Counts { counts, k, s, q, r, t } => {
            let me = counts.me.ok_or(Error::MissingSources)?;
            same_len(s.len(), &[q, r, t])?;
            let lhs = (0..s.len())
                .map(|i| {
                    2.0 * (1.0 - s[i] - q[i])
                        * (me.d1 as f64 * (1.0 - 2.0 * r[i]) + me.d2 as f64 * (1.0 - 2.0 * t[i]))
                })
                .sum();
            at_least(lhs, counts_rhs(params, k, m, c))
        }
        MeCondition::ErRates { p, s, q, r, t } => {
            same_len(s.len(), &[q, r, t])?;
            let lhs = p * (0..s.len())
                .map(|i| (1.0 - s[i] - q[i]) * (1.0 - r[i] - t[i]))
                .sum::<f64>();
            at_least(lhs, er_rhs(params, m, c))
        }
        MeCondition::GoodVsBad { p, e1, e2, c: cls } => {
            let total: usize = cls.iter().sum();
            let signal = (cls[2] + cls[3]) as f64 - (cls[0] + cls[1]) as f64;
            greater(p * e1 * e2 * signal, theorem_rhs(params, m, total))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: ConditionParams = ConditionParams {
        alpha: 0.5,
        beta: 2.0,
        gamma: 0.1,
    };

    #[test]
    fn whitened_channels_have_no_signal() {
        let r = check_condition_ms(
            MsCondition::ErRates {
                p: &[0.5, 0.5],
                s: &[0.5, 0.2],
                q: &[0.1, 0.5],
            },
            &P,
            100,
            2,
        )
        .unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!(!r.satisfied);
        let r = check_condition_ms(MsCondition::StrengthInNumbers { s: 0.5, q: 0.5 }, &P, 100, 3).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!(!r.satisfied);
    }

    #[test]
    fn hand_computed_er_form() {
        // lhs = 0.5·0.8·0.6 + 0.3·1·0.4 = 0.36; rhs = √(6048 · 16^{-1/2} · 2 / 2) = √1512
        let r = check_condition_ms(
            MsCondition::ErRates {
                p: &[0.5, 0.3],
                s: &[0.1, 0.0],
                q: &[0.2, 0.3],
            },
            &P,
            16,
            2,
        )
        .unwrap();
        assert!((r.lhs - 0.36).abs() < 1e-12);
        assert!((r.rhs - 1512f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn all_good_channels_reduce_to_strength_in_numbers() {
        for &(s, q, c, m) in &[(0.1, 0.2, 4, 50), (0.45, 0.45, 2, 10), (0.3, 0.1, 9, 1000), (0.49, 0.4, 1, 4)] {
            let a = check_condition_ms(MsCondition::GoodVsBad { s, q, c1: c, c2: 0, bad: 0 }, &P, m, c).unwrap();
            let b = check_condition_ms(MsCondition::StrengthInNumbers { s, q }, &P, m, c).unwrap();
            assert_eq!(a.satisfied, b.satisfied);
        }
    }

    #[test]
    fn me_degenerate_cases() {
        let r = check_condition_me(MeCondition::GoodVsBad { p: 0.5, e1: 0.0, e2: 0.3, c: [0, 0, 2, 2] }, &P, 10, 4).unwrap();
        assert_eq!(r.lhs, 0.0);
        let r = check_condition_me(MeCondition::GoodVsBad { p: 0.5, e1: 0.2, e2: 0.3, c: [1, 2, 2, 1] }, &P, 10, 6).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!(!r.satisfied);
        // 0.5·0.2·0.3·(4 − 1) = 0.09 against 0.1·√(10^{-1/2}·5)
        let r = check_condition_me(MeCondition::GoodVsBad { p: 0.5, e1: 0.2, e2: 0.3, c: [1, 0, 2, 2] }, &P, 10, 5).unwrap();
        assert!((r.lhs - 0.09).abs() < 1e-12);
        assert!((r.rhs - 0.1 * (5.0 / 10f64.sqrt()).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_constants() {
        let bad = ConditionParams { alpha: 1.5, ..P };
        assert!(check_condition_ms(MsCondition::StrengthInNumbers { s: 0.1, q: 0.1 }, &bad, 10, 1).is_err());
    }
}

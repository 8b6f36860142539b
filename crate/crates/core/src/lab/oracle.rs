//! Exhaustive enumeration at tiny orders.
//!
//! The matching objective depends on a permutation only through its
//! restriction to the template labels `0..m`, so one representative per
//! injective map `[m] → [n]` covers every equivalence class.

use serde::Serialize;

use crate::assignment::Permutation;
use crate::error::{Error, Result};
use crate::multiplex::{check_pair, objective, ChannelWeights, MultiplexGraph, PaddedMultiplex};

pub const MAX_ENUMERATION_ORDER: usize = 8;

fn guard(n: usize) -> Result<()> {
    if n > MAX_ENUMERATION_ORDER {
        return Err(Error::OrderTooLargeForEnumeration(n));
    }
    Ok(())
}

/// Calls `visit` on every injective map `[m] → [n]`, in lexicographic order.
pub fn for_each_injection<F: FnMut(&[usize])>(m: usize, n: usize, mut visit: F) {
    fn rec<F: FnMut(&[usize])>(cur: &mut Vec<usize>, used: &mut [bool], m: usize, visit: &mut F) {
        if cur.len() == m {
            visit(cur);
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, m, visit);
                cur.pop();
                used[v] = false;
            }
        }
    }
    if m <= n {
        rec(&mut Vec::with_capacity(m), &mut vec![false; n], m, &mut visit);
    }
}

/// One representative of every class of permutations of `0..n` moving
/// exactly `k` of the labels `0..m`.
pub fn enumerate_perm_classes(n: usize, m: usize, k: usize) -> Result<Vec<Permutation>> {
    guard(n)?;
    if k > m || m > n {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= k <= m <= n, got k = {k}, m = {m}, n = {n}"
        )));
    }
    let mut out = Vec::new();
    for_each_injection(m, n, |f| {
        if f.iter().enumerate().filter(|&(j, &v)| v != j).count() == k {
            out.push(Permutation::complete(f, n).expect("injection completes"));
        }
    });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BruteForceResult {
    pub min_objective: f64,
    /// Restrictions to `0..m` of every minimizer.
    pub minimizers_mod_equiv: Vec<Vec<usize>>,
    /// Every minimizer fixes every template label.
    pub in_target_set: bool,
}

/// Exact global minimum of the matching objective over all classes.
/// Values within `1e-9` (relative) of the minimum count as ties.
pub fn brute_force_global_min(
    tpl: &PaddedMultiplex,
    bg: &PaddedMultiplex,
    w: &ChannelWeights,
) -> Result<BruteForceResult> {
    check_pair(tpl, bg)?;
    let (m, n) = (tpl.order, bg.order);
    guard(n)?;
    let mut values = Vec::new();
    let mut err = None;
    for_each_injection(m, n, |f| {
        if err.is_some() {
            return;
        }
        let p = Permutation::complete(f, n).expect("injection completes");
        match objective(tpl, bg, &p, w) {
            Ok(v) => values.push((f.to_vec(), v)),
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    let min = values.iter().map(|(_, v)| *v).fold(f64::INFINITY, f64::min);
    let tol = 1e-9 * min.abs().max(1.0);
    let minimizers: Vec<Vec<usize>> = values
        .into_iter()
        .filter(|(_, v)| *v <= min + tol)
        .map(|(f, _)| f)
        .collect();
    let in_target_set = minimizers
        .iter()
        .all(|f| f.iter().enumerate().all(|(j, &v)| v == j));
    Ok(BruteForceResult {
        min_objective: min,
        minimizers_mod_equiv: minimizers,
        in_target_set,
    })
}

/// True when the identity is the only permutation of the labels preserving
/// every channel's vertex set and edge set.
pub fn has_trivial_automorphism_group(g: &MultiplexGraph) -> Result<bool> {
    let n = g.n_total();
    guard(n)?;
    let mut trivial = true;
    for_each_injection(n, n, |f| {
        if !trivial || f.iter().enumerate().all(|(j, &v)| v == j) {
            return;
        }
        let preserves = g.channels().iter().all(|ch| {
            (0..n).all(|v| ch.contains(v) == ch.contains(f[v]))
                && ch.edges().all(|(u, v)| ch.has_edge(f[u], f[v]))
        });
        if preserves {
            trivial = false;
        }
    });
    Ok(trivial)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts() {
        assert_eq!(enumerate_perm_classes(5, 3, 0).unwrap().len(), 1);
        let t = enumerate_perm_classes(3, 3, 2).unwrap();
        let mut got: Vec<Vec<usize>> = t.iter().map(|p| p.as_slice().to_vec()).collect();
        got.sort();
        assert_eq!(got, vec![vec![0, 2, 1], vec![1, 0, 2], vec![2, 1, 0]]);
        let total: usize = (0..=3).map(|k| enumerate_perm_classes(5, 3, k).unwrap().len()).sum();
        assert_eq!(total, 5 * 4 * 3);
        assert_eq!(enumerate_perm_classes(9, 2, 1), Err(Error::OrderTooLargeForEnumeration(9)));
    }

    #[test]
    fn automorphisms() {
        let path = MultiplexGraph::full(3, vec![vec![(0, 1), (1, 2)]]).unwrap();
        assert!(!has_trivial_automorphism_group(&path).unwrap());
        // a second channel can break the symmetry
        let broken = MultiplexGraph::full(3, vec![vec![(0, 1), (1, 2)], vec![(0, 1)]]).unwrap();
        assert!(has_trivial_automorphism_group(&broken).unwrap());
    }
}

//! Exact linear assignment.
//!
//! The core is a shortest augmenting path solver with row/column potentials
//! (Jonker–Volgenant family, Dijkstra-style search per augmenting row). It
//! works on rectangular problems with `rows <= cols`, which the Frank-Wolfe
//! step uses when most rows of the gradient are identically zero.

use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection on `0..n`, stored as the image of each label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &v in &mapping {
            if v >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {v} out of range for length {n}"
                )));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPermutation(format!("image {v} repeated")));
            }
        }
        Ok(Permutation(mapping))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        Permutation(inv)
    }

    /// `self` followed by `other`: `i ↦ other[self[i]]`.
    pub fn then(&self, other: &Permutation) -> Self {
        Permutation(self.0.iter().map(|&v| other.0[v]).collect())
    }

    /// Images of the first `m` labels.
    pub fn restrict(&self, m: usize) -> Vec<usize> {
        self.0[..m].to_vec()
    }

    /// Permutation matrix with `P[i, σ(i)] = 1`.
    pub fn to_matrix(&self) -> Array2<f64> {
        let n = self.0.len();
        let mut p = Array2::zeros((n, n));
        for (i, &j) in self.0.iter().enumerate() {
            p[[i, j]] = 1.0;
        }
        p
    }

    /// `Σᵢ cost[i, σ(i)]`, i.e. `tr(costᵀ P)`.
    pub fn assignment_value(&self, cost: &Array2<f64>) -> f64 {
        self.0.iter().enumerate().map(|(i, &j)| cost[[i, j]]).sum()
    }

    /// Extends an injective partial map `0..m → 0..n` to a permutation of
    /// `0..n`: the labels `m..n` take the unused images in increasing order.
    pub fn complete(partial: &[usize], n: usize) -> Result<Self> {
        if partial.len() > n {
            return Err(Error::InvalidPermutation(format!(
                "partial map of length {} exceeds {n}",
                partial.len()
            )));
        }
        let mut used = vec![false; n];
        for &v in partial {
            if v >= n || used[v] {
                return Err(Error::InvalidPermutation(format!(
                    "partial map is not injective into 0..{n}"
                )));
            }
            used[v] = true;
        }
        let mut mapping = partial.to_vec();
        mapping.extend((0..n).filter(|&v| !used[v]));
        Ok(Permutation(mapping))
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

fn check_finite(cost: &ArrayView2<f64>) -> Result<()> {
    for ((row, col), v) in cost.indexed_iter() {
        if !v.is_finite() {
            return Err(Error::NonFiniteEntry { row, col });
        }
    }
    Ok(())
}

/// Permutation maximizing `tr(costᵀ P)` over all permutation matrices.
pub fn solve_lap_max(cost: &Array2<f64>) -> Result<Permutation> {
    let (rows, cols) = cost.dim();
    if rows != cols {
        return Err(Error::NonSquare { rows, cols });
    }
    check_finite(&cost.view())?;
    Ok(Permutation(lap_max_rect(cost.view())))
}

/// As [`solve_lap_max`], but optimal only over permutations that extend the
/// given `(row, col)` fixings.
pub fn solve_lap_max_constrained(
    cost: &Array2<f64>,
    fixed: &[(usize, usize)],
) -> Result<Permutation> {
    let (rows, cols) = cost.dim();
    if rows != cols {
        return Err(Error::NonSquare { rows, cols });
    }
    check_finite(&cost.view())?;
    let n = rows;
    let mut row_fixed = vec![None; n];
    let mut col_used = vec![false; n];
    for &(r, c) in fixed {
        if r >= n || c >= n {
            return Err(Error::InfeasibleFixing(format!(
                "fixing ({r}, {c}) out of range for order {n}"
            )));
        }
        if row_fixed[r].is_some() {
            return Err(Error::InfeasibleFixing(format!("row {r} fixed twice")));
        }
        if col_used[c] {
            return Err(Error::InfeasibleFixing(format!("column {c} fixed twice")));
        }
        row_fixed[r] = Some(c);
        col_used[c] = true;
    }
    let free_rows: Vec<usize> = (0..n).filter(|&r| row_fixed[r].is_none()).collect();
    let free_cols: Vec<usize> = (0..n).filter(|&c| !col_used[c]).collect();
    let reduced = Array2::from_shape_fn((free_rows.len(), free_cols.len()), |(i, j)| {
        cost[[free_rows[i], free_cols[j]]]
    });
    let sub = lap_max_rect(reduced.view());
    let mut mapping: Vec<usize> = row_fixed.iter().map(|c| c.unwrap_or(usize::MAX)).collect();
    for (i, &j) in sub.iter().enumerate() {
        mapping[free_rows[i]] = free_cols[j];
    }
    Ok(Permutation(mapping))
}

/// Maximum-weight assignment of every row of a `rows <= cols` matrix to a
/// distinct column. Entries must be finite.
pub(crate) fn lap_max_rect(cost: ArrayView2<f64>) -> Vec<usize> {
    let neg = cost.mapv(|v| -v);
    lap_min_rect(neg.view())
}

/// Minimum-cost assignment of every row to a distinct column (`rows <= cols`).
pub(crate) fn lap_min_rect(cost: ArrayView2<f64>) -> Vec<usize> {
    let (nr, nc) = cost.dim();
    assert!(nr <= nc, "lap_min_rect needs rows <= cols");
    if nr == 0 {
        return Vec::new();
    }
    let mut u = vec![0.0f64; nr];
    let mut v = vec![0.0f64; nc];
    let mut shortest = vec![f64::INFINITY; nc];
    let mut path = vec![usize::MAX; nc];
    let mut col4row = vec![usize::MAX; nr];
    let mut row4col = vec![usize::MAX; nc];
    let mut sr = vec![false; nr];
    let mut sc = vec![false; nc];
    let mut remaining = vec![0usize; nc];

    for cur_row in 0..nr {
        // Dijkstra over reduced costs from cur_row to the nearest free column.
        let mut min_val = 0.0;
        let mut num_remaining = nc;
        for (it, r) in remaining.iter_mut().enumerate() {
            *r = nc - it - 1;
        }
        sr.fill(false);
        sc.fill(false);
        shortest.fill(f64::INFINITY);
        let mut sink = usize::MAX;
        let mut i = cur_row;
        while sink == usize::MAX {
            let mut index = usize::MAX;
            let mut lowest = f64::INFINITY;
            sr[i] = true;
            let crow = cost.row(i);
            let ui = u[i];
            for (it, &j) in remaining[..num_remaining].iter().enumerate() {
                let r = min_val + crow[j] - ui - v[j];
                if r < shortest[j] {
                    path[j] = i;
                    shortest[j] = r;
                }
                if shortest[j] < lowest || (shortest[j] == lowest && row4col[j] == usize::MAX) {
                    lowest = shortest[j];
                    index = it;
                }
            }
            min_val = lowest;
            let j = remaining[index];
            if row4col[j] == usize::MAX {
                sink = j;
            } else {
                i = row4col[j];
            }
            sc[j] = true;
            num_remaining -= 1;
            remaining[index] = remaining[num_remaining];
        }

        u[cur_row] += min_val;
        for r in 0..nr {
            if sr[r] && r != cur_row {
                u[r] += min_val - shortest[col4row[r]];
            }
        }
        for c in 0..nc {
            if sc[c] {
                v[c] -= min_val - shortest[c];
            }
        }

        let mut j = sink;
        loop {
            let i = path[j];
            row4col[j] = i;
            std::mem::swap(&mut col4row[i], &mut j);
            if i == cur_row {
                break;
            }
        }
    }
    col4row
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Exhaustive maximum over all permutations (Heap's algorithm).
    fn brute_max(cost: &Array2<f64>) -> f64 {
        let n = cost.nrows();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut c = vec![0usize; n];
        let value = |p: &[usize]| p.iter().enumerate().map(|(i, &j)| cost[[i, j]]).sum::<f64>();
        let mut best = value(&perm);
        let mut i = 0;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                best = best.max(value(&perm));
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        best
    }

    fn random(n: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
        Array2::from_shape_fn((n, n), |_| rng.random_range(-10.0..10.0))
    }

    #[test]
    fn diagonal_dominant_gives_identity() {
        let mut cost = Array2::from_elem((5, 5), 1.0);
        for i in 0..5 {
            cost[[i, i]] = 100.0;
        }
        assert_eq!(solve_lap_max(&cost).unwrap(), Permutation::identity(5));
    }

    #[test]
    fn negative_diagonal_matches_enumeration() {
        let cost = array![[-10., 1., 2.], [3., -10., 1.], [2., 5., -10.]];
        let p = solve_lap_max(&cost).unwrap();
        assert_eq!(p.assignment_value(&cost), brute_max(&cost));
        assert!(p.as_slice().iter().enumerate().all(|(i, &j)| i != j));
    }

    #[test]
    fn random_small_instances_are_optimal() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=6 {
            for _ in 0..20 {
                let cost = random(n, &mut rng);
                let p = solve_lap_max(&cost).unwrap();
                assert!((p.assignment_value(&cost) - brute_max(&cost)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn integer_ties_are_handled() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let cost = Array2::from_shape_fn((6, 6), |_| rng.random_range(0..3) as f64);
            let p = solve_lap_max(&cost).unwrap();
            assert_eq!(p.assignment_value(&cost), brute_max(&cost));
        }
    }

    #[test]
    fn constrained_fix_all_and_none() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cost = random(5, &mut rng);
        let target = Permutation::new(vec![3, 1, 4, 0, 2]).unwrap();
        let fixed: Vec<_> = target.as_slice().iter().copied().enumerate().collect();
        assert_eq!(solve_lap_max_constrained(&cost, &fixed).unwrap(), target);
        assert_eq!(
            solve_lap_max_constrained(&cost, &[]).unwrap(),
            solve_lap_max(&cost).unwrap()
        );
    }

    #[test]
    fn constrained_errors() {
        let cost = Array2::zeros((3, 3));
        assert!(matches!(
            solve_lap_max_constrained(&cost, &[(0, 1), (1, 1)]),
            Err(Error::InfeasibleFixing(_))
        ));
        assert!(matches!(
            solve_lap_max_constrained(&cost, &[(0, 1), (0, 2)]),
            Err(Error::InfeasibleFixing(_))
        ));
        assert!(matches!(
            solve_lap_max_constrained(&cost, &[(5, 1)]),
            Err(Error::InfeasibleFixing(_))
        ));
    }

    #[test]
    fn input_errors() {
        assert!(matches!(
            solve_lap_max(&Array2::zeros((2, 3))),
            Err(Error::NonSquare { rows: 2, cols: 3 })
        ));
        let mut c = Array2::zeros((2, 2));
        c[[1, 0]] = f64::NAN;
        assert!(matches!(
            solve_lap_max(&c),
            Err(Error::NonFiniteEntry { row: 1, col: 0 })
        ));
    }

    #[test]
    fn rectangular_core() {
        let cost = array![[1., 9., 2., 0.], [8., 1., 7., 3.]];
        let a = lap_max_rect(cost.view());
        assert_eq!(a, vec![1, 0]);
    }

    #[test]
    fn permutation_helpers() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        assert_eq!(p.then(&p.inverse()), Permutation::identity(3));
        assert_eq!(Permutation::complete(&[2], 3).unwrap().as_slice(), &[2, 0, 1]);
        assert!(Permutation::complete(&[1, 1], 3).is_err());
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, "[2,0,1]");
        assert!(serde_json::from_str::<Permutation>("[0,0]").is_err());
    }
}

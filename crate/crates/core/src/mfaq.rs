//! Multiplex FAQ: Frank-Wolfe on the doubly stochastic relaxation of the
//! multiplex matching problem, followed by projection onto a permutation.
//!
//! The relaxation maximizes `f(P) = Σᵢ λᵢ tr((Aᵢ ⊕ 0) P Bᵢ Pᵀ)`. Only the
//! first `m` rows of `P` (the template rows) enter `f`, so the solver keeps
//! `P[..m, :] · Bᵢ` around and updates it linearly along each step instead of
//! recomputing dense products.

use ndarray::{s, Array2, ArrayView2, Zip};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::assignment::{lap_max_rect, solve_lap_max_constrained, Permutation};
use crate::error::{Error, Result};
use crate::multiplex::{check_pair, check_weights, embed_oplus_zero, ChannelWeights, PaddedMultiplex};

/// Tolerance on row/column sums for doubly stochastic matrices.
pub const DS_TOLERANCE: f64 = 1e-9;

/// A nonnegative square matrix whose rows and columns sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct DoublyStochasticMatrix(Array2<f64>);

impl DoublyStochasticMatrix {
    pub fn new(m: Array2<f64>) -> Result<Self> {
        let (rows, cols) = m.dim();
        if rows != cols {
            return Err(Error::NonSquare { rows, cols });
        }
        if m.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::DimensionMismatch(
                "doubly stochastic matrix has a negative or non-finite entry".into(),
            ));
        }
        let err = marginal_error(&m.view());
        if err > DS_TOLERANCE {
            return Err(Error::DimensionMismatch(format!(
                "row/column sums deviate from 1 by {err:e}"
            )));
        }
        Ok(DoublyStochasticMatrix(m))
    }

    /// All entries `1/n`.
    pub fn flat(n: usize) -> Self {
        DoublyStochasticMatrix(Array2::from_elem((n, n), 1.0 / n as f64))
    }

    pub fn from_permutation(p: &Permutation) -> Self {
        DoublyStochasticMatrix(p.to_matrix())
    }

    pub fn order(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.0
    }

    pub fn into_inner(self) -> Array2<f64> {
        self.0
    }
}

/// Largest deviation of any row or column sum from 1.
pub fn marginal_error(m: &ArrayView2<f64>) -> f64 {
    let rows = m.rows().into_iter().map(|r| (r.sum() - 1.0).abs());
    let cols = m.columns().into_iter().map(|c| (c.sum() - 1.0).abs());
    rows.chain(cols).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Stop once `‖P⁽ᵗ⁾ − P⁽ᵗ⁻¹⁾‖_F <= epsilon`.
    pub epsilon: f64,
    pub max_iters: usize,
    pub weights: ChannelWeights,
}

impl SolverConfig {
    /// Defaults for a background of order `n` with `c` channels:
    /// `epsilon = 1e-4 · n`, 30 iterations, unit weights.
    pub fn for_problem(n: usize, c: usize) -> Self {
        SolverConfig {
            epsilon: 1e-4 * n as f64,
            max_iters: 30,
            weights: ChannelWeights::uniform(c),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must be > 0, got {}",
                self.epsilon
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be >= 1".into()));
        }
        Ok(())
    }
}

/// Prior knowledge about the alignment.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SeedSpec {
    /// Known `(template label, background label)` pairs.
    pub hard: Vec<(usize, usize)>,
    /// Row-stochastic `m × n` matrix of match probabilities.
    pub soft: Option<Array2<f64>>,
}

impl SeedSpec {
    pub fn hard(pairs: Vec<(usize, usize)>) -> Self {
        SeedSpec {
            hard: pairs,
            soft: None,
        }
    }

    pub fn validate(&self, m: usize, n: usize) -> Result<()> {
        let mut rows = vec![false; m];
        let mut cols = vec![false; n];
        for &(t, b) in &self.hard {
            if t >= m || b >= n {
                return Err(Error::InfeasibleFixing(format!(
                    "seed ({}, {}) outside {m} x {n}",
                    t + 1,
                    b + 1
                )));
            }
            if std::mem::replace(&mut rows[t], true) || std::mem::replace(&mut cols[b], true) {
                return Err(Error::InfeasibleFixing(format!(
                    "seed ({}, {}) is not injective",
                    t + 1,
                    b + 1
                )));
            }
        }
        if let Some(soft) = &self.soft {
            check_row_stochastic(soft, m, n)?;
        }
        Ok(())
    }
}

fn check_row_stochastic(soft: &Array2<f64>, m: usize, n: usize) -> Result<()> {
    if soft.dim() != (m, n) {
        return Err(Error::NonStochasticRows(format!(
            "expected {m} x {n}, got {:?}",
            soft.dim()
        )));
    }
    for (i, row) in soft.rows().into_iter().enumerate() {
        if row.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::NonStochasticRows(format!("row {} has a bad entry", i + 1)));
        }
        let sum = row.sum();
        if (sum - 1.0).abs() > DS_TOLERANCE {
            return Err(Error::NonStochasticRows(format!("row {} sums to {sum}", i + 1)));
        }
    }
    Ok(())
}

/// Diagnostics from one solve.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveTrace {
    /// Relaxed objective `Σ λᵢ (‖Aᵢ‖² + ‖Bᵢ‖²) − 2 f(P⁽ᵗ⁾)`, starting with
    /// the initial point. Equals the Frobenius objective at permutations.
    pub objective_per_iteration: Vec<f64>,
    pub iterations_used: usize,
    pub alpha_history: Vec<f64>,
}

/// Gradient of `f(P) = Σ λᵢ tr((Gᵢ ⊕ 0) P Hᵢ Pᵀ)`, i.e.
/// `Σ λᵢ ((Gᵢ⊕0)ᵀ P Hᵢ + (Gᵢ⊕0) P Hᵢᵀ)`, as a full `n × n` matrix.
pub fn gradient(
    p: &Array2<f64>,
    tpl: &PaddedMultiplex,
    bg: &PaddedMultiplex,
    w: &ChannelWeights,
) -> Result<Array2<f64>> {
    check_pair(tpl, bg)?;
    check_weights(w, tpl.channel_count())?;
    let n = bg.order;
    if p.dim() != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "P is {:?}, background order is {n}",
            p.dim()
        )));
    }
    let mut grad = Array2::zeros((n, n));
    for ((a, b), &lambda) in tpl.matrices.iter().zip(&bg.matrices).zip(w.as_slice()) {
        let g = embed_oplus_zero(a, n)?;
        let term = g.t().dot(p).dot(b) + g.dot(p).dot(&b.t());
        grad.scaled_add(lambda, &term);
    }
    Ok(grad)
}

/// `Σ λᵢ tr((Gᵢ ⊕ 0) X Hᵢ Yᵀ)` for general `X`, `Y`.
fn bilinear(
    x: &Array2<f64>,
    y: &Array2<f64>,
    tpl: &PaddedMultiplex,
    bg: &PaddedMultiplex,
    w: &ChannelWeights,
) -> Result<f64> {
    let n = bg.order;
    let mut total = 0.0;
    for ((a, b), &lambda) in tpl.matrices.iter().zip(&bg.matrices).zip(w.as_slice()) {
        let g = embed_oplus_zero(a, n)?;
        let prod = g.dot(x).dot(b).dot(&y.t());
        total += lambda * prod.diag().sum();
    }
    Ok(total)
}

/// Maximizer of `a α² + b α` over `[0, 1]`.
///
/// Interior stationary point when the parabola opens downward and its vertex
/// lies in the interval, otherwise the better endpoint; ties and the fully
/// degenerate case return 1 so the current iterate is kept.
pub fn best_alpha(a: f64, b: f64) -> f64 {
    if a < 0.0 {
        let vertex = -b / (2.0 * a);
        if (0.0..=1.0).contains(&vertex) {
            return vertex;
        }
    }
    if a + b >= 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Exact line search on `αP + (1 − α)Q` for the trace objective.
pub fn line_search_alpha(
    p: &Array2<f64>,
    q: &Array2<f64>,
    tpl: &PaddedMultiplex,
    bg: &PaddedMultiplex,
    w: &ChannelWeights,
) -> Result<f64> {
    check_pair(tpl, bg)?;
    check_weights(w, tpl.channel_count())?;
    let n = bg.order;
    if p.dim() != (n, n) || q.dim() != (n, n) {
        return Err(Error::DimensionMismatch("P and Q must match the background order".into()));
    }
    // f(Q + αD) = f(Q) + α[⟨·⟩(Q, D) + ⟨·⟩(D, Q)] + α² f(D)
    let d = p - q;
    let a = bilinear(&d, &d, tpl, bg, w)?;
    let b = bilinear(q, &d, tpl, bg, w)? + bilinear(&d, q, tpl, bg, w)?;
    Ok(best_alpha(a, b))
}

/// Trace objective `Σ λᵢ tr((Gᵢ ⊕ 0) P Hᵢ Pᵀ)` for a general square `P`.
pub fn trace_objective(
    p: &Array2<f64>,
    tpl: &PaddedMultiplex,
    bg: &PaddedMultiplex,
    w: &ChannelWeights,
) -> Result<f64> {
    check_pair(tpl, bg)?;
    check_weights(w, tpl.channel_count())?;
    bilinear(p, p, tpl, bg, w)
}

/// Random start `α·(1/n)·𝟙𝟙ᵀ + (1 − α)·R` with `α ~ U[0,1]`, `R` uniform.
/// Returns `(α, R)`.
pub fn random_start_parts<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (f64, Permutation) {
    let alpha: f64 = rng.random();
    let mut mapping: Vec<usize> = (0..n).collect();
    mapping.shuffle(rng);
    (alpha, Permutation::new(mapping).expect("shuffle is a permutation"))
}

fn blend_start(n: usize, alpha: f64, perm: &Permutation) -> Array2<f64> {
    let mut m = Array2::from_elem((n, n), alpha / n as f64);
    for (i, &j) in perm.as_slice().iter().enumerate() {
        m[[i, j]] += 1.0 - alpha;
    }
    m
}

pub fn random_ds_start<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DoublyStochasticMatrix {
    let (alpha, perm) = random_start_parts(n, rng);
    DoublyStochasticMatrix(blend_start(n, alpha, &perm))
}

/// Splits `0..n` into the rows and columns left free by the hard seeds.
fn free_sets(n: usize, hard: &[(usize, usize)]) -> (Vec<usize>, Vec<usize>) {
    let mut row_seeded = vec![false; n];
    let mut col_seeded = vec![false; n];
    for &(r, c) in hard {
        row_seeded[r] = true;
        col_seeded[c] = true;
    }
    (
        (0..n).filter(|&r| !row_seeded[r]).collect(),
        (0..n).filter(|&c| !col_seeded[c]).collect(),
    )
}

fn embed_free_block(
    n: usize,
    hard: &[(usize, usize)],
    rows: &[usize],
    cols: &[usize],
    block: &Array2<f64>,
) -> Array2<f64> {
    let mut m = Array2::zeros((n, n));
    for &(r, c) in hard {
        m[[r, c]] = 1.0;
    }
    for (i, &r) in rows.iter().enumerate() {
        for (j, &c) in cols.iter().enumerate() {
            m[[r, c]] = block[[i, j]];
        }
    }
    m
}

/// Random start on the block left free by the hard seeds; seeded rows are
/// indicator rows.
pub fn seeded_random_start<R: Rng + ?Sized>(
    n: usize,
    hard: &[(usize, usize)],
    rng: &mut R,
) -> DoublyStochasticMatrix {
    let (rows, cols) = free_sets(n, hard);
    let k = rows.len();
    let (alpha, perm) = random_start_parts(k, rng);
    let block = blend_start(k, alpha, &perm);
    DoublyStochasticMatrix(embed_free_block(n, hard, &rows, &cols, &block))
}

/// Barycenter of the free block, seeded rows fixed.
pub fn seeded_flat_start(n: usize, hard: &[(usize, usize)]) -> DoublyStochasticMatrix {
    let (rows, cols) = free_sets(n, hard);
    let k = rows.len();
    let block = Array2::from_elem((k, k), 1.0 / k.max(1) as f64);
    DoublyStochasticMatrix(embed_free_block(n, hard, &rows, &cols, &block))
}

const MAX_BALANCING_SWEEPS: usize = 1000;

/// Alternating row/column normalization until all marginals are within
/// `DS_TOLERANCE / 10` of one.
fn balance(m: &mut Array2<f64>) -> Result<()> {
    let target = DS_TOLERANCE / 10.0;
    let mut residual = marginal_error(&m.view());
    let mut sweeps = 0;
    while residual > target {
        if sweeps == MAX_BALANCING_SWEEPS {
            return Err(Error::BalancingFailed { sweeps, residual });
        }
        for mut row in m.rows_mut() {
            let s = row.sum();
            if s > 0.0 {
                row /= s;
            }
        }
        for mut col in m.columns_mut() {
            let s = col.sum();
            if s > 0.0 {
                col /= s;
            }
        }
        sweeps += 1;
        residual = marginal_error(&m.view());
    }
    Ok(())
}

/// Start built from a soft-seed prior (see [`soft_seed_start_seeded`]).
pub fn soft_seed_start<R: Rng + ?Sized>(
    soft: &Array2<f64>,
    jitter: f64,
    rng: &mut R,
) -> Result<DoublyStochasticMatrix> {
    soft_seed_start_seeded(soft, &[], jitter, rng)
}

/// Embeds an `m × n` row-stochastic prior into an `n × n` start.
///
/// Rows `m..n` spread the column mass the prior leaves unused evenly; hard
/// seeds overwrite their rows and columns; every free entry then receives
/// independent `U[0, jitter)` noise and the free block is rebalanced to
/// doubly stochastic.
pub fn soft_seed_start_seeded<R: Rng + ?Sized>(
    soft: &Array2<f64>,
    hard: &[(usize, usize)],
    jitter: f64,
    rng: &mut R,
) -> Result<DoublyStochasticMatrix> {
    let (m, n) = soft.dim();
    if m > n {
        return Err(Error::NonStochasticRows(format!(
            "prior has more rows ({m}) than columns ({n})"
        )));
    }
    check_row_stochastic(soft, m, n)?;
    if !(jitter >= 0.0) || !jitter.is_finite() {
        return Err(Error::InvalidConfig(format!("jitter must be >= 0, got {jitter}")));
    }
    SeedSpec::hard(hard.to_vec()).validate(m, n)?;

    let mut full = Array2::zeros((n, n));
    full.slice_mut(s![..m, ..]).assign(soft);
    if n > m {
        let spread = (n - m) as f64;
        for j in 0..n {
            let residual = (1.0 - soft.column(j).sum()).max(0.0);
            full.slice_mut(s![m.., j]).fill(residual / spread);
        }
    }
    let (rows, cols) = free_sets(n, hard);
    let mut block = Array2::from_shape_fn((rows.len(), cols.len()), |(i, j)| full[[rows[i], cols[j]]]);
    if jitter > 0.0 {
        for v in block.iter_mut() {
            *v += rng.random::<f64>() * jitter;
        }
    }
    balance(&mut block)?;
    Ok(DoublyStochasticMatrix(embed_free_block(n, hard, &rows, &cols, &block)))
}

/// Dense views of the padded problem used by the iteration.
struct Problem<'a> {
    m: usize,
    n: usize,
    tpl: &'a [Array2<f64>],
    bg: &'a [Array2<f64>],
    lambdas: &'a [f64],
    const_term: f64,
}

impl<'a> Problem<'a> {
    fn new(tpl: &'a PaddedMultiplex, bg: &'a PaddedMultiplex, w: &'a ChannelWeights) -> Self {
        let const_term = tpl
            .matrices
            .iter()
            .zip(&bg.matrices)
            .zip(w.as_slice())
            .map(|((a, b), l)| l * (a.iter().map(|x| x * x).sum::<f64>() + b.iter().map(|x| x * x).sum::<f64>()))
            .sum();
        Problem {
            m: tpl.order,
            n: bg.order,
            tpl: &tpl.matrices,
            bg: &bg.matrices,
            lambdas: w.as_slice(),
            const_term,
        }
    }

    /// `Σ λᵢ ⟨Aᵢ, Xᵢ Yᵀ⟩` where `Xᵢ = X_top Bᵢ` is given per channel and
    /// `Y_top` is the `m × n` top block of `Y`.
    fn pair_value(&self, xb: &[Array2<f64>], y_top: &ArrayView2<f64>) -> f64 {
        xb.iter()
            .zip(self.tpl)
            .zip(self.lambdas)
            .map(|((xbi, a), l)| l * (a * &xbi.dot(&y_top.t())).sum())
            .sum()
    }
}

/// Runs M-FAQ from `p0`. See [`mfaq_observed`].
pub fn mfaq(
    tpl: &PaddedMultiplex,
    bg: &PaddedMultiplex,
    p0: &DoublyStochasticMatrix,
    cfg: &SolverConfig,
    seeds: &SeedSpec,
) -> Result<(Permutation, SolveTrace)> {
    mfaq_observed(tpl, bg, p0, cfg, seeds, |_| {})
}

/// Runs M-FAQ from `p0`, calling `observer` on the start and on every
/// Frank-Wolfe iterate.
///
/// The direction step and the final projection are both restricted to
/// permutations extending the hard seeds. `seeds.soft` is not used here; it
/// only shapes starting points.
pub fn mfaq_observed<F: FnMut(&Array2<f64>)>(
    tpl: &PaddedMultiplex,
    bg: &PaddedMultiplex,
    p0: &DoublyStochasticMatrix,
    cfg: &SolverConfig,
    seeds: &SeedSpec,
    mut observer: F,
) -> Result<(Permutation, SolveTrace)> {
    check_pair(tpl, bg)?;
    cfg.validate()?;
    check_weights(&cfg.weights, tpl.channel_count())?;
    let prob = Problem::new(tpl, bg, &cfg.weights);
    let (m, n) = (prob.m, prob.n);
    if p0.order() != n {
        return Err(Error::DimensionMismatch(format!(
            "start has order {}, background has order {n}",
            p0.order()
        )));
    }
    seeds.validate(m, n)?;
    for &(r, c) in &seeds.hard {
        if p0.0[[r, c]] < 1.0 - DS_TOLERANCE {
            return Err(Error::InfeasibleSeedInitialization(format!(
                "start has P[{}, {}] = {} for a hard seed",
                r + 1,
                c + 1,
                p0.0[[r, c]]
            )));
        }
    }

    let (free_rows, free_cols) = free_sets(n, &seeds.hard);
    let active_rows: Vec<usize> = free_rows.iter().copied().filter(|&r| r < m).collect();
    let passive_rows: Vec<usize> = free_rows.iter().copied().filter(|&r| r >= m).collect();

    let mut p = p0.0.clone();
    observer(&p);
    // top-block products P[..m,:] · Bᵢ
    let mut pb: Vec<Array2<f64>> = prob.bg.iter().map(|b| p.slice(s![..m, ..]).dot(b)).collect();
    let mut f = prob.pair_value(&pb, &p.slice(s![..m, ..]));
    let mut trace = SolveTrace {
        objective_per_iteration: vec![prob.const_term - 2.0 * f],
        ..Default::default()
    };

    let mut q_map = vec![0usize; n];
    for _ in 0..cfg.max_iters {
        // gradient top block: 2 Σ λ Aᵢ (P_top Bᵢ)
        let mut grad = Array2::<f64>::zeros((m, n));
        for ((a, pbi), &l) in prob.tpl.iter().zip(&pb).zip(prob.lambdas) {
            grad.scaled_add(2.0 * l, &a.dot(pbi));
        }

        // direction: best permutation extending the seeds
        for &(r, c) in &seeds.hard {
            q_map[r] = c;
        }
        let reduced = Array2::from_shape_fn((active_rows.len(), free_cols.len()), |(i, j)| {
            grad[[active_rows[i], free_cols[j]]]
        });
        let assign = lap_max_rect(reduced.view());
        let mut col_taken = vec![false; free_cols.len()];
        for (i, &j) in assign.iter().enumerate() {
            q_map[active_rows[i]] = free_cols[j];
            col_taken[j] = true;
        }
        let mut rest = free_cols
            .iter()
            .zip(&col_taken)
            .filter_map(|(&c, &t)| (!t).then_some(c));
        for &r in &passive_rows {
            q_map[r] = rest.next().expect("free rows and columns have equal counts");
        }

        // Q_top Bᵢ selects rows of Bᵢ
        let qb: Vec<Array2<f64>> = prob
            .bg
            .iter()
            .map(|b| Array2::from_shape_fn((m, n), |(j, k)| b[[q_map[j], k]]))
            .collect();
        let mut q_top = Array2::<f64>::zeros((m, n));
        for j in 0..m {
            q_top[[j, q_map[j]]] = 1.0;
        }
        let d_top = &p.slice(s![..m, ..]) - &q_top;
        let db: Vec<Array2<f64>> = pb.iter().zip(&qb).map(|(x, y)| x - y).collect();
        let a = prob.pair_value(&db, &d_top.view());
        let b = 2.0 * prob.pair_value(&qb, &d_top.view());
        let alpha = best_alpha(a, b);

        // P ← αP + (1 − α)Q
        let mut step_sq = 0.0;
        for (r, row) in p.rows_mut().into_iter().enumerate() {
            let qc = q_map[r];
            for (c, v) in row.into_iter().enumerate() {
                let qv = if c == qc { 1.0 } else { 0.0 };
                let new = alpha * *v + (1.0 - alpha) * qv;
                step_sq += (new - *v) * (new - *v);
                *v = new;
            }
        }
        for (pbi, qbi) in pb.iter_mut().zip(&qb) {
            Zip::from(pbi).and(qbi).for_each(|x, &y| *x = alpha * *x + (1.0 - alpha) * y);
        }
        f = prob.pair_value(&pb, &p.slice(s![..m, ..]));
        trace.objective_per_iteration.push(prob.const_term - 2.0 * f);
        trace.alpha_history.push(alpha);
        trace.iterations_used += 1;
        observer(&p);

        if step_sq.sqrt() <= cfg.epsilon {
            break;
        }
    }

    let perm = solve_lap_max_constrained(&p, &seeds.hard)?;
    Ok((perm, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplex::{objective, pad, validate_multiplex, PaddingScheme, RawChannel, Role};
    use crate::rng::seeded;

    fn er_multiplex(n: usize, c: usize, p: f64, rng: &mut impl Rng) -> crate::MultiplexGraph {
        let raw = (0..c)
            .map(|_| {
                let mut edges = vec![];
                for u in 0..n {
                    for v in u + 1..n {
                        if rng.random::<f64>() < p {
                            edges.push((u, v));
                        }
                    }
                }
                RawChannel {
                    vertices: (0..n).collect(),
                    edges,
                }
            })
            .collect();
        validate_multiplex(n, raw).unwrap()
    }

    fn centered(g: &crate::MultiplexGraph, order: usize, role: Role) -> PaddedMultiplex {
        pad(g, order, PaddingScheme::Centered, role).unwrap()
    }

    #[test]
    fn zero_template_has_zero_gradient() {
        let mut rng = seeded(1);
        let g = er_multiplex(5, 2, 0.5, &mut rng);
        let bg = centered(&g, 5, Role::Background);
        let tpl = PaddedMultiplex {
            order: 3,
            matrices: vec![Array2::zeros((3, 3)); 2],
            scheme: PaddingScheme::Centered,
            role: Role::Template,
        };
        let p = DoublyStochasticMatrix::flat(5);
        let grad = gradient(p.as_array(), &tpl, &bg, &ChannelWeights::uniform(2)).unwrap();
        assert!(grad.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn symmetric_gradient_collapses() {
        let mut rng = seeded(2);
        let g = er_multiplex(6, 2, 0.4, &mut rng);
        let h = er_multiplex(6, 2, 0.4, &mut rng);
        let tpl = centered(&g, 6, Role::Template);
        let bg = centered(&h, 6, Role::Background);
        let w = ChannelWeights::new(vec![1.0, 2.5]).unwrap();
        let p = random_ds_start(6, &mut rng);
        let grad = gradient(p.as_array(), &tpl, &bg, &w).unwrap();
        let mut expected = Array2::zeros((6, 6));
        for ((a, b), l) in tpl.matrices.iter().zip(&bg.matrices).zip(w.as_slice()) {
            expected.scaled_add(2.0 * l, &a.dot(p.as_array()).dot(b));
        }
        assert!((&grad - &expected).iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn alpha_conventions() {
        assert_eq!(best_alpha(0.0, 0.0), 1.0);
        assert_eq!(best_alpha(0.0, 2.0), 1.0);
        assert_eq!(best_alpha(0.0, -2.0), 0.0);
        assert_eq!(best_alpha(-2.0, 2.0), 0.5);
        assert_eq!(best_alpha(-1.0, 5.0), 1.0);
        assert_eq!(best_alpha(3.0, -1.0), 1.0);
        assert_eq!(best_alpha(3.0, -4.0), 0.0);
    }

    #[test]
    fn line_search_on_a_point_returns_one() {
        let mut rng = seeded(3);
        let g = er_multiplex(5, 1, 0.5, &mut rng);
        let tpl = centered(&g, 5, Role::Template);
        let p = random_ds_start(5, &mut rng);
        let alpha = line_search_alpha(p.as_array(), p.as_array(), &tpl, &tpl, &ChannelWeights::uniform(1)).unwrap();
        assert_eq!(alpha, 1.0);
    }

    #[test]
    fn fixed_point_on_self_match() {
        let mut rng = seeded(4);
        let g = er_multiplex(8, 2, 0.5, &mut rng);
        let tpl = centered(&g, 8, Role::Template);
        let bg = centered(&g, 8, Role::Background);
        let cfg = SolverConfig::for_problem(8, 2);
        let p0 = DoublyStochasticMatrix::from_permutation(&Permutation::identity(8));
        let (perm, _) = mfaq(&tpl, &bg, &p0, &cfg, &SeedSpec::default()).unwrap();
        assert_eq!(perm, Permutation::identity(8));
        assert_eq!(objective(&tpl, &bg, &perm, &cfg.weights).unwrap(), 0.0);
    }

    #[test]
    fn hard_seeds_are_respected() {
        let mut rng = seeded(5);
        let g = er_multiplex(10, 2, 0.5, &mut rng);
        let h = er_multiplex(12, 2, 0.5, &mut rng);
        let tpl = centered(&g, 10, Role::Template);
        let bg = centered(&h, 12, Role::Background);
        let hard = vec![(0, 7), (3, 2), (9, 11)];
        let p0 = seeded_random_start(12, &hard, &mut rng);
        let seeds = SeedSpec::hard(hard.clone());
        let (perm, trace) = mfaq(&tpl, &bg, &p0, &SolverConfig::for_problem(12, 2), &seeds).unwrap();
        for (t, b) in hard {
            assert_eq!(perm.get(t), b);
        }
        assert!(trace.iterations_used >= 1);
    }

    #[test]
    fn inconsistent_start_is_rejected() {
        let mut rng = seeded(6);
        let g = er_multiplex(5, 1, 0.5, &mut rng);
        let tpl = centered(&g, 5, Role::Template);
        let seeds = SeedSpec::hard(vec![(0, 1)]);
        let err = mfaq(&tpl, &tpl, &DoublyStochasticMatrix::flat(5), &SolverConfig::for_problem(5, 1), &seeds)
            .unwrap_err();
        assert!(matches!(err, Error::InfeasibleSeedInitialization(_)));
    }

    #[test]
    fn random_start_extremes() {
        let perm = Permutation::new(vec![1, 2, 0]).unwrap();
        let flat = blend_start(3, 1.0, &perm);
        assert!(flat.iter().all(|&v| (v - 1.0 / 3.0).abs() < 1e-15));
        assert_eq!(blend_start(3, 0.0, &perm), perm.to_matrix());
        let mut rng = seeded(7);
        for n in 1..6 {
            let p = random_ds_start(n, &mut rng);
            assert!(DoublyStochasticMatrix::new(p.into_inner()).is_ok());
        }
    }

    #[test]
    fn soft_seed_examples() {
        let mut rng = seeded(8);
        // leading permutation block
        let mut soft = Array2::zeros((2, 4));
        soft[[0, 2]] = 1.0;
        soft[[1, 0]] = 1.0;
        let start = soft_seed_start(&soft, 0.0, &mut rng).unwrap();
        assert_eq!(start.as_array()[[0, 2]], 1.0);
        assert_eq!(start.as_array()[[1, 0]], 1.0);
        assert!(marginal_error(&start.as_array().view()) <= DS_TOLERANCE);
        // flat prior
        let soft = Array2::from_elem((2, 4), 0.25);
        let start = soft_seed_start(&soft, 0.0, &mut rng).unwrap();
        assert!(start.as_array().iter().all(|&v| (v - 0.25).abs() < 1e-12));
        // bad rows
        let bad = Array2::from_elem((2, 4), 0.3);
        assert!(matches!(
            soft_seed_start(&bad, 0.0, &mut rng),
            Err(Error::NonStochasticRows(_))
        ));
    }

    #[test]
    fn soft_seed_with_hard_seeds() {
        let mut rng = seeded(9);
        let soft = Array2::from_elem((3, 5), 0.2);
        let start = soft_seed_start_seeded(&soft, &[(1, 4)], 0.3, &mut rng).unwrap();
        let a = start.as_array();
        assert_eq!(a[[1, 4]], 1.0);
        assert!(a.column(4).iter().enumerate().all(|(r, &v)| r == 1 || v == 0.0));
        assert!(marginal_error(&a.view()) <= DS_TOLERANCE);
    }

    #[test]
    fn config_validation() {
        let mut cfg = SolverConfig::for_problem(10, 1);
        assert!((cfg.epsilon - 1e-3).abs() < 1e-15);
        cfg.max_iters = 0;
        assert!(cfg.validate().is_err());
        cfg.max_iters = 1;
        cfg.epsilon = 0.0;
        assert!(cfg.validate().is_err());
    }
}

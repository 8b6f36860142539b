//! Random multiplex instances with a known template-to-background alignment.
//!
//! All samplers visit vertex pairs `(u, v)`, `u < v`, in lexicographic order
//! and draw exactly one uniform per Bernoulli, so a seed fully determines the
//! output.

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::assignment::Permutation;
use crate::error::{Error, Result};
use crate::multiplex::{validate_multiplex, Channel, MultiplexGraph, RawChannel};

/// A template, a background and the true image of every template label.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub template: MultiplexGraph,
    pub background: MultiplexGraph,
    /// `truth[j]` is the background label of template label `j`.
    pub truth: Vec<usize>,
}

impl Instance {
    /// Relabels the background by a uniformly random permutation and carries
    /// the truth along, so label order carries no information.
    pub fn shuffled<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Instance> {
        let n = self.background.n_total();
        let mut map: Vec<usize> = (0..n).collect();
        map.shuffle(rng);
        let perm = Permutation::new(map).expect("shuffle is a permutation");
        Ok(Instance {
            template: self.template.clone(),
            background: self.background.relabel(&perm)?,
            truth: self.truth.iter().map(|&b| perm.get(b)).collect(),
        })
    }
}

fn check_prob(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::InvalidParameter(format!("{name} = {v} is not in [0, 1]")));
    }
    Ok(())
}

fn check_lists(c: usize, lists: &[(&str, &[f64])]) -> Result<()> {
    if c == 0 {
        return Err(Error::InvalidParameter("need at least one channel".into()));
    }
    for (name, l) in lists {
        if l.len() != c {
            return Err(Error::InvalidParameter(format!(
                "{name} has {} entries for {c} channels",
                l.len()
            )));
        }
        for &v in l.iter() {
            check_prob(name, v)?;
        }
    }
    Ok(())
}

fn bernoulli<R: Rng + ?Sized>(p: f64, rng: &mut R) -> bool {
    rng.random::<f64>() < p
}

/// Edges of an Erdős–Rényi graph on `0..n`.
pub fn er_edges<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if bernoulli(p, rng) {
                edges.push((u, v));
            }
        }
    }
    edges
}

/// Passes a centered padded matrix through an errorful channel: every entry
/// pair `(i, j)`, `i < j`, is sign-flipped independently with probability
/// `e[i, j]`. Zero entries stay zero.
pub fn apply_error_channel<R: Rng + ?Sized>(
    a_hat: &Array2<f64>,
    e: &Array2<f64>,
    rng: &mut R,
) -> Result<Array2<f64>> {
    if a_hat.dim() != e.dim() || a_hat.nrows() != a_hat.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "matrix {:?} vs flip matrix {:?}",
            a_hat.dim(),
            e.dim()
        )));
    }
    let n = a_hat.nrows();
    let mut out = a_hat.clone();
    for i in 0..n {
        for j in i + 1..n {
            let flip = bernoulli(e[[i, j]], rng);
            if flip && a_hat[[i, j]] != 0.0 {
                out[[i, j]] = -a_hat[[i, j]];
                out[[j, i]] = -a_hat[[j, i]];
            }
        }
    }
    Ok(out)
}

/// Per-channel flip probabilities (symmetric, hollow, entries in `[0,1]`).
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorFilter {
    per_channel: Vec<Array2<f64>>,
}

impl ErrorFilter {
    pub fn new(per_channel: Vec<Array2<f64>>) -> Result<Self> {
        for e in &per_channel {
            let (r, c) = e.dim();
            if r != c {
                return Err(Error::NonSquare { rows: r, cols: c });
            }
            for i in 0..r {
                if e[[i, i]] != 0.0 {
                    return Err(Error::InvalidParameter("flip matrix must be hollow".into()));
                }
                for j in 0..r {
                    check_prob("flip probability", e[[i, j]])?;
                    if e[[i, j]] != e[[j, i]] {
                        return Err(Error::InvalidParameter("flip matrix must be symmetric".into()));
                    }
                }
            }
        }
        Ok(ErrorFilter { per_channel })
    }

    /// `rate · J` (hollow all-ones) for every channel.
    pub fn uniform(n: usize, rates: &[f64]) -> Result<Self> {
        let per_channel = rates
            .iter()
            .map(|&r| Array2::from_shape_fn((n, n), |(i, j)| if i == j { 0.0 } else { r }))
            .collect();
        ErrorFilter::new(per_channel)
    }

    pub fn channel(&self, i: usize) -> &Array2<f64> {
        &self.per_channel[i]
    }

    pub fn channel_count(&self) -> usize {
        self.per_channel.len()
    }
}

/// Errorful copy of a channel restricted to its vertex set: each member pair
/// is toggled (edge ↔ non-edge) with probability `rate(u, v, is_edge)`.
pub fn flip_channel<R, F>(ch: &Channel, rate: F, rng: &mut R) -> RawChannel
where
    R: Rng + ?Sized,
    F: Fn(usize, usize, bool) -> f64,
{
    let members: Vec<usize> = ch.vertices().collect();
    let mut edges = Vec::new();
    for (i, &u) in members.iter().enumerate() {
        for &v in &members[i + 1..] {
            let is_edge = ch.has_edge(u, v);
            let flip = bernoulli(rate(u, v, is_edge), rng);
            if is_edge != flip {
                edges.push((u, v));
            }
        }
    }
    RawChannel {
        vertices: members,
        edges,
    }
}

/// Induced subgraph of every channel on `0..m`.
pub fn induced_prefix(g: &MultiplexGraph, m: usize) -> Result<MultiplexGraph> {
    let raw = g
        .channels()
        .iter()
        .map(|ch| RawChannel {
            vertices: ch.vertices().filter(|&v| v < m).collect(),
            edges: ch.edges().filter(|&(_, v)| v < m).collect(),
        })
        .collect();
    validate_multiplex(m, raw)
}

/// Correlated Erdős–Rényi channel pairs sharing the identity alignment.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatedErSpec {
    pub n: usize,
    pub p: f64,
    /// One edge correlation per channel.
    pub rhos: Vec<f64>,
}

impl CorrelatedErSpec {
    pub fn validate(&self) -> Result<()> {
        check_prob("p", self.p)?;
        if self.rhos.is_empty() || self.n == 0 {
            return Err(Error::InvalidParameter("need n >= 1 and at least one channel".into()));
        }
        for &rho in &self.rhos {
            let (hi, lo) = conditional_probs(self.p, rho);
            if !(-1.0..=1.0).contains(&rho) || !(0.0..=1.0).contains(&hi) || !(0.0..=1.0).contains(&lo) {
                return Err(Error::InfeasibleRho { rho, p: self.p });
            }
        }
        Ok(())
    }
}

/// `(P(H edge | G edge), P(H edge | G non-edge))`.
fn conditional_probs(p: f64, rho: f64) -> (f64, f64) {
    (p + rho * (1.0 - p), p * (1.0 - rho))
}

/// Draws `(G, H)`: every channel of `G` is ER(n, p); the matching channel of
/// `H` has edge indicators with marginal `p` and correlation `ρ` to `G`.
pub fn gen_correlated_er_pair<R: Rng + ?Sized>(
    spec: &CorrelatedErSpec,
    rng: &mut R,
) -> Result<(MultiplexGraph, MultiplexGraph)> {
    spec.validate()?;
    let n = spec.n;
    let mut g_raw = Vec::new();
    let mut h_raw = Vec::new();
    for &rho in &spec.rhos {
        let (hi, lo) = conditional_probs(spec.p, rho);
        let mut ge = Vec::new();
        let mut he = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                let g_edge = bernoulli(spec.p, rng);
                let h_edge = bernoulli(if g_edge { hi } else { lo }, rng);
                if g_edge {
                    ge.push((u, v));
                }
                if h_edge {
                    he.push((u, v));
                }
            }
        }
        g_raw.push(RawChannel {
            vertices: (0..n).collect(),
            edges: ge,
        });
        h_raw.push(RawChannel {
            vertices: (0..n).collect(),
            edges: he,
        });
    }
    Ok((validate_multiplex(n, g_raw)?, validate_multiplex(n, h_raw)?))
}

/// Multiplex sources with per-channel uniform flip rates (`s` on the
/// template, `q` on the background).
#[derive(Debug, Clone, PartialEq)]
pub struct MsModelSpec {
    pub n: usize,
    pub m: usize,
    pub p: Vec<f64>,
    pub s: Vec<f64>,
    pub q: Vec<f64>,
}

impl MsModelSpec {
    pub fn channel_count(&self) -> usize {
        self.p.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.m > self.n {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= m <= n, got m = {}, n = {}",
                self.m, self.n
            )));
        }
        check_lists(self.p.len(), &[("p", &self.p), ("s", &self.s), ("q", &self.q)])
    }
}

/// Source graphs of the MS model: `W` on `0..n` and `T = W[0..m]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MsSources {
    pub template: MultiplexGraph,
    pub background: MultiplexGraph,
}

pub fn ms_sources<R: Rng + ?Sized>(spec: &MsModelSpec, rng: &mut R) -> Result<MsSources> {
    spec.validate()?;
    let edges = spec.p.iter().map(|&p| er_edges(spec.n, p, rng)).collect();
    let background = MultiplexGraph::full(spec.n, edges)?;
    let template = induced_prefix(&background, spec.m)?;
    Ok(MsSources {
        template,
        background,
    })
}

/// Passes fixed MS sources through the template and background filters.
pub fn ms_observe<R: Rng + ?Sized>(
    sources: &MsSources,
    spec: &MsModelSpec,
    rng: &mut R,
) -> Result<Instance> {
    spec.validate()?;
    let c = spec.channel_count();
    if sources.template.channel_count() != c || sources.background.channel_count() != c {
        return Err(Error::ChannelCountMismatch {
            template: sources.template.channel_count(),
            background: c,
        });
    }
    let tpl_raw = (0..c)
        .map(|i| flip_channel(sources.template.channel(i), |_, _, _| spec.s[i], rng))
        .collect();
    let bg_raw = (0..c)
        .map(|i| flip_channel(sources.background.channel(i), |_, _, _| spec.q[i], rng))
        .collect();
    Ok(Instance {
        template: validate_multiplex(sources.template.n_total(), tpl_raw)?,
        background: validate_multiplex(sources.background.n_total(), bg_raw)?,
        truth: (0..sources.template.n_total()).collect(),
    })
}

pub fn gen_ms_instance<R: Rng + ?Sized>(spec: &MsModelSpec, rng: &mut R) -> Result<Instance> {
    let sources = ms_sources(spec, rng)?;
    ms_observe(&sources, spec, rng)
}

/// Single monoplex source with edge-dependent per-channel flip rates.
///
/// Background channel `i` flips source edges with probability `s[i]` and
/// source non-edges with `q[i]`; template channel `i` flips edges of
/// `T = W[0..m]` with `r[i]` and non-edges with `t[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeModelSpec {
    pub n: usize,
    pub m: usize,
    pub p: f64,
    pub s: Vec<f64>,
    pub q: Vec<f64>,
    pub r: Vec<f64>,
    pub t: Vec<f64>,
}

impl MeModelSpec {
    pub fn channel_count(&self) -> usize {
        self.s.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.m > self.n {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= m <= n, got m = {}, n = {}",
                self.m, self.n
            )));
        }
        check_prob("p", self.p)?;
        check_lists(
            self.s.len(),
            &[("s", &self.s), ("q", &self.q), ("r", &self.r), ("t", &self.t)],
        )
    }
}

/// Draws the ME source `W ~ ER(n, p)` as a one-channel multiplex.
pub fn me_source<R: Rng + ?Sized>(spec: &MeModelSpec, rng: &mut R) -> Result<MultiplexGraph> {
    spec.validate()?;
    MultiplexGraph::full(spec.n, vec![er_edges(spec.n, spec.p, rng)])
}

pub fn me_observe<R: Rng + ?Sized>(
    source: &MultiplexGraph,
    spec: &MeModelSpec,
    rng: &mut R,
) -> Result<Instance> {
    spec.validate()?;
    let w = source.channel(0);
    let t_graph = induced_prefix(source, spec.m)?;
    let t = t_graph.channel(0);
    let c = spec.channel_count();
    let bg_raw = (0..c)
        .map(|i| flip_channel(w, |_, _, e| if e { spec.s[i] } else { spec.q[i] }, rng))
        .collect();
    let tpl_raw = (0..c)
        .map(|i| flip_channel(t, |_, _, e| if e { spec.r[i] } else { spec.t[i] }, rng))
        .collect();
    Ok(Instance {
        template: validate_multiplex(spec.m, tpl_raw)?,
        background: validate_multiplex(spec.n, bg_raw)?,
        truth: (0..spec.m).collect(),
    })
}

pub fn gen_me_instance<R: Rng + ?Sized>(spec: &MeModelSpec, rng: &mut R) -> Result<Instance> {
    let source = me_source(spec, rng)?;
    me_observe(&source, spec, rng)
}

/// A dense template planted in a sparse background.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantSpec {
    pub n: usize,
    pub m: usize,
    pub background_density: Vec<f64>,
    pub template_density: Vec<f64>,
    /// Per-channel probability of toggling each template vertex pair.
    pub noise: Vec<f64>,
    /// Probability that a label is dropped from a channel (channels after the
    /// first; label 0 is always kept) to exercise partial vertex sets.
    pub drop_fraction: f64,
}

impl Default for PlantSpec {
    /// 35-vertex, 3-channel template in a 500-vertex background.
    fn default() -> Self {
        PlantSpec {
            n: 500,
            m: 35,
            background_density: vec![0.02; 3],
            template_density: vec![0.15; 3],
            noise: vec![0.05; 3],
            drop_fraction: 0.0,
        }
    }
}

impl PlantSpec {
    pub fn channel_count(&self) -> usize {
        self.background_density.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.m > self.n {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= m <= n, got m = {}, n = {}",
                self.m, self.n
            )));
        }
        check_prob("drop_fraction", self.drop_fraction)?;
        check_lists(
            self.background_density.len(),
            &[
                ("background_density", &self.background_density),
                ("template_density", &self.template_density),
                ("noise", &self.noise),
            ],
        )
    }
}

/// Generates a background, overwrites its `0..m` block with a denser random
/// structure and emits a noise-flipped copy of that block as the template.
pub fn plant_template<R: Rng + ?Sized>(spec: &PlantSpec, rng: &mut R) -> Result<Instance> {
    spec.validate()?;
    let (n, m) = (spec.n, spec.m);
    let c = spec.channel_count();
    let mut bg_raw = Vec::with_capacity(c);
    let mut block_raw = Vec::with_capacity(c);
    for i in 0..c {
        let mut members = vec![true; n];
        if i > 0 && spec.drop_fraction > 0.0 {
            for v in 1..n {
                members[v] = !bernoulli(spec.drop_fraction, rng);
            }
        }
        let outer = er_edges(n, spec.background_density[i], rng)
            .into_iter()
            .filter(|&(_, v)| v >= m);
        let block = er_edges(m, spec.template_density[i], rng);
        let keep = |&(u, v): &(usize, usize)| members[u] && members[v];
        let edges: Vec<_> = outer.chain(block.iter().copied()).filter(keep).collect();
        bg_raw.push(RawChannel {
            vertices: (0..n).filter(|&v| members[v]).collect(),
            edges,
        });
        block_raw.push(RawChannel {
            vertices: (0..m).filter(|&v| members[v]).collect(),
            edges: block.into_iter().filter(keep).collect(),
        });
    }
    let background = validate_multiplex(n, bg_raw)?;
    let block = validate_multiplex(m, block_raw)?;
    let tpl_raw = (0..c)
        .map(|i| flip_channel(block.channel(i), |_, _, _| spec.noise[i], rng))
        .collect();
    Ok(Instance {
        template: validate_multiplex(m, tpl_raw)?,
        background,
        truth: (0..m).collect(),
    })
}

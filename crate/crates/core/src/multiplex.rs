//! Multiplex graphs, padding schemes and the multiplex matching objective.
//!
//! Labels are 0-based throughout the library; the text formats in [`crate::io`]
//! use 1-based labels and convert on the way in and out.

use std::collections::BTreeSet;

use ndarray::{s, Array2};

use crate::assignment::Permutation;
use crate::error::{Error, Result};

/// Unvalidated channel data: declared vertices plus edges (0-based labels).
///
/// Endpoints of an edge are members of the channel whether or not they are
/// listed in `vertices`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawChannel {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

/// One layer of a multiplex graph: a vertex subset of the shared label space
/// and a simple undirected edge set on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Channel {
    members: Vec<bool>,
    edges: BTreeSet<(usize, usize)>,
}

impl Channel {
    pub fn contains(&self, v: usize) -> bool {
        self.members.get(v).copied().unwrap_or(false)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.contains(&key)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(v, &m)| m.then_some(v))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }
}

/// A node-aligned multiplex network over the labels `0..n_total`.
///
/// Construct through [`validate_multiplex`]; every value of this type
/// satisfies: at least one channel, vertex sets inside the label space,
/// vertex sets covering it, a nonempty common vertex, and no self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplexGraph {
    n_total: usize,
    channels: Vec<Channel>,
}

impl MultiplexGraph {
    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn channel_count(&self) -> usize {
        self.channels.len()
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn channel(&self, i: usize) -> &Channel {
        &self.channels[i]
    }

    /// Convenience constructor for graphs whose channels all span `0..n`.
    pub fn full(n: usize, edges: Vec<Vec<(usize, usize)>>) -> Result<Self> {
        let raw = edges
            .into_iter()
            .map(|e| RawChannel {
                vertices: (0..n).collect(),
                edges: e,
            })
            .collect();
        validate_multiplex(n, raw)
    }

    /// Back to raw form (sorted vertices and edges).
    pub fn to_raw(&self) -> Vec<RawChannel> {
        self.channels
            .iter()
            .map(|ch| RawChannel {
                vertices: ch.vertices().collect(),
                edges: ch.edges().collect(),
            })
            .collect()
    }

    /// Relabels every vertex `v` to `perm[v]` in all channels.
    pub fn relabel(&self, perm: &Permutation) -> Result<Self> {
        if perm.len() != self.n_total {
            return Err(Error::DimensionMismatch(format!(
                "relabeling permutation has length {}, graph has {} labels",
                perm.len(),
                self.n_total
            )));
        }
        let map = perm.as_slice();
        let raw = self
            .channels
            .iter()
            .map(|ch| RawChannel {
                vertices: ch.vertices().map(|v| map[v]).collect(),
                edges: ch.edges().map(|(u, v)| (map[u], map[v])).collect(),
            })
            .collect();
        validate_multiplex(self.n_total, raw)
    }
}

/// Validates raw channel data into a [`MultiplexGraph`].
pub fn validate_multiplex(n_total: usize, raw: Vec<RawChannel>) -> Result<MultiplexGraph> {
    if raw.is_empty() {
        return Err(Error::NoChannels);
    }
    let mut channels = Vec::with_capacity(raw.len());
    for (ci, rc) in raw.into_iter().enumerate() {
        let out_of_range = |label: usize| Error::LabelOutOfRange {
            channel: ci + 1,
            label: label + 1,
            n_total,
        };
        let mut members = vec![false; n_total];
        for &v in &rc.vertices {
            if v >= n_total {
                return Err(out_of_range(v));
            }
            members[v] = true;
        }
        let mut edges = BTreeSet::new();
        for &(u, v) in &rc.edges {
            if u >= n_total {
                return Err(out_of_range(u));
            }
            if v >= n_total {
                return Err(out_of_range(v));
            }
            if u == v {
                return Err(Error::SelfLoop {
                    channel: ci + 1,
                    label: u + 1,
                });
            }
            members[u] = true;
            members[v] = true;
            edges.insert((u.min(v), u.max(v)));
        }
        channels.push(Channel { members, edges });
    }
    if !(0..n_total).any(|v| channels.iter().all(|ch| ch.members[v])) {
        return Err(Error::EmptyChannelIntersection);
    }
    if let Some(missing) = (0..n_total).find(|&v| channels.iter().all(|ch| !ch.members[v])) {
        return Err(Error::UnionIncomplete {
            n_total,
            missing: missing + 1,
        });
    }
    Ok(MultiplexGraph { n_total, channels })
}

/// How non-edges are encoded when a graph is turned into a weighted matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PaddingScheme {
    /// Edges 1, non-edges 0.
    Naive,
    /// Edges 1, non-edges -1.
    Centered,
    /// Template non-edges `-w`, background non-edges -1.
    Generalized(f64),
}

impl PaddingScheme {
    pub fn generalized(w: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::InvalidPadding(w));
        }
        Ok(PaddingScheme::Generalized(w))
    }

    /// Value written for a non-edge between two channel members.
    pub fn non_edge_value(self, role: Role) -> f64 {
        match (self, role) {
            (PaddingScheme::Naive, _) => 0.0,
            (PaddingScheme::Centered, _) => -1.0,
            (PaddingScheme::Generalized(w), Role::Template) => -w,
            (PaddingScheme::Generalized(_), Role::Background) => -1.0,
        }
    }

    fn validate(self) -> Result<()> {
        match self {
            PaddingScheme::Generalized(w) if !(0.0..=1.0).contains(&w) => {
                Err(Error::InvalidPadding(w))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Template,
    Background,
}

/// Per-channel weighted adjacency matrices produced by [`pad`].
#[derive(Debug, Clone, PartialEq)]
pub struct PaddedMultiplex {
    pub order: usize,
    pub matrices: Vec<Array2<f64>>,
    pub scheme: PaddingScheme,
    pub role: Role,
}

impl PaddedMultiplex {
    pub fn channel_count(&self) -> usize {
        self.matrices.len()
    }
}

/// Pads `g` to `target_order` under `scheme`.
///
/// Entries touching a label outside a channel's vertex set are 0, as are all
/// rows and columns of the labels `g.n_total()..target_order`.
pub fn pad(
    g: &MultiplexGraph,
    target_order: usize,
    scheme: PaddingScheme,
    role: Role,
) -> Result<PaddedMultiplex> {
    scheme.validate()?;
    if target_order < g.n_total() {
        return Err(Error::TargetOrderTooSmall {
            current: g.n_total(),
            target: target_order,
        });
    }
    let non_edge = scheme.non_edge_value(role);
    let matrices = g
        .channels()
        .iter()
        .map(|ch| {
            let mut a = Array2::<f64>::zeros((target_order, target_order));
            let members: Vec<usize> = ch.vertices().collect();
            for (i, &u) in members.iter().enumerate() {
                for &v in &members[i + 1..] {
                    let val = if ch.has_edge(u, v) { 1.0 } else { non_edge };
                    a[[u, v]] = val;
                    a[[v, u]] = val;
                }
            }
            a
        })
        .collect();
    Ok(PaddedMultiplex {
        order: target_order,
        matrices,
        scheme,
        role,
    })
}

/// Direct sum `m ⊕ 0`: `m` in the leading block of a zero matrix of side
/// `target_order`.
pub fn embed_oplus_zero(m: &Array2<f64>, target_order: usize) -> Result<Array2<f64>> {
    let (rows, cols) = m.dim();
    if rows != cols {
        return Err(Error::NonSquare { rows, cols });
    }
    if target_order < rows {
        return Err(Error::TargetOrderTooSmall {
            current: rows,
            target: target_order,
        });
    }
    let mut out = Array2::zeros((target_order, target_order));
    out.slice_mut(s![..rows, ..rows]).assign(m);
    Ok(out)
}

/// Positive per-channel weights of the multiplex objective.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelWeights(Vec<f64>);

impl ChannelWeights {
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::InvalidWeights("no weights given".into()));
        }
        if let Some(bad) = lambdas.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return Err(Error::InvalidWeights(format!(
                "weights must be finite and > 0, got {bad}"
            )));
        }
        Ok(ChannelWeights(lambdas))
    }

    pub fn uniform(c: usize) -> Self {
        ChannelWeights(vec![1.0; c])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub(crate) fn check_pair(tpl: &PaddedMultiplex, bg: &PaddedMultiplex) -> Result<()> {
    if tpl.channel_count() != bg.channel_count() {
        return Err(Error::ChannelCountMismatch {
            template: tpl.channel_count(),
            background: bg.channel_count(),
        });
    }
    if tpl.order > bg.order {
        return Err(Error::OrderMismatch {
            template: tpl.order,
            background: bg.order,
        });
    }
    Ok(())
}

pub(crate) fn check_weights(w: &ChannelWeights, c: usize) -> Result<()> {
    if w.len() != c {
        return Err(Error::InvalidWeights(format!(
            "{} weights for {} channels",
            w.len(),
            c
        )));
    }
    Ok(())
}

/// Multiplex matching objective `Σ λᵢ ‖(Aᵢ ⊕ 0) P − P Bᵢ‖²_F`.
///
/// The template is embedded into the background order; `p` maps template
/// label `j` to background label `p[j]`.
pub fn objective(
    tpl: &PaddedMultiplex,
    bg: &PaddedMultiplex,
    p: &Permutation,
    w: &ChannelWeights,
) -> Result<f64> {
    check_pair(tpl, bg)?;
    check_weights(w, tpl.channel_count())?;
    let n = bg.order;
    if p.len() != n {
        return Err(Error::OrderMismatch {
            template: p.len(),
            background: n,
        });
    }
    let m = tpl.order;
    let sigma = p.as_slice();
    let mut total = 0.0;
    for ((a, b), &lambda) in tpl.matrices.iter().zip(&bg.matrices).zip(w.as_slice()) {
        // ‖(A⊕0) − P B Pᵀ‖², entry (r, s) of PBPᵀ being B[σr, σs]
        let mut acc = 0.0;
        for r in 0..n {
            let br = b.row(sigma[r]);
            for s in 0..n {
                let av = if r < m && s < m { a[[r, s]] } else { 0.0 };
                let d = av - br[sigma[s]];
                acc += d * d;
            }
        }
        total += lambda * acc;
    }
    Ok(total)
}

//! Underlying-graph generation and edge perturbation.
//!
//! Two perturbation families are provided: independent per-pair flips
//! ([`apply_edge_noise`]) and the fixed-count delete-then-insert scheme
//! ([`hay_perturb`]), plus the conversions between them.

use std::collections::HashSet;

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{pairs, Graph};
use crate::rng::RandomSeed;

const TAG_EDGE: u64 = 0x01;
const TAG_PROB: u64 = 0x02;
const TAG_NOISE: u64 = 0x03;

/// How `p(i, j)` is assigned to each unordered pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProbabilityKind {
    /// `p(i, j) = p` for every pair.
    Constant { p: f64 },
    /// `p(i, j)` drawn i.i.d. uniform on `[l, h]` once per pair.
    Interval { l: f64, h: f64 },
}

/// Edge-existence model for the underlying graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeProbabilityModel {
    pub n: usize,
    pub kind: ProbabilityKind,
}

impl EdgeProbabilityModel {
    pub fn constant(n: usize, p: f64) -> Result<Self> {
        let model = EdgeProbabilityModel {
            n,
            kind: ProbabilityKind::Constant { p },
        };
        model.validate()?;
        Ok(model)
    }

    pub fn interval(n: usize, l: f64, h: f64) -> Result<Self> {
        let model = EdgeProbabilityModel {
            n,
            kind: ProbabilityKind::Interval { l, h },
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        let (l, h) = (self.l(), self.h());
        if !(l > 0.0 && l <= h && h < 1.0) {
            return Err(Error::invalid(format!(
                "edge probabilities must satisfy 0 < l <= h < 1 (l = {l}, h = {h})"
            )));
        }
        Ok(())
    }

    /// Same model on a different number of nodes.
    pub fn with_nodes(&self, n: usize) -> Self {
        EdgeProbabilityModel { n, ..*self }
    }

    /// Smallest pair probability.
    pub fn l(&self) -> f64 {
        match self.kind {
            ProbabilityKind::Constant { p } => p,
            ProbabilityKind::Interval { l, .. } => l,
        }
    }

    /// Largest pair probability.
    pub fn h(&self) -> f64 {
        match self.kind {
            ProbabilityKind::Constant { p } => p,
            ProbabilityKind::Interval { h, .. } => h,
        }
    }

    /// `p(i, j)` as realised under `seed`.
    pub fn pair_probability(&self, seed: RandomSeed, i: usize, j: usize) -> f64 {
        match self.kind {
            ProbabilityKind::Constant { p } => p,
            ProbabilityKind::Interval { l, h } => l + (h - l) * seed.pair_uniform(TAG_PROB, i, j),
        }
    }

    /// Density implied by the model before any pair probabilities are drawn.
    pub fn expected_density(&self) -> f64 {
        match self.kind {
            ProbabilityKind::Constant { p } => p,
            ProbabilityKind::Interval { l, h } => 0.5 * (l + h),
        }
    }

    /// Expected edge total `sum_{i<j} p(i, j)` under `seed`.
    pub fn expected_edges(&self, seed: RandomSeed) -> f64 {
        (0..self.n)
            .into_par_iter()
            .map(|i| {
                ((i + 1)..self.n)
                    .map(|j| self.pair_probability(seed, i, j))
                    .sum::<f64>()
            })
            .sum()
    }

    /// Model density `expected_edges / C(n, 2)` under `seed`.
    pub fn density(&self, seed: RandomSeed) -> Result<f64> {
        if self.n < 2 {
            return Err(Error::invalid("density undefined for n < 2"));
        }
        Ok(self.expected_edges(seed) / pairs(self.n) as f64)
    }
}

/// Per-pair insertion and deletion probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeNoiseSpec {
    pub p_add: f64,
    pub p_del: f64,
}

impl EdgeNoiseSpec {
    pub const NONE: EdgeNoiseSpec = EdgeNoiseSpec {
        p_add: 0.0,
        p_del: 0.0,
    };

    pub fn new(p_add: f64, p_del: f64) -> Result<Self> {
        let spec = EdgeNoiseSpec { p_add, p_del };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p_add", self.p_add), ("p_del", self.p_del)] {
            if !(0.0..1.0).contains(&v) {
                return Err(Error::invalid(format!("{name} = {v} must lie in [0, 1)")));
            }
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.p_add == 0.0 && self.p_del == 0.0
    }
}

/// Sample an underlying graph: each pair is an edge independently with
/// probability `p(i, j)`.
pub fn sample_underlying(model: &EdgeProbabilityModel, seed: RandomSeed) -> Result<Graph> {
    model.validate()?;
    let n = model.n;
    let upper: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..n)
                .filter(|&j| seed.pair_uniform(TAG_EDGE, i, j) < model.pair_probability(seed, i, j))
                .collect()
        })
        .collect();
    Ok(symmetrize(n, upper))
}

/// Independent edge flips: existing edges are removed with probability
/// `p_del`, absent pairs are added with probability `p_add`.
pub fn apply_edge_noise(g: &Graph, spec: &EdgeNoiseSpec, seed: RandomSeed) -> Result<Graph> {
    spec.validate()?;
    if spec.is_zero() {
        return Ok(g.clone());
    }
    let n = g.n();
    let upper: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let nbrs = g.neighbors(i);
            let mut k = nbrs.partition_point(|&j| j <= i);
            let mut out = Vec::new();
            for j in (i + 1)..n {
                let present = k < nbrs.len() && nbrs[k] == j;
                if present {
                    k += 1;
                }
                let u = seed.pair_uniform(TAG_NOISE, i, j);
                let keep = if present { u >= spec.p_del } else { u < spec.p_add };
                if keep {
                    out.push(j);
                }
            }
            out
        })
        .collect();
    Ok(symmetrize(n, upper))
}

fn symmetrize(n: usize, upper: Vec<Vec<usize>>) -> Graph {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, list) in upper.into_iter().enumerate() {
        for j in list {
            adj[i].push(j);
            adj[j].push(i);
        }
    }
    Graph::from_adjacency(adj)
}

/// Delete `r` uniformly chosen edges, then insert `r` uniformly chosen pairs
/// that are not edges of the post-deletion graph. The edge count is
/// preserved; a deleted edge may be re-inserted.
pub fn hay_perturb(g: &Graph, r: usize, seed: RandomSeed) -> Result<Graph> {
    let m = g.m();
    let total = g.pair_count();
    if r > m {
        return Err(Error::invalid(format!("r = {r} out of range: need r <= m = {m}")));
    }
    if r == 0 {
        return Ok(g.clone());
    }
    let mut rng = seed.rng();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let deleted: HashSet<(usize, usize)> = index::sample(&mut rng, m, r)
        .into_iter()
        .map(|k| edges[k])
        .collect();

    let present = |i: usize, j: usize, inserted: &HashSet<(usize, usize)>| {
        (g.has_edge(i, j) && !deleted.contains(&(i, j))) || inserted.contains(&(i, j))
    };

    let free = total - m + r;
    let mut inserted: HashSet<(usize, usize)> = HashSet::with_capacity(r);
    if free >= 4 * r {
        // Sparse regime: rejection sampling over uniform unordered pairs.
        let n = g.n();
        while inserted.len() < r {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a == b {
                continue;
            }
            let (i, j) = (a.min(b), a.max(b));
            if !present(i, j, &inserted) {
                inserted.insert((i, j));
            }
        }
    } else {
        let n = g.n();
        let candidates: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !present(i, j, &HashSet::new()))
            .collect();
        debug_assert_eq!(candidates.len(), free);
        inserted.extend(
            index::sample(&mut rng, candidates.len(), r)
                .into_iter()
                .map(|k| candidates[k]),
        );
    }

    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for &(i, j) in edges.iter().filter(|e| !deleted.contains(e)).chain(inserted.iter()) {
        adj[i].push(j);
        adj[j].push(i);
    }
    Ok(Graph::from_adjacency(adj))
}

/// Fraction of altered edges, `r / m`.
pub fn noise_of(r: usize, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::invalid("noise undefined for a graph without edges"));
    }
    Ok(r as f64 / m as f64)
}

/// Independent-flip rates with the same expected edit counts as
/// [`hay_perturb`] with `r` swaps: `p_del = r / m`, `p_add = r / (C(n,2) - m)`.
pub fn equivalent_rates(g: &Graph, r: usize) -> Result<EdgeNoiseSpec> {
    let m = g.m();
    let total = g.pair_count();
    if m == 0 || m >= total {
        return Err(Error::invalid(
            "equivalent rates need a graph that is neither empty nor complete",
        ));
    }
    EdgeNoiseSpec::new(r as f64 / (total - m) as f64, r as f64 / m as f64)
}

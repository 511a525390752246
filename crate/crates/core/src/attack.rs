//! De-anonymisation by minimising the difference of common neighbours (DCN).
//!
//! For a mapping `sigma`, node `i` contributes
//! `|sigma(N_a(i)) symmetric-difference N_u(sigma(i))|` and the total is
//! `Phi(sigma)`. Because both graphs are simple, `Phi` equals
//! `2 m_a + 2 m_u - 2 O(sigma)` where `O(sigma)` counts ordered pairs that are
//! edges in both graphs after mapping. The search code maximises `O`.

use std::cmp::Ordering;
use std::fmt;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{sorted_symmetric_difference, Graph};
use crate::rng::RandomSeed;

/// Largest graph accepted by [`brute_force_attack`].
pub const BRUTE_FORCE_MAX_NODES: usize = 10;

/// A bijection `V_a -> V_u`; `perm[i]` is the image of node `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Mapping(Vec<usize>);

impl fmt::Debug for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mapping{:?}", self.0)
    }
}

impl Mapping {
    pub fn identity(n: usize) -> Self {
        Mapping((0..n).collect())
    }

    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::invalid("mapping is not a permutation"));
            }
        }
        Ok(Mapping(perm))
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

    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn inverse(&self) -> Mapping {
        let mut inv = vec![0; self.0.len()];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p] = i;
        }
        Mapping(inv)
    }

    /// `other` applied after `self`: `i -> other(self(i))`.
    pub fn then(&self, other: &Mapping) -> Result<Mapping> {
        if self.len() != other.len() {
            return Err(Error::SizeMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(Mapping(self.0.iter().map(|&p| other.0[p]).collect()))
    }

    /// Nodes with `perm[i] != i`.
    pub fn moved(&self) -> usize {
        self.0.iter().enumerate().filter(|&(i, &p)| i != p).count()
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttackMethod {
    BruteForce,
    GreedySwap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackResult {
    pub method: AttackMethod,
    pub phi: u64,
    /// Accuracy against the shared-id ground truth (the identity).
    pub accuracy: f64,
    pub mapping: Mapping,
}

impl AttackResult {
    fn new(method: AttackMethod, mapping: Mapping, phi: u64) -> Self {
        let accuracy = accuracy(mapping.as_slice(), Mapping::identity(mapping.len()).as_slice())
            .unwrap_or(0.0);
        AttackResult {
            method,
            phi,
            accuracy,
            mapping,
        }
    }

    pub fn accuracy_against(&self, truth: &Mapping) -> Result<f64> {
        accuracy(self.mapping.as_slice(), truth.as_slice())
    }
}

fn check_pair(g_a: &Graph, g_u: &Graph, mapping: &Mapping) -> Result<()> {
    g_a.check_same_size(g_u)?;
    if mapping.len() != g_a.n() {
        return Err(Error::SizeMismatch {
            left: g_a.n(),
            right: mapping.len(),
        });
    }
    Ok(())
}

/// DCN of node `i` under `mapping`.
pub fn dcn_node(g_a: &Graph, g_u: &Graph, mapping: &Mapping, i: usize) -> Result<u64> {
    check_pair(g_a, g_u, mapping)?;
    g_a.check_node(i)?;
    Ok(dcn_node_unchecked(g_a, g_u, mapping, i, &mut Vec::new()))
}

fn dcn_node_unchecked(g_a: &Graph, g_u: &Graph, mapping: &Mapping, i: usize, buf: &mut Vec<usize>) -> u64 {
    buf.clear();
    buf.extend(g_a.neighbors(i).iter().map(|&j| mapping.0[j]));
    buf.sort_unstable();
    sorted_symmetric_difference(buf, g_u.neighbors(mapping.0[i])) as u64
}

/// Total DCN, `Phi(mapping)`.
pub fn dcn_total(g_a: &Graph, g_u: &Graph, mapping: &Mapping) -> Result<u64> {
    check_pair(g_a, g_u, mapping)?;
    let mut buf = Vec::new();
    Ok((0..g_a.n())
        .map(|i| dcn_node_unchecked(g_a, g_u, mapping, i, &mut buf))
        .sum())
}

/// Fraction of nodes whose image agrees with the ground truth.
///
/// Takes plain slices so that non-bijective outputs (e.g. from other tools)
/// can be scored too.
pub fn accuracy(result: &[usize], truth: &[usize]) -> Result<f64> {
    if result.len() != truth.len() {
        return Err(Error::SizeMismatch {
            left: result.len(),
            right: truth.len(),
        });
    }
    if result.is_empty() {
        return Err(Error::invalid("accuracy undefined for empty mappings"));
    }
    let hits = result.iter().zip(truth).filter(|(a, b)| a == b).count();
    Ok(hits as f64 / result.len() as f64)
}

/// Row-major 0/1 adjacency.
struct Bits {
    n: usize,
    data: Vec<u8>,
}

impl Bits {
    fn new(g: &Graph) -> Self {
        let n = g.n();
        let mut data = vec![0u8; n * n];
        for (i, j) in g.edges() {
            data[i * n + j] = 1;
            data[j * n + i] = 1;
        }
        Bits { n, data }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> i32 {
        self.data[i * self.n + j] as i32
    }
}

/// Exhaustive search over all `n!` mappings.
///
/// Mappings are visited in lexicographic order and only strictly better ones
/// replace the incumbent, so the lexicographically smallest minimiser wins.
pub fn brute_force_attack(g_a: &Graph, g_u: &Graph) -> Result<AttackResult> {
    g_a.check_same_size(g_u)?;
    let n = g_a.n();
    if n > BRUTE_FORCE_MAX_NODES {
        return Err(Error::Guard(format!(
            "brute force limited to n <= {BRUTE_FORCE_MAX_NODES} (got {n}); use greedy_attack"
        )));
    }
    let b = Bits::new(g_u);
    // Edges of g_a towards lower-numbered nodes, for prefix accumulation.
    let lower: Vec<Vec<usize>> = (0..n)
        .map(|i| g_a.neighbors(i).iter().copied().filter(|&j| j < i).collect())
        .collect();

    struct Search<'a> {
        b: &'a Bits,
        lower: &'a [Vec<usize>],
        perm: Vec<usize>,
        used: Vec<bool>,
        best_overlap: i64,
        best: Vec<usize>,
    }

    impl Search<'_> {
        fn go(&mut self, depth: usize, overlap: i64) {
            let n = self.perm.len();
            if depth == n {
                if overlap > self.best_overlap {
                    self.best_overlap = overlap;
                    self.best.copy_from_slice(&self.perm);
                }
                return;
            }
            for v in 0..n {
                if self.used[v] {
                    continue;
                }
                let gain: i64 = self.lower[depth]
                    .iter()
                    .map(|&j| self.b.get(v, self.perm[j]) as i64)
                    .sum();
                self.used[v] = true;
                self.perm[depth] = v;
                self.go(depth + 1, overlap + gain);
                self.used[v] = false;
            }
        }
    }

    let mut search = Search {
        b: &b,
        lower: &lower,
        perm: vec![0; n],
        used: vec![false; n],
        best_overlap: -1,
        best: (0..n).collect(),
    };
    search.go(0, 0);
    let overlap = search.best_overlap.max(0) as u64;
    let phi = 2 * (g_a.m() + g_u.m()) as u64 - 4 * overlap;
    Ok(AttackResult::new(
        AttackMethod::BruteForce,
        Mapping(search.best),
        phi,
    ))
}

/// Maps the `k`-th node of `g_a` to the `k`-th node of `g_u` when both are
/// ordered by decreasing degree, ties by increasing id.
pub fn degree_rank_mapping(g_a: &Graph, g_u: &Graph) -> Result<Mapping> {
    g_a.check_same_size(g_u)?;
    let order = |g: &Graph| {
        let mut v: Vec<usize> = (0..g.n()).collect();
        v.sort_by(|&x, &y| g.neighbors(y).len().cmp(&g.neighbors(x).len()).then(x.cmp(&y)));
        v
    };
    let (oa, ou) = (order(g_a), order(g_u));
    let mut perm = vec![0; g_a.n()];
    for (&a, &u) in oa.iter().zip(&ou) {
        perm[a] = u;
    }
    Ok(Mapping(perm))
}

/// Best-improvement pairwise-swap local search.
///
/// The first run starts from [`degree_rank_mapping`]; each of the remaining
/// `restarts - 1` runs starts from a seeded random permutation. A run stops
/// when no swap lowers `Phi` or after `iters` swaps. The best result by
/// `(Phi, mapping)` is returned. `restarts = 0` is treated as 1.
pub fn greedy_attack(
    g_a: &Graph,
    g_u: &Graph,
    restarts: usize,
    iters: usize,
    seed: RandomSeed,
) -> Result<AttackResult> {
    g_a.check_same_size(g_u)?;
    let n = g_a.n();
    let a = Bits::new(g_a);
    let b = Bits::new(g_u);
    let base = 2 * (g_a.m() + g_u.m()) as i64;

    let start = degree_rank_mapping(g_a, g_u)?;
    let runs: Vec<(i64, Vec<usize>)> = (0..restarts.max(1))
        .into_par_iter()
        .map(|run| {
            let init = if run == 0 {
                start.0.clone()
            } else {
                let mut p: Vec<usize> = (0..n).collect();
                p.shuffle(&mut seed.derive(run as u64).rng());
                p
            };
            let mut search = SwapSearch::new(&a, &b, init);
            search.run(iters);
            (base - 2 * search.overlap, search.perm)
        })
        .collect();

    let (phi, perm) = runs
        .into_iter()
        .min_by(|x, y| match x.0.cmp(&y.0) {
            Ordering::Equal => x.1.cmp(&y.1),
            o => o,
        })
        .expect("at least one run");
    Ok(AttackResult::new(
        AttackMethod::GreedySwap,
        Mapping(perm),
        phi as u64,
    ))
}

/// Swap local search with an incrementally maintained table of swap gains.
struct SwapSearch<'a> {
    a: &'a Bits,
    b: &'a Bits,
    n: usize,
    perm: Vec<usize>,
    /// `O(perm) = sum_{i,j} A[i][j] B[perm i][perm j]`.
    overlap: i64,
    /// `gain[r * n + s]` for `r < s`: change in `overlap` if `r`, `s` swap images.
    gain: Vec<i64>,
}

impl<'a> SwapSearch<'a> {
    fn new(a: &'a Bits, b: &'a Bits, perm: Vec<usize>) -> Self {
        let n = a.n;
        let mut overlap = 0i64;
        for i in 0..n {
            for j in 0..n {
                overlap += (a.get(i, j) * b.get(perm[i], perm[j])) as i64;
            }
        }
        let mut s = SwapSearch {
            a,
            b,
            n,
            perm,
            overlap,
            gain: vec![0; n * n],
        };
        for r in 0..n {
            for t in (r + 1)..n {
                s.gain[r * n + t] = s.full_gain(r, t);
            }
        }
        s
    }

    fn full_gain(&self, r: usize, s: usize) -> i64 {
        let (pr, ps) = (self.perm[r], self.perm[s]);
        let mut acc = 0i64;
        for k in 0..self.n {
            if k == r || k == s {
                continue;
            }
            let da = self.a.get(r, k) - self.a.get(s, k);
            if da != 0 {
                let pk = self.perm[k];
                acc += (da * (self.b.get(ps, pk) - self.b.get(pr, pk))) as i64;
            }
        }
        2 * acc
    }

    fn best_swap(&self) -> Option<(usize, usize, i64)> {
        let n = self.n;
        let mut best: Option<(usize, usize, i64)> = None;
        for r in 0..n {
            for s in (r + 1)..n {
                let g = self.gain[r * n + s];
                if g > 0 && best.is_none_or(|(_, _, bg)| g > bg) {
                    best = Some((r, s, g));
                }
            }
        }
        best
    }

    fn apply(&mut self, r: usize, s: usize) {
        let n = self.n;
        let (a, b) = (self.a, self.b);
        let (pr, ps) = (self.perm[r], self.perm[s]);
        self.overlap += self.gain[r * n + s];
        // Pairs disjoint from {r, s}: constant-time correction using the old images.
        for u in 0..n {
            if u == r || u == s {
                continue;
            }
            let pu = self.perm[u];
            let au = a.get(u, r) - a.get(u, s);
            for v in (u + 1)..n {
                if v == r || v == s {
                    continue;
                }
                let da = au - a.get(v, r) + a.get(v, s);
                if da == 0 {
                    continue;
                }
                let pv = self.perm[v];
                let db = b.get(pv, ps) - b.get(pu, ps) - b.get(pv, pr) + b.get(pu, pr);
                self.gain[u * n + v] += 2 * (da * db) as i64;
            }
        }
        self.perm.swap(r, s);
        for x in [r, s] {
            for y in 0..n {
                if y != x {
                    let (lo, hi) = (x.min(y), x.max(y));
                    self.gain[lo * n + hi] = self.full_gain(lo, hi);
                }
            }
        }
    }

    fn run(&mut self, iters: usize) {
        for _ in 0..iters {
            match self.best_swap() {
                Some((r, s, _)) => self.apply(r, s),
                None => break,
            }
        }
    }
}

/// Number of automorphisms of `g` by exhaustive search (`n <= 10`).
pub fn count_automorphisms(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > BRUTE_FORCE_MAX_NODES {
        return Err(Error::Guard(format!(
            "automorphism enumeration limited to n <= {BRUTE_FORCE_MAX_NODES}"
        )));
    }
    fn go(g: &Graph, depth: usize, perm: &mut Vec<usize>, used: &mut [bool]) -> usize {
        let n = g.n();
        if depth == n {
            return 1;
        }
        let mut count = 0;
        for v in 0..n {
            if used[v] || g.neighbors(v).len() != g.neighbors(depth).len() {
                continue;
            }
            if (0..depth).all(|j| g.has_edge(depth, j) == g.has_edge(v, perm[j])) {
                used[v] = true;
                perm.push(v);
                count += go(g, depth + 1, perm, used);
                perm.pop();
                used[v] = false;
            }
        }
        count
    }
    Ok(go(g, 0, &mut Vec::with_capacity(n), &mut vec![false; n]))
}

/// True when the identity is the only automorphism.
pub fn is_rigid(g: &Graph) -> Result<bool> {
    Ok(count_automorphisms(g)? == 1)
}

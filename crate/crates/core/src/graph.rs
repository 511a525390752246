//! Undirected simple graphs over dense node ids and their matrix views.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected simple graph on nodes `0..n`.
///
/// Adjacency lists are kept sorted, so neighbourhood comparisons are linear
/// merges. Graphs are immutable once built.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    m: usize,
    adj: Vec<Vec<usize>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("m", &self.m)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            m: 0,
            adj: vec![Vec::new(); n],
        }
    }

    /// Build a graph from an edge list. Self-loops, out-of-range endpoints
    /// and repeated edges (in either orientation) are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::NodeOutOfRange { node: i.max(j), n });
            }
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop on node {i}")));
            }
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut m2 = 0;
        for (i, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge {{{}, {}}}",
                    i.min(w[0]),
                    i.max(w[0])
                )));
            }
            m2 += list.len();
        }
        Ok(Graph { n, m: m2 / 2, adj })
    }

    /// Build from per-node neighbour sets that are already symmetric and
    /// loop-free. Lists are sorted here.
    pub(crate) fn from_adjacency(mut adj: Vec<Vec<usize>>) -> Self {
        let mut m2 = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            m2 += list.len();
        }
        debug_assert!(m2 % 2 == 0);
        Graph {
            n: adj.len(),
            m: m2 / 2,
            adj,
        }
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n)
            .map(|i| (0..n).filter(|&j| j != i).collect())
            .collect();
        Graph::from_adjacency(adj)
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path edges are valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Sorted neighbours of `i`. Panics if `i >= n`.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.n && self.adj[i].binary_search(&j).is_ok()
    }

    pub fn degree(&self, i: usize) -> Result<usize> {
        self.check_node(i)?;
        Ok(self.adj[i].len())
    }

    /// Number of unordered node pairs, `C(n, 2)`.
    pub fn pair_count(&self) -> usize {
        pairs(self.n)
    }

    /// Edge density `m / C(n, 2)`.
    pub fn density(&self) -> Result<f64> {
        if self.n < 2 {
            return Err(Error::invalid(format!(
                "density undefined for n = {} (< 2)",
                self.n
            )));
        }
        Ok(self.m as f64 / self.pair_count() as f64)
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(i, list)| {
            let start = list.partition_point(|&j| j <= i);
            list[start..].iter().map(move |&j| (i, j))
        })
    }

    /// Number of ordered pairs `(i, j)`, `i != j`, whose edge indicators
    /// differ. Twice the size of the symmetric difference of the edge sets.
    pub fn hamming_distance(&self, other: &Graph) -> Result<usize> {
        self.check_same_size(other)?;
        Ok(self
            .adj
            .iter()
            .zip(&other.adj)
            .map(|(a, b)| sorted_symmetric_difference(a, b))
            .sum())
    }

    pub fn adjacency_matrix(&self) -> DenseMatrix {
        let mut mat = DenseMatrix::zeros(self.n);
        for (i, list) in self.adj.iter().enumerate() {
            for &j in list {
                mat.data[i * self.n + j] = 1.0;
            }
        }
        mat
    }

    /// Random-walk transition matrix. Rows of isolated nodes carry a
    /// self-loop so that every row sums to one.
    pub fn transition_matrix(&self) -> DenseMatrix {
        let mut mat = DenseMatrix::zeros(self.n);
        for (i, list) in self.adj.iter().enumerate() {
            if list.is_empty() {
                mat.data[i * self.n + i] = 1.0;
            } else {
                let p = 1.0 / list.len() as f64;
                for &j in list {
                    mat.data[i * self.n + j] = p;
                }
            }
        }
        mat
    }

    /// Rename nodes: node `i` becomes `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: perm.len(),
            });
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::invalid("relabelling is not a permutation"));
            }
        }
        let mut adj = vec![Vec::new(); self.n];
        for (i, list) in self.adj.iter().enumerate() {
            adj[perm[i]] = list.iter().map(|&j| perm[j]).collect();
        }
        Ok(Graph::from_adjacency(adj))
    }

    pub(crate) fn check_node(&self, i: usize) -> Result<()> {
        if i >= self.n {
            Err(Error::NodeOutOfRange { node: i, n: self.n })
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_same_size(&self, other: &Graph) -> Result<()> {
        if self.n != other.n {
            Err(Error::SizeMismatch {
                left: self.n,
                right: other.n,
            })
        } else {
            Ok(())
        }
    }
}

pub(crate) fn pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// `|a \ b| + |b \ a|` for sorted, duplicate-free slices.
pub(crate) fn sorted_symmetric_difference(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut common) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    a.len() + b.len() - 2 * common
}

/// Square row-major matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut mat = DenseMatrix::zeros(n);
        for i in 0..n {
            mat.data[i * n + i] = 1.0;
        }
        mat
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| !v.is_finite()) {
                return Err(Error::invalid(format!("non-finite entry {v} in row {i}")));
            }
            data.extend(row);
        }
        Ok(DenseMatrix { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.rows().map(|r| r.iter().sum()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_same_dim(rhs)?;
        let n = self.n;
        let mut out = DenseMatrix::zeros(n);
        if n == 0 {
            return Ok(out);
        }
        out.data
            .par_chunks_mut(n)
            .zip(self.data.par_chunks(n))
            .for_each(|(out_row, lhs_row)| {
                for (k, &a) in lhs_row.iter().enumerate() {
                    if a == 0.0 {
                        continue;
                    }
                    for (o, &b) in out_row.iter_mut().zip(rhs.row(k)) {
                        *o += a * b;
                    }
                }
            });
        Ok(out)
    }

    /// `self^w` for `w >= 1`, by repeated squaring.
    pub fn power(&self, w: u32) -> Result<DenseMatrix> {
        if w == 0 {
            return Err(Error::invalid("matrix power requires w >= 1"));
        }
        let mut base = self.clone();
        let mut acc: Option<DenseMatrix> = None;
        let mut e = w;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base)?,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base)?;
        }
        Ok(acc.expect("w >= 1 sets the accumulator"))
    }

    /// Entrywise L1 distance `sum_ij |a_ij - b_ij|`.
    pub fn entrywise_l1(&self, other: &DenseMatrix) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .sum())
    }

    fn check_same_dim(&self, other: &DenseMatrix) -> Result<()> {
        if self.n != other.n {
            Err(Error::SizeMismatch {
                left: self.n,
                right: other.n,
            })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn edge01(n: usize) -> Graph {
        Graph::from_edges(n, [(0, 1)]).unwrap()
    }

    fn assert_matrix(m: &DenseMatrix, expected: &[&[f64]]) {
        assert_eq!(m.dim(), expected.len());
        for (i, row) in expected.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert!((m.get(i, j) - v).abs() < 1e-12, "({i},{j}) {} != {v}", m.get(i, j));
            }
        }
    }

    #[test]
    fn degree_examples() {
        assert_eq!(Graph::path(3).degree(1).unwrap(), 2);
        assert_eq!(edge01(3).degree(2).unwrap(), 0);
        let k4 = Graph::complete(4);
        for i in 0..4 {
            assert_eq!(k4.degree(i).unwrap(), 3);
        }
        assert!(matches!(
            k4.degree(4),
            Err(Error::NodeOutOfRange { node: 4, n: 4 })
        ));
    }

    #[test]
    fn density_examples() {
        assert_eq!(Graph::complete(4).density().unwrap(), 1.0);
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!((g.density().unwrap() - 2.0 / 6.0).abs() < 1e-15);
        assert!(Graph::empty(1).density().is_err());
    }

    #[test]
    fn construction_rejects_bad_edges() {
        assert!(Graph::from_edges(3, [(1, 1)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
        assert!(Graph::from_edges(3, [(0, 1), (1, 0)]).is_err());
        let g = Graph::from_edges(3, [(2, 0), (1, 0)]).unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn hamming_examples() {
        let p = Graph::path(3);
        assert_eq!(p.hamming_distance(&p).unwrap(), 0);
        assert_eq!(p.hamming_distance(&edge01(3)).unwrap(), 2);
        assert_eq!(Graph::empty(4).hamming_distance(&Graph::complete(4)).unwrap(), 12);
        assert!(p.hamming_distance(&Graph::empty(4)).is_err());
    }

    #[test]
    fn adjacency_examples() {
        assert_matrix(&edge01(2).adjacency_matrix(), &[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(Graph::empty(3).adjacency_matrix(), DenseMatrix::zeros(3));
        assert_matrix(
            &Graph::path(3).adjacency_matrix(),
            &[&[0.0, 1.0, 0.0], &[1.0, 0.0, 1.0], &[0.0, 1.0, 0.0]],
        );
    }

    #[test]
    fn transition_examples() {
        let t = Graph::path(3).transition_matrix();
        assert_eq!(t.row(1), &[0.5, 0.0, 0.5]);
        let t = edge01(3).transition_matrix();
        assert_eq!(t.row(2), &[0.0, 0.0, 1.0]);
        let t = Graph::complete(4).transition_matrix();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 0.0 } else { 1.0 / 3.0 };
                assert!((t.get(i, j) - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn power_examples() {
        let t = Graph::path(3).transition_matrix();
        assert_eq!(t.power(1).unwrap(), t);
        assert_matrix(
            &t.power(2).unwrap(),
            &[&[0.5, 0.0, 0.5], &[0.0, 1.0, 0.0], &[0.5, 0.0, 0.5]],
        );
        assert!(t.power(0).is_err());
    }

    #[test]
    fn power_matches_repeated_multiplication() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4)]).unwrap();
        let t = g.transition_matrix();
        let mut naive = t.clone();
        for w in 2..=9 {
            naive = naive.mul(&t).unwrap();
            let fast = t.power(w).unwrap();
            assert!(naive.entrywise_l1(&fast).unwrap() < 1e-12);
        }
    }

    #[test]
    fn l1_examples() {
        let t = Graph::path(3).transition_matrix();
        assert_eq!(t.entrywise_l1(&t).unwrap(), 0.0);
        assert!((t.entrywise_l1(&t.power(2).unwrap()).unwrap() - 6.0).abs() < 1e-12);
        assert!(t.entrywise_l1(&DenseMatrix::zeros(2)).is_err());
    }

    #[test]
    fn from_rows_validates() {
        assert!(DenseMatrix::from_rows(vec![vec![1.0, f64::NAN], vec![0.0, 0.0]]).is_err());
        assert!(DenseMatrix::from_rows(vec![vec![1.0], vec![0.0, 0.0]]).is_err());
        assert_eq!(
            DenseMatrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap(),
            DenseMatrix::identity(2)
        );
    }

    #[test]
    fn relabel_preserves_structure() {
        let g = Graph::path(4);
        let h = g.relabel(&[3, 2, 1, 0]).unwrap();
        assert_eq!(h, g);
        let h = g.relabel(&[1, 0, 2, 3]).unwrap();
        assert!(h.has_edge(0, 2) && h.has_edge(0, 1) && h.has_edge(2, 3) && !h.has_edge(1, 2));
        assert!(g.relabel(&[0, 0, 1, 2]).is_err());
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                graph_from_bits(n, &bits)
            })
        })
    }

    fn graph_from_bits(n: usize, bits: &[bool]) -> Graph {
        let mut edges = Vec::new();
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                if bits[k] {
                    edges.push((i, j));
                }
                k += 1;
            }
        }
        Graph::from_edges(n, edges).unwrap()
    }

    fn arb_triple(max_n: usize) -> impl Strategy<Value = (Graph, Graph, Graph)> {
        (1..=max_n).prop_flat_map(|n| {
            let p = n * (n - 1) / 2;
            (
                proptest::collection::vec(any::<bool>(), p),
                proptest::collection::vec(any::<bool>(), p),
                proptest::collection::vec(any::<bool>(), p),
            )
                .prop_map(move |(a, b, c)| {
                    (graph_from_bits(n, &a), graph_from_bits(n, &b), graph_from_bits(n, &c))
                })
        })
    }

    proptest! {
        #[test]
        fn adjacency_symmetric_zero_diagonal(g in arb_graph(12)) {
            let a = g.adjacency_matrix();
            prop_assert!(a.is_symmetric());
            for i in 0..g.n() {
                prop_assert_eq!(a.get(i, i), 0.0);
            }
            prop_assert_eq!(g.edges().count(), g.m());
        }

        #[test]
        fn transition_rows_sum_to_one(g in arb_graph(12)) {
            for s in g.transition_matrix().row_sums() {
                prop_assert!((s - 1.0).abs() < 1e-12);
            }
        }

        #[test]
        fn powers_stay_stochastic(g in arb_graph(10), w in 1u32..=16) {
            for s in g.transition_matrix().power(w).unwrap().row_sums() {
                prop_assert!((s - 1.0).abs() < 1e-9);
            }
        }

        #[test]
        fn hamming_is_a_metric((a, b, c) in arb_triple(9)) {
            let ab = a.hamming_distance(&b).unwrap();
            prop_assert_eq!(ab, b.hamming_distance(&a).unwrap());
            prop_assert_eq!(ab == 0, a == b);
            prop_assert!(ab <= a.hamming_distance(&c).unwrap() + c.hamming_distance(&b).unwrap());
            prop_assert_eq!(ab % 2, 0);
        }

        #[test]
        fn adjacency_l1_equals_hamming((a, b, _c) in arb_triple(10)) {
            let l1 = a.adjacency_matrix().entrywise_l1(&b.adjacency_matrix()).unwrap();
            prop_assert_eq!(l1, a.hamming_distance(&b).unwrap() as f64);
        }
    }
}

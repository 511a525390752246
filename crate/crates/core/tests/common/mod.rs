//! Test-only oracles. Nothing here calls into the attack or bounds code.
#![allow(dead_code)]

use deanon::Graph;
use rand::Rng;

/// Dense boolean adjacency.
pub fn adjacency(g: &Graph) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; g.n()]; g.n()];
    for (i, j) in g.edges() {
        a[i][j] = true;
        a[j][i] = true;
    }
    a
}

/// Visits every permutation of `0..n` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&p);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            f(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// `sum_{i,j} |A[i][j] - B[p[i]][p[j]]|`.
pub fn phi(a: &[Vec<bool>], b: &[Vec<bool>], p: &[usize]) -> u64 {
    let n = a.len();
    let mut d = 0;
    for i in 0..n {
        for j in 0..n {
            d += u64::from(a[i][j] != b[p[i]][p[j]]);
        }
    }
    d
}

/// Minimum of [`phi`] over all permutations.
pub fn min_phi(g_a: &Graph, g_u: &Graph) -> u64 {
    let (a, b) = (adjacency(g_a), adjacency(g_u));
    let mut best = u64::MAX;
    for_each_permutation(g_a.n(), |p| best = best.min(phi(&a, &b, p)));
    best
}

pub fn automorphism_count(g: &Graph) -> usize {
    let a = adjacency(g);
    let mut count = 0;
    for_each_permutation(g.n(), |p| count += usize::from(phi(&a, &a, p) == 0));
    count
}

pub fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Graph whose edges are the set bits of `code` over pairs in lex order.
pub fn graph_from_code(n: usize, code: u64) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if code >> bit & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Heterogeneous-degree graph: pair `(i, j)` is an edge with probability
/// `min(1, c * w_i * w_j)` where `w_i = (i + 1)^(-1/2)`, scaled so the expected
/// mean degree is `mean_degree`.
pub fn chung_lu(n: usize, mean_degree: f64, rng: &mut impl Rng) -> Graph {
    let w: Vec<f64> = (0..n).map(|i| ((i + 1) as f64).powf(-0.5)).collect();
    let total: f64 = w.iter().sum();
    let c = mean_degree * n as f64 / (total * total);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool((c * w[i] * w[j]).min(1.0)) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

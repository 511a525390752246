//! Hay noise against what it costs and what it buys: utility drops linearly
//! while the attacker's accuracy collapses.
//!
//! ```bash
//! cargo run --release --example privacy_tradeoff
//! ```

use deanon::attack::{accuracy, greedy_attack};
use deanon::bounds::max_safe_noise;
use deanon::perturb::hay_perturb;
use deanon::utility::{hay_utility, local_utility_empirical};
use deanon::{Graph, RandomSeed};
use rand::seq::SliceRandom;
use rand::Rng;

/// Degree-skewed graph: edge `(i, j)` with probability proportional to
/// `1 / sqrt((i + 1)(j + 1))`.
fn skewed_graph(n: usize, mean_degree: f64, seed: RandomSeed) -> deanon::Result<Graph> {
    let mut rng = seed.rng();
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
    Graph::from_edges(n, edges)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 256;
    println!("safe anonymization noise with a clean auxiliary graph: < {}", max_safe_noise(0.1, 0.0)?);
    println!("{:>6} {:>10} {:>10} {:>10}", "noise", "utility", "expected", "accuracy");
    for noise in [0.0, 0.05, 0.1, 0.15, 0.25] {
        let (mut util, mut acc) = (0.0, 0.0);
        let mut expected = 0.0;
        let runs = 5;
        for s in 0..runs {
            let seed = RandomSeed(99).derive(s);
            let g = skewed_graph(n, 16.0, seed)?;
            let r = (noise * g.m() as f64).round() as usize;
            let g_a = hay_perturb(&g, r, seed.derive(1))?;
            let mut pi: Vec<usize> = (0..n).collect();
            pi.shuffle(&mut seed.derive(2).rng());
            let g_u = hay_perturb(&g, r, seed.derive(3))?.relabel(&pi)?;
            let found = greedy_attack(&g_a, &g_u, 2, 1_000_000, seed.derive(4))?;
            util += local_utility_empirical(&g_a, &g)?;
            expected += hay_utility(g.density()?, noise)?;
            acc += accuracy(found.mapping.as_slice(), &pi)?;
        }
        let k = runs as f64;
        println!("{noise:>6} {:>10.5} {:>10.5} {:>10.3}", util / k, expected / k, acc / k);
    }
    Ok(())
}

//! Recover a hidden relabelling from structure alone: exhaustive search on
//! a small graph, then swap search on a 200-node graph with near-uniform
//! degrees, where the degree-ranked start stops helping as soon as noise
//! appears (compare `privacy_tradeoff` on a degree-skewed graph).
//!
//! ```bash
//! cargo run --release --example deanonymize
//! ```

use deanon::attack::{accuracy, brute_force_attack, dcn_total, greedy_attack, is_rigid, Mapping};
use deanon::perturb::{apply_edge_noise, hay_perturb, sample_underlying, EdgeNoiseSpec, EdgeProbabilityModel};
use deanon::{Graph, RandomSeed};
use rand::seq::SliceRandom;

fn shuffled(g: &Graph, seed: RandomSeed) -> deanon::Result<(Graph, Vec<usize>)> {
    let mut perm: Vec<usize> = (0..g.n()).collect();
    perm.shuffle(&mut seed.rng());
    Ok((g.relabel(&perm)?, perm))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Small: exhaustive search.
    let mut seed = 0;
    let g = loop {
        let g = sample_underlying(&EdgeProbabilityModel::constant(9, 0.4)?, RandomSeed(seed))?;
        if is_rigid(&g)? {
            break g;
        }
        seed += 1;
    };
    let g_a = apply_edge_noise(&g, &EdgeNoiseSpec::new(0.02, 0.05)?, RandomSeed(100))?;
    let (g_u, truth) = shuffled(&g, RandomSeed(101))?;
    let exact = brute_force_attack(&g_a, &g_u)?;
    println!(
        "n = 9: brute force phi = {}, truth phi = {}, accuracy {:.3}",
        exact.phi,
        dcn_total(&g_a, &g_u, &Mapping::new(truth.clone())?)?,
        accuracy(exact.mapping.as_slice(), &truth)?
    );

    let model = EdgeProbabilityModel::interval(200, 0.01, 0.2)?;
    let g = sample_underlying(&model, RandomSeed(7))?;
    for noise in [0.0, 0.002, 0.005, 0.01, 0.02] {
        let r = (noise * g.m() as f64).round() as usize;
        let g_a = hay_perturb(&g, r, RandomSeed(8))?;
        let (g_u, truth) = shuffled(&hay_perturb(&g, r, RandomSeed(9))?, RandomSeed(10))?;
        let found = greedy_attack(&g_a, &g_u, 4, 200_000, RandomSeed(11))?;
        println!(
            "n = 200, hay noise {noise}: greedy phi = {}, truth phi = {}, accuracy {:.3}",
            found.phi,
            dcn_total(&g_a, &g_u, &Mapping::new(truth.clone())?)?,
            found.accuracy_against(&Mapping::new(truth)?)?
        );
    }
    Ok(())
}

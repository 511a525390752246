//! Local and random-walk utility of a noisy copy of a sampled graph.
//!
//! ```bash
//! cargo run --example utility_metrics
//! ```

use deanon::perturb::{apply_edge_noise, sample_underlying, EdgeNoiseSpec, EdgeProbabilityModel};
use deanon::utility::{local_utility_analytic_for_graph, UtilityReport};
use deanon::RandomSeed;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = EdgeProbabilityModel::interval(300, 0.02, 0.08)?;
    let seed = RandomSeed(17);
    let g = sample_underlying(&model, seed.derive(0))?;
    println!("underlying graph: n = {}, m = {}, density = {:.4}", g.n(), g.m(), g.density()?);

    println!("{:>6} {:>6} {:>10} {:>10} {:>8} {:>8} {:>8}", "p_add", "p_del", "local", "expected", "w=1", "w=3", "w=10");
    for (p_add, p_del) in [(0.0, 0.0), (0.005, 0.05), (0.01, 0.1), (0.02, 0.3)] {
        let noise = EdgeNoiseSpec::new(p_add, p_del)?;
        let observed = apply_edge_noise(&g, &noise, seed.derive(1))?;
        let report = UtilityReport::compute(&observed, &g, &[1, 3, 10])?
            .with_analytic(local_utility_analytic_for_graph(&g, &noise)?);
        println!(
            "{p_add:>6} {p_del:>6} {:>10.5} {:>10.5} {:>8.4} {:>8.4} {:>8.4}",
            report.u_local_empirical,
            report.u_local_analytic.unwrap_or(f64::NAN),
            report.u_global[&1],
            report.u_global[&3],
            report.u_global[&10],
        );
    }
    Ok(())
}

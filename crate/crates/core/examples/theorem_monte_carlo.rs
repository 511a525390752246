//! How often does a mapping with `k` wrong nodes score at least as badly as
//! the correct one? Estimated as the graph grows, inside and outside the
//! region where the local-utility conditions hold.
//!
//! ```bash
//! cargo run --release --example theorem_monte_carlo
//! ```

use deanon::mc_verify::{sweep_n, TrialConfig};
use deanon::perturb::{EdgeNoiseSpec, EdgeProbabilityModel};
use deanon::RandomSeed;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (noise, k) in [(0.01, 2), (0.15, 2), (0.15, 8)] {
        let spec = EdgeNoiseSpec::new(noise, noise)?;
        let cfg = TrialConfig {
            model: EdgeProbabilityModel::constant(16, 0.3)?,
            anon: spec,
            aux: spec,
            k,
            trials: 400,
            base_seed: RandomSeed(2016),
        };
        let inside = cfg.with_nodes(128).theorem1_report()?.all_satisfied;
        println!("noise {noise}, k = {k} (conditions hold at n = 128: {inside})");
        for p in sweep_n(&cfg, &[16, 32, 64, 128])?.per_n_series {
            println!("  n = {:>3}: p_hat = {:.3}  [{:.3}, {:.3}]", p.n, p.p_hat, p.ci_low, p.ci_high);
        }
    }
    Ok(())
}

//! Independent edge flips next to the Hay scheme at matched rates.
//!
//! ```bash
//! cargo run --example perturbation
//! ```

use deanon::perturb::{apply_edge_noise, equivalent_rates, hay_perturb, noise_of, sample_underlying, EdgeProbabilityModel};
use deanon::utility::{hay_utility, local_utility_empirical};
use deanon::RandomSeed;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = sample_underlying(&EdgeProbabilityModel::constant(500, 0.02)?, RandomSeed(1))?;
    let density = g.density()?;
    println!("G: n = {}, m = {}, R = {density:.5}", g.n(), g.m());

    for noise in [0.05, 0.15, 0.25] {
        let r = (noise * g.m() as f64).round() as usize;
        let hay = hay_perturb(&g, r, RandomSeed(2))?;
        let rates = equivalent_rates(&g, r)?;
        let flipped = apply_edge_noise(&g, &rates, RandomSeed(3))?;
        println!(
            "noise {:.3} (r = {r}): hay m = {}, flip m = {}, utility hay {:.5} flip {:.5} closed form {:.5}",
            noise_of(r, g.m())?,
            hay.m(),
            flipped.m(),
            local_utility_empirical(&hay, &g)?,
            local_utility_empirical(&flipped, &g)?,
            hay_utility(density, noise)?,
        );
        println!("    matched flip rates: p_del = {:.4}, p_add = {:.3e}", rates.p_del, rates.p_add);
    }
    Ok(())
}

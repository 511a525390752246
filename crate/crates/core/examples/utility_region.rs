//! Where de-anonymization is expected to succeed: condition checks for a few
//! utility pairs, the satisfied share of the `(U_a, U_u)` square per regime,
//! and the largest publishable Hay noise.
//!
//! ```bash
//! cargo run --example utility_region
//! ```

use deanon::bounds::{check_theorem1, check_theorem2, max_safe_noise, region_grid, GraphParams, UtilityPair};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = GraphParams::new(1000, 0.2, 0.1, 0.9)?;
    for (u_a, u_u) in [(1.0, 0.99), (1.0, 0.97), (0.95, 0.95)] {
        let pair = UtilityPair::new(u_a, u_u)?;
        let local = check_theorem1(&params, &pair);
        let walk = check_theorem2(&params, &pair, 2)?;
        println!(
            "U_a = {u_a}, U_u = {u_u}: local {:?} -> {}, two-step walk -> {}",
            local.conditions(),
            local.all_satisfied,
            walk.all_satisfied
        );
    }

    println!();
    for (r, l, h) in [(0.2, 0.1, 0.7), (0.2, 0.5, 0.6), (0.4, 0.6, 0.7), (0.6, 0.6, 0.7), (0.7, 0.5, 0.6), (0.8, 0.1, 0.9)] {
        let p = GraphParams::new(1000, r, l, h)?;
        let grid = region_grid(&p, 101)?;
        let report = check_theorem1(&p, &UtilityPair::new(1.0, 1.0)?);
        println!(
            "R = {r}, l = {l}, h = {h}: regime {}, binding {:?}, stated {:?}, {:.1}% of the grid satisfied",
            report.regime,
            report.binding,
            report.regime.stated_binding(),
            100.0 * grid.satisfied_count() as f64 / grid.cells.len() as f64
        );
    }

    println!();
    for (l, noise_u) in [(0.1, 0.0), (0.1, 0.025), (0.5, 0.1)] {
        println!("l = {l}, auxiliary noise {noise_u}: safe anonymization noise < {}", max_safe_noise(l, noise_u)?);
    }
    Ok(())
}

//! Local neighbourhood utility and global (random-walk) structure utility.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::perturb::{EdgeNoiseSpec, EdgeProbabilityModel};
use crate::rng::RandomSeed;

/// Utility of an observed graph relative to a reference graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilityReport {
    pub u_local_empirical: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_local_analytic: Option<f64>,
    /// Global structure utility keyed by walk length `w`.
    pub u_global: BTreeMap<u32, f64>,
}

impl UtilityReport {
    /// Empirical local utility plus global utility for each `w` in `walks`.
    pub fn compute(observed: &Graph, reference: &Graph, walks: &[u32]) -> Result<Self> {
        let u_local_empirical = local_utility_empirical(observed, reference)?;
        let mut u_global = BTreeMap::new();
        if !walks.is_empty() {
            let t_obs = observed.transition_matrix();
            let t_ref = reference.transition_matrix();
            for &w in walks {
                let d = t_obs.power(w)?.entrywise_l1(&t_ref.power(w)?)?;
                u_global.insert(w, normalize_global(d, observed.n()));
            }
        }
        Ok(UtilityReport {
            u_local_empirical,
            u_local_analytic: None,
            u_global,
        })
    }

    pub fn with_analytic(mut self, value: f64) -> Self {
        self.u_local_analytic = Some(value);
        self
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::invalid(format!("{name} = {v} must lie in [0, 1]")));
    }
    Ok(())
}

/// Expected local utility under independent flips on a graph of density
/// `density`: `1 - (R * p_del + (1 - R) * p_add)`.
pub fn local_utility_analytic(density: f64, p_del: f64, p_add: f64) -> Result<f64> {
    check_unit("density", density)?;
    check_unit("p_del", p_del)?;
    check_unit("p_add", p_add)?;
    Ok(1.0 - (density * p_del + (1.0 - density) * p_add))
}

/// Analytic local utility using the empirical density of a concrete graph.
pub fn local_utility_analytic_for_graph(g: &Graph, noise: &EdgeNoiseSpec) -> Result<f64> {
    local_utility_analytic(g.density()?, noise.p_del, noise.p_add)
}

/// Analytic local utility using the model density `P_T / C(n, 2)`.
pub fn local_utility_analytic_for_model(
    model: &EdgeProbabilityModel,
    seed: RandomSeed,
    noise: &EdgeNoiseSpec,
) -> Result<f64> {
    local_utility_analytic(model.density(seed)?, noise.p_del, noise.p_add)
}

/// `1 - hamming(observed, reference) / (N (N - 1))`.
pub fn local_utility_empirical(observed: &Graph, reference: &Graph) -> Result<f64> {
    let n = observed.n();
    let d = observed.hamming_distance(reference)?;
    if n < 2 {
        return Err(Error::invalid("local utility needs at least two nodes"));
    }
    Ok(1.0 - d as f64 / (n * (n - 1)) as f64)
}

/// `1 - ||T_obs^w - T_ref^w||_1 / (2N)` with the entrywise norm.
pub fn global_utility(observed: &Graph, reference: &Graph, w: u32) -> Result<f64> {
    observed.check_same_size(reference)?;
    if observed.n() == 0 {
        return Err(Error::invalid("global utility needs at least one node"));
    }
    let d = observed
        .transition_matrix()
        .power(w)?
        .entrywise_l1(&reference.transition_matrix().power(w)?)?;
    Ok(normalize_global(d, observed.n()))
}

fn normalize_global(distance: f64, n: usize) -> f64 {
    // Each stochastic row differs by at most 2; clamp guards rounding only.
    (1.0 - distance / (2.0 * n as f64)).clamp(0.0, 1.0)
}

/// Local utility of the delete/insert scheme: `1 - 2 R noise`.
pub fn hay_utility(density: f64, noise: f64) -> Result<f64> {
    check_unit("density", density)?;
    check_unit("noise", noise)?;
    let u = 1.0 - 2.0 * density * noise;
    if u < 0.0 {
        return Err(Error::invalid(format!(
            "noise {noise} exceeds the non-edge capacity at density {density}"
        )));
    }
    Ok(u)
}

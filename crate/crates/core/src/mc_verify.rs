//! Monte Carlo estimate of `Pr(Phi(sigma_k) >= Phi(sigma_0))`.
//!
//! Every trial samples an underlying graph, two independent noisy
//! observations of it sharing node ids (so the correct mapping is the
//! identity), and a mapping with exactly `k` misplaced nodes.

use rand::seq::{index, SliceRandom};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attack::{brute_force_attack, dcn_total, Mapping};
use crate::bounds::{check_theorem1, ConditionReport, GraphParams, UtilityPair};
use crate::error::{Error, Result};
use crate::perturb::{apply_edge_noise, sample_underlying, EdgeNoiseSpec, EdgeProbabilityModel};
use crate::rng::RandomSeed;
use crate::stats::{wilson_interval, Z_95};
use crate::utility::local_utility_analytic;

/// Largest `n` for [`exhaustive_trial`].
pub const EXHAUSTIVE_MAX_NODES: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub model: EdgeProbabilityModel,
    pub anon: EdgeNoiseSpec,
    pub aux: EdgeNoiseSpec,
    /// Number of incorrectly mapped nodes.
    pub k: usize,
    pub trials: u64,
    pub base_seed: RandomSeed,
}

impl TrialConfig {
    pub fn n(&self) -> usize {
        self.model.n
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.anon.validate()?;
        self.aux.validate()?;
        if self.k < 2 || self.k > self.n() {
            return Err(Error::invalid(format!(
                "k = {} must satisfy 2 <= k <= n = {}",
                self.k,
                self.n()
            )));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        Ok(())
    }

    pub fn with_nodes(&self, n: usize) -> Self {
        TrialConfig {
            model: self.model.with_nodes(n),
            ..self.clone()
        }
    }

    /// Local-utility conditions at the model's expected density, with the
    /// utilities implied by the two noise specs.
    pub fn theorem1_report(&self) -> Result<ConditionReport> {
        let r = self.model.expected_density();
        let params = GraphParams::new(self.n().max(2), r, self.model.l(), self.model.h())?;
        let pair = UtilityPair::new(
            local_utility_analytic(r, self.anon.p_del, self.anon.p_add)?,
            local_utility_analytic(r, self.aux.p_del, self.aux.p_add)?,
        )?;
        Ok(check_theorem1(&params, &pair))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub n: usize,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: u64,
    pub successes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub n: usize,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: u64,
    pub successes: u64,
    /// One entry per node count when produced by [`sweep_n`].
    pub per_n_series: Vec<SeriesPoint>,
}

impl EstimateReport {
    fn point(&self) -> SeriesPoint {
        SeriesPoint {
            n: self.n,
            p_hat: self.p_hat,
            ci_low: self.ci_low,
            ci_high: self.ci_high,
            trials: self.trials,
            successes: self.successes,
        }
    }
}

/// Identity outside a uniformly chosen `k`-subset, a uniform derangement of
/// that subset inside it.
pub fn sample_sigma_k(n: usize, k: usize, seed: RandomSeed) -> Result<Mapping> {
    if k < 2 || k > n {
        return Err(Error::invalid(format!(
            "k = {k} must satisfy 2 <= k <= n = {n} (no derangement of one element)"
        )));
    }
    let mut rng = seed.rng();
    let subset = index::sample(&mut rng, n, k).into_vec();
    let mut images = subset.clone();
    // Rejection from uniform shuffles; accepts with probability ~1/e.
    loop {
        images.shuffle(&mut rng);
        if subset.iter().zip(&images).all(|(a, b)| a != b) {
            break;
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for (&from, &to) in subset.iter().zip(&images) {
        perm[from] = to;
    }
    Mapping::new(perm)
}

struct TrialGraphs {
    g_a: crate::graph::Graph,
    g_u: crate::graph::Graph,
    seed: RandomSeed,
}

fn trial_graphs(cfg: &TrialConfig, trial_index: u64) -> Result<TrialGraphs> {
    let seed = cfg.base_seed.derive(trial_index);
    let g = sample_underlying(&cfg.model, seed.derive(0))?;
    Ok(TrialGraphs {
        g_a: apply_edge_noise(&g, &cfg.anon, seed.derive(1))?,
        g_u: apply_edge_noise(&g, &cfg.aux, seed.derive(2))?,
        seed,
    })
}

/// One trial: does the sampled `sigma_k` have DCN at least that of the
/// correct mapping?
pub fn trial(cfg: &TrialConfig, trial_index: u64) -> Result<bool> {
    cfg.validate()?;
    let t = trial_graphs(cfg, trial_index)?;
    let sigma_k = sample_sigma_k(cfg.n(), cfg.k, t.seed.derive(3))?;
    let phi_k = dcn_total(&t.g_a, &t.g_u, &sigma_k)?;
    let phi_0 = dcn_total(&t.g_a, &t.g_u, &Mapping::identity(cfg.n()))?;
    Ok(phi_k >= phi_0)
}

/// Like [`trial`] but quantifies over every mapping: true iff the identity
/// attains the minimum DCN. Limited to `n <= 8`.
pub fn exhaustive_trial(cfg: &TrialConfig, trial_index: u64) -> Result<bool> {
    cfg.validate()?;
    if cfg.n() > EXHAUSTIVE_MAX_NODES {
        return Err(Error::Guard(format!(
            "exhaustive mode limited to n <= {EXHAUSTIVE_MAX_NODES}"
        )));
    }
    let t = trial_graphs(cfg, trial_index)?;
    let best = brute_force_attack(&t.g_a, &t.g_u)?;
    Ok(dcn_total(&t.g_a, &t.g_u, &Mapping::identity(cfg.n()))? == best.phi)
}

fn report(n: usize, successes: u64, trials: u64) -> EstimateReport {
    let (ci_low, ci_high) = wilson_interval(successes, trials, Z_95);
    EstimateReport {
        n,
        p_hat: successes as f64 / trials as f64,
        ci_low,
        ci_high,
        trials,
        successes,
        per_n_series: Vec::new(),
    }
}

/// Runs `cfg.trials` trials (in parallel; outcomes depend only on
/// `(base_seed, trial_index)`).
pub fn estimate(cfg: &TrialConfig) -> Result<EstimateReport> {
    cfg.validate()?;
    let outcomes: Vec<bool> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| trial(cfg, t))
        .collect::<Result<_>>()?;
    let successes = outcomes.iter().filter(|&&b| b).count() as u64;
    Ok(report(cfg.n(), successes, cfg.trials))
}

/// Same as [`estimate`] in exhaustive mode.
pub fn estimate_exhaustive(cfg: &TrialConfig) -> Result<EstimateReport> {
    cfg.validate()?;
    let outcomes: Vec<bool> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| exhaustive_trial(cfg, t))
        .collect::<Result<_>>()?;
    let successes = outcomes.iter().filter(|&&b| b).count() as u64;
    Ok(report(cfg.n(), successes, cfg.trials))
}

/// Estimates for each node count, other parameters fixed. Top-level fields
/// describe the last (largest) `n`.
pub fn sweep_n(cfg: &TrialConfig, n_values: &[usize]) -> Result<EstimateReport> {
    if n_values.is_empty() {
        return Err(Error::invalid("n sweep needs at least one value"));
    }
    if n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("n sweep values must be strictly ascending"));
    }
    let configs: Vec<TrialConfig> = n_values.iter().map(|&n| cfg.with_nodes(n)).collect();
    for c in &configs {
        c.validate()?;
    }
    let mut series = Vec::with_capacity(configs.len());
    let mut last = None;
    for c in &configs {
        let r = estimate(c)?;
        series.push(r.point());
        last = Some(r);
    }
    let mut out = last.expect("non-empty sweep");
    out.per_n_series = series;
    Ok(out)
}

//! Config-driven runs behind the `deanon` binary.
//!
//! Each subcommand reads one JSON document, validates it completely, runs,
//! and writes a single artifact into the output directory. Every artifact
//! embeds the effective config (including the seed), so rerunning it
//! reproduces the file byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::attack::{brute_force_attack, greedy_attack, AttackMethod, Mapping, BRUTE_FORCE_MAX_NODES};
use crate::bounds::{check_theorem1, check_theorem2, region_grid, ConditionReport, GraphParams, UtilityPair};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::io::{format_edge_list, load_edge_list, EdgeListFile, GraphStats};
use crate::mc_verify::{estimate_exhaustive, sweep_n, TrialConfig, EXHAUSTIVE_MAX_NODES};
use crate::perturb::{apply_edge_noise, hay_perturb, EdgeNoiseSpec, EdgeProbabilityModel};
use crate::rng::RandomSeed;
use crate::utility::{local_utility_analytic_for_graph, UtilityReport};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Ingest,
    Perturb,
    Utility,
    Bounds,
    Region,
    Attack,
    Verify,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Ingest => "ingest",
            CommandKind::Perturb => "perturb",
            CommandKind::Utility => "utility",
            CommandKind::Bounds => "bounds",
            CommandKind::Region => "region",
            CommandKind::Attack => "attack",
            CommandKind::Verify => "verify",
        }
    }

    /// File written into the output directory.
    pub fn artifact(self) -> &'static str {
        match self {
            CommandKind::Ingest => "ingest.json",
            CommandKind::Perturb => "perturbed.edges",
            CommandKind::Utility => "utility.json",
            CommandKind::Bounds => "bounds.json",
            CommandKind::Region => "region.csv",
            CommandKind::Attack => "attack.json",
            CommandKind::Verify => "verify.csv",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IngestConfig {
    pub schema_version: u32,
    pub input: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PerturbMethod {
    /// Independent per-pair insertions and deletions.
    EdgeNoise { p_add: f64, p_del: f64 },
    /// `r = round(noise * m)` deletions then `r` insertions.
    Hay { noise: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbConfig {
    pub schema_version: u32,
    pub input: PathBuf,
    pub method: PerturbMethod,
    /// Write nodes in a random id order so ids carry no hint of the labels.
    #[serde(default)]
    pub shuffle_ids: bool,
    pub seed: RandomSeed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UtilityConfig {
    pub schema_version: u32,
    pub observed: PathBuf,
    pub reference: PathBuf,
    #[serde(default)]
    pub walks: Vec<u32>,
    /// When present, also report the expected local utility of this noise on
    /// the reference graph.
    #[serde(default)]
    pub noise: Option<EdgeNoiseSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    pub schema_version: u32,
    pub params: GraphParams,
    pub utilities: UtilityPair,
    /// Walk length for the global-utility conditions; omitted for local only.
    #[serde(default)]
    pub w: Option<u32>,
}

fn default_resolution() -> usize {
    101
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionConfig {
    pub schema_version: u32,
    pub params: GraphParams,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
}

fn default_restarts() -> usize {
    8
}

fn default_iterations() -> usize {
    100_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackConfig {
    pub schema_version: u32,
    pub anonymized: PathBuf,
    pub auxiliary: PathBuf,
    pub method: AttackMethod,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    pub seed: RandomSeed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub schema_version: u32,
    pub model: EdgeProbabilityModel,
    pub anon: EdgeNoiseSpec,
    pub aux: EdgeNoiseSpec,
    pub k: usize,
    pub trials: u64,
    /// Node counts to sweep; defaults to the model's `n`.
    #[serde(default)]
    pub n_values: Vec<usize>,
    /// Quantify over all mappings instead of one sampled `sigma_k` (n <= 8).
    #[serde(default)]
    pub exhaustive: bool,
    pub seed: RandomSeed,
}

/// A parsed, validated run.
#[derive(Debug, Clone, PartialEq)]
pub enum Experiment {
    Ingest(IngestConfig),
    Perturb(PerturbConfig),
    Utility(UtilityConfig),
    Bounds(BoundsConfig),
    Region(RegionConfig),
    Attack(AttackConfig),
    Verify(VerifyConfig),
}

fn check_schema(v: u32) -> Result<()> {
    if v != SCHEMA_VERSION {
        return Err(Error::Config(format!(
            "schema_version {v} is not supported (expected {SCHEMA_VERSION})"
        )));
    }
    Ok(())
}

fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
}

/// Relative input paths are resolved against the config file's directory.
fn resolve(base: &Path, p: &mut PathBuf) {
    if p.is_relative() {
        *p = base.join(&*p);
    }
}

impl Experiment {
    pub fn kind(&self) -> CommandKind {
        match self {
            Experiment::Ingest(_) => CommandKind::Ingest,
            Experiment::Perturb(_) => CommandKind::Perturb,
            Experiment::Utility(_) => CommandKind::Utility,
            Experiment::Bounds(_) => CommandKind::Bounds,
            Experiment::Region(_) => CommandKind::Region,
            Experiment::Attack(_) => CommandKind::Attack,
            Experiment::Verify(_) => CommandKind::Verify,
        }
    }

    /// Parses `text` as the config of `kind`, applies a seed override and
    /// validates every field.
    pub fn from_json(kind: CommandKind, text: &str, seed: Option<u64>) -> Result<Self> {
        let mut exp = match kind {
            CommandKind::Ingest => Experiment::Ingest(parse(text)?),
            CommandKind::Perturb => Experiment::Perturb(parse(text)?),
            CommandKind::Utility => Experiment::Utility(parse(text)?),
            CommandKind::Bounds => Experiment::Bounds(parse(text)?),
            CommandKind::Region => Experiment::Region(parse(text)?),
            CommandKind::Attack => Experiment::Attack(parse(text)?),
            CommandKind::Verify => Experiment::Verify(parse(text)?),
        };
        if let Some(s) = seed {
            match exp.seed_mut() {
                Some(slot) => *slot = RandomSeed(s),
                None => {
                    return Err(Error::Config(format!(
                        "--seed given but {} takes no seed",
                        kind.name()
                    )))
                }
            }
        }
        exp.validate()?;
        Ok(exp)
    }

    /// Reads the config file; relative paths inside it are taken relative
    /// to the file.
    pub fn load(kind: CommandKind, path: &Path, seed: Option<u64>) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut exp = Self::from_json(kind, &text, seed)?;
        let base = path.parent().unwrap_or(Path::new("."));
        match &mut exp {
            Experiment::Ingest(c) => resolve(base, &mut c.input),
            Experiment::Perturb(c) => resolve(base, &mut c.input),
            Experiment::Utility(c) => {
                resolve(base, &mut c.observed);
                resolve(base, &mut c.reference);
            }
            Experiment::Attack(c) => {
                resolve(base, &mut c.anonymized);
                resolve(base, &mut c.auxiliary);
            }
            Experiment::Bounds(_) | Experiment::Region(_) | Experiment::Verify(_) => {}
        }
        Ok(exp)
    }

    fn seed_mut(&mut self) -> Option<&mut RandomSeed> {
        match self {
            Experiment::Perturb(c) => Some(&mut c.seed),
            Experiment::Attack(c) => Some(&mut c.seed),
            Experiment::Verify(c) => Some(&mut c.seed),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Experiment::Ingest(c) => check_schema(c.schema_version),
            Experiment::Perturb(c) => {
                check_schema(c.schema_version)?;
                match c.method {
                    PerturbMethod::EdgeNoise { p_add, p_del } => {
                        EdgeNoiseSpec::new(p_add, p_del).map(|_| ())
                    }
                    PerturbMethod::Hay { noise } if (0.0..=1.0).contains(&noise) => Ok(()),
                    PerturbMethod::Hay { noise } => {
                        Err(Error::invalid(format!("noise = {noise} must lie in [0, 1]")))
                    }
                }
            }
            Experiment::Utility(c) => {
                check_schema(c.schema_version)?;
                if c.walks.contains(&0) {
                    return Err(Error::invalid("walk lengths must be at least 1"));
                }
                c.noise.as_ref().map_or(Ok(()), EdgeNoiseSpec::validate)
            }
            Experiment::Bounds(c) => {
                check_schema(c.schema_version)?;
                c.params.validate()?;
                UtilityPair::new(c.utilities.u_a, c.utilities.u_u)?;
                if c.w == Some(0) {
                    return Err(Error::invalid("w must be at least 1"));
                }
                Ok(())
            }
            Experiment::Region(c) => {
                check_schema(c.schema_version)?;
                c.params.validate()?;
                if !(2..=10_001).contains(&c.resolution) {
                    return Err(Error::invalid("resolution must lie in 2..=10001"));
                }
                Ok(())
            }
            Experiment::Attack(c) => check_schema(c.schema_version),
            Experiment::Verify(c) => {
                check_schema(c.schema_version)?;
                let trial = c.trial_config();
                if c.n_values.is_empty() {
                    trial.validate()?;
                }
                if c.n_values.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::invalid("n_values must be strictly ascending"));
                }
                for &n in &c.n_values {
                    trial.with_nodes(n).validate()?;
                }
                if c.exhaustive && c.node_counts().iter().any(|&n| n > EXHAUSTIVE_MAX_NODES) {
                    return Err(Error::Guard(format!(
                        "exhaustive mode limited to n <= {EXHAUSTIVE_MAX_NODES}"
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn config_json(&self) -> String {
        let v = match self {
            Experiment::Ingest(c) => serde_json::to_string(c),
            Experiment::Perturb(c) => serde_json::to_string(c),
            Experiment::Utility(c) => serde_json::to_string(c),
            Experiment::Bounds(c) => serde_json::to_string(c),
            Experiment::Region(c) => serde_json::to_string(c),
            Experiment::Attack(c) => serde_json::to_string(c),
            Experiment::Verify(c) => serde_json::to_string(c),
        };
        v.expect("configs serialize")
    }

    /// Computes the artifact contents without touching the output directory.
    pub fn render(&self) -> Result<String> {
        match self {
            Experiment::Ingest(c) => render_ingest(c),
            Experiment::Perturb(c) => render_perturb(c, &self.config_json()),
            Experiment::Utility(c) => render_utility(c),
            Experiment::Bounds(c) => render_bounds(c),
            Experiment::Region(c) => render_region(c, &self.config_json()),
            Experiment::Attack(c) => render_attack(c),
            Experiment::Verify(c) => render_verify(c, &self.config_json()),
        }
    }

    /// Renders and writes the artifact into `out_dir`, returning its path.
    pub fn run(&self, out_dir: &Path) -> Result<PathBuf> {
        let body = self.render()?;
        fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
        let path = out_dir.join(self.kind().artifact());
        fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }
}

impl VerifyConfig {
    fn trial_config(&self) -> TrialConfig {
        TrialConfig {
            model: self.model,
            anon: self.anon,
            aux: self.aux,
            k: self.k,
            trials: self.trials,
            base_seed: self.seed,
        }
    }

    fn node_counts(&self) -> Vec<usize> {
        if self.n_values.is_empty() {
            vec![self.model.n]
        } else {
            self.n_values.clone()
        }
    }
}

#[derive(Serialize)]
struct Artifact<'a, C, R> {
    config: &'a C,
    report: R,
}

fn to_json<C: Serialize, R: Serialize>(config: &C, report: R) -> String {
    let mut s = serde_json::to_string_pretty(&Artifact { config, report }).expect("reports serialize");
    s.push('\n');
    s
}

fn render_ingest(c: &IngestConfig) -> Result<String> {
    let f = load_edge_list(&c.input)?;
    #[derive(Serialize)]
    struct Report {
        line_count: usize,
        #[serde(flatten)]
        stats: GraphStats,
    }
    Ok(to_json(
        c,
        Report {
            line_count: f.line_count,
            stats: f.stats()?,
        },
    ))
}

fn render_perturb(c: &PerturbConfig, config_json: &str) -> Result<String> {
    let f = load_edge_list(&c.input)?;
    let g = &f.graph;
    let perturbed = match c.method {
        PerturbMethod::EdgeNoise { p_add, p_del } => {
            apply_edge_noise(g, &EdgeNoiseSpec::new(p_add, p_del)?, c.seed.derive(0))?
        }
        PerturbMethod::Hay { noise } => {
            let r = (noise * g.m() as f64).round() as usize;
            hay_perturb(g, r, c.seed.derive(0))?
        }
    };
    let (graph, labels) = if c.shuffle_ids {
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(&mut c.seed.derive(1).rng());
        let mut labels = vec![String::new(); g.n()];
        for (old, &new) in perm.iter().enumerate() {
            labels[new] = f.labels[old].clone();
        }
        (perturbed.relabel(&perm)?, labels)
    } else {
        (perturbed, f.labels.clone())
    };
    let mut out = format!("# config {config_json}\n");
    out.push_str(&format_edge_list(&graph, &labels)?);
    Ok(out)
}

/// Places `other` on the node ids of `reference` by label. Labels missing
/// from either side become isolated nodes of that side.
fn align(reference: &EdgeListFile, other: &EdgeListFile) -> Result<(Graph, Graph, Vec<String>)> {
    let mut labels = reference.labels.clone();
    let mut ids = reference.label_ids();
    let mut map = Vec::with_capacity(other.labels.len());
    for l in &other.labels {
        let id = *ids.entry(l.as_str()).or_insert_with(|| {
            labels.push(l.clone());
            labels.len() - 1
        });
        map.push(id);
    }
    let n = labels.len();
    let r = Graph::from_edges(n, reference.graph.edges())?;
    let o = Graph::from_edges(n, other.graph.edges().map(|(i, j)| (map[i], map[j])))?;
    Ok((r, o, labels))
}

fn render_utility(c: &UtilityConfig) -> Result<String> {
    let reference = load_edge_list(&c.reference)?;
    let observed = load_edge_list(&c.observed)?;
    let (r, o, _) = align(&reference, &observed)?;
    let mut report = UtilityReport::compute(&o, &r, &c.walks)?;
    if let Some(noise) = &c.noise {
        report = report.with_analytic(local_utility_analytic_for_graph(&r, noise)?);
    }
    Ok(to_json(c, report))
}

fn render_bounds(c: &BoundsConfig) -> Result<String> {
    #[derive(Serialize)]
    struct Report {
        theorem1: ConditionReport,
        #[serde(skip_serializing_if = "Option::is_none")]
        theorem2: Option<ConditionReport>,
    }
    let theorem2 = c
        .w
        .map(|w| check_theorem2(&c.params, &c.utilities, w))
        .transpose()?;
    Ok(to_json(
        c,
        Report {
            theorem1: check_theorem1(&c.params, &c.utilities),
            theorem2,
        },
    ))
}

fn render_region(c: &RegionConfig, config_json: &str) -> Result<String> {
    let grid = region_grid(&c.params, c.resolution)?;
    let mut out = format!("# config {config_json}\nu_a,u_u,c1,c2,c3,c4,all\n");
    let b = |v: bool| u8::from(v);
    for cell in &grid.cells {
        let [c1, c2, c3, c4] = cell.conditions;
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            cell.u_a,
            cell.u_u,
            b(c1),
            b(c2),
            b(c3),
            b(c4),
            b(cell.all)
        )
        .expect("write to String");
    }
    Ok(out)
}

fn render_attack(c: &AttackConfig) -> Result<String> {
    let anon = load_edge_list(&c.anonymized)?;
    let aux = load_edge_list(&c.auxiliary)?;
    if anon.graph.n() != aux.graph.n() {
        return Err(Error::SizeMismatch {
            left: anon.graph.n(),
            right: aux.graph.n(),
        });
    }
    if c.method == AttackMethod::BruteForce && anon.graph.n() > BRUTE_FORCE_MAX_NODES {
        return Err(Error::Guard(format!(
            "brute force limited to n <= {BRUTE_FORCE_MAX_NODES}, got {}",
            anon.graph.n()
        )));
    }
    let result = match c.method {
        AttackMethod::BruteForce => brute_force_attack(&anon.graph, &aux.graph)?,
        AttackMethod::GreedySwap => greedy_attack(&anon.graph, &aux.graph, c.restarts, c.iterations, c.seed)?,
    };
    // Ground truth: a node maps to the auxiliary node with the same label.
    let aux_ids = aux.label_ids();
    let truth: Option<Vec<usize>> = anon.labels.iter().map(|l| aux_ids.get(l.as_str()).copied()).collect();
    let accuracy = match truth {
        Some(t) => Some(result.accuracy_against(&Mapping::new(t)?)?),
        None => None,
    };
    #[derive(Serialize)]
    struct Report {
        method: AttackMethod,
        phi: u64,
        /// `None` when the two files do not share their label sets.
        accuracy: Option<f64>,
        mapping: Mapping,
        mapping_labels: Vec<(String, String)>,
    }
    let mapping_labels = (0..anon.graph.n())
        .map(|i| (anon.labels[i].clone(), aux.labels[result.mapping.image(i)].clone()))
        .collect();
    Ok(to_json(
        c,
        Report {
            method: result.method,
            phi: result.phi,
            accuracy,
            mapping_labels,
            mapping: result.mapping,
        },
    ))
}

fn render_verify(c: &VerifyConfig, config_json: &str) -> Result<String> {
    let trial = c.trial_config();
    let series = if c.exhaustive {
        c.node_counts()
            .into_iter()
            .map(|n| estimate_exhaustive(&trial.with_nodes(n)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .map(|r| (r.n, r.p_hat, r.ci_low, r.ci_high, r.trials))
            .collect::<Vec<_>>()
    } else {
        sweep_n(&trial, &c.node_counts())?
            .per_n_series
            .into_iter()
            .map(|p| (p.n, p.p_hat, p.ci_low, p.ci_high, p.trials))
            .collect()
    };
    let mut out = format!("# config {config_json}\nn,p_hat,ci_low,ci_high,trials\n");
    for (n, p, lo, hi, t) in series {
        writeln!(out, "{n},{p},{lo},{hi},{t}").expect("write to String");
    }
    Ok(out)
}

/// Machine-readable error report for standard error.
pub fn error_json(e: &Error) -> String {
    serde_json::json!({
        "error": e.kind(),
        "message": e.to_string(),
        "exit_code": e.exit_code(),
    })
    .to_string()
}

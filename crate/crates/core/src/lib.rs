//! Structural de-anonymization of perturbed social graphs.
//!
//! Two noisy observations of one underlying graph, an anonymized `G_a` and an
//! auxiliary `G_u`, are compared through their utility (how much of the
//! underlying structure each keeps) and attacked by minimising the difference
//! of common neighbours over node mappings.
//!
//! Start with the runnable programs in `examples/`:
//!
//! * `utility_metrics`: local and random-walk utilities of a noisy copy
//! * `perturbation`: edge-noise and Hay perturbation side by side
//! * `utility_region`: condition checks and the `(U_a, U_u)` region grid
//! * `deanonymize`: brute-force and greedy attacks on a relabelled graph
//! * `theorem_monte_carlo`: success probability as `n` grows
//! * `ingest_edge_list`: loading, summarising and saving edge lists
//! * `privacy_tradeoff`: attack accuracy against Hay noise

pub mod attack;
pub mod bounds;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod io;
pub mod mc_verify;
pub mod perturb;
pub mod rng;
pub mod stats;
pub mod utility;

pub use attack::{brute_force_attack, dcn_total, greedy_attack, AttackMethod, AttackResult, Mapping};
pub use bounds::{check_theorem1, check_theorem2, region_grid, ConditionReport, GraphParams, UtilityPair};
pub use error::{Error, Result};
pub use graph::{DenseMatrix, Graph};
pub use perturb::{apply_edge_noise, hay_perturb, sample_underlying, EdgeNoiseSpec, EdgeProbabilityModel};
pub use rng::RandomSeed;

//! Deterministic federated-learning simulator built around a heterogeneity-
//! aware client-selection engine: a linear contextual combinatorial bandit
//! scored by Thompson sampling over per-client context vectors (loss ratios,
//! latency, previous reward).
//!
//! The crate also ships the pieces needed to exercise the selector end to
//! end at desk scale:
//!
//! - noise-robust training losses (CE + pseudo-label CE + bounded reverse CE)
//! - heterogeneity generators: non-IID partitioning, Beta label noise,
//!   shifted-exponential straggler latency
//! - a FedAvg round loop with pluggable selection strategies
//! - a synthetic linear-bandit regret harness with an exact oracle
//!
//! Every random draw derives from a single seed through keyed streams, so
//! runs reproduce bit-for-bit, including under parallel client execution.

pub mod bandit;
pub mod config;
pub mod dataset;
pub mod error;
pub mod hetero;
pub mod linalg;
pub mod loss;
pub mod model;
pub mod orchestrator;
pub mod output;
pub mod regret;
pub mod rng;
pub mod strategy;

pub use bandit::{ContextVector, RidgeState, SelectionResult, ThetaSample};
pub use config::ExperimentConfig;
pub use error::{Error, Result};
pub use hetero::{ClientDataset, LatencyModel};
pub use loss::{ProbVector, RobustLossConfig};
pub use model::{ModelParams, OptimizerConfig};
pub use orchestrator::{run_experiment, ExperimentOutcome, RoundRecord, Simulation};
pub use output::{run_to_dir, RunManifest};
pub use regret::{run_regret, RegretTrace, SyntheticEnv};
pub use strategy::{SelectionStrategy, StrategyKind};

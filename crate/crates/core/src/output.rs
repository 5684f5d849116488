//! Metrics emission: per-round CSV, a JSON run manifest that reproduces the
//! run bit-for-bit, and the mode dispatch the CLI and FFI share.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Mode};
use crate::error::{Error, Result};
use crate::orchestrator::{run_experiment, ExperimentOutcome, RoundRecord};
use crate::regret::{run_regret, RegretTrace, SyntheticEnv};
use crate::rng::{stream_rng, Stream};

/// Environment variable supplying the default output directory.
pub const OUT_DIR_ENV: &str = "FLASHSIM_OUT_DIR";

/// Result of one dispatched run.
pub enum RunOutput {
    FedSim(ExperimentOutcome),
    Regret(RegretTrace),
}

/// Execute the configured experiment.
pub fn execute(cfg: &ExperimentConfig) -> Result<RunOutput> {
    cfg.validate()?;
    match cfg.mode {
        Mode::Fedsim => Ok(RunOutput::FedSim(run_experiment(cfg)?)),
        Mode::Regret => {
            let env = SyntheticEnv::from_config(
                &cfg.regret,
                &mut stream_rng(cfg.seed, Stream::Env, 0, 2),
            )?;
            let trace = run_regret(
                &env,
                cfg.strategy,
                cfg.rounds,
                cfg.bandit.lambda,
                cfg.bandit.delta,
                cfg.regret.per_client,
                cfg.seed,
            )?;
            Ok(RunOutput::Regret(trace))
        }
    }
}

/// Fixed federated CSV schema, one row per round.
pub fn fedsim_csv(records: &[RoundRecord]) -> String {
    let mut out = String::from("round,selected_ids,reward,tau,cum_time,global_ce,global_acc\n");
    for r in records {
        let ids = r
            .selected
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(";");
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.round, ids, r.reward, r.tau, r.cumulative_time, r.global_ce, r.global_acc
        );
    }
    out
}

/// Fixed regret CSV schema, one row per round.
pub fn regret_csv(trace: &RegretTrace) -> String {
    let mut out = String::from("round,instantaneous_regret,cumulative_regret,bound_value\n");
    for p in &trace.points {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            p.round, p.instantaneous, p.cumulative, p.bound
        );
    }
    out
}

/// Everything needed to reproduce a run exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub seed: u64,
    pub config: ExperimentConfig,
}

impl RunManifest {
    pub fn new(cfg: &ExperimentConfig) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: cfg.seed,
            config: cfg.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::config(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config(format!("bad manifest: {e}")))
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| {
            Error::config(format!(
                "cannot read manifest {}: {e}",
                path.as_ref().display()
            ))
        })?;
        Self::from_json(&text)
    }
}

/// Paths and summary of a completed run.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub metrics_path: PathBuf,
    pub manifest_path: PathBuf,
    /// One-line human summary, also printed by the CLI.
    pub summary: String,
    pub best_accuracy: f64,
    pub best_round: u64,
    pub total_simulated_seconds: f64,
    pub final_cumulative_regret: f64,
}

/// Run the experiment and write `metrics.csv` + `manifest.json` to `out_dir`.
pub fn run_to_dir(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunArtifacts> {
    cfg.validate()?;
    std::fs::create_dir_all(out_dir)?;
    let output = execute(cfg)?;

    let metrics_path = out_dir.join("metrics.csv");
    let manifest_path = out_dir.join("manifest.json");
    std::fs::write(&manifest_path, RunManifest::new(cfg).to_json()?)?;

    let artifacts = match &output {
        RunOutput::FedSim(outcome) => {
            std::fs::write(&metrics_path, fedsim_csv(&outcome.records))?;
            let s = &outcome.summary;
            RunArtifacts {
                summary: format!(
                    "best_accuracy={:.4} best_round={} total_simulated_seconds={:.3}",
                    s.best_test_accuracy, s.best_round, s.total_simulated_seconds
                ),
                best_accuracy: s.best_test_accuracy,
                best_round: s.best_round,
                total_simulated_seconds: s.total_simulated_seconds,
                final_cumulative_regret: 0.0,
                metrics_path,
                manifest_path,
            }
        }
        RunOutput::Regret(trace) => {
            std::fs::write(&metrics_path, regret_csv(trace))?;
            let final_regret = trace.points.last().map_or(0.0, |p| p.cumulative);
            RunArtifacts {
                summary: format!(
                    "strategy={} rounds={} final_cumulative_regret={:.4}",
                    cfg.strategy,
                    trace.points.len(),
                    final_regret
                ),
                best_accuracy: 0.0,
                best_round: 0,
                total_simulated_seconds: 0.0,
                final_cumulative_regret: final_regret,
                metrics_path,
                manifest_path,
            }
        }
    };
    Ok(artifacts)
}

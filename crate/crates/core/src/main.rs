//! Command-line entry point: config ingestion, experiment dispatch, metrics
//! emission.
//!
//! Configuration precedence: built-in defaults < `--config` file (or
//! `--manifest`) < individual flags. Every config key has a flag named
//! `--<section>-<key>`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use flashsim::config::{DatasetSource, ExperimentConfig, Mode, PartitionKind};
use flashsim::error::Error;
use flashsim::model::OptimizerKind;
use flashsim::output::{run_to_dir, RunManifest, OUT_DIR_ENV};
use flashsim::strategy::StrategyKind;

#[derive(Debug, Parser)]
#[command(
    name = "flashsim",
    version,
    about = "Deterministic federated-learning simulator with bandit client selection"
)]
struct Cli {
    /// TOML config file; flags override its values.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Re-run from a manifest.json written by a previous run.
    #[arg(long, value_name = "PATH", conflicts_with = "config")]
    manifest: Option<PathBuf>,

    /// Output directory (default: config `out_dir`, then $FLASHSIM_OUT_DIR, then ./runs).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// fedsim | regret
    #[arg(long)]
    mode: Option<Mode>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    rounds: Option<u64>,
    /// Early-stop patience in rounds (omit to run every round).
    #[arg(long)]
    patience: Option<u64>,
    #[arg(long)]
    parallel: Option<bool>,
    /// flash-ts | linucb | random | full
    #[arg(long)]
    strategy: Option<StrategyKind>,

    /// blobs | file
    #[arg(long)]
    dataset_source: Option<DatasetSource>,
    #[arg(long)]
    dataset_path: Option<PathBuf>,
    #[arg(long)]
    dataset_samples: Option<usize>,
    #[arg(long)]
    dataset_input_dim: Option<usize>,
    #[arg(long)]
    dataset_classes: Option<usize>,
    #[arg(long)]
    dataset_center_spread: Option<f64>,

    #[arg(long)]
    clients_count: Option<usize>,
    #[arg(long)]
    clients_select_fraction: Option<f64>,
    #[arg(long)]
    clients_val_fraction: Option<f64>,
    #[arg(long)]
    clients_server_val_fraction: Option<f64>,
    #[arg(long)]
    clients_test_fraction: Option<f64>,

    /// fraction-skew | dirichlet
    #[arg(long)]
    partition_kind: Option<PartitionKind>,
    #[arg(long)]
    partition_skew_fraction: Option<f64>,
    #[arg(long)]
    partition_dirichlet_alpha: Option<f64>,

    #[arg(long)]
    noise_alpha_beta: Option<f64>,

    #[arg(long)]
    latency_alpha_t: Option<f64>,
    #[arg(long)]
    latency_lambda_t: Option<f64>,

    #[arg(long)]
    loss_alpha: Option<f64>,
    #[arg(long)]
    loss_beta: Option<f64>,
    #[arg(long)]
    loss_a: Option<f64>,

    #[arg(long)]
    bandit_lambda: Option<f64>,
    #[arg(long)]
    bandit_delta: Option<f64>,

    /// sgd | adam
    #[arg(long)]
    optimizer_kind: Option<OptimizerKind>,
    #[arg(long)]
    optimizer_learning_rate: Option<f64>,
    #[arg(long)]
    optimizer_beta1: Option<f64>,
    #[arg(long)]
    optimizer_beta2: Option<f64>,
    #[arg(long)]
    optimizer_epsilon: Option<f64>,
    #[arg(long)]
    optimizer_epochs: Option<usize>,
    #[arg(long)]
    optimizer_batch_size: Option<usize>,

    #[arg(long)]
    model_hidden: Option<usize>,
    #[arg(long)]
    model_init_scale: Option<f64>,

    #[arg(long)]
    regret_d: Option<usize>,
    #[arg(long)]
    regret_m: Option<usize>,
    #[arg(long)]
    regret_select: Option<usize>,
    #[arg(long)]
    regret_noise_r: Option<f64>,
    #[arg(long)]
    regret_context_l: Option<f64>,
    #[arg(long)]
    regret_theta_s: Option<f64>,
    #[arg(long)]
    regret_per_client: Option<bool>,
}

macro_rules! apply {
    ($cfg:expr, $cli:expr, { $($flag:ident => $($field:ident).+),+ $(,)? }) => {
        $(if let Some(v) = $cli.$flag.clone() {
            $cfg.$($field).+ = v;
        })+
    };
}

impl Cli {
    fn resolve_config(&self) -> Result<ExperimentConfig, Error> {
        let mut cfg = if let Some(path) = &self.manifest {
            RunManifest::from_file(path)?.config
        } else if let Some(path) = &self.config {
            ExperimentConfig::from_toml_file(path)?
        } else {
            ExperimentConfig::default()
        };

        apply!(cfg, self, {
            mode => mode,
            seed => seed,
            rounds => rounds,
            parallel => parallel,
            strategy => strategy,
            dataset_source => dataset.source,
            dataset_samples => dataset.samples,
            dataset_input_dim => dataset.input_dim,
            dataset_classes => dataset.classes,
            dataset_center_spread => dataset.center_spread,
            clients_count => clients.count,
            clients_select_fraction => clients.select_fraction,
            clients_val_fraction => clients.val_fraction,
            clients_server_val_fraction => clients.server_val_fraction,
            clients_test_fraction => clients.test_fraction,
            partition_kind => partition.kind,
            partition_skew_fraction => partition.skew_fraction,
            partition_dirichlet_alpha => partition.dirichlet_alpha,
            noise_alpha_beta => noise.alpha_beta,
            latency_alpha_t => latency.alpha_t,
            latency_lambda_t => latency.lambda_t,
            loss_alpha => loss.alpha,
            loss_beta => loss.beta,
            loss_a => loss.a,
            bandit_lambda => bandit.lambda,
            bandit_delta => bandit.delta,
            optimizer_kind => optimizer.kind,
            optimizer_learning_rate => optimizer.learning_rate,
            optimizer_beta1 => optimizer.beta1,
            optimizer_beta2 => optimizer.beta2,
            optimizer_epsilon => optimizer.epsilon,
            optimizer_epochs => optimizer.epochs,
            optimizer_batch_size => optimizer.batch_size,
            model_hidden => model.hidden,
            model_init_scale => model.init_scale,
            regret_d => regret.d,
            regret_m => regret.m,
            regret_select => regret.select,
            regret_noise_r => regret.noise_r,
            regret_context_l => regret.context_l,
            regret_theta_s => regret.theta_s,
            regret_per_client => regret.per_client,
        });
        if let Some(p) = self.patience {
            cfg.patience = Some(p);
        }
        if let Some(p) = &self.dataset_path {
            cfg.dataset.path = Some(p.clone());
        }
        if let Some(dir) = &self.out {
            cfg.out_dir = Some(dir.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn out_dir(&self, cfg: &ExperimentConfig) -> PathBuf {
        cfg.out_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("runs"))
    }
}

fn run() -> Result<(), Error> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            // Bad flags are configuration errors.
            return Err(Error::config(e.to_string()));
        }
        Err(e) => {
            // --help / --version
            print!("{e}");
            return Ok(());
        }
    };
    let cfg = cli.resolve_config()?;
    let out_dir = cli.out_dir(&cfg);
    let artifacts = run_to_dir(&cfg, &out_dir)?;
    println!("{}", artifacts.summary);
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

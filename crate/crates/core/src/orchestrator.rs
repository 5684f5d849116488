//! The federated round loop: broadcast, local training, context construction,
//! FedAvg aggregation, global evaluation, reward computation, bandit update,
//! and next-round selection — in that order, every round.
//!
//! Round 0 is a full-participation round; the loss baselines that normalize
//! later context vectors are snapshotted from it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bandit::ContextVector;
use crate::config::{DatasetSource, ExperimentConfig};
use crate::dataset::{gaussian_blobs, Dataset};
use crate::error::{Error, Result};
use crate::hetero::{
    inject_label_noise, partition_dirichlet, partition_fraction_skew, round_duration,
    ClientDataset, LatencyModel,
};
use crate::loss::{self, RobustLossConfig};
use crate::model::{self, Architecture, ModelParams, OptimizerConfig};
use crate::rng::{stream_rng, Stream};
use crate::strategy::{Observation, SelectionStrategy, StrategyKind};

/// Floor substituted for a degenerate zero loss baseline.
const BASELINE_FLOOR: f64 = 1e-8;

/// Per-client measurements feeding one context vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClientRoundStats {
    pub robust_loss_now: f64,
    pub robust_loss_round1: f64,
    pub val_ce_now: f64,
    pub val_ce_round1: f64,
    /// Latency drawn this round (simulated seconds).
    pub latency: f64,
    /// Global reward of the previous round.
    pub last_reward: f64,
}

/// Assemble the 4-dimensional context
/// `[robust ratio, validation-CE ratio, latency, previous reward]`.
pub fn build_context(stats: &ClientRoundStats) -> Result<ContextVector> {
    if stats.robust_loss_round1 <= 0.0 || stats.val_ce_round1 <= 0.0 {
        return Err(Error::InvalidState(format!(
            "degenerate loss baseline ({}, {}); baselines must be positive",
            stats.robust_loss_round1, stats.val_ce_round1
        )));
    }
    ContextVector::new(vec![
        stats.robust_loss_now / stats.robust_loss_round1,
        stats.val_ce_now / stats.val_ce_round1,
        stats.latency,
        stats.last_reward,
    ])
}

/// Reward `r_t = |L_t − L_{t−1}| / τ`: absolute loss change per unit duration.
pub fn compute_reward(robust_prev: f64, robust_now: f64, tau_prev: f64) -> Result<f64> {
    if !(tau_prev > 0.0) {
        return Err(Error::invalid_argument(format!(
            "round duration must be positive, got {tau_prev}"
        )));
    }
    Ok((robust_now - robust_prev).abs() / tau_prev)
}

/// Dataset-size-weighted parameter average.
///
/// The caller passes entries in ascending client-id order; summation follows
/// that order exactly, which pins the floating-point result.
pub fn fedavg(locals: &[(ModelParams, usize)]) -> Result<ModelParams> {
    let (first, _) = locals
        .first()
        .ok_or_else(|| Error::invalid_argument("fedavg over an empty selection"))?;
    let arch = first.arch();
    if locals.iter().any(|(p, _)| p.arch() != arch) {
        return Err(Error::invalid_argument(
            "fedavg requires identical architectures",
        ));
    }
    let total: usize = locals.iter().map(|(_, n)| n).sum();
    if total == 0 {
        return Err(Error::invalid_argument("fedavg with zero total samples"));
    }
    let mut weights = vec![0.0; arch.param_count()];
    for (params, n) in locals {
        let w = *n as f64 / total as f64;
        for (acc, p) in weights.iter_mut().zip(params.weights()) {
            *acc += w * p;
        }
    }
    ModelParams::from_weights(arch, weights)
}

/// Per-round log record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: u64,
    /// Selected set `S_t`, ascending client ids.
    pub selected: Vec<usize>,
    pub reward: f64,
    /// Round duration: max latency over the selected set.
    pub tau: f64,
    pub cumulative_time: f64,
    /// Server-pool CE of the freshly aggregated model.
    pub global_ce: f64,
    /// Server-pool accuracy of the freshly aggregated model.
    pub global_acc: f64,
    /// Held-out test accuracy (drives the early-stop summary).
    pub test_acc: f64,
    /// Strategy scores that produced the next round's selection.
    pub scores: Vec<f64>,
    /// Every client's latency draw this round (diagnostics).
    pub client_latencies: Vec<f64>,
}

/// Final summary of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub rounds_executed: u64,
    pub best_test_accuracy: f64,
    pub best_round: u64,
    pub total_simulated_seconds: f64,
    pub final_test_ce: f64,
    pub final_test_accuracy: f64,
}

/// Records plus summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutcome {
    pub records: Vec<RoundRecord>,
    pub summary: RunSummary,
}

struct ClientEvaluation {
    robust_loss: f64,
    val_ce: f64,
    latency: f64,
}

/// Live federated simulation state.
pub struct Simulation {
    seed: u64,
    parallel: bool,
    m: usize,
    m_select: usize,
    loss_cfg: RobustLossConfig,
    opt_cfg: OptimizerConfig,
    latency_model: LatencyModel,
    clients: Vec<ClientDataset>,
    server_val: Dataset,
    test: Dataset,
    global: ModelParams,
    strategy: Box<dyn SelectionStrategy + Send + Sync>,
    round: u64,
    /// `S_t` for the upcoming round, ascending ids.
    selection: Vec<usize>,
    /// Per-client `(robust¹, val-CE¹)` baselines, set at the end of round 0.
    baselines: Option<Vec<(f64, f64)>>,
    last_reward: f64,
    last_global_robust: f64,
    last_tau: Option<f64>,
    cumulative_time: f64,
}

impl Simulation {
    /// Build the full simulation from a validated config: synthesize or load
    /// the source dataset, hold out server-validation and test pools, split
    /// the rest across clients, and inject label noise.
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        let seed = cfg.seed;
        let source = match &cfg.dataset.source {
            DatasetSource::Blobs => {
                gaussian_blobs(&cfg.dataset.blobs(), &mut stream_rng(seed, Stream::Dataset, 0, 0))?
            }
            DatasetSource::File => {
                let path = cfg.dataset.path.as_ref().ok_or_else(|| {
                    Error::config("dataset.path is required when dataset.source = \"file\"")
                })?;
                Dataset::load_csv(path)?
            }
        };

        let mut split_rng = stream_rng(seed, Stream::Partition, 0, 0);
        let mut order: Vec<usize> = (0..source.len()).collect();
        use rand::seq::SliceRandom;
        order.shuffle(&mut split_rng);
        let test_count = ((source.len() as f64) * cfg.clients.test_fraction).round() as usize;
        let server_count =
            ((source.len() as f64) * cfg.clients.server_val_fraction).round() as usize;
        if test_count == 0 || server_count == 0 {
            return Err(Error::config(
                "test and server-validation pools must be nonempty",
            ));
        }
        let test = source.subset(&order[..test_count]);
        let server_val = source.subset(&order[test_count..test_count + server_count]);
        let client_pool = source.subset(&order[test_count + server_count..]);

        let mut clients = match cfg.partition.kind {
            crate::config::PartitionKind::FractionSkew => partition_fraction_skew(
                &client_pool,
                cfg.clients.count,
                cfg.partition.skew_fraction,
                cfg.clients.val_fraction,
                &mut split_rng,
            )?,
            crate::config::PartitionKind::Dirichlet => partition_dirichlet(
                &client_pool,
                cfg.clients.count,
                cfg.partition.dirichlet_alpha,
                cfg.clients.val_fraction,
                &mut split_rng,
            )?,
        };
        inject_label_noise(
            &mut clients,
            cfg.noise.alpha_beta,
            &mut stream_rng(seed, Stream::Noise, 0, 0),
        )?;
        for (i, c) in clients.iter().enumerate() {
            if c.train.is_empty() || c.validation.is_empty() {
                return Err(Error::Allocation(format!(
                    "client {i} has an empty train or validation split"
                )));
            }
        }

        let arch = Architecture {
            input_dim: source.input_dim,
            hidden: (cfg.model.hidden > 0).then_some(cfg.model.hidden),
            num_classes: source.num_classes,
        };
        let global = if arch.hidden.is_some() {
            ModelParams::init(
                arch,
                cfg.model.init_scale,
                &mut stream_rng(seed, Stream::Init, 0, 0),
            )?
        } else {
            ModelParams::zeros(arch)?
        };

        let m = cfg.clients.count;
        let m_select = match cfg.strategy {
            StrategyKind::Full => m,
            _ => ((cfg.clients.select_fraction * m as f64).round() as usize).clamp(1, m),
        };
        let strategy = cfg
            .strategy
            .build(4, cfg.bandit.lambda, cfg.bandit.delta)?;

        let last_global_robust = Self::global_robust_loss(&global, &server_val, &cfg.loss)?;

        Ok(Self {
            seed,
            parallel: cfg.parallel,
            m,
            m_select,
            loss_cfg: cfg.loss,
            opt_cfg: cfg.optimizer,
            latency_model: cfg.latency,
            clients,
            server_val,
            test,
            global,
            strategy,
            round: 0,
            selection: (0..m).collect(),
            baselines: None,
            last_reward: 0.0,
            last_global_robust,
            last_tau: None,
            cumulative_time: 0.0,
        })
    }

    pub fn client_count(&self) -> usize {
        self.m
    }

    pub fn select_count(&self) -> usize {
        self.m_select
    }

    pub fn global_params(&self) -> &ModelParams {
        &self.global
    }

    pub fn clients(&self) -> &[ClientDataset] {
        &self.clients
    }

    /// Robust loss of a model on a labeled pool, with pseudo-labels frozen
    /// from the model's own outputs.
    fn global_robust_loss(
        params: &ModelParams,
        pool: &Dataset,
        cfg: &RobustLossConfig,
    ) -> Result<f64> {
        let preds = params.forward(&pool.features)?;
        let labels: Vec<loss::ProbVector> = pool
            .labels
            .iter()
            .map(|&y| loss::ProbVector::one_hot(pool.num_classes, y))
            .collect::<Result<_>>()?;
        let pseudo = loss::make_pseudo_labels(&preds);
        Ok(loss::robust_loss(&preds, &labels, &preds, &pseudo, cfg)?.total)
    }

    /// Step (2): local training on every selected client.
    fn train_selected(&self) -> Result<Vec<(usize, ModelParams)>> {
        let train_one = |&client: &usize| -> Result<(usize, ModelParams)> {
            let data = &self.clients[client];
            let mut rng = stream_rng(self.seed, Stream::Training, self.round, client as u64);
            let params = model::local_training(
                &self.global,
                &data.train.features,
                &data.train.labels,
                &self.loss_cfg,
                &self.opt_cfg,
                &mut rng,
                self.round,
                client,
            )?;
            Ok((client, params))
        };
        if self.parallel {
            self.selection.par_iter().map(train_one).collect()
        } else {
            self.selection.iter().map(train_one).collect()
        }
    }

    /// Step (3): every client refreshes pseudo-labels from the broadcast
    /// model, measures its robust loss and validation CE, and draws latency.
    fn evaluate_all_clients(&self) -> Result<Vec<ClientEvaluation>> {
        let eval_one = |client: usize| -> Result<ClientEvaluation> {
            let data = &self.clients[client];
            let preds = self.global.forward(&data.train.features)?;
            let labels: Vec<loss::ProbVector> = data
                .train
                .labels
                .iter()
                .map(|&y| loss::ProbVector::one_hot(data.train.num_classes, y))
                .collect::<Result<_>>()?;
            let pseudo = loss::make_pseudo_labels(&preds);
            let robust =
                loss::robust_loss(&preds, &labels, &preds, &pseudo, &self.loss_cfg)?.total;
            let (val_ce, _) = model::evaluate(
                &self.global,
                &data.validation.features,
                &data.validation.labels,
            )?;
            let mut rng = stream_rng(self.seed, Stream::Latency, self.round, client as u64);
            let latency = self.latency_model.sample(data.size(), &mut rng);
            Ok(ClientEvaluation {
                robust_loss: robust,
                val_ce,
                latency,
            })
        };
        if self.parallel {
            (0..self.m).into_par_iter().map(eval_one).collect()
        } else {
            (0..self.m).map(eval_one).collect()
        }
    }

    /// Execute one full round and advance the state.
    pub fn run_round(&mut self) -> Result<RoundRecord> {
        let t = self.round;

        // (1)-(2) Broadcast is implicit: trainers and evaluators read the
        // current global parameters. Train the selected set.
        let locals = self.train_selected()?;

        // (3) Client-side measurements and contexts, all against the
        // broadcast model.
        let evals = self.evaluate_all_clients()?;
        if self.baselines.is_none() {
            let snap: Vec<(f64, f64)> = evals
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    let mut robust1 = e.robust_loss;
                    let mut val1 = e.val_ce;
                    if robust1 <= 0.0 {
                        eprintln!(
                            "warning: client {i} robust-loss baseline {robust1} replaced by {BASELINE_FLOOR}"
                        );
                        robust1 = BASELINE_FLOOR;
                    }
                    if val1 <= 0.0 {
                        eprintln!(
                            "warning: client {i} validation baseline {val1} replaced by {BASELINE_FLOOR}"
                        );
                        val1 = BASELINE_FLOOR;
                    }
                    (robust1, val1)
                })
                .collect();
            self.baselines = Some(snap);
        }
        let baselines = self.baselines.as_ref().expect("baselines just set");
        let contexts: Vec<ContextVector> = evals
            .iter()
            .zip(baselines)
            .map(|(e, &(robust1, val1))| {
                build_context(&ClientRoundStats {
                    robust_loss_now: e.robust_loss,
                    robust_loss_round1: robust1,
                    val_ce_now: e.val_ce,
                    val_ce_round1: val1,
                    latency: e.latency,
                    last_reward: self.last_reward,
                })
            })
            .collect::<Result<_>>()?;

        let client_latencies: Vec<f64> = evals.iter().map(|e| e.latency).collect();
        let selected_latencies: Vec<f64> = self
            .selection
            .iter()
            .map(|&i| client_latencies[i])
            .collect();
        let tau = round_duration(&selected_latencies)?;

        // (4) FedAvg over the selected set, ascending client-id order.
        let weighted: Vec<(ModelParams, usize)> = locals
            .into_iter()
            .map(|(client, params)| (params, self.clients[client].size()))
            .collect();
        self.global = fedavg(&weighted)?;

        // (5) Global evaluation of the aggregated model; the reward divides
        // the loss change by the previous round's duration (this round's own
        // duration bootstraps round 0).
        let global_robust =
            Self::global_robust_loss(&self.global, &self.server_val, &self.loss_cfg)?;
        let (global_ce, global_acc) = model::evaluate(
            &self.global,
            &self.server_val.features,
            &self.server_val.labels,
        )?;
        let (_, test_acc) =
            model::evaluate(&self.global, &self.test.features, &self.test.labels)?;
        let reward = compute_reward(
            self.last_global_robust,
            global_robust,
            self.last_tau.unwrap_or(tau),
        )?;

        // (6) Bandit update: the scalar round reward is replicated to every
        // selected client.
        let observations: Vec<Observation> = self
            .selection
            .iter()
            .map(|&i| Observation {
                client: i,
                context: contexts[i].clone(),
                reward,
            })
            .collect();
        self.strategy.update(&observations)?;

        // (7) Score all clients and pick the next selection.
        let mut selection_rng = stream_rng(self.seed, Stream::Selection, t, 0);
        let result = self
            .strategy
            .choose(t, &contexts, self.m_select, &mut selection_rng)?;
        let mut next_selection = result.chosen.clone();
        next_selection.sort_unstable();

        let record = RoundRecord {
            round: t,
            selected: self.selection.clone(),
            reward,
            tau,
            cumulative_time: self.cumulative_time + tau,
            global_ce,
            global_acc,
            test_acc,
            scores: result.scores,
            client_latencies,
        };

        self.cumulative_time += tau;
        self.last_tau = Some(tau);
        self.last_reward = reward;
        self.last_global_robust = global_robust;
        self.selection = next_selection;
        self.round += 1;
        Ok(record)
    }

    /// Run up to `rounds` rounds with optional early stopping on the
    /// server-pool CE (`patience` rounds without improvement).
    pub fn run(&mut self, rounds: u64, patience: Option<u64>) -> Result<ExperimentOutcome> {
        let mut records = Vec::with_capacity(rounds as usize);
        let mut best_val_ce = f64::INFINITY;
        let mut stale = 0u64;
        let mut best_test_accuracy;
        let mut best_round = 0u64;

        let (initial_ce, initial_acc) =
            model::evaluate(&self.global, &self.test.features, &self.test.labels)?;
        best_test_accuracy = initial_acc;
        let mut final_test = (initial_ce, initial_acc);

        for _ in 0..rounds {
            let record = self.run_round()?;
            if record.test_acc > best_test_accuracy {
                best_test_accuracy = record.test_acc;
                best_round = record.round + 1;
            }
            if record.global_ce < best_val_ce {
                best_val_ce = record.global_ce;
                stale = 0;
            } else {
                stale += 1;
            }
            records.push(record);
            if let Some(p) = patience {
                if stale > p {
                    break;
                }
            }
        }
        if !records.is_empty() {
            let (ce, acc) =
                model::evaluate(&self.global, &self.test.features, &self.test.labels)?;
            final_test = (ce, acc);
        }
        let summary = RunSummary {
            rounds_executed: records.len() as u64,
            best_test_accuracy,
            best_round,
            total_simulated_seconds: self.cumulative_time,
            final_test_ce: final_test.0,
            final_test_accuracy: final_test.1,
        };
        Ok(ExperimentOutcome { records, summary })
    }
}

/// Convenience entry point: build the simulation and run it.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    let mut sim = Simulation::from_config(cfg)?;
    sim.run(cfg.rounds, cfg.patience)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    use crate::config::tests::small_fedsim_config;

    #[test]
    fn build_context_ordering_and_ratios() {
        let stats = ClientRoundStats {
            robust_loss_now: 0.5,
            robust_loss_round1: 1.0,
            val_ce_now: 2.0,
            val_ce_round1: 1.0,
            latency: 0.3,
            last_reward: 0.2,
        };
        let ctx = build_context(&stats).unwrap();
        assert_eq!(ctx.as_slice(), &[0.5, 2.0, 0.3, 0.2]);

        // Unchanged losses → entries of exactly 1.
        let ctx = build_context(&ClientRoundStats {
            robust_loss_now: 1.7,
            robust_loss_round1: 1.7,
            val_ce_now: 0.9,
            val_ce_round1: 0.9,
            latency: 0.0,
            last_reward: 0.0,
        })
        .unwrap();
        assert_eq!(ctx.as_slice()[0], 1.0);
        assert_eq!(ctx.as_slice()[1], 1.0);

        // Scaling numerator and denominator together is a no-op.
        let doubled = build_context(&ClientRoundStats {
            robust_loss_now: 1.0,
            robust_loss_round1: 2.0,
            val_ce_now: 2.0,
            val_ce_round1: 1.0,
            latency: 0.3,
            last_reward: 0.2,
        })
        .unwrap();
        assert_eq!(doubled.as_slice()[0], 0.5);

        assert!(build_context(&ClientRoundStats {
            robust_loss_now: 1.0,
            robust_loss_round1: 0.0,
            val_ce_now: 1.0,
            val_ce_round1: 1.0,
            latency: 0.0,
            last_reward: 0.0,
        })
        .is_err());
    }

    #[test]
    fn compute_reward_examples() {
        assert_relative_eq!(compute_reward(1.0, 0.9, 0.5).unwrap(), 0.2);
        assert_relative_eq!(compute_reward(0.7, 0.7, 2.0).unwrap(), 0.0);
        // Sign symmetry.
        assert_relative_eq!(
            compute_reward(1.0, 0.9, 0.5).unwrap(),
            compute_reward(0.9, 1.0, 0.5).unwrap()
        );
        assert!(compute_reward(1.0, 0.9, 0.0).is_err());
        assert!(compute_reward(1.0, 0.9, -1.0).is_err());
    }

    #[test]
    fn fedavg_examples() {
        let arch = Architecture {
            input_dim: 1,
            hidden: None,
            num_classes: 2,
        };
        // Equal sizes: plain average.
        let w1 = ModelParams::from_weights(arch, vec![1.0, 1.0, 1.0, 1.0]).unwrap();
        let w2 = ModelParams::from_weights(arch, vec![3.0, 3.0, 3.0, 3.0]).unwrap();
        let avg = fedavg(&[(w1.clone(), 10), (w2, 10)]).unwrap();
        assert_eq!(avg.weights(), &[2.0, 2.0, 2.0, 2.0]);

        // Single client: identity.
        let solo = fedavg(&[(w1.clone(), 5)]).unwrap();
        assert_eq!(solo.weights(), w1.weights());

        // Weighted mean with N = (1,2,1) over basis vectors.
        let e = |k: usize| {
            let mut w = vec![0.0; 4];
            w[k] = 1.0;
            ModelParams::from_weights(arch, w).unwrap()
        };
        let avg = fedavg(&[(e(0), 1), (e(1), 2), (e(2), 1)]).unwrap();
        assert_eq!(avg.weights(), &[0.25, 0.5, 0.25, 0.0]);

        assert!(fedavg(&[]).is_err());
    }

    #[test]
    fn round_zero_is_full_participation() {
        let cfg = small_fedsim_config(10, 42);
        let mut sim = Simulation::from_config(&cfg).unwrap();
        let record = sim.run_round().unwrap();
        assert_eq!(record.selected, (0..10).collect::<Vec<_>>());
        // Later rounds select M_t clients.
        let next = sim.run_round().unwrap();
        assert_eq!(next.selected.len(), sim.select_count());
    }

    #[test]
    fn rounds_are_deterministic_and_parallel_invariant() {
        let mut serial_cfg = small_fedsim_config(8, 7);
        serial_cfg.parallel = false;
        let mut parallel_cfg = serial_cfg.clone();
        parallel_cfg.parallel = true;

        let a = run_experiment(&serial_cfg).unwrap();
        let b = run_experiment(&serial_cfg).unwrap();
        assert_eq!(a, b, "same config and seed must reproduce bit-identically");

        let c = run_experiment(&parallel_cfg).unwrap();
        assert_eq!(a, c, "parallel fan-out must not change results");
    }

    #[test]
    fn single_client_full_participation_is_centralized_training() {
        let mut cfg = small_fedsim_config(1, 3);
        cfg.strategy = crate::strategy::StrategyKind::Full;
        let mut sim = Simulation::from_config(&cfg).unwrap();
        let broadcast = sim.global_params().clone();
        let expected = crate::model::local_training(
            &broadcast,
            &sim.clients()[0].train.features,
            &sim.clients()[0].train.labels,
            &cfg.loss,
            &cfg.optimizer,
            &mut stream_rng(cfg.seed, Stream::Training, 0, 0),
            0,
            0,
        )
        .unwrap();
        sim.run_round().unwrap();
        assert_eq!(sim.global_params().weights(), expected.weights());
    }

    #[test]
    fn cumulative_time_is_running_sum_and_tau_is_selected_max() {
        let cfg = small_fedsim_config(6, 11);
        let mut sim = Simulation::from_config(&cfg).unwrap();
        let mut total = 0.0;
        for _ in 0..5 {
            let r = sim.run_round().unwrap();
            let max_selected = r
                .selected
                .iter()
                .map(|&i| r.client_latencies[i])
                .fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(r.tau, max_selected);
            total += r.tau;
            assert_eq!(r.cumulative_time, total);
        }
    }

    #[test]
    fn zero_rounds_reports_initial_model() {
        let cfg = small_fedsim_config(4, 5);
        let mut sim = Simulation::from_config(&cfg).unwrap();
        let outcome = sim.run(0, None).unwrap();
        assert!(outcome.records.is_empty());
        assert_eq!(outcome.summary.rounds_executed, 0);
        assert_eq!(outcome.summary.total_simulated_seconds, 0.0);
        // Zero-weight logistic model predicts uniformly.
        assert_relative_eq!(outcome.summary.final_test_ce, 10.0_f64.ln(), epsilon = 1e-9);
    }

    #[test]
    fn infinite_patience_runs_every_round() {
        let cfg = small_fedsim_config(5, 9);
        let mut sim = Simulation::from_config(&cfg).unwrap();
        let outcome = sim.run(6, None).unwrap();
        assert_eq!(outcome.summary.rounds_executed, 6);
        assert_eq!(outcome.records.len(), 6);
    }

    #[test]
    fn flash_ts_does_not_fixate_on_one_client() {
        // Over a 200-round run, no client is selected in 100% of the rounds
        // t ≥ 1 under the default exploration schedule.
        let mut cfg = small_fedsim_config(10, 13);
        cfg.rounds = 200;
        let outcome = run_experiment(&cfg).unwrap();
        let m = 10;
        let mut counts = vec![0usize; m];
        let later: Vec<_> = outcome.records.iter().skip(1).collect();
        for r in &later {
            for &i in &r.selected {
                counts[i] += 1;
            }
        }
        for (i, &c) in counts.iter().enumerate() {
            assert!(
                c < later.len(),
                "client {i} was selected in every round ({c}/{})",
                later.len()
            );
        }
    }
}

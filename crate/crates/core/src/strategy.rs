//! Pluggable client-selection strategies for the round loop and the regret
//! harness.

use rand::seq::index::sample as index_sample;

use crate::bandit::{
    exploration_width, score_clients, select_top_m, ContextVector, RidgeState, SelectionResult,
};
use crate::error::{Error, Result};
use crate::rng::SimRng;

/// One observed (client, context, reward) triple fed back to a strategy.
#[derive(Debug, Clone)]
pub struct Observation {
    pub client: usize,
    pub context: ContextVector,
    pub reward: f64,
}

/// A strategy scores all clients each round and picks `num_select` of them.
pub trait SelectionStrategy {
    fn name(&self) -> &'static str;

    /// Choose exactly `num_select` distinct indices in `[0, contexts.len())`.
    fn choose(
        &mut self,
        round: u64,
        contexts: &[ContextVector],
        num_select: usize,
        rng: &mut SimRng,
    ) -> Result<SelectionResult>;

    /// Ingest the rewards observed for the previously chosen clients.
    fn update(&mut self, observations: &[Observation]) -> Result<()>;
}

/// Exploration-width schedule for the bandit strategies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WidthSchedule {
    /// `γ_t = √λ + √(d ln((1+tm)/δ))` — the live selector's schedule.
    Adaptive { lambda: f64, delta: f64 },
    /// `γ_t = R√(d log((1+tL²/λ)/δ)) + √λ·S` — the analysis-style width used
    /// by the regret harness's UCB variant.
    Theory {
        noise_r: f64,
        context_l: f64,
        theta_s: f64,
        lambda: f64,
        delta: f64,
    },
}

impl WidthSchedule {
    pub fn value(&self, t: u64, m: usize, d: usize) -> Result<f64> {
        match *self {
            WidthSchedule::Adaptive { lambda, delta } => {
                exploration_width(t, m, d, lambda, delta)
            }
            WidthSchedule::Theory {
                noise_r,
                context_l,
                theta_s,
                lambda,
                delta,
            } => {
                if !(delta > 0.0 && delta < 1.0) {
                    return Err(Error::config(format!(
                        "confidence delta must lie in (0,1), got {delta}"
                    )));
                }
                let log_term =
                    ((1.0 + t as f64 * context_l * context_l / lambda) / delta).ln();
                Ok(noise_r * (d as f64 * log_term).sqrt() + lambda.sqrt() * theta_s)
            }
        }
    }
}

/// Thompson-sampling selector over a shared ridge state.
#[derive(Debug, Clone)]
pub struct FlashTs {
    state: RidgeState,
    width: WidthSchedule,
}

impl FlashTs {
    pub fn new(d: usize, lambda: f64, delta: f64) -> Result<Self> {
        Ok(Self {
            state: RidgeState::new(d, lambda)?,
            width: WidthSchedule::Adaptive { lambda, delta },
        })
    }

    pub fn state(&self) -> &RidgeState {
        &self.state
    }
}

impl SelectionStrategy for FlashTs {
    fn name(&self) -> &'static str {
        "flash-ts"
    }

    fn choose(
        &mut self,
        round: u64,
        contexts: &[ContextVector],
        num_select: usize,
        rng: &mut SimRng,
    ) -> Result<SelectionResult> {
        let gamma = self.width.value(round, contexts.len(), self.state.dim())?;
        let theta = self.state.ts_sample(gamma, rng)?;
        let scores = score_clients(&theta, contexts)?;
        select_top_m(&scores, num_select)
    }

    fn update(&mut self, observations: &[Observation]) -> Result<()> {
        let pairs: Vec<(ContextVector, f64)> = observations
            .iter()
            .map(|o| (o.context.clone(), o.reward))
            .collect();
        self.state.update(&pairs)
    }
}

/// Deterministic-optimism selector over a shared ridge state.
#[derive(Debug, Clone)]
pub struct PlainLinUcb {
    state: RidgeState,
    width: WidthSchedule,
}

impl PlainLinUcb {
    /// Live-loop variant with the adaptive width schedule.
    pub fn new(d: usize, lambda: f64, delta: f64) -> Result<Self> {
        Ok(Self {
            state: RidgeState::new(d, lambda)?,
            width: WidthSchedule::Adaptive { lambda, delta },
        })
    }

    /// Harness variant with an explicit width schedule.
    pub fn with_width(d: usize, lambda: f64, width: WidthSchedule) -> Result<Self> {
        Ok(Self {
            state: RidgeState::new(d, lambda)?,
            width,
        })
    }
}

impl SelectionStrategy for PlainLinUcb {
    fn name(&self) -> &'static str {
        "linucb"
    }

    fn choose(
        &mut self,
        round: u64,
        contexts: &[ContextVector],
        num_select: usize,
        _rng: &mut SimRng,
    ) -> Result<SelectionResult> {
        let gamma = self.width.value(round, contexts.len(), self.state.dim())?;
        let scores = self.state.ucb_scores(gamma, contexts)?;
        select_top_m(&scores, num_select)
    }

    fn update(&mut self, observations: &[Observation]) -> Result<()> {
        let pairs: Vec<(ContextVector, f64)> = observations
            .iter()
            .map(|o| (o.context.clone(), o.reward))
            .collect();
        self.state.update(&pairs)
    }
}

/// Uniformly random selection without replacement.
#[derive(Debug, Clone, Default)]
pub struct RandomSelection;

impl SelectionStrategy for RandomSelection {
    fn name(&self) -> &'static str {
        "random"
    }

    fn choose(
        &mut self,
        _round: u64,
        contexts: &[ContextVector],
        num_select: usize,
        rng: &mut SimRng,
    ) -> Result<SelectionResult> {
        let m = contexts.len();
        if num_select == 0 || num_select > m {
            return Err(Error::invalid_argument(format!(
                "cannot select {num_select} of {m} clients"
            )));
        }
        let mut chosen: Vec<usize> = index_sample(rng, m, num_select).into_vec();
        chosen.sort_unstable();
        Ok(SelectionResult {
            chosen,
            scores: vec![0.0; m],
        })
    }

    fn update(&mut self, _observations: &[Observation]) -> Result<()> {
        Ok(())
    }
}

/// Every client, every round.
#[derive(Debug, Clone, Default)]
pub struct FullParticipation;

impl SelectionStrategy for FullParticipation {
    fn name(&self) -> &'static str {
        "full"
    }

    fn choose(
        &mut self,
        _round: u64,
        contexts: &[ContextVector],
        num_select: usize,
        _rng: &mut SimRng,
    ) -> Result<SelectionResult> {
        let m = contexts.len();
        if num_select != m {
            return Err(Error::invalid_argument(format!(
                "full participation selects all {m} clients, asked for {num_select}"
            )));
        }
        Ok(SelectionResult {
            chosen: (0..m).collect(),
            scores: vec![0.0; m],
        })
    }

    fn update(&mut self, _observations: &[Observation]) -> Result<()> {
        Ok(())
    }
}

/// Strategy selector used by config and CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    FlashTs,
    Linucb,
    Random,
    Full,
}

impl StrategyKind {
    pub fn build(
        self,
        d: usize,
        lambda: f64,
        delta: f64,
    ) -> Result<Box<dyn SelectionStrategy + Send + Sync>> {
        Ok(match self {
            StrategyKind::FlashTs => Box::new(FlashTs::new(d, lambda, delta)?),
            StrategyKind::Linucb => Box::new(PlainLinUcb::new(d, lambda, delta)?),
            StrategyKind::Random => Box::new(RandomSelection),
            StrategyKind::Full => Box::new(FullParticipation),
        })
    }
}

impl std::fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            StrategyKind::FlashTs => "flash-ts",
            StrategyKind::Linucb => "linucb",
            StrategyKind::Random => "random",
            StrategyKind::Full => "full",
        };
        f.write_str(name)
    }
}

impl std::str::FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flash-ts" => Ok(StrategyKind::FlashTs),
            "linucb" => Ok(StrategyKind::Linucb),
            "random" => Ok(StrategyKind::Random),
            "full" => Ok(StrategyKind::Full),
            other => Err(Error::config(format!(
                "unknown strategy `{other}` (expected flash-ts | linucb | random | full)"
            ))),
        }
    }
}

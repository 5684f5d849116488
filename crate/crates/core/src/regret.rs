//! Synthetic linear-bandit environment for empirical regret measurement.
//!
//! Rewards are linear in bounded contexts with Gaussian noise; an oracle with
//! the true parameters picks the best super arm each round, and the traces
//! record the gap. The point of the harness is checking that the bandit
//! selectors' cumulative regret grows sublinearly while random selection
//! stays linear.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::bandit::{select_top_m, ContextVector, RidgeState, SelectionResult};
use crate::config::RegretConfig;
use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::rng::{stream_rng, SimRng, Stream};
use crate::strategy::{
    FlashTs, Observation, PlainLinUcb, RandomSelection, SelectionStrategy, StrategyKind,
    WidthSchedule,
};

/// True reward parameters: one shared vector or one per client.
#[derive(Debug, Clone)]
pub enum ThetaStar {
    Shared(Vec<f64>),
    PerClient(Vec<Vec<f64>>),
}

/// Environment instantiating the linear-reward assumptions: bounded contexts
/// (`‖x‖₂ ≤ L`), bounded parameters (`‖θ*‖₂ = S`), Gaussian noise scale R.
#[derive(Debug, Clone)]
pub struct SyntheticEnv {
    pub d: usize,
    pub m: usize,
    pub m_select: usize,
    pub context_l: f64,
    pub noise_r: f64,
    pub theta_s: f64,
    theta: ThetaStar,
}

fn random_direction<R: Rng + ?Sized>(d: usize, norm: f64, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let len = dot(&v, &v).sqrt();
        if len > 1e-12 {
            return v.iter().map(|x| x * norm / len).collect();
        }
    }
}

impl SyntheticEnv {
    /// Shared-parameter environment; θ* is drawn on the sphere of radius S.
    pub fn new_shared(cfg: &RegretConfig, rng: &mut SimRng) -> Result<Self> {
        Self::validate(cfg)?;
        Ok(Self {
            d: cfg.d,
            m: cfg.m,
            m_select: cfg.select,
            context_l: cfg.context_l,
            noise_r: cfg.noise_r,
            theta_s: cfg.theta_s,
            theta: ThetaStar::Shared(random_direction(cfg.d, cfg.theta_s, rng)),
        })
    }

    /// Per-client parameters θ_i*, each on the sphere of radius S.
    pub fn new_per_client(cfg: &RegretConfig, rng: &mut SimRng) -> Result<Self> {
        Self::validate(cfg)?;
        let thetas = (0..cfg.m)
            .map(|_| random_direction(cfg.d, cfg.theta_s, rng))
            .collect();
        Ok(Self {
            d: cfg.d,
            m: cfg.m,
            m_select: cfg.select,
            context_l: cfg.context_l,
            noise_r: cfg.noise_r,
            theta_s: cfg.theta_s,
            theta: ThetaStar::PerClient(thetas),
        })
    }

    pub fn from_config(cfg: &RegretConfig, rng: &mut SimRng) -> Result<Self> {
        if cfg.per_client {
            Self::new_per_client(cfg, rng)
        } else {
            Self::new_shared(cfg, rng)
        }
    }

    fn validate(cfg: &RegretConfig) -> Result<()> {
        if cfg.d == 0 || cfg.m == 0 || cfg.select == 0 || cfg.select > cfg.m {
            return Err(Error::config(format!(
                "invalid regret environment shape {cfg:?}"
            )));
        }
        Ok(())
    }

    pub fn theta(&self) -> &ThetaStar {
        &self.theta
    }

    /// Fresh contexts, uniform on the radius-L ball.
    pub fn sample_contexts(&self, rng: &mut SimRng) -> Vec<ContextVector> {
        (0..self.m)
            .map(|_| {
                let radius = self.context_l * rng.gen_range(0.0f64..1.0).powf(1.0 / self.d as f64);
                ContextVector::new(random_direction(self.d, radius, rng))
                    .expect("finite by construction")
            })
            .collect()
    }

    /// Noise-free expected reward of one client.
    pub fn true_reward(&self, client: usize, context: &ContextVector) -> f64 {
        let theta = match &self.theta {
            ThetaStar::Shared(t) => t,
            ThetaStar::PerClient(ts) => &ts[client],
        };
        dot(theta, context.as_slice())
    }

    /// Noisy observation: truth plus `N(0, R²)`.
    pub fn observe(&self, client: usize, context: &ContextVector, rng: &mut SimRng) -> f64 {
        self.true_reward(client, context) + self.noise_r * rng.sample::<f64, _>(StandardNormal)
    }

    /// Analytic regret-bound value at `n` rounds, logged next to the traces:
    /// `M·log(1 + nL²/(5λ)) · (R√(d·log((1+nL²/λ)/δ)) + √λ·S)`.
    pub fn bound_value(&self, n: u64, lambda: f64, delta: f64) -> f64 {
        let n = n as f64;
        let l2 = self.context_l * self.context_l;
        let width =
            self.noise_r * (self.d as f64 * ((1.0 + n * l2 / lambda) / delta).ln()).sqrt()
                + lambda.sqrt() * self.theta_s;
        self.m_select as f64 * (1.0 + n * l2 / (5.0 * lambda)).ln() * width
    }
}

/// True-parameter oracle: top-M clients by expected reward.
///
/// For additive super-arm rewards the best size-M subset is exactly the M
/// largest per-client scores.
pub fn oracle_select(env: &SyntheticEnv, contexts: &[ContextVector]) -> SelectionResult {
    let scores: Vec<f64> = contexts
        .iter()
        .enumerate()
        .map(|(i, x)| env.true_reward(i, x))
        .collect();
    select_top_m(&scores, env.m_select).expect("oracle scores are finite")
}

/// One ridge state per client; used for the per-client θ_i* variant.
pub struct PerClientBandit {
    states: Vec<RidgeState>,
    width: WidthSchedule,
    thompson: bool,
}

impl PerClientBandit {
    pub fn new(
        m: usize,
        d: usize,
        lambda: f64,
        width: WidthSchedule,
        thompson: bool,
    ) -> Result<Self> {
        let states = (0..m)
            .map(|_| RidgeState::new(d, lambda))
            .collect::<Result<_>>()?;
        Ok(Self {
            states,
            width,
            thompson,
        })
    }
}

impl SelectionStrategy for PerClientBandit {
    fn name(&self) -> &'static str {
        if self.thompson {
            "per-client-ts"
        } else {
            "per-client-ucb"
        }
    }

    fn choose(
        &mut self,
        round: u64,
        contexts: &[ContextVector],
        num_select: usize,
        rng: &mut SimRng,
    ) -> Result<SelectionResult> {
        if contexts.len() != self.states.len() {
            return Err(Error::invalid_argument(format!(
                "{} contexts for {} per-client states",
                contexts.len(),
                self.states.len()
            )));
        }
        let d = self.states[0].dim();
        let gamma = self.width.value(round, contexts.len(), d)?;
        let mut scores = Vec::with_capacity(contexts.len());
        for (state, context) in self.states.iter().zip(contexts) {
            let score = if self.thompson {
                let theta = state.ts_sample(gamma, rng)?;
                dot(theta.as_slice(), context.as_slice())
            } else {
                state.ucb_scores(gamma, std::slice::from_ref(context))?[0]
            };
            scores.push(score);
        }
        select_top_m(&scores, num_select)
    }

    fn update(&mut self, observations: &[Observation]) -> Result<()> {
        for obs in observations {
            self.states[obs.client].update(&[(obs.context.clone(), obs.reward)])?;
        }
        Ok(())
    }
}

/// One row of a regret trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegretPoint {
    pub round: u64,
    pub instantaneous: f64,
    pub cumulative: f64,
    /// Analytic bound value at this round, for plotting against cumulative.
    pub bound: f64,
}

/// Full regret trace plus the environment constants it was measured under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretTrace {
    pub points: Vec<RegretPoint>,
    pub noise_r: f64,
    pub context_l: f64,
    pub theta_s: f64,
}

impl RegretTrace {
    pub fn cumulative_at(&self, round_count: usize) -> f64 {
        assert!(round_count >= 1 && round_count <= self.points.len());
        self.points[round_count - 1].cumulative
    }

    /// Average per-round regret over the first `round_count` rounds.
    pub fn average_regret_at(&self, round_count: usize) -> f64 {
        self.cumulative_at(round_count) / round_count as f64
    }
}

/// Build the learner a regret run uses.
fn build_learner(
    kind: StrategyKind,
    env: &SyntheticEnv,
    lambda: f64,
    delta: f64,
    per_client: bool,
) -> Result<Box<dyn SelectionStrategy + Send + Sync>> {
    // The UCB variant runs the analysis-style width; Thompson sampling keeps
    // the live selector's adaptive schedule.
    let theory = WidthSchedule::Theory {
        noise_r: env.noise_r,
        context_l: env.context_l,
        theta_s: env.theta_s,
        lambda,
        delta,
    };
    if per_client {
        return Ok(Box::new(PerClientBandit::new(
            env.m,
            env.d,
            lambda,
            match kind {
                StrategyKind::Linucb => theory,
                _ => WidthSchedule::Adaptive { lambda, delta },
            },
            kind != StrategyKind::Linucb,
        )?));
    }
    Ok(match kind {
        StrategyKind::FlashTs => Box::new(FlashTs::new(env.d, lambda, delta)?),
        StrategyKind::Linucb => Box::new(PlainLinUcb::with_width(env.d, lambda, theory)?),
        StrategyKind::Random => Box::new(RandomSelection),
        StrategyKind::Full => {
            return Err(Error::config(
                "full participation has zero regret by definition; not a harness strategy",
            ))
        }
    })
}

/// Run `n` rounds of select → observe → update against the oracle.
pub fn run_regret(
    env: &SyntheticEnv,
    kind: StrategyKind,
    n: u64,
    lambda: f64,
    delta: f64,
    per_client: bool,
    seed: u64,
) -> Result<RegretTrace> {
    let mut learner = build_learner(kind, env, lambda, delta, per_client)?;
    let mut points = Vec::with_capacity(n as usize);
    let mut cumulative = 0.0;
    for t in 0..n {
        let contexts = env.sample_contexts(&mut stream_rng(seed, Stream::Env, t, 0));
        let selection = learner.choose(
            t,
            &contexts,
            env.m_select,
            &mut stream_rng(seed, Stream::Selection, t, 0),
        )?;

        let mut noise_rng = stream_rng(seed, Stream::Env, t, 1);
        let mut chosen = selection.chosen.clone();
        chosen.sort_unstable();
        let observations: Vec<Observation> = chosen
            .iter()
            .map(|&i| Observation {
                client: i,
                context: contexts[i].clone(),
                reward: env.observe(i, &contexts[i], &mut noise_rng),
            })
            .collect();
        learner.update(&observations)?;

        let oracle = oracle_select(env, &contexts);
        // Sum both sides in ascending index order so an oracle-equal
        // selection yields exactly zero regret.
        let mut oracle_ids = oracle.chosen.clone();
        oracle_ids.sort_unstable();
        let oracle_value: f64 = oracle_ids
            .iter()
            .map(|&i| env.true_reward(i, &contexts[i]))
            .sum();
        let chosen_value: f64 = chosen
            .iter()
            .map(|&i| env.true_reward(i, &contexts[i]))
            .sum();
        // Nonnegative by construction of the oracle; clamp pure roundoff.
        let instantaneous = (oracle_value - chosen_value).max(0.0);
        cumulative += instantaneous;
        points.push(RegretPoint {
            round: t,
            instantaneous,
            cumulative,
            bound: env.bound_value(t + 1, lambda, delta),
        });
    }
    Ok(RegretTrace {
        points,
        noise_r: env.noise_r,
        context_l: env.context_l,
        theta_s: env.theta_s,
    })
}

//! Linear contextual combinatorial bandit.
//!
//! A single ridge-regression state `(V, b)` summarizes every observed
//! (context, reward) pair. Scoring draws a parameter sample from the Gaussian
//! posterior `N(θ̂, γ² V⁻¹)` (Thompson sampling) or applies a deterministic
//! optimism width (UCB); selection takes the top-M scores.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{add_outer, dot, Cholesky};

/// Per-client feature vector consumed by the bandit.
///
/// In the federated configuration this is 4-dimensional:
/// `[train robust-loss ratio, validation CE ratio, latency, previous reward]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextVector {
    features: Vec<f64>,
}

impl ContextVector {
    /// Wrap a feature vector; every entry must be finite.
    pub fn new(features: Vec<f64>) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::invalid_argument("context vector must be non-empty"));
        }
        if let Some(v) = features.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid_argument(format!(
                "context vector has non-finite entry {v}"
            )));
        }
        Ok(Self { features })
    }

    pub fn dim(&self) -> usize {
        self.features.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.features
    }
}

/// One posterior draw of the reward parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSample {
    theta: Vec<f64>,
}

impl ThetaSample {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if theta.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidState(
                "posterior sample has non-finite entries".into(),
            ));
        }
        Ok(Self { theta })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.theta
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }
}

/// Outcome of a top-M selection: chosen indices plus the full score vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    /// Chosen client indices, highest score first; ties broken by lower index.
    pub chosen: Vec<usize>,
    /// Score of every client, indexed by client id.
    pub scores: Vec<f64>,
}

/// Ridge sufficient statistics: `V = λI + Σ x xᵀ`, `b = Σ r x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RidgeState {
    v: Vec<f64>,
    b: Vec<f64>,
    lambda: f64,
    d: usize,
    observation_count: u64,
}

impl RidgeState {
    /// Fresh state `V = λI`, `b = 0`.
    pub fn new(d: usize, lambda: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid_argument("dimension must be positive"));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::invalid_argument(format!(
                "regularization strength must be positive, got {lambda}"
            )));
        }
        let mut v = vec![0.0; d * d];
        for i in 0..d {
            v[i * d + i] = lambda;
        }
        Ok(Self {
            v,
            b: vec![0.0; d],
            lambda,
            d,
            observation_count: 0,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn observation_count(&self) -> u64 {
        self.observation_count
    }

    /// Gram matrix `V` (row-major copy).
    pub fn v_matrix(&self) -> &[f64] {
        &self.v
    }

    pub fn b_vector(&self) -> &[f64] {
        &self.b
    }

    fn factor(&self) -> Result<Cholesky> {
        if self.b.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidState(
                "reward accumulator has non-finite entries".into(),
            ));
        }
        Cholesky::factor(&self.v, self.d)
    }

    /// Ridge estimate `θ̂` solving `V θ̂ = b` through the Cholesky factor.
    pub fn ridge_solve(&self) -> Result<Vec<f64>> {
        Ok(self.factor()?.solve(&self.b))
    }

    /// Ingest a batch of (context, reward) pairs:
    /// `V += Σ x xᵀ`, `b += Σ r x`.
    pub fn update(&mut self, pairs: &[(ContextVector, f64)]) -> Result<()> {
        for (x, r) in pairs {
            if x.dim() != self.d {
                return Err(Error::invalid_argument(format!(
                    "context dimension {} does not match state dimension {}",
                    x.dim(),
                    self.d
                )));
            }
            if !r.is_finite() {
                return Err(Error::invalid_argument(format!(
                    "non-finite reward {r}; caller must sanitize rewards"
                )));
            }
        }
        for (x, r) in pairs {
            add_outer(&mut self.v, x.as_slice());
            for (bi, xi) in self.b.iter_mut().zip(x.as_slice()) {
                *bi += r * xi;
            }
            self.observation_count += 1;
        }
        Ok(())
    }

    /// Draw one parameter sample from `N(θ̂, γ² V⁻¹)`.
    ///
    /// With `L Lᵀ = V` and `z` standard normal, `θ̂ + γ L⁻ᵀ z` has exactly the
    /// target covariance: `cov(L⁻ᵀz) = (L Lᵀ)⁻¹ = V⁻¹`.
    pub fn ts_sample<R: Rng + ?Sized>(&self, gamma: f64, rng: &mut R) -> Result<ThetaSample> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::invalid_argument(format!(
                "exploration width must be nonnegative, got {gamma}"
            )));
        }
        let chol = self.factor()?;
        let mean = chol.solve(&self.b);
        let z: Vec<f64> = (0..self.d).map(|_| rng.sample(StandardNormal)).collect();
        let perturb = chol.solve_lower_transpose(&z);
        let theta = mean
            .iter()
            .zip(&perturb)
            .map(|(m, p)| m + gamma * p)
            .collect();
        ThetaSample::new(theta)
    }

    /// Deterministic optimism scores `θ̂ᵀx + γ‖x‖_{V⁻¹}` for every context.
    pub fn ucb_scores(&self, gamma: f64, contexts: &[ContextVector]) -> Result<Vec<f64>> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::invalid_argument(format!(
                "exploration width must be nonnegative, got {gamma}"
            )));
        }
        let chol = self.factor()?;
        let theta = chol.solve(&self.b);
        contexts
            .iter()
            .map(|x| {
                if x.dim() != self.d {
                    return Err(Error::invalid_argument(format!(
                        "context dimension {} does not match state dimension {}",
                        x.dim(),
                        self.d
                    )));
                }
                let width = chol.inv_quad_form(x.as_slice()).sqrt();
                Ok(dot(&theta, x.as_slice()) + gamma * width)
            })
            .collect()
    }
}

/// Exploration width `γ_t = √λ + √(d ln((1 + t·m)/δ))`.
///
/// Strictly increasing in `t`; the selector recomputes it every round.
pub fn exploration_width(t: u64, m: usize, d: usize, lambda: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::config(format!(
            "confidence delta must lie in (0,1), got {delta}"
        )));
    }
    if m == 0 {
        return Err(Error::config("client count must be at least 1"));
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::config(format!(
            "regularization strength must be positive, got {lambda}"
        )));
    }
    let tm = (t as f64) * (m as f64);
    Ok(lambda.sqrt() + (d as f64 * ((1.0 + tm) / delta).ln()).sqrt())
}

/// Expected-reward scores `θᵀ x_i` for every client.
pub fn score_clients(theta: &ThetaSample, contexts: &[ContextVector]) -> Result<Vec<f64>> {
    contexts
        .iter()
        .map(|x| {
            if x.dim() != theta.dim() {
                return Err(Error::invalid_argument(format!(
                    "context dimension {} does not match parameter dimension {}",
                    x.dim(),
                    theta.dim()
                )));
            }
            Ok(dot(theta.as_slice(), x.as_slice()))
        })
        .collect()
}

/// Indices of the `m_select` largest scores; ties broken by lower index.
pub fn select_top_m(scores: &[f64], m_select: usize) -> Result<SelectionResult> {
    if m_select == 0 || m_select > scores.len() {
        return Err(Error::invalid_argument(format!(
            "cannot select {m_select} of {} clients",
            scores.len()
        )));
    }
    if let Some(v) = scores.iter().find(|v| !v.is_finite()) {
        return Err(Error::invalid_argument(format!(
            "scores contain non-finite entry {v}"
        )));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order.truncate(m_select);
    Ok(SelectionResult {
        chosen: order,
        scores: scores.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;

    use crate::rng::SimRng;

    fn ctx(v: &[f64]) -> ContextVector {
        ContextVector::new(v.to_vec()).unwrap()
    }

    /// Independent oracle: rebuild V = λI + XᵀX and b = Xᵀr densely and solve
    /// with Gaussian elimination (no Cholesky anywhere on this path).
    fn dense_ridge_oracle(xs: &[Vec<f64>], rs: &[f64], lambda: f64, d: usize) -> Vec<f64> {
        let mut v = vec![0.0; d * d];
        let mut b = vec![0.0; d];
        for i in 0..d {
            v[i * d + i] = lambda;
        }
        for (x, r) in xs.iter().zip(rs) {
            for i in 0..d {
                for j in 0..d {
                    v[i * d + j] += x[i] * x[j];
                }
                b[i] += r * x[i];
            }
        }
        // Gaussian elimination with partial pivoting.
        let mut m = vec![0.0; d * (d + 1)];
        for i in 0..d {
            m[i * (d + 1)..i * (d + 1) + d].copy_from_slice(&v[i * d..(i + 1) * d]);
            m[i * (d + 1) + d] = b[i];
        }
        for col in 0..d {
            let pivot = (col..d)
                .max_by(|&r1, &r2| {
                    m[r1 * (d + 1) + col]
                        .abs()
                        .total_cmp(&m[r2 * (d + 1) + col].abs())
                })
                .unwrap();
            for j in 0..=d {
                m.swap(col * (d + 1) + j, pivot * (d + 1) + j);
            }
            for row in (col + 1)..d {
                let f = m[row * (d + 1) + col] / m[col * (d + 1) + col];
                for j in col..=d {
                    m[row * (d + 1) + j] -= f * m[col * (d + 1) + j];
                }
            }
        }
        let mut out = vec![0.0; d];
        for i in (0..d).rev() {
            let mut sum = m[i * (d + 1) + d];
            for j in (i + 1)..d {
                sum -= m[i * (d + 1) + j] * out[j];
            }
            out[i] = sum / m[i * (d + 1) + i];
        }
        out
    }

    fn random_pairs(n: usize, d: usize, seed: u64) -> Vec<(ContextVector, f64)> {
        use rand::Rng;
        let mut rng = SimRng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let r = rng.gen_range(-1.0..1.0);
                (ctx(&x), r)
            })
            .collect()
    }

    #[test]
    fn ridge_single_basis_observation() {
        // (I + e1 e1ᵀ)⁻¹ e1 = e1 / 2
        let mut state = RidgeState::new(4, 1.0).unwrap();
        state
            .update(&[(ctx(&[1.0, 0.0, 0.0, 0.0]), 1.0)])
            .unwrap();
        let theta = state.ridge_solve().unwrap();
        assert_relative_eq!(theta[0], 0.5, epsilon = 1e-14);
        for v in &theta[1..] {
            assert_relative_eq!(*v, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn ridge_no_observations_is_zero() {
        for lambda in [0.1, 1.0, 25.0] {
            let state = RidgeState::new(3, lambda).unwrap();
            assert_eq!(state.ridge_solve().unwrap(), vec![0.0; 3]);
        }
    }

    #[test]
    fn ridge_matches_dense_oracle() {
        let pairs = random_pairs(20, 4, 11);
        let mut state = RidgeState::new(4, 1.0).unwrap();
        state.update(&pairs).unwrap();
        let theta = state.ridge_solve().unwrap();
        let xs: Vec<Vec<f64>> = pairs.iter().map(|(x, _)| x.as_slice().to_vec()).collect();
        let rs: Vec<f64> = pairs.iter().map(|(_, r)| *r).collect();
        let expect = dense_ridge_oracle(&xs, &rs, 1.0, 4);
        for (got, want) in theta.iter().zip(&expect) {
            assert_relative_eq!(got, want, max_relative = 1e-8);
        }
    }

    #[test]
    fn width_round_zero_value() {
        let g0 = exploration_width(0, 50, 4, 1.0, 0.05).unwrap();
        assert_relative_eq!(g0, 4.46163676520457, epsilon = 1e-10);
        assert!((g0 - 4.4617).abs() < 1e-3);
    }

    #[test]
    fn width_degenerate_delta_near_one() {
        let g = exploration_width(0, 50, 1, 1.0, 1.0 - 1e-12).unwrap();
        assert_relative_eq!(g, 1.0, epsilon = 1e-5);
    }

    #[test]
    fn width_increases_with_round() {
        let g10 = exploration_width(10, 50, 4, 1.0, 0.05).unwrap();
        let g100 = exploration_width(100, 50, 4, 1.0, 0.05).unwrap();
        assert!(g100 > g10);
    }

    #[test]
    fn width_rejects_bad_delta() {
        assert!(exploration_width(0, 50, 4, 1.0, 0.0).is_err());
        assert!(exploration_width(0, 50, 4, 1.0, 1.0).is_err());
        assert!(exploration_width(0, 50, 4, 1.0, 1.5).is_err());
    }

    #[test]
    fn ts_sample_gamma_zero_is_ridge_mean() {
        let pairs = random_pairs(10, 4, 3);
        let mut state = RidgeState::new(4, 1.0).unwrap();
        state.update(&pairs).unwrap();
        let mut rng = SimRng::seed_from_u64(0);
        let sample = state.ts_sample(0.0, &mut rng).unwrap();
        let mean = state.ridge_solve().unwrap();
        assert_eq!(sample.as_slice(), mean.as_slice());
    }

    #[test]
    fn ts_sample_deterministic_given_seed() {
        let mut state = RidgeState::new(4, 1.0).unwrap();
        state.update(&random_pairs(5, 4, 9)).unwrap();
        let copy = state.clone();
        let a = state
            .ts_sample(2.0, &mut SimRng::seed_from_u64(42))
            .unwrap();
        let b = copy.ts_sample(2.0, &mut SimRng::seed_from_u64(42)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn ts_sample_covariance_monte_carlo() {
        // V = λI with no data: covariance of draws should approach (1/λ)I.
        let lambda = 1.0;
        let state = RidgeState::new(4, lambda).unwrap();
        let mut rng = SimRng::seed_from_u64(1234);
        let n = 100_000;
        let mut sum = vec![0.0; 4];
        let mut cov = vec![0.0; 16];
        let mut draws = Vec::with_capacity(n);
        for _ in 0..n {
            let s = state.ts_sample(1.0, &mut rng).unwrap();
            for i in 0..4 {
                sum[i] += s.as_slice()[i];
            }
            draws.push(s);
        }
        let mean: Vec<f64> = sum.iter().map(|v| v / n as f64).collect();
        for s in &draws {
            for i in 0..4 {
                for j in 0..4 {
                    cov[i * 4 + j] +=
                        (s.as_slice()[i] - mean[i]) * (s.as_slice()[j] - mean[j]);
                }
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                let emp = cov[i * 4 + j] / n as f64;
                let expect = if i == j { 1.0 / lambda } else { 0.0 };
                assert!(
                    (emp - expect).abs() < 0.02,
                    "cov[{i},{j}] = {emp}, want {expect}"
                );
            }
        }
    }

    #[test]
    fn score_clients_examples() {
        let theta = ThetaSample::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let scores = score_clients(&theta, &[ctx(&[3.0, 9.0, 9.0, 9.0])]).unwrap();
        assert_relative_eq!(scores[0], 3.0);

        let zero = ThetaSample::new(vec![0.0; 4]).unwrap();
        let scores = score_clients(&zero, &[ctx(&[1.0, 2.0, 3.0, 4.0])]).unwrap();
        assert_eq!(scores, vec![0.0]);

        let theta = ThetaSample::new(vec![1.0, 2.0, 0.0, 0.0]).unwrap();
        let scores = score_clients(&theta, &[ctx(&[0.5, 0.25, 0.0, 0.0])]).unwrap();
        assert_relative_eq!(scores[0], 1.0);
    }

    #[test]
    fn score_clients_dimension_mismatch() {
        let theta = ThetaSample::new(vec![1.0, 0.0]).unwrap();
        assert!(score_clients(&theta, &[ctx(&[1.0, 2.0, 3.0])]).is_err());
    }

    #[test]
    fn ucb_gamma_zero_reduces_to_mean_scores() {
        let mut state = RidgeState::new(4, 1.0).unwrap();
        state.update(&random_pairs(15, 4, 5)).unwrap();
        let contexts: Vec<ContextVector> = random_pairs(6, 4, 6)
            .into_iter()
            .map(|(x, _)| x)
            .collect();
        let ucb = state.ucb_scores(0.0, &contexts).unwrap();
        let theta = ThetaSample::new(state.ridge_solve().unwrap()).unwrap();
        let mean = score_clients(&theta, &contexts).unwrap();
        for (a, b) in ucb.iter().zip(&mean) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn ucb_identity_unit_vector() {
        // V = I, θ̂ = 0, x = e1, γ = 2 → score 2.
        let state = RidgeState::new(4, 1.0).unwrap();
        let scores = state
            .ucb_scores(2.0, &[ctx(&[1.0, 0.0, 0.0, 0.0])])
            .unwrap();
        assert_relative_eq!(scores[0], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn ucb_width_shrinks_along_observed_direction() {
        // Dense-oracle comparison of √(e1ᵀ V⁻¹ e1) before/after ingesting e1.
        let e1 = [1.0, 0.0, 0.0, 0.0];
        let mut state = RidgeState::new(4, 1.0).unwrap();
        let width_at = |s: &RidgeState| {
            let chol = Cholesky::factor(s.v_matrix(), 4).unwrap();
            chol.inv_quad_form(&e1).sqrt()
        };
        let mut prev = width_at(&state);
        assert_relative_eq!(prev, 1.0, epsilon = 1e-12); // 1/√λ with λ=1
        for _ in 0..5 {
            state.update(&[(ctx(&e1), 0.3)]).unwrap();
            let now = width_at(&state);
            assert!(now < prev, "width must shrink: {now} !< {prev}");
            // Dense closed form: e1ᵀ diag(1/(λ+k),...)e1 after k rank-1 hits.
            prev = now;
        }
        let k = state.observation_count() as f64;
        assert_relative_eq!(prev, (1.0 / (1.0 + k)).sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn update_empty_is_identity() {
        let mut state = RidgeState::new(4, 2.0).unwrap();
        let before = state.clone();
        state.update(&[]).unwrap();
        assert_eq!(state, before);
    }

    #[test]
    fn update_rank_one_arithmetic() {
        let lambda = 2.5;
        let mut state = RidgeState::new(4, lambda).unwrap();
        state
            .update(&[(ctx(&[1.0, 0.0, 0.0, 0.0]), 1.0)])
            .unwrap();
        let v = state.v_matrix();
        assert_relative_eq!(v[0], lambda + 1.0);
        for i in 1..4 {
            assert_relative_eq!(v[i * 4 + i], lambda);
        }
        assert_eq!(state.b_vector(), &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(state.observation_count(), 1);
    }

    #[test]
    fn update_rejects_non_finite_reward() {
        let mut state = RidgeState::new(2, 1.0).unwrap();
        let err = state.update(&[(ctx(&[1.0, 0.0]), f64::NAN)]);
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn incremental_matches_batch_recomputation() {
        let pairs = random_pairs(50, 4, 77);
        let mut incremental = RidgeState::new(4, 1.0).unwrap();
        for p in &pairs {
            incremental.update(std::slice::from_ref(p)).unwrap();
        }
        // Batch oracle: one-shot recomputation from the full design matrix.
        let mut v = vec![0.0; 16];
        let mut b = vec![0.0; 4];
        for i in 0..4 {
            v[i * 4 + i] = 1.0;
        }
        for (x, r) in &pairs {
            add_outer(&mut v, x.as_slice());
            for i in 0..4 {
                b[i] += r * x.as_slice()[i];
            }
        }
        for (got, want) in incremental.v_matrix().iter().zip(&v) {
            assert!((got - want).abs() <= 1e-10);
        }
        for (got, want) in incremental.b_vector().iter().zip(&b) {
            assert!((got - want).abs() <= 1e-10);
        }
    }

    #[test]
    fn spd_preserved_after_updates() {
        // Smallest eigenvalue of V stays ≥ λ: V − (λ − ε)I must stay PD.
        let lambda = 0.5;
        let mut state = RidgeState::new(4, lambda).unwrap();
        state.update(&random_pairs(40, 4, 21)).unwrap();
        let mut shifted = state.v_matrix().to_vec();
        for i in 0..4 {
            shifted[i * 4 + i] -= lambda - 1e-9;
        }
        assert!(Cholesky::factor(&shifted, 4).is_ok());
    }

    #[test]
    fn estimator_consistency_under_noise() {
        use rand::Rng;
        let theta_star = [0.8, -0.4, 0.2, 0.6];
        let mut rng = SimRng::seed_from_u64(2024);
        let mut state = RidgeState::new(4, 1.0).unwrap();
        for _ in 0..500 {
            let x: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let noise: f64 = rng.sample::<f64, _>(StandardNormal) * 0.1;
            let r = dot(&theta_star, &x) + noise;
            state.update(&[(ctx(&x), r)]).unwrap();
        }
        let theta = state.ridge_solve().unwrap();
        let err: f64 = theta
            .iter()
            .zip(&theta_star)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        assert!(err < 0.1, "estimation error {err} not below 0.1");
    }

    #[test]
    fn select_top_m_examples() {
        let r = select_top_m(&[0.1, 0.9, 0.5], 2).unwrap();
        assert_eq!(r.chosen, vec![1, 2]);

        let r = select_top_m(&[0.3, 0.3, 0.3], 2).unwrap();
        assert_eq!(r.chosen, vec![0, 1]);

        assert!(select_top_m(&[0.1, 0.2], 3).is_err());
        assert!(select_top_m(&[0.1, 0.2], 0).is_err());
    }

    proptest! {
        #[test]
        fn select_top_m_matches_sort_oracle(
            scores in proptest::collection::vec(-100.0f64..100.0, 5..50),
            m_sel in 1usize..5,
        ) {
            let m_sel = m_sel.min(scores.len());
            let result = select_top_m(&scores, m_sel).unwrap();
            // Full-sort oracle with identical tie-break.
            let mut order: Vec<usize> = (0..scores.len()).collect();
            order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
            prop_assert_eq!(&result.chosen, &order[..m_sel]);
        }

        #[test]
        fn select_top_m_invariant_under_positive_scaling(
            scores in proptest::collection::vec(-10.0f64..10.0, 3..30),
            scale in 0.001f64..1000.0,
        ) {
            let base = select_top_m(&scores, 2).unwrap();
            let scaled: Vec<f64> = scores.iter().map(|s| s * scale).collect();
            let result = select_top_m(&scaled, 2).unwrap();
            prop_assert_eq!(base.chosen, result.chosen);
        }

        #[test]
        fn incremental_batch_equivalence_any_sequence(
            seed in 0u64..1000,
            n in 1usize..40,
        ) {
            let pairs = random_pairs(n, 4, seed);
            let mut step = RidgeState::new(4, 1.0).unwrap();
            for p in &pairs {
                step.update(std::slice::from_ref(p)).unwrap();
            }
            let mut batch = RidgeState::new(4, 1.0).unwrap();
            batch.update(&pairs).unwrap();
            for (a, b) in step.v_matrix().iter().zip(batch.v_matrix()) {
                prop_assert!((a - b).abs() <= 1e-10);
            }
            for (a, b) in step.b_vector().iter().zip(batch.b_vector()) {
                prop_assert!((a - b).abs() <= 1e-10);
            }
        }
    }
}

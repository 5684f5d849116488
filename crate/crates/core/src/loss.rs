//! Noise-robust training losses.
//!
//! Cross-entropy, reverse cross-entropy with the `log 0 := A` convention, and
//! their weighted combination with a soft-pseudo-label CE term:
//!
//! `L_robust = L_CE(train) + α·L_CE(pseudo) + β·L_RCE(train)`
//!
//! Gradients are taken with respect to pre-softmax logits, which is what the
//! local trainer consumes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Floor applied to predicted probabilities before a log.
pub const PROB_CLIP: f64 = 1e-12;

/// A probability distribution over `K` classes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    probs: Vec<f64>,
}

impl ProbVector {
    /// Validate entries in `[0,1]` summing to 1 within 1e-6.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::invalid_argument("probability vector is empty"));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0 || *p > 1.0) {
            return Err(Error::invalid_argument(
                "probability entries must lie in [0,1]",
            ));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-6 {
            return Err(Error::invalid_argument(format!(
                "probabilities sum to {sum}, not 1"
            )));
        }
        Ok(Self { probs })
    }

    /// Degenerate one-hot distribution.
    pub fn one_hot(num_classes: usize, class: usize) -> Result<Self> {
        if class >= num_classes {
            return Err(Error::invalid_argument(format!(
                "class {class} out of range for {num_classes} classes"
            )));
        }
        let mut probs = vec![0.0; num_classes];
        probs[class] = 1.0;
        Ok(Self { probs })
    }

    pub fn num_classes(&self) -> usize {
        self.probs.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    /// The hot index if this is exactly one-hot.
    pub fn one_hot_class(&self) -> Option<usize> {
        let mut hot = None;
        for (k, &p) in self.probs.iter().enumerate() {
            if p == 1.0 {
                if hot.is_some() {
                    return None;
                }
                hot = Some(k);
            } else if p != 0.0 {
                return None;
            }
        }
        hot
    }

    /// Index of the largest entry; ties broken by lower class index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (k, &p) in self.probs.iter().enumerate() {
            if p > self.probs[best] {
                best = k;
            }
        }
        best
    }
}

/// Weights of the robust loss combination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobustLossConfig {
    /// Pseudo-label CE weight α ≥ 0.
    pub alpha: f64,
    /// Reverse-CE weight β ≥ 0.
    pub beta: f64,
    /// Log-zero surrogate A < 0.
    pub a: f64,
}

impl RobustLossConfig {
    pub fn new(alpha: f64, beta: f64, a: f64) -> Result<Self> {
        let cfg = Self { alpha, beta, a };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::config(format!(
                "loss alpha must be nonnegative, got {}",
                self.alpha
            )));
        }
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(Error::config(format!(
                "loss beta must be nonnegative, got {}",
                self.beta
            )));
        }
        if !(self.a.is_finite() && self.a < 0.0) {
            return Err(Error::config(format!(
                "log-zero surrogate A must be strictly negative, got {}",
                self.a
            )));
        }
        Ok(())
    }
}

impl Default for RobustLossConfig {
    fn default() -> Self {
        Self {
            alpha: 0.1,
            beta: 4.0,
            a: -4.0,
        }
    }
}

fn check_paired(predictions: &[ProbVector], labels: &[ProbVector]) -> Result<()> {
    if predictions.is_empty() {
        return Err(Error::invalid_argument("empty dataset"));
    }
    if predictions.len() != labels.len() {
        return Err(Error::invalid_argument(format!(
            "{} predictions vs {} labels",
            predictions.len(),
            labels.len()
        )));
    }
    for (p, y) in predictions.iter().zip(labels) {
        if p.num_classes() != y.num_classes() {
            return Err(Error::invalid_argument(
                "prediction/label class-count mismatch",
            ));
        }
    }
    Ok(())
}

/// Mean cross-entropy `−(1/n) Σᵢ Σₖ yₖ log pₖ`; labels may be soft or one-hot.
pub fn cross_entropy(predictions: &[ProbVector], labels: &[ProbVector]) -> Result<f64> {
    check_paired(predictions, labels)?;
    let mut total = 0.0;
    for (p, y) in predictions.iter().zip(labels) {
        for (pk, yk) in p.as_slice().iter().zip(y.as_slice()) {
            total -= yk * pk.max(PROB_CLIP).ln();
        }
    }
    Ok(total / predictions.len() as f64)
}

/// Mean reverse cross-entropy over one-hot labels: `−A·(1 − p_y)`.
///
/// Equivalent to swapping prediction and label roles in the CE sum with the
/// conventions `log 0 := A` and `log 1 = 0`; the one-hot restriction is what
/// makes the closed form exact.
pub fn reverse_cross_entropy(
    predictions: &[ProbVector],
    labels: &[ProbVector],
    a: f64,
) -> Result<f64> {
    check_paired(predictions, labels)?;
    if !(a.is_finite() && a < 0.0) {
        return Err(Error::invalid_argument(format!(
            "log-zero surrogate A must be strictly negative, got {a}"
        )));
    }
    let mut total = 0.0;
    for (p, y) in predictions.iter().zip(labels) {
        let class = y.one_hot_class().ok_or_else(|| {
            Error::invalid_argument("reverse cross-entropy requires strictly one-hot labels")
        })?;
        total += -a * (1.0 - p.as_slice()[class]);
    }
    Ok(total / predictions.len() as f64)
}

/// The robust loss and its components, reported separately for logging.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobustLossParts {
    pub ce_train: f64,
    pub ce_pseudo: f64,
    pub rce_train: f64,
    pub total: f64,
}

/// Weighted combination `CE(T) + α·CE(P) + β·RCE(T)`.
pub fn robust_loss(
    train_preds: &[ProbVector],
    train_labels: &[ProbVector],
    pseudo_preds: &[ProbVector],
    pseudo_labels: &[ProbVector],
    config: &RobustLossConfig,
) -> Result<RobustLossParts> {
    config.validate()?;
    let ce_train = cross_entropy(train_preds, train_labels)?;
    let ce_pseudo = cross_entropy(pseudo_preds, pseudo_labels)?;
    let rce_train = reverse_cross_entropy(train_preds, train_labels, config.a)?;
    Ok(RobustLossParts {
        ce_train,
        ce_pseudo,
        rce_train,
        total: ce_train + config.alpha * ce_pseudo + config.beta * rce_train,
    })
}

/// Freeze model outputs into soft pseudo-labels.
///
/// The copies are treated as constants by the local trainer; mutating the
/// model afterwards does not touch them.
pub fn make_pseudo_labels(model_outputs: &[ProbVector]) -> Vec<ProbVector> {
    model_outputs.to_vec()
}

/// Numerically stable softmax.
pub fn softmax(logits: &[f64]) -> ProbVector {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|z| (z - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    ProbVector {
        probs: exps.iter().map(|e| e / sum).collect(),
    }
}

/// Per-sample CE gradient w.r.t. logits: `p − y` (valid for soft labels).
pub fn ce_logit_grad(probs: &ProbVector, label: &ProbVector) -> Vec<f64> {
    probs
        .as_slice()
        .iter()
        .zip(label.as_slice())
        .map(|(p, y)| p - y)
        .collect()
}

/// Per-sample RCE gradient w.r.t. logits.
///
/// With `L = −A(1 − p_y)` and `p = softmax(z)`:
/// `∂L/∂z_j = A·p_y·(δ_{jy} − p_j)`.
pub fn rce_logit_grad(probs: &ProbVector, label: &ProbVector, a: f64) -> Result<Vec<f64>> {
    let class = label.one_hot_class().ok_or_else(|| {
        Error::invalid_argument("reverse cross-entropy requires strictly one-hot labels")
    })?;
    let p = probs.as_slice();
    let py = p[class];
    Ok(p.iter()
        .enumerate()
        .map(|(j, pj)| {
            let delta = if j == class { 1.0 } else { 0.0 };
            a * py * (delta - pj)
        })
        .collect())
}

/// Per-sample robust-loss gradient w.r.t. logits.
pub fn robust_logit_grad(
    probs: &ProbVector,
    label: &ProbVector,
    pseudo_label: &ProbVector,
    config: &RobustLossConfig,
) -> Result<Vec<f64>> {
    let ce = ce_logit_grad(probs, label);
    let ce_pseudo = ce_logit_grad(probs, pseudo_label);
    let rce = rce_logit_grad(probs, label, config.a)?;
    Ok(ce
        .iter()
        .zip(&ce_pseudo)
        .zip(&rce)
        .map(|((g1, g2), g3)| g1 + config.alpha * g2 + config.beta * g3)
        .collect())
}

//! Small gradient-trained classifier standing in for a deep model at desk
//! scale: multinomial logistic regression by default, optionally one hidden
//! tanh layer. Training minimizes the robust loss with seeded mini-batch
//! shuffling, so runs are bit-reproducible.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::loss::{self, ProbVector, RobustLossConfig};

/// Network shape: `input_dim → [hidden] → num_classes`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Architecture {
    pub input_dim: usize,
    /// Hidden width; `None` is plain logistic regression.
    pub hidden: Option<usize>,
    pub num_classes: usize,
}

impl Architecture {
    pub fn param_count(&self) -> usize {
        match self.hidden {
            None => self.num_classes * (self.input_dim + 1),
            Some(h) => h * (self.input_dim + 1) + self.num_classes * (h + 1),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.input_dim == 0 || self.num_classes < 2 || self.hidden == Some(0) {
            return Err(Error::invalid_argument(format!(
                "invalid architecture {self:?}"
            )));
        }
        Ok(())
    }
}

/// Flat parameter vector plus its architecture descriptor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    arch: Architecture,
    weights: Vec<f64>,
}

impl ModelParams {
    /// All-zero weights (uniform predictions).
    pub fn zeros(arch: Architecture) -> Result<Self> {
        arch.validate()?;
        Ok(Self {
            weights: vec![0.0; arch.param_count()],
            arch,
        })
    }

    /// Gaussian init scaled by `scale`; use for the hidden-layer variant.
    pub fn init<R: Rng + ?Sized>(arch: Architecture, scale: f64, rng: &mut R) -> Result<Self> {
        arch.validate()?;
        let weights = (0..arch.param_count())
            .map(|_| scale * rng.sample::<f64, _>(rand_distr::StandardNormal))
            .collect();
        Ok(Self { arch, weights })
    }

    pub fn from_weights(arch: Architecture, weights: Vec<f64>) -> Result<Self> {
        arch.validate()?;
        if weights.len() != arch.param_count() {
            return Err(Error::invalid_argument(format!(
                "weight vector length {} does not match architecture ({} params)",
                weights.len(),
                arch.param_count()
            )));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidState("non-finite model weights".into()));
        }
        Ok(Self { arch, weights })
    }

    pub fn arch(&self) -> Architecture {
        self.arch
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn logits(&self, input: &[f64]) -> (Vec<f64>, Option<Vec<f64>>) {
        let k = self.arch.num_classes;
        let din = self.arch.input_dim;
        match self.arch.hidden {
            None => {
                let w = &self.weights[..k * din];
                let bias = &self.weights[k * din..];
                let mut z = vec![0.0; k];
                for c in 0..k {
                    z[c] = bias[c]
                        + w[c * din..(c + 1) * din]
                            .iter()
                            .zip(input)
                            .map(|(a, b)| a * b)
                            .sum::<f64>();
                }
                (z, None)
            }
            Some(h) => {
                let w1 = &self.weights[..h * din];
                let b1 = &self.weights[h * din..h * din + h];
                let off = h * din + h;
                let w2 = &self.weights[off..off + k * h];
                let b2 = &self.weights[off + k * h..];
                let mut act = vec![0.0; h];
                for j in 0..h {
                    let pre = b1[j]
                        + w1[j * din..(j + 1) * din]
                            .iter()
                            .zip(input)
                            .map(|(a, b)| a * b)
                            .sum::<f64>();
                    act[j] = pre.tanh();
                }
                let mut z = vec![0.0; k];
                for c in 0..k {
                    z[c] = b2[c]
                        + w2[c * h..(c + 1) * h]
                            .iter()
                            .zip(&act)
                            .map(|(a, b)| a * b)
                            .sum::<f64>();
                }
                (z, Some(act))
            }
        }
    }

    /// Softmax class probabilities for each input row.
    pub fn forward(&self, inputs: &[Vec<f64>]) -> Result<Vec<ProbVector>> {
        inputs
            .iter()
            .map(|x| {
                if x.len() != self.arch.input_dim {
                    return Err(Error::invalid_argument(format!(
                        "input dimension {} does not match model input {}",
                        x.len(),
                        self.arch.input_dim
                    )));
                }
                Ok(loss::softmax(&self.logits(x).0))
            })
            .collect()
    }

    /// Accumulate parameter gradients for one sample given its logit gradient.
    fn accumulate_grad(
        &self,
        input: &[f64],
        hidden_act: Option<&[f64]>,
        logit_grad: &[f64],
        grad: &mut [f64],
    ) {
        let k = self.arch.num_classes;
        let din = self.arch.input_dim;
        match self.arch.hidden {
            None => {
                for c in 0..k {
                    let g = logit_grad[c];
                    for (slot, xi) in grad[c * din..(c + 1) * din].iter_mut().zip(input) {
                        *slot += g * xi;
                    }
                    grad[k * din + c] += g;
                }
            }
            Some(h) => {
                let act = hidden_act.expect("hidden activations required");
                let off = h * din + h;
                let w2 = &self.weights[off..off + k * h];
                // Output layer.
                for c in 0..k {
                    let g = logit_grad[c];
                    for (slot, aj) in grad[off + c * h..off + (c + 1) * h].iter_mut().zip(act)
                    {
                        *slot += g * aj;
                    }
                    grad[off + k * h + c] += g;
                }
                // Backprop through tanh.
                for j in 0..h {
                    let mut da = 0.0;
                    for c in 0..k {
                        da += w2[c * h + j] * logit_grad[c];
                    }
                    let dpre = da * (1.0 - act[j] * act[j]);
                    for (slot, xi) in grad[j * din..(j + 1) * din].iter_mut().zip(input) {
                        *slot += dpre * xi;
                    }
                    grad[h * din + j] += dpre;
                }
            }
        }
    }
}

/// Mini-batch optimizer settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub kind: OptimizerKind,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub epochs: usize,
    pub batch_size: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerKind {
    Sgd,
    Adam,
}

impl std::str::FromStr for OptimizerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sgd" => Ok(OptimizerKind::Sgd),
            "adam" => Ok(OptimizerKind::Adam),
            other => Err(Error::config(format!(
                "unknown optimizer `{other}` (expected sgd | adam)"
            ))),
        }
    }
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            kind: OptimizerKind::Adam,
            learning_rate: 0.05,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            epochs: 5,
            batch_size: 32,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate >= 0.0) {
            return Err(Error::config(format!(
                "learning rate must be nonnegative, got {}",
                self.learning_rate
            )));
        }
        if self.epochs == 0 {
            return Err(Error::config("epochs must be at least 1"));
        }
        if self.batch_size == 0 {
            return Err(Error::config("batch size must be at least 1"));
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return Err(Error::config(
                "moment coefficients must lie in [0,1)",
            ));
        }
        Ok(())
    }
}

/// Robust loss of `params` on `(features, labels)` with the given frozen
/// pseudo-labels, together with the parameter gradient.
pub fn robust_loss_and_grad(
    params: &ModelParams,
    features: &[Vec<f64>],
    labels: &[usize],
    pseudo_labels: &[ProbVector],
    cfg: &RobustLossConfig,
) -> Result<(f64, Vec<f64>)> {
    if features.is_empty() {
        return Err(Error::invalid_argument("empty batch"));
    }
    if features.len() != labels.len() || features.len() != pseudo_labels.len() {
        return Err(Error::invalid_argument(
            "features, labels, and pseudo-labels must have equal length",
        ));
    }
    let k = params.arch().num_classes;
    let n = features.len() as f64;
    let mut grad = vec![0.0; params.arch().param_count()];
    let mut total = 0.0;
    for ((x, &y), pseudo) in features.iter().zip(labels).zip(pseudo_labels) {
        let (z, act) = params.logits(x);
        let p = loss::softmax(&z);
        let label = ProbVector::one_hot(k, y)?;
        let parts = loss::robust_loss(
            std::slice::from_ref(&p),
            std::slice::from_ref(&label),
            std::slice::from_ref(&p),
            std::slice::from_ref(pseudo),
            cfg,
        )?;
        total += parts.total;
        let mut logit_grad = loss::robust_logit_grad(&p, &label, pseudo, cfg)?;
        for g in &mut logit_grad {
            *g /= n;
        }
        params.accumulate_grad(x, act.as_deref(), &logit_grad, &mut grad);
    }
    Ok((total / n, grad))
}

/// Run `epochs` passes of mini-batch steps on the robust loss.
///
/// Pseudo-labels are generated once from the incoming parameters and held
/// fixed for every epoch. `round` and `client` only annotate divergence
/// errors.
pub fn local_training<R: Rng + ?Sized>(
    params: &ModelParams,
    features: &[Vec<f64>],
    labels: &[usize],
    loss_cfg: &RobustLossConfig,
    opt: &OptimizerConfig,
    rng: &mut R,
    round: u64,
    client: usize,
) -> Result<ModelParams> {
    opt.validate()?;
    loss_cfg.validate()?;
    if features.is_empty() {
        return Err(Error::invalid_argument("training set is empty"));
    }
    let pseudo_labels = loss::make_pseudo_labels(&params.forward(features)?);

    let mut current = params.clone();
    let n_params = current.arch().param_count();
    let mut m1 = vec![0.0; n_params];
    let mut m2 = vec![0.0; n_params];
    let mut step = 0u64;

    let mut order: Vec<usize> = (0..features.len()).collect();
    for epoch in 0..opt.epochs {
        order.shuffle(rng);
        for batch in order.chunks(opt.batch_size) {
            let bx: Vec<Vec<f64>> = batch.iter().map(|&i| features[i].clone()).collect();
            let by: Vec<usize> = batch.iter().map(|&i| labels[i]).collect();
            let bp: Vec<ProbVector> = batch.iter().map(|&i| pseudo_labels[i].clone()).collect();
            let (loss_value, grad) =
                robust_loss_and_grad(&current, &bx, &by, &bp, loss_cfg)?;
            if !loss_value.is_finite() {
                return Err(Error::TrainingDiverged {
                    round,
                    epoch,
                    client,
                });
            }
            step += 1;
            match opt.kind {
                OptimizerKind::Sgd => {
                    for (w, g) in current.weights.iter_mut().zip(&grad) {
                        *w -= opt.learning_rate * g;
                    }
                }
                OptimizerKind::Adam => {
                    let bc1 = 1.0 - opt.beta1.powi(step as i32);
                    let bc2 = 1.0 - opt.beta2.powi(step as i32);
                    for i in 0..n_params {
                        m1[i] = opt.beta1 * m1[i] + (1.0 - opt.beta1) * grad[i];
                        m2[i] = opt.beta2 * m2[i] + (1.0 - opt.beta2) * grad[i] * grad[i];
                        let mhat = m1[i] / bc1;
                        let vhat = m2[i] / bc2;
                        current.weights[i] -=
                            opt.learning_rate * mhat / (vhat.sqrt() + opt.epsilon);
                    }
                }
            }
        }
    }
    Ok(current)
}

/// Mean CE against true labels and top-1 accuracy (argmax ties go to the
/// lower class index).
pub fn evaluate(
    params: &ModelParams,
    features: &[Vec<f64>],
    labels: &[usize],
) -> Result<(f64, f64)> {
    if features.is_empty() {
        return Err(Error::invalid_argument("evaluation set is empty"));
    }
    if features.len() != labels.len() {
        return Err(Error::invalid_argument(
            "features and labels must have equal length",
        ));
    }
    let k = params.arch().num_classes;
    let preds = params.forward(features)?;
    let label_vecs: Vec<ProbVector> = labels
        .iter()
        .map(|&y| ProbVector::one_hot(k, y))
        .collect::<Result<_>>()?;
    let ce = loss::cross_entropy(&preds, &label_vecs)?;
    let correct = preds
        .iter()
        .zip(labels)
        .filter(|(p, &y)| p.argmax() == y)
        .count();
    Ok((ce, correct as f64 / labels.len() as f64))
}

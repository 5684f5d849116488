//! Experiment configuration: a TOML file of flat `key = value` pairs in
//! nested sections, mirrored 1:1 by CLI flags. Unknown keys are rejected and
//! every numeric range is validated before any work starts.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dataset::BlobsConfig;
use crate::error::{Error, Result};
use crate::hetero::LatencyModel;
use crate::loss::RobustLossConfig;
use crate::model::OptimizerConfig;
use crate::strategy::StrategyKind;

/// What to run: the federated simulation or the synthetic regret harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Fedsim,
    Regret,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fedsim" => Ok(Mode::Fedsim),
            "regret" => Ok(Mode::Regret),
            other => Err(Error::config(format!(
                "unknown mode `{other}` (expected fedsim | regret)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetSource {
    Blobs,
    File,
}

impl std::str::FromStr for DatasetSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "blobs" => Ok(DatasetSource::Blobs),
            "file" => Ok(DatasetSource::File),
            other => Err(Error::config(format!(
                "unknown dataset source `{other}` (expected blobs | file)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DatasetConfig {
    pub source: DatasetSource,
    /// Sample file path; required when `source = "file"`.
    pub path: Option<PathBuf>,
    pub samples: usize,
    pub input_dim: usize,
    pub classes: usize,
    pub center_spread: f64,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        Self {
            source: DatasetSource::Blobs,
            path: None,
            samples: 5000,
            input_dim: 8,
            classes: 10,
            center_spread: 3.0,
        }
    }
}

impl DatasetConfig {
    pub fn blobs(&self) -> BlobsConfig {
        BlobsConfig {
            samples: self.samples,
            input_dim: self.input_dim,
            num_classes: self.classes,
            center_spread: self.center_spread,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClientConfig {
    /// Number of clients `m`.
    pub count: usize,
    /// `M_t = round(select_fraction · m)`, clamped to at least 1.
    pub select_fraction: f64,
    /// Per-client validation share of local data.
    pub val_fraction: f64,
    /// IID server-side validation pool share of the source dataset.
    pub server_val_fraction: f64,
    /// Held-out global test share of the source dataset.
    pub test_fraction: f64,
}

impl Default for ClientConfig {
    fn default() -> Self {
        Self {
            count: 50,
            select_fraction: 0.2,
            val_fraction: 0.2,
            server_val_fraction: 0.1,
            test_fraction: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionKind {
    FractionSkew,
    Dirichlet,
}

impl std::str::FromStr for PartitionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fraction-skew" => Ok(PartitionKind::FractionSkew),
            "dirichlet" => Ok(PartitionKind::Dirichlet),
            other => Err(Error::config(format!(
                "unknown partition kind `{other}` (expected fraction-skew | dirichlet)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PartitionConfig {
    pub kind: PartitionKind,
    /// Share of clients given the 80/20 dominant-class profile.
    pub skew_fraction: f64,
    pub dirichlet_alpha: f64,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        Self {
            kind: PartitionKind::FractionSkew,
            skew_fraction: 0.3,
            dirichlet_alpha: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseConfig {
    /// Beta(α, 100−α) parameter for per-client noise levels.
    pub alpha_beta: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self { alpha_beta: 15.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BanditConfig {
    pub lambda: f64,
    pub delta: f64,
}

impl Default for BanditConfig {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            delta: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    /// Hidden-layer width; 0 selects plain logistic regression.
    pub hidden: usize,
    /// Gaussian init scale for the hidden-layer variant.
    pub init_scale: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            hidden: 0,
            init_scale: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RegretConfig {
    pub d: usize,
    pub m: usize,
    /// Super-arm size M.
    pub select: usize,
    /// Sub-Gaussian noise scale R.
    pub noise_r: f64,
    /// Context norm bound L.
    pub context_l: f64,
    /// Parameter norm bound S.
    pub theta_s: f64,
    /// One ridge state per client instead of a shared one.
    pub per_client: bool,
}

impl Default for RegretConfig {
    fn default() -> Self {
        Self {
            d: 4,
            m: 20,
            select: 4,
            noise_r: 0.1,
            context_l: 1.0,
            theta_s: 1.0,
            per_client: false,
        }
    }
}

/// Fully resolved experiment configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub seed: u64,
    pub rounds: u64,
    /// Early-stop patience in rounds; absent means run every round.
    pub patience: Option<u64>,
    /// Fan client work out across threads (never changes results).
    pub parallel: bool,
    pub out_dir: Option<PathBuf>,
    pub strategy: StrategyKind,
    pub dataset: DatasetConfig,
    pub clients: ClientConfig,
    pub partition: PartitionConfig,
    pub noise: NoiseConfig,
    pub latency: LatencyModel,
    pub loss: RobustLossConfig,
    pub bandit: BanditConfig,
    pub optimizer: OptimizerConfig,
    pub model: ModelConfig,
    pub regret: RegretConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Fedsim,
            seed: 0,
            rounds: 200,
            patience: None,
            parallel: true,
            out_dir: None,
            strategy: StrategyKind::FlashTs,
            dataset: DatasetConfig::default(),
            clients: ClientConfig::default(),
            partition: PartitionConfig::default(),
            noise: NoiseConfig::default(),
            latency: LatencyModel::default(),
            loss: RobustLossConfig::default(),
            bandit: BanditConfig::default(),
            optimizer: OptimizerConfig::default(),
            model: ModelConfig::default(),
            regret: RegretConfig::default(),
        }
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Config(msg()))
    }
}

impl ExperimentConfig {
    /// Parse a TOML document; unknown keys are rejected by name.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn from_toml_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| {
            Error::config(format!(
                "cannot read config {}: {e}",
                path.as_ref().display()
            ))
        })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::config(e.to_string()))
    }

    /// Validate every numeric range up front, naming the offending key.
    pub fn validate(&self) -> Result<()> {
        let in_unit = |v: f64| (0.0..=1.0).contains(&v);

        if self.dataset.source == DatasetSource::File {
            check(self.dataset.path.is_some(), || {
                "dataset.path is required when dataset.source = \"file\"".into()
            })?;
        }
        check(self.dataset.samples > 0, || {
            "dataset.samples must be positive".into()
        })?;
        check(self.dataset.input_dim > 0, || {
            "dataset.input_dim must be positive".into()
        })?;
        check(self.dataset.classes >= 2, || {
            "dataset.classes must be at least 2".into()
        })?;
        check(
            self.dataset.center_spread.is_finite() && self.dataset.center_spread >= 0.0,
            || format!("dataset.center_spread must be nonnegative, got {}", self.dataset.center_spread),
        )?;

        check(self.clients.count >= 1, || {
            "clients.count must be at least 1".into()
        })?;
        check(
            self.clients.select_fraction > 0.0 && self.clients.select_fraction <= 1.0,
            || format!("clients.select_fraction must lie in (0,1], got {}", self.clients.select_fraction),
        )?;
        check(
            self.clients.val_fraction > 0.0 && self.clients.val_fraction < 1.0,
            || format!("clients.val_fraction must lie in (0,1), got {}", self.clients.val_fraction),
        )?;
        check(
            in_unit(self.clients.server_val_fraction) && in_unit(self.clients.test_fraction),
            || "clients.server_val_fraction and clients.test_fraction must lie in [0,1]".into(),
        )?;
        check(
            self.clients.server_val_fraction + self.clients.test_fraction < 1.0,
            || "heldout fractions must leave data for the clients".into(),
        )?;

        check(in_unit(self.partition.skew_fraction), || {
            format!("partition.skew_fraction must lie in [0,1], got {}", self.partition.skew_fraction)
        })?;
        check(
            self.partition.dirichlet_alpha.is_finite() && self.partition.dirichlet_alpha > 0.0,
            || format!("partition.dirichlet_alpha must be positive, got {}", self.partition.dirichlet_alpha),
        )?;

        check(
            self.noise.alpha_beta > 0.0 && self.noise.alpha_beta < 100.0,
            || format!("noise.alpha_beta must lie in (0,100), got {}", self.noise.alpha_beta),
        )?;

        self.latency
            .validate()
            .map_err(|e| Error::config(format!("latency: {e}")))?;
        self.loss
            .validate()
            .map_err(|e| Error::config(format!("loss: {e}")))?;
        self.optimizer
            .validate()
            .map_err(|e| Error::config(format!("optimizer: {e}")))?;

        check(
            self.bandit.lambda.is_finite() && self.bandit.lambda > 0.0,
            || format!("bandit.lambda must be positive, got {}", self.bandit.lambda),
        )?;
        check(
            self.bandit.delta > 0.0 && self.bandit.delta < 1.0,
            || format!("bandit.delta must lie in (0,1), got {}", self.bandit.delta),
        )?;

        check(
            self.model.init_scale.is_finite() && self.model.init_scale >= 0.0,
            || format!("model.init_scale must be nonnegative, got {}", self.model.init_scale),
        )?;

        check(self.regret.d >= 1, || "regret.d must be at least 1".into())?;
        check(self.regret.m >= 1, || "regret.m must be at least 1".into())?;
        check(
            self.regret.select >= 1 && self.regret.select <= self.regret.m,
            || format!("regret.select must lie in [1, regret.m], got {}", self.regret.select),
        )?;
        check(
            self.regret.noise_r.is_finite() && self.regret.noise_r >= 0.0,
            || format!("regret.noise_r must be nonnegative, got {}", self.regret.noise_r),
        )?;
        check(
            self.regret.context_l.is_finite() && self.regret.context_l > 0.0,
            || format!("regret.context_l must be positive, got {}", self.regret.context_l),
        )?;
        check(
            self.regret.theta_s.is_finite() && self.regret.theta_s > 0.0,
            || format!("regret.theta_s must be positive, got {}", self.regret.theta_s),
        )?;
        Ok(())
    }
}

//! In-memory labeled datasets: a plain CSV loader and a synthetic
//! Gaussian-blobs generator.

use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Feature matrix plus integer labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub input_dim: usize,
    pub num_classes: usize,
}

impl Dataset {
    pub fn new(
        features: Vec<Vec<f64>>,
        labels: Vec<usize>,
        input_dim: usize,
        num_classes: usize,
    ) -> Result<Self> {
        if features.len() != labels.len() {
            return Err(Error::invalid_argument(
                "feature/label count mismatch".to_string(),
            ));
        }
        if features.iter().any(|f| f.len() != input_dim) {
            return Err(Error::invalid_argument("row width mismatch".to_string()));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= num_classes) {
            return Err(Error::invalid_argument(format!(
                "label {bad} out of range for {num_classes} classes"
            )));
        }
        Ok(Self {
            features,
            labels,
            input_dim,
            num_classes,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Copy the rows at `indices` into a new dataset.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            features: indices.iter().map(|&i| self.features[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            input_dim: self.input_dim,
            num_classes: self.num_classes,
        }
    }

    /// Sample indices grouped by class.
    pub fn indices_by_class(&self) -> Vec<Vec<usize>> {
        let mut by_class = vec![Vec::new(); self.num_classes];
        for (i, &label) in self.labels.iter().enumerate() {
            by_class[label].push(i);
        }
        by_class
    }

    /// Load the simple sample format: a `n,in_dim,K` header line, then one
    /// `f1,...,f_in_dim,label` row per sample.
    pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset> {
        let text = std::fs::read_to_string(path.as_ref())?;
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::invalid_argument("dataset file is empty"))?;
        let head: Vec<usize> = header
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::invalid_argument(format!("bad header field `{tok}`")))
            })
            .collect::<Result<_>>()?;
        let [n, input_dim, num_classes] = head[..] else {
            return Err(Error::invalid_argument(
                "header must be `n,in_dim,K`".to_string(),
            ));
        };
        let mut features = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        for (row_idx, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != input_dim + 1 {
                return Err(Error::invalid_argument(format!(
                    "row {row_idx} has {} fields, expected {}",
                    fields.len(),
                    input_dim + 1
                )));
            }
            let row: Vec<f64> = fields[..input_dim]
                .iter()
                .map(|tok| {
                    tok.parse::<f64>().map_err(|_| {
                        Error::invalid_argument(format!("bad feature `{tok}` in row {row_idx}"))
                    })
                })
                .collect::<Result<_>>()?;
            let label = fields[input_dim].parse::<usize>().map_err(|_| {
                Error::invalid_argument(format!("bad label in row {row_idx}"))
            })?;
            features.push(row);
            labels.push(label);
        }
        if features.len() != n {
            return Err(Error::invalid_argument(format!(
                "header promised {n} rows, found {}",
                features.len()
            )));
        }
        Dataset::new(features, labels, input_dim, num_classes)
    }

    /// Write the same format back out.
    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        use std::fmt::Write as _;
        let mut out = String::new();
        let _ = writeln!(out, "{},{},{}", self.len(), self.input_dim, self.num_classes);
        for (row, label) in self.features.iter().zip(&self.labels) {
            for v in row {
                let _ = write!(out, "{v},");
            }
            let _ = writeln!(out, "{label}");
        }
        std::fs::write(path.as_ref(), out)?;
        Ok(())
    }
}

/// Parameters of the synthetic Gaussian-blobs generator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlobsConfig {
    pub samples: usize,
    pub input_dim: usize,
    pub num_classes: usize,
    /// Scale of the random class centers; samples add unit-variance noise.
    pub center_spread: f64,
}

impl Default for BlobsConfig {
    fn default() -> Self {
        Self {
            samples: 5000,
            input_dim: 8,
            num_classes: 10,
            center_spread: 3.0,
        }
    }
}

/// Balanced Gaussian blobs: one random center per class, unit covariance.
pub fn gaussian_blobs<R: Rng + ?Sized>(config: &BlobsConfig, rng: &mut R) -> Result<Dataset> {
    if config.samples == 0 || config.input_dim == 0 || config.num_classes < 2 {
        return Err(Error::config(format!("invalid blobs config {config:?}")));
    }
    let centers: Vec<Vec<f64>> = (0..config.num_classes)
        .map(|_| {
            (0..config.input_dim)
                .map(|_| config.center_spread * rng.sample::<f64, _>(StandardNormal))
                .collect()
        })
        .collect();
    let mut features = Vec::with_capacity(config.samples);
    let mut labels = Vec::with_capacity(config.samples);
    for i in 0..config.samples {
        let class = i % config.num_classes;
        let row = centers[class]
            .iter()
            .map(|c| c + rng.sample::<f64, _>(StandardNormal))
            .collect();
        features.push(row);
        labels.push(class);
    }
    Dataset::new(features, labels, config.input_dim, config.num_classes)
}

//! Minimal dense linear algebra for the small SPD systems the bandit solves.
//!
//! Matrices are row-major `Vec<f64>` of length `d * d`. Dimensions here are
//! tiny (d = 4 in the federated configuration), so plain loops beat pulling in
//! a linear-algebra crate.

use crate::error::{Error, Result};

/// Lower-triangular Cholesky factor `L` with `L Lᵀ = A`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    l: Vec<f64>,
    d: usize,
}

impl Cholesky {
    /// Factor a symmetric positive definite matrix.
    ///
    /// Fails with a diagnostic if a pivot is not strictly positive, which is
    /// how numerically non-SPD inputs surface.
    pub fn factor(a: &[f64], d: usize) -> Result<Self> {
        assert_eq!(a.len(), d * d, "matrix/dimension mismatch");
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidState(
                "matrix has non-finite entries".into(),
            ));
        }
        let mut l = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..=i {
                let mut sum = a[i * d + j];
                for k in 0..j {
                    sum -= l[i * d + k] * l[j * d + k];
                }
                if i == j {
                    if sum <= 0.0 || !sum.is_finite() {
                        return Err(Error::Numeric(format!(
                            "Cholesky pivot {i} is {sum:.3e}; matrix is not positive definite"
                        )));
                    }
                    l[i * d + j] = sum.sqrt();
                } else {
                    l[i * d + j] = sum / l[j * d + j];
                }
            }
        }
        Ok(Self { l, d })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Solve `A x = rhs` via the factor (forward then back substitution).
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let y = self.solve_lower(rhs);
        self.solve_lower_transpose(&y)
    }

    /// Solve `L y = rhs`.
    pub fn solve_lower(&self, rhs: &[f64]) -> Vec<f64> {
        let d = self.d;
        assert_eq!(rhs.len(), d);
        let mut y = vec![0.0; d];
        for i in 0..d {
            let mut sum = rhs[i];
            for k in 0..i {
                sum -= self.l[i * d + k] * y[k];
            }
            y[i] = sum / self.l[i * d + i];
        }
        y
    }

    /// Solve `Lᵀ x = rhs`.
    pub fn solve_lower_transpose(&self, rhs: &[f64]) -> Vec<f64> {
        let d = self.d;
        assert_eq!(rhs.len(), d);
        let mut x = vec![0.0; d];
        for i in (0..d).rev() {
            let mut sum = rhs[i];
            for k in (i + 1)..d {
                sum -= self.l[k * d + i] * x[k];
            }
            x[i] = sum / self.l[i * d + i];
        }
        x
    }

    /// Quadratic form `xᵀ A⁻¹ x = ‖L⁻¹x‖²`, clamped at zero against roundoff.
    pub fn inv_quad_form(&self, x: &[f64]) -> f64 {
        let y = self.solve_lower(x);
        y.iter().map(|v| v * v).sum::<f64>().max(0.0)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Rank-1 update `a += x xᵀ` on a row-major `d x d` matrix.
pub fn add_outer(a: &mut [f64], x: &[f64]) {
    let d = x.len();
    debug_assert_eq!(a.len(), d * d);
    for i in 0..d {
        for j in 0..d {
            a[i * d + j] += x[i] * x[j];
        }
    }
}

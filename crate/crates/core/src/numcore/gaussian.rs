use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numcore::eigen::{log_det_spd, solve_spd};
use crate::numcore::Matrix;

/// Mean and covariance of a multivariate Gaussian.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianSummary {
    pub mean: Vec<f64>,
    pub covariance: Matrix,
}

impl GaussianSummary {
    pub fn new(mean: Vec<f64>, covariance: Matrix) -> Result<Self> {
        let p = mean.len();
        if covariance.shape() != (p, p) {
            return Err(Error::ShapeMismatch {
                left: vec![p, p],
                right: vec![covariance.rows(), covariance.cols()],
            });
        }
        if mean.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("gaussian mean"));
        }
        let asym = covariance.max_asymmetry().unwrap_or(0.0);
        if asym > 1e-10 {
            return Err(Error::NotSymmetric(asym));
        }
        Ok(Self { mean, covariance })
    }

    /// Unit covariance around `mean`.
    pub fn isotropic(mean: Vec<f64>) -> Self {
        let p = mean.len();
        Self {
            mean,
            covariance: Matrix::identity(p),
        }
    }

    /// Sample mean and (population) covariance of the rows of `samples`.
    pub fn from_samples(samples: &Matrix) -> Result<Self> {
        if samples.rows() < 2 {
            return Err(Error::InsufficientSamples {
                needed: 2,
                got: samples.rows(),
            });
        }
        let (centered, mean) = samples.center_columns();
        let mut cov = centered.tr_matmul(&centered)?.scale(1.0 / samples.rows() as f64)?;
        let p = cov.rows();
        for i in 0..p {
            for j in (i + 1)..p {
                let avg = 0.5 * (cov[(i, j)] + cov[(j, i)]);
                cov[(i, j)] = avg;
                cov[(j, i)] = avg;
            }
        }
        Self::new(mean, cov)
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// Covariance plus `εᵣ·I`, `εᵣ = max(1e-8, 1e-8·tr(Σ)/p)`.
    pub fn regularized_covariance(&self) -> Matrix {
        let p = self.dim().max(1) as f64;
        let eps = (1e-8 * self.covariance.trace() / p).max(1e-8);
        let mut c = self.covariance.clone();
        for i in 0..self.dim() {
            c[(i, i)] += eps;
        }
        c
    }
}

/// Closed-form `KL(P ‖ Q)` between Gaussians, in nats.
///
/// Both covariances are regularised first (see
/// [`GaussianSummary::regularized_covariance`]).
pub fn gaussian_kl(p: &GaussianSummary, q: &GaussianSummary) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    let k = p.dim();
    if k == 0 {
        return Ok(0.0);
    }
    let sp = p.regularized_covariance();
    let sq = q.regularized_covariance();
    // tr(Σq⁻¹ Σp)
    let sq_inv_sp = solve_spd(&sq, &sp)?;
    let trace_term = sq_inv_sp.trace();
    let diff: Vec<f64> = q.mean.iter().zip(&p.mean).map(|(a, b)| a - b).collect();
    let diff_m = Matrix::column_vector(&diff)?;
    let sol = solve_spd(&sq, &diff_m)?;
    let quad: f64 = diff.iter().zip(sol.as_slice()).map(|(a, b)| a * b).sum();
    let log_det_ratio = log_det_spd(&sq)? - log_det_spd(&sp)?;
    let kl = 0.5 * (trace_term + quad - k as f64 + log_det_ratio);
    Ok(kl.max(0.0))
}

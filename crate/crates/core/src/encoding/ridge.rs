use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numcore::eigen::{solve_spd, symmetric_eigendecomposition};
use crate::numcore::Matrix;

/// A fitted ridge readout from features to targets.
///
/// Predictions are `(X − feature_means)·W + target_means`, i.e. the affine
/// form `X·W + b` with `b = target_means − feature_means·W`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RidgeFit {
    /// `D × d`.
    pub weights: Matrix,
    /// Length `d`.
    pub intercept: Vec<f64>,
    pub alpha: f64,
    pub layer: Option<usize>,
    pub fold: Option<usize>,
    pub feature_means: Vec<f64>,
    pub target_means: Vec<f64>,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::param("alpha", format!("must be a positive real, got {alpha}")));
    }
    Ok(())
}

fn add_ridge(mut m: Matrix, alpha: f64) -> Matrix {
    for i in 0..m.rows() {
        m[(i, i)] += alpha;
    }
    m
}

/// Closed-form ridge on column-centred features and targets.
///
/// Solves the `D × D` primal system when `D ≤ n` and the `n × n` dual
/// system otherwise; both give the same minimiser.
pub fn fit_ridge(features: &Matrix, targets: &Matrix, alpha: f64) -> Result<RidgeFit> {
    check_alpha(alpha)?;
    if features.rows() != targets.rows() {
        return Err(Error::LengthMismatch {
            left: features.rows(),
            right: targets.rows(),
        });
    }
    let n = features.rows();
    if n < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: n });
    }
    let (x, feature_means) = features.center_columns();
    let (y, target_means) = targets.center_columns();
    let weights = if x.cols() <= n {
        let gram = add_ridge(x.tr_matmul(&x)?, alpha);
        solve_spd(&gram, &x.tr_matmul(&y)?)?
    } else {
        let gram = add_ridge(x.matmul(&x.transpose())?, alpha);
        let dual = solve_spd(&gram, &y)?;
        x.tr_matmul(&dual)?
    };
    let intercept = intercept_for(&weights, &feature_means, &target_means);
    Ok(RidgeFit {
        weights,
        intercept,
        alpha,
        layer: None,
        fold: None,
        feature_means,
        target_means,
    })
}

fn intercept_for(weights: &Matrix, feature_means: &[f64], target_means: &[f64]) -> Vec<f64> {
    (0..weights.cols())
        .map(|j| {
            let shift: f64 = feature_means.iter().enumerate().map(|(i, m)| m * weights[(i, j)]).sum();
            target_means[j] - shift
        })
        .collect()
}

/// Applies a fit to new feature rows.
pub fn predict(fit: &RidgeFit, features: &Matrix) -> Result<Matrix> {
    if features.cols() != fit.weights.rows() {
        return Err(Error::DimensionMismatch {
            expected: fit.weights.rows(),
            found: features.cols(),
        });
    }
    let mut centered = features.clone();
    for i in 0..centered.rows() {
        for (j, m) in fit.feature_means.iter().enumerate() {
            centered[(i, j)] -= m;
        }
    }
    let mut out = centered.matmul(&fit.weights)?;
    for i in 0..out.rows() {
        for (j, m) in fit.target_means.iter().enumerate() {
            out[(i, j)] += m;
        }
    }
    Ok(out)
}

/// Spectral factorisation of one training split, reused across a grid of
/// penalties.
pub(crate) struct RidgePath {
    feature_means: Vec<f64>,
    target_means: Vec<f64>,
    spectrum: Vec<f64>,
    kind: PathKind,
}

enum PathKind {
    /// `XᵀX = V S Vᵀ`; holds `V` and `Vᵀ XᵀY`.
    Primal { basis: Matrix, projected: Matrix },
    /// `XXᵀ = U S Uᵀ`; holds `Xᵀ U` and `Uᵀ Y`.
    Dual { lifted: Matrix, projected: Matrix },
}

impl RidgePath {
    pub(crate) fn new(features: &Matrix, targets: &Matrix) -> Result<Self> {
        let (x, feature_means) = features.center_columns();
        let (y, target_means) = targets.center_columns();
        let (spectrum, kind) = if x.cols() <= x.rows() {
            let eig = symmetric_eigendecomposition(&x.tr_matmul(&x)?)?;
            let xty = x.tr_matmul(&y)?;
            let projected = eig.vectors.tr_matmul(&xty)?;
            (
                eig.values,
                PathKind::Primal {
                    basis: eig.vectors,
                    projected,
                },
            )
        } else {
            let eig = symmetric_eigendecomposition(&x.matmul(&x.transpose())?)?;
            let lifted = x.tr_matmul(&eig.vectors)?;
            let projected = eig.vectors.tr_matmul(&y)?;
            (eig.values, PathKind::Dual { lifted, projected })
        };
        Ok(Self {
            feature_means,
            target_means,
            spectrum: spectrum.into_iter().map(|s| s.max(0.0)).collect(),
            kind,
        })
    }

    pub(crate) fn weights(&self, alpha: f64) -> Result<Matrix> {
        let (left, projected) = match &self.kind {
            PathKind::Primal { basis, projected } => (basis, projected),
            PathKind::Dual { lifted, projected } => (lifted, projected),
        };
        let mut scaled = projected.clone();
        for (i, s) in self.spectrum.iter().enumerate() {
            let f = 1.0 / (s + alpha);
            for j in 0..scaled.cols() {
                scaled[(i, j)] *= f;
            }
        }
        left.matmul(&scaled)
    }

    pub(crate) fn fit(&self, alpha: f64) -> Result<RidgeFit> {
        check_alpha(alpha)?;
        let weights = self.weights(alpha)?;
        let intercept = intercept_for(&weights, &self.feature_means, &self.target_means);
        Ok(RidgeFit {
            weights,
            intercept,
            alpha,
            layer: None,
            fold: None,
            feature_means: self.feature_means.clone(),
            target_means: self.target_means.clone(),
        })
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numcore::{pearson, Matrix};

/// Mean squared difference over all entries.
pub fn mse(pred: &Matrix, obs: &Matrix) -> Result<f64> {
    pred.check_same_shape(obs)?;
    let n = pred.as_slice().len();
    if n == 0 {
        return Err(Error::TooShort { needed: 1, got: 0 });
    }
    let sum: f64 = pred
        .as_slice()
        .iter()
        .zip(obs.as_slice())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(sum / n as f64)
}

/// Per-column Pearson correlations and their mean.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnCorrelation {
    /// Mean over columns whose correlation is defined.
    pub mean: f64,
    /// `None` where either column has zero variance.
    pub per_column: Vec<Option<f64>>,
    pub skipped: usize,
}

/// Mean over feature columns of `pearson(pred[:, j], obs[:, j])`.
///
/// Zero-variance columns are skipped and counted.
pub fn pearson_score(pred: &Matrix, obs: &Matrix) -> Result<ColumnCorrelation> {
    pred.check_same_shape(obs)?;
    if pred.rows() < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: pred.rows(),
        });
    }
    let mut per_column = Vec::with_capacity(pred.cols());
    for j in 0..pred.cols() {
        match pearson(&pred.column(j), &obs.column(j)) {
            Ok(r) => per_column.push(Some(r)),
            Err(Error::ZeroVariance) => per_column.push(None),
            Err(e) => return Err(e),
        }
    }
    let valid: Vec<f64> = per_column.iter().flatten().copied().collect();
    if valid.is_empty() {
        return Err(Error::AllColumnsDegenerate);
    }
    Ok(ColumnCorrelation {
        mean: valid.iter().sum::<f64>() / valid.len() as f64,
        skipped: per_column.len() - valid.len(),
        per_column,
    })
}

/// Linear CKA: `‖AᵀB‖²_F / (‖AᵀA‖_F · ‖BᵀB‖_F)` on column-centred inputs.
pub fn cka(a: &Matrix, b: &Matrix) -> Result<f64> {
    if a.rows() != b.rows() {
        return Err(Error::LengthMismatch {
            left: a.rows(),
            right: b.rows(),
        });
    }
    if a.rows() < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: a.rows(),
        });
    }
    let (ac, _) = a.center_columns();
    let (bc, _) = b.center_columns();
    let cross = ac.tr_matmul(&bc)?.frobenius_norm();
    let self_a = ac.tr_matmul(&ac)?.frobenius_norm();
    let self_b = bc.tr_matmul(&bc)?.frobenius_norm();
    if self_a == 0.0 || self_b == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    Ok((cross * cross / (self_a * self_b)).clamp(0.0, 1.0))
}

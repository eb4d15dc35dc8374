use crate::error::{Error, Result};
use crate::numcore::{symmetric_eigendecomposition, Matrix};

/// Shares at or below this are treated as zero.
pub const SHARE_FLOOR: f64 = 1e-12;

/// Eigenvalues of `K = ZZᵀ` divided by `tr(K)`, descending, without the
/// numerically-zero tail.
///
/// Uses `ZᵀZ` when it is smaller; the nonzero spectrum is the same.
pub fn spectrum_shares(z: &Matrix) -> Result<Vec<f64>> {
    let trace: f64 = z.as_slice().iter().map(|v| v * v).sum();
    if trace == 0.0 {
        return Err(Error::ZeroTrace);
    }
    let gram = if z.cols() < z.rows() {
        z.tr_matmul(z)?
    } else {
        z.matmul(&z.transpose())?
    };
    let eig = symmetric_eigendecomposition(&gram)?;
    Ok(eig
        .values
        .into_iter()
        .map(|l| l / trace)
        .filter(|&p| p > SHARE_FLOOR)
        .collect())
}

/// Rényi entropy of order `alpha` (nats) of a probability vector; `alpha = 1`
/// is the Shannon / von Neumann limit.
pub fn renyi_from_shares(shares: &[f64], alpha: f64) -> Result<f64> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::param("alpha", format!("must be a positive real, got {alpha}")));
    }
    let s = if alpha == 1.0 {
        -shares.iter().map(|p| p * p.ln()).sum::<f64>()
    } else {
        shares.iter().map(|p| p.powf(alpha)).sum::<f64>().ln() / (1.0 - alpha)
    };
    Ok(s.max(0.0))
}

/// Matrix-based entropy of the rows of `z` (nats).
pub fn matrix_entropy(z: &Matrix, alpha: f64) -> Result<f64> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::param("alpha", format!("must be a positive real, got {alpha}")));
    }
    renyi_from_shares(&spectrum_shares(z)?, alpha)
}

/// `C(k) = (1/(S_k + ε)) / max_k' (1/(S_k' + ε))`.
pub fn confidence_series(entropies: &[f64], epsilon: f64) -> Result<Vec<f64>> {
    if entropies.is_empty() {
        return Err(Error::TooShort { needed: 1, got: 0 });
    }
    if entropies.iter().any(|s| !(s.is_finite() && s + epsilon > 0.0)) {
        return Err(Error::param("entropies", "must be finite with S + ε > 0"));
    }
    let inverse: Vec<f64> = entropies.iter().map(|s| 1.0 / (s + epsilon)).collect();
    let max = inverse.iter().copied().fold(f64::MIN_POSITIVE, f64::max);
    Ok(inverse.iter().map(|v| v / max).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix() {
        assert!(matches!(
            matrix_entropy(&Matrix::zeros(3, 2), 1.0),
            Err(Error::ZeroTrace)
        ));
    }

    #[test]
    fn bad_alpha() {
        let z = Matrix::identity(2);
        assert!(matrix_entropy(&z, 0.0).is_err());
        assert!(matrix_entropy(&z, -2.0).is_err());
    }

    #[test]
    fn wide_and_tall_agree() {
        let z = Matrix::from_rows(&[[1.0, 2.0, 0.0, 1.0], [0.0, 1.0, 3.0, -1.0]]).unwrap();
        let a = matrix_entropy(&z, 1.0).unwrap();
        let b = matrix_entropy(&z.transpose(), 1.0).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn confidence_is_order_reversing() {
        let c = confidence_series(&[2.0, 0.5, 1.0], 1e-8).unwrap();
        assert_eq!(c[1], 1.0);
        assert!(c[0] < c[2] && c[2] < c[1]);
    }
}

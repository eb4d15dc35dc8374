//! Binned mutual information between the first principal components of two
//! state matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numcore::{principal_axes, Matrix};

/// Default bin count: `max(2, round(1 + √(n/40)))`.
///
/// Chosen so the plug-in bias of an independent pair, roughly
/// `(B − 1)² / 2n`, stays near 0.0125 nats for any `n`.
pub fn default_bins(n: usize) -> usize {
    ((1.0 + (n as f64 / 40.0).sqrt()).round() as usize).max(2)
}

/// Equal-width bin index of each value over the observed range; `None` when
/// all values are equal.
pub fn equal_width_bins(x: &[f64], bins: usize) -> Option<Vec<usize>> {
    let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi.partial_cmp(&lo) != Some(std::cmp::Ordering::Greater) {
        return None;
    }
    let width = hi - lo;
    Some(
        x.iter()
            .map(|v| (((v - lo) / width * bins as f64).floor() as usize).min(bins - 1))
            .collect(),
    )
}

/// Plug-in entropy (nats) of a histogram. Counts are summed in ascending
/// order so equal multisets of counts give bit-identical results.
fn entropy_of_counts(counts: impl Iterator<Item = u64>) -> f64 {
    let mut c: Vec<u64> = counts.filter(|&c| c > 0).collect();
    c.sort_unstable();
    let total: u64 = c.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    let weighted: f64 = c.iter().map(|&k| k as f64 * (k as f64).ln()).sum();
    n.ln() - weighted / n
}

/// Mutual information (nats) of a joint count table, evaluated as
/// `H(X) + H(Y) − H(X, Y)`, clamped at zero.
pub fn mi_from_counts(joint: &[Vec<u64>]) -> f64 {
    let rows = joint.len();
    let cols = joint.first().map_or(0, Vec::len);
    let hx = entropy_of_counts(joint.iter().map(|r| r.iter().sum()));
    let hy = entropy_of_counts((0..cols).map(|j| (0..rows).map(|i| joint[i][j]).sum()));
    let hxy = entropy_of_counts(joint.iter().flatten().copied());
    (hx + hy - hxy).max(0.0)
}

fn check_bins(bins: usize) -> Result<()> {
    if bins < 2 {
        return Err(Error::param("bins", format!("need at least 2, got {bins}")));
    }
    Ok(())
}

/// Entropy (nats) of `x` after equal-width binning.
pub fn binned_entropy(x: &[f64], bins: usize) -> Result<f64> {
    check_bins(bins)?;
    let idx = equal_width_bins(x, bins).ok_or(Error::DegenerateProjection)?;
    let mut counts = vec![0u64; bins];
    idx.iter().for_each(|&b| counts[b] += 1);
    Ok(entropy_of_counts(counts.into_iter()))
}

/// Mutual information (nats) of two scalar samples after equal-width binning.
pub fn binned_mutual_info(x: &[f64], y: &[f64], bins: usize) -> Result<f64> {
    check_bins(bins)?;
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let bx = equal_width_bins(x, bins).ok_or(Error::DegenerateProjection)?;
    let by = equal_width_bins(y, bins).ok_or(Error::DegenerateProjection)?;
    let mut joint = vec![vec![0u64; bins]; bins];
    for (&i, &j) in bx.iter().zip(&by) {
        joint[i][j] += 1;
    }
    Ok(mi_from_counts(&joint))
}

/// Projection of the centred rows onto their first principal axis; `None`
/// when the rows do not vary.
pub fn first_principal_projection(x: &Matrix) -> Result<Option<Vec<f64>>> {
    let (centered, _) = x.center_columns();
    let (_, axes) = principal_axes(&centered, 1)?;
    Ok(axes.first().map(|axis| {
        centered
            .row_iter()
            .map(|r| crate::numcore::eigen::dot(r, axis))
            .collect()
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MiEstimate {
    /// Nats; 0 when a side is degenerate.
    pub value: f64,
    pub bins: usize,
    /// One side's projection had zero variance.
    pub degenerate: bool,
}

/// Mutual information between two per-sample state matrices.
pub fn mutual_info(x_states: &Matrix, final_states: &Matrix, bins: usize) -> Result<MiEstimate> {
    check_bins(bins)?;
    if x_states.rows() != final_states.rows() {
        return Err(Error::LengthMismatch {
            left: x_states.rows(),
            right: final_states.rows(),
        });
    }
    if x_states.rows() < 4 {
        return Err(Error::InsufficientSamples {
            needed: 4,
            got: x_states.rows(),
        });
    }
    let px = first_principal_projection(x_states)?;
    let py = first_principal_projection(final_states)?;
    let value = match (px, py) {
        (Some(a), Some(b)) => match binned_mutual_info(&a, &b, bins) {
            Ok(v) => Some(v),
            Err(Error::DegenerateProjection) => None,
            Err(e) => return Err(e),
        },
        _ => None,
    };
    if value.is_none() {
        log::warn!("mutual information: zero-variance projection, reporting 0");
    }
    Ok(MiEstimate {
        value: value.unwrap_or(0.0),
        bins,
        degenerate: value.is_none(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_bins_values() {
        assert_eq!(default_bins(4), 2);
        assert_eq!(default_bins(200), 3);
        assert_eq!(default_bins(1000), 6);
    }

    #[test]
    fn edge_values_land_in_end_bins() {
        let b = equal_width_bins(&[0.0, 0.5, 1.0], 2).unwrap();
        assert_eq!(b, vec![0, 1, 1]);
        assert!(equal_width_bins(&[2.0, 2.0], 3).is_none());
    }

    #[test]
    fn degenerate_side_reports_zero() {
        let x = Matrix::from_rows(&[[1.0], [2.0], [3.0], [4.0]]).unwrap();
        let c = Matrix::from_rows(&[[1.0], [1.0], [1.0], [1.0]]).unwrap();
        let est = mutual_info(&x, &c, 2).unwrap();
        assert!(est.degenerate);
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn errors() {
        let x = Matrix::zeros(3, 1);
        assert!(matches!(mutual_info(&x, &x, 2), Err(Error::InsufficientSamples { .. })));
        assert!(matches!(
            binned_entropy(&[1.0, 2.0], 1),
            Err(Error::InvalidParameter { .. })
        ));
    }
}

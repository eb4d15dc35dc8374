use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numcore::eigen::{dot, norm};
use crate::numcore::{pearson, spearman, Matrix};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Distance {
    #[default]
    Euclidean,
    /// `1 − cos`; zero rows are at distance 1 from everything but themselves.
    Cosine,
}

/// Representational dissimilarity matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rdm {
    distances: Matrix,
}

impl Rdm {
    /// Validates symmetry, zero diagonal and nonnegativity.
    pub fn new(distances: Matrix) -> Result<Self> {
        let asym = distances.max_asymmetry().ok_or(Error::ShapeMismatch {
            left: vec![distances.rows(), distances.cols()],
            right: vec![distances.cols(), distances.rows()],
        })?;
        if asym > 0.0 {
            return Err(Error::NotSymmetric(asym));
        }
        let n = distances.rows();
        if (0..n).any(|i| distances[(i, i)] != 0.0) {
            return Err(Error::InvalidConfig("RDM diagonal must be zero".into()));
        }
        if distances.as_slice().iter().any(|&d| d < 0.0) {
            return Err(Error::InvalidConfig("RDM entries must be nonnegative".into()));
        }
        Ok(Self { distances })
    }

    pub fn size(&self) -> usize {
        self.distances.rows()
    }

    pub fn distances(&self) -> &Matrix {
        &self.distances
    }

    /// Strict upper triangle, row by row.
    pub fn upper_triangle(&self) -> Vec<f64> {
        let n = self.size();
        let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                out.push(self.distances[(i, j)]);
            }
        }
        out
    }

    /// Applies `f` to every off-diagonal distance.
    pub fn map_distances(&self, f: impl Fn(f64) -> f64) -> Result<Rdm> {
        let n = self.size();
        let m = Matrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { f(self.distances[(i, j)]) })?;
        Rdm::new(m)
    }
}

pub fn compute_rdm(x: &Matrix) -> Result<Rdm> {
    compute_rdm_with(x, Distance::Euclidean)
}

pub fn compute_rdm_with(x: &Matrix, metric: Distance) -> Result<Rdm> {
    let n = x.rows();
    if n < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: n });
    }
    let norms: Vec<f64> = x.row_iter().map(norm).collect();
    let mut d = Matrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (x.row(i), x.row(j));
            let v = match metric {
                Distance::Euclidean => a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt(),
                Distance::Cosine => {
                    if norms[i] == 0.0 || norms[j] == 0.0 {
                        if a == b {
                            0.0
                        } else {
                            1.0
                        }
                    } else {
                        (1.0 - dot(a, b) / (norms[i] * norms[j])).max(0.0)
                    }
                }
            };
            if !v.is_finite() {
                return Err(Error::NonFinite("RDM"));
            }
            d[(i, j)] = v;
            d[(j, i)] = v;
        }
    }
    Rdm::new(d)
}

fn paired_triangles(a: &Rdm, b: &Rdm) -> Result<(Vec<f64>, Vec<f64>)> {
    if a.size() != b.size() {
        return Err(Error::LengthMismatch {
            left: a.size(),
            right: b.size(),
        });
    }
    if a.size() < 3 {
        return Err(Error::InsufficientSamples {
            needed: 3,
            got: a.size(),
        });
    }
    Ok((a.upper_triangle(), b.upper_triangle()))
}

/// Spearman correlation between the upper triangles of two RDMs.
pub fn rsa_score(a: &Rdm, b: &Rdm) -> Result<f64> {
    let (ua, ub) = paired_triangles(a, b)?;
    spearman(&ua, &ub).map_err(|e| match e {
        Error::AllTied => Error::DegenerateRdm,
        other => other,
    })
}

/// Pearson correlation between the upper triangles of two RDMs.
pub fn rsa_pearson(a: &Rdm, b: &Rdm) -> Result<f64> {
    let (ua, ub) = paired_triangles(a, b)?;
    pearson(&ua, &ub).map_err(|e| match e {
        Error::ZeroVariance => Error::DegenerateRdm,
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rdm_validation() {
        let bad = Matrix::from_rows(&[[0.0, 1.0], [2.0, 0.0]]).unwrap();
        assert!(matches!(Rdm::new(bad), Err(Error::NotSymmetric(_))));
        let diag = Matrix::from_rows(&[[1.0, 1.0], [1.0, 0.0]]).unwrap();
        assert!(Rdm::new(diag).is_err());
    }

    #[test]
    fn rsa_errors() {
        let x = Matrix::from_rows(&[[0.0], [1.0], [2.0]]).unwrap();
        let y = Matrix::from_rows(&[[0.0], [1.0], [2.0], [3.0]]).unwrap();
        let (a, b) = (compute_rdm(&x).unwrap(), compute_rdm(&y).unwrap());
        assert!(matches!(rsa_score(&a, &b), Err(Error::LengthMismatch { .. })));
        // equilateral configuration: every distance equal
        let tri = Matrix::from_rows(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]).unwrap();
        let t = compute_rdm(&tri).unwrap();
        assert!(matches!(rsa_score(&t, &a), Err(Error::DegenerateRdm)));
    }

    #[test]
    fn cosine_distance_ignores_scale() {
        let x = Matrix::from_rows(&[[1.0, 0.0], [3.0, 0.0], [0.0, 2.0]]).unwrap();
        let r = compute_rdm_with(&x, Distance::Cosine).unwrap();
        assert!(r.distances()[(0, 1)].abs() < 1e-15);
        assert!((r.distances()[(0, 2)] - 1.0).abs() < 1e-15);
    }
}

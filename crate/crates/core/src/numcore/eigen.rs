use nalgebra::{Cholesky, SymmetricEigen};

use crate::error::{Error, Result};
use crate::numcore::Matrix;

const SYMMETRY_TOL: f64 = 1e-8;

/// Eigenpairs of a symmetric matrix, sorted by descending eigenvalue.
#[derive(Clone, Debug)]
pub struct SymmetricEigenpairs {
    pub values: Vec<f64>,
    /// Column `i` is the unit eigenvector for `values[i]`.
    pub vectors: Matrix,
}

impl SymmetricEigenpairs {
    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.vectors.column(i)
    }

    /// `V Λ Vᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.values.len();
        let mut out = Matrix::zeros(n, n);
        for k in 0..n {
            let lambda = self.values[k];
            for i in 0..n {
                let vi = self.vectors[(i, k)] * lambda;
                for j in 0..n {
                    out[(i, j)] += vi * self.vectors[(j, k)];
                }
            }
        }
        out
    }
}

/// Eigendecomposition of a symmetric matrix.
///
/// Symmetry is checked against `1e-8 · max(1, max|k_ij|)`; the input is then
/// symmetrised before being handed to the solver.
pub fn symmetric_eigendecomposition(k: &Matrix) -> Result<SymmetricEigenpairs> {
    let asym = k.max_asymmetry().ok_or(Error::ShapeMismatch {
        left: vec![k.rows(), k.cols()],
        right: vec![k.cols(), k.rows()],
    })?;
    let scale = k.as_slice().iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if asym > SYMMETRY_TOL * scale {
        return Err(Error::NotSymmetric(asym));
    }
    let n = k.rows();
    if n == 0 {
        return Ok(SymmetricEigenpairs {
            values: Vec::new(),
            vectors: Matrix::zeros(0, 0),
        });
    }
    let mut sym = k.to_nalgebra();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (sym[(i, j)] + sym[(j, i)]);
            sym[(i, j)] = avg;
            sym[(j, i)] = avg;
        }
    }
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    // ties broken by index so the ordering is reproducible
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])])?;
    Ok(SymmetricEigenpairs { values, vectors })
}

/// Solves `A X = B` for symmetric positive definite `A`.
pub fn solve_spd(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.rows() != a.cols() || a.rows() != b.rows() {
        return Err(Error::ShapeMismatch {
            left: vec![a.rows(), a.cols()],
            right: vec![b.rows(), b.cols()],
        });
    }
    let chol = Cholesky::new(a.to_nalgebra()).ok_or(Error::SingularSystem)?;
    let x = chol.solve(&b.to_nalgebra());
    Matrix::from_nalgebra(&x).map_err(|_| Error::SingularSystem)
}

/// Log-determinant of a symmetric positive definite matrix.
pub fn log_det_spd(a: &Matrix) -> Result<f64> {
    let chol = Cholesky::new(a.to_nalgebra()).ok_or(Error::SingularSystem)?;
    let l = chol.l();
    Ok(2.0 * (0..a.rows()).map(|i| l[(i, i)].ln()).sum::<f64>())
}

/// Leading principal axes of the rows of `x` (which must already be centred).
///
/// Works through whichever of `xᵀx` or `xxᵀ` is smaller. Returns
/// `(variances, axes)` where each axis is a unit vector of length `x.cols()`;
/// variances are eigenvalues of `xᵀx / n`. Axes whose variance is not
/// positive are dropped.
pub fn principal_axes(x: &Matrix, k: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let (n, p) = x.shape();
    if n == 0 || p == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let total: f64 = x.as_slice().iter().map(|v| v * v).sum();
    let floor = 1e-12 * total.max(f64::MIN_POSITIVE);
    let mut variances = Vec::new();
    let mut axes = Vec::new();
    if p <= n {
        let cov = x.tr_matmul(x)?;
        let eig = symmetric_eigendecomposition(&cov)?;
        for i in 0..k.min(p) {
            if eig.values[i] <= floor {
                break;
            }
            variances.push(eig.values[i] / n as f64);
            axes.push(eig.vector(i));
        }
    } else {
        let gram = x.matmul(&x.transpose())?;
        let eig = symmetric_eigendecomposition(&gram)?;
        for i in 0..k.min(n) {
            let s = eig.values[i];
            if s <= floor {
                break;
            }
            let u = eig.vector(i);
            // axis = xᵀu / √s
            let mut axis = vec![0.0; p];
            for (r, ur) in u.iter().enumerate() {
                for (a, v) in axis.iter_mut().zip(x.row(r)) {
                    *a += ur * v;
                }
            }
            let norm = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
            axis.iter_mut().for_each(|a| *a /= norm);
            variances.push(s / n as f64);
            axes.push(axis);
        }
    }
    Ok((variances, axes))
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

//! Independent reference implementations.

use trajsim::numcore::Matrix;

fn centered(m: &Matrix) -> Matrix {
    m.center_columns().0
}

/// Conjugate gradients on (XcᵀXc + αI)w = Xcᵀy, one target column at a time.
pub fn conjugate_gradient_ridge(x: &Matrix, y: &Matrix, alpha: f64) -> Matrix {
    let (xc, yc) = (centered(x), centered(y));
    let mut a = xc.tr_matmul(&xc).unwrap();
    for i in 0..a.rows() {
        a[(i, i)] += alpha;
    }
    let b = xc.tr_matmul(&yc).unwrap();
    let p = a.rows();
    let mut w = Matrix::zeros(p, y.cols());
    let matvec = |v: &[f64]| -> Vec<f64> { (0..p).map(|i| (0..p).map(|j| a[(i, j)] * v[j]).sum()).collect() };
    for col in 0..y.cols() {
        let mut sol = vec![0.0; p];
        let mut r = b.column(col);
        let mut dir = r.clone();
        let mut rr: f64 = r.iter().map(|v| v * v).sum();
        for _ in 0..(10 * p) {
            if rr.sqrt() < 1e-15 {
                break;
            }
            let ad = matvec(&dir);
            let step = rr / dir.iter().zip(&ad).map(|(u, v)| u * v).sum::<f64>();
            for i in 0..p {
                sol[i] += step * dir[i];
                r[i] -= step * ad[i];
            }
            let rr_new: f64 = r.iter().map(|v| v * v).sum();
            for i in 0..p {
                dir[i] = r[i] + rr_new / rr * dir[i];
            }
            rr = rr_new;
        }
        for i in 0..p {
            w[(i, col)] = sol[i];
        }
    }
    w
}

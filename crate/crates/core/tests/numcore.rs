use proptest::prelude::*;
use trajsim::ingest::rng::SeededRng;
use trajsim::numcore::stats::{average_ranks, resample_linear};
use trajsim::numcore::{
    gamma_weights, gaussian_kl, moments, pearson, spearman, symmetric_eigendecomposition, GaussianSummary, Matrix,
};
use trajsim::Error;

fn pearson_oracle(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sx = (x.iter().map(|v| (v - mx).powi(2)).sum::<f64>() / n).sqrt();
    let sy = (y.iter().map(|v| (v - my).powi(2)).sum::<f64>() / n).sqrt();
    x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / (sx * sy * n)
}

/// Rank by counting, averaging positions of ties.
fn rank_oracle(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|v| {
            let below = x.iter().filter(|w| *w < v).count() as f64;
            let equal = x.iter().filter(|w| *w == v).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect()
}

#[test]
fn pearson_examples() {
    assert!((pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap() - 1.0).abs() < 1e-15);
    assert!((pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-15);
    let (x, y) = ([1.0, 2.0, 4.0], [1.0, 3.0, 3.0]);
    assert!((pearson(&x, &y).unwrap() - pearson_oracle(&x, &y)).abs() < 1e-14);
    assert!(matches!(pearson(&[1.0, 1.0], &[1.0, 2.0]), Err(Error::ZeroVariance)));
}

#[test]
fn spearman_examples() {
    assert!((spearman(&[1.0, 2.0, 5.0], &[0.1, 0.2, 9.0]).unwrap() - 1.0).abs() < 1e-15);
    assert!((spearman(&[1.0, 2.0, 5.0], &[3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-15);
    let (x, y) = ([1.0, 5.0, 2.0], [10.0, 20.0, 30.0]);
    let oracle = pearson_oracle(&rank_oracle(&x), &rank_oracle(&y));
    assert!((spearman(&x, &y).unwrap() - oracle).abs() < 1e-14);
    assert_eq!(average_ranks(&[3.0, 1.0, 3.0, 2.0]), rank_oracle(&[3.0, 1.0, 3.0, 2.0]));
}

#[test]
fn eigen_examples() {
    let e = symmetric_eigendecomposition(&Matrix::identity(3)).unwrap();
    assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
    let e = symmetric_eigendecomposition(&Matrix::from_diagonal(&[1.0, 3.0]).unwrap()).unwrap();
    assert_eq!(e.values, vec![3.0, 1.0]);
    assert!((e.vector(0)[1].abs() - 1.0).abs() < 1e-15);
    assert!(matches!(
        symmetric_eigendecomposition(&Matrix::from_rows(&[[1.0, 2.0], [0.0, 1.0]]).unwrap()),
        Err(Error::NotSymmetric(_))
    ));
}

#[test]
fn random_symmetric_reconstruction() {
    let mut rng = SeededRng::new(3);
    let a = Matrix::from_fn(5, 5, |_, _| rng.standard_normal()).unwrap();
    let k = a.add(&a.transpose()).unwrap();
    let e = symmetric_eigendecomposition(&k).unwrap();
    let resid = e.reconstruct().sub(&k).unwrap().frobenius_norm();
    assert!(resid <= 1e-8 * k.frobenius_norm());
    assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    // orthonormal columns
    let vtv = e.vectors.tr_matmul(&e.vectors).unwrap();
    assert!(vtv.sub(&Matrix::identity(5)).unwrap().frobenius_norm() < 1e-12);
}

#[test]
fn gaussian_kl_closed_forms() {
    let p = GaussianSummary::isotropic(vec![0.0, 1.0]);
    assert_eq!(gaussian_kl(&p, &p).unwrap(), 0.0);
    let a = GaussianSummary::new(vec![0.0], Matrix::identity(1)).unwrap();
    let b = GaussianSummary::new(vec![1.0], Matrix::identity(1)).unwrap();
    // regularisation perturbs the unit variances by 1e-8
    assert!((gaussian_kl(&a, &b).unwrap() - 0.5).abs() < 1e-7);
    let wide = GaussianSummary::new(vec![0.0], Matrix::from_diagonal(&[2.0]).unwrap()).unwrap();
    let expected = 0.5 * (2.0 - 1.0 - 2f64.ln());
    assert!((gaussian_kl(&wide, &a).unwrap() - expected).abs() < 1e-7);
    assert!((expected - 0.15343).abs() < 1e-5);
}

#[test]
fn gamma_weight_examples() {
    for beta in [0.3, 1.0, 7.5] {
        assert_eq!(gamma_weights(1, beta).unwrap().as_slice(), &[1.0]);
    }
    let w = gamma_weights(3, 1.0).unwrap();
    let raw = [(-1f64).exp(), (-2f64).exp(), (-3f64).exp()];
    let total: f64 = raw.iter().sum();
    for (a, b) in w.as_slice().iter().zip(raw) {
        assert!((a - b / total).abs() < 1e-15);
    }
}

#[test]
fn moment_examples() {
    assert!(matches!(moments(&[-1.0, 0.0, 1.0]), Err(Error::TooShort { .. })));
    let m = moments(&[-1.0, 0.0, 0.0, 1.0]).unwrap();
    assert_eq!(m.skewness, 0.0);
    // brute-force moment sums for (0, 0, 0, 1)
    let x = [0.0, 0.0, 0.0, 1.0];
    let mu = 0.25;
    let m2 = x.iter().map(|v: &f64| (v - mu).powi(2)).sum::<f64>() / 4.0;
    let m3 = x.iter().map(|v: &f64| (v - mu).powi(3)).sum::<f64>() / 4.0;
    let m4 = x.iter().map(|v: &f64| (v - mu).powi(4)).sum::<f64>() / 4.0;
    let m = moments(&x).unwrap();
    assert!((m.skewness - m3 / m2.powf(1.5)).abs() < 1e-12);
    assert!((m.excess_kurtosis - (m4 / (m2 * m2) - 3.0)).abs() < 1e-12);
}

#[test]
fn normal_sample_moments() {
    let mut rng = SeededRng::new(2024);
    let x: Vec<f64> = (0..100_000).map(|_| rng.standard_normal()).collect();
    let m = moments(&x).unwrap();
    assert!(m.skewness.abs() < 0.05, "skewness {}", m.skewness);
    assert!(m.excess_kurtosis.abs() < 0.1, "kurtosis {}", m.excess_kurtosis);
    assert!(m.mean.abs() < 0.01);
    assert!((m.variance - 1.0).abs() < 0.02);
}

#[test]
fn resampling_by_hand() {
    // 3 points onto 5: midpoints interpolate
    assert_eq!(resample_linear(&[0.0, 2.0, 4.0], 5), vec![0.0, 1.0, 2.0, 3.0, 4.0]);
    assert_eq!(resample_linear(&[1.0, 5.0], 3), vec![1.0, 3.0, 5.0]);
}

fn vec_strategy(n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0f64..100.0, n)
}

proptest! {
    #[test]
    fn pearson_affine(x in vec_strategy(3..30), a in 0.1f64..10.0, b in -5.0f64..5.0) {
        prop_assume!(x.iter().any(|v| (v - x[0]).abs() > 1e-6));
        let y: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        let z: Vec<f64> = x.iter().map(|v| -a * v + b).collect();
        prop_assert!((pearson(&x, &y).unwrap() - 1.0).abs() < 1e-12);
        prop_assert!((pearson(&x, &z).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn spearman_monotone_invariance(x in vec_strategy(3..30), y in vec_strategy(3..30)) {
        let n = x.len().min(y.len());
        let (x, y) = (&x[..n], &y[..n]);
        if let Ok(r) = spearman(x, y) {
            let tx: Vec<f64> = x.iter().map(|v| (v / 50.0).exp()).collect();
            let ty: Vec<f64> = y.iter().map(|v| v * v * v + 3.0).collect();
            prop_assert!((spearman(&tx, &ty).unwrap() - r).abs() < 1e-12);
        }
    }

    #[test]
    fn psd_eigenvalues_nonnegative(data in prop::collection::vec(-3.0f64..3.0, 12)) {
        let a = Matrix::new(4, 3, data).unwrap();
        let k = a.matmul(&a.transpose()).unwrap();
        let e = symmetric_eigendecomposition(&k).unwrap();
        prop_assert!(e.values.iter().all(|&v| v >= -1e-9 * k.trace().max(1e-300)));
    }

    #[test]
    fn kl_nonnegative(m1 in vec_strategy(2..3), m2 in vec_strategy(2..3), d in prop::collection::vec(0.0f64..4.0, 4)) {
        let p = GaussianSummary::new(m1, Matrix::from_diagonal(&d[..2]).unwrap()).unwrap();
        let q = GaussianSummary::new(m2, Matrix::from_diagonal(&d[2..]).unwrap()).unwrap();
        prop_assert!(gaussian_kl(&p, &q).unwrap() >= 0.0);
        prop_assert!(gaussian_kl(&p, &p).unwrap() < 1e-9);
    }

    #[test]
    fn gamma_weights_contract(t in 1usize..200, beta in 0.05f64..40.0) {
        let w = gamma_weights(t, beta).unwrap();
        prop_assert_eq!(w.len(), t);
        prop_assert!(w.as_slice().iter().all(|&v| v >= 0.0));
        prop_assert!((w.as_slice().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn moment_symmetries(x in vec_strategy(4..40), a in 0.5f64..5.0, b in -3.0f64..3.0) {
        if let Ok(m) = moments(&x) {
            prop_assume!(m.variance > 1e-6);
            let neg: Vec<f64> = x.iter().map(|v| -v).collect();
            let aff: Vec<f64> = x.iter().map(|v| a * v + b).collect();
            let mn = moments(&neg).unwrap();
            let ma = moments(&aff).unwrap();
            prop_assert!((mn.skewness + m.skewness).abs() < 1e-9);
            prop_assert!((ma.excess_kurtosis - m.excess_kurtosis).abs() < 1e-8);
        }
    }
}

mod common;

use common::oracles::conjugate_gradient_ridge;
use proptest::prelude::*;
use trajsim::encoding::{
    fit_ridge, fold_assignment, nested_cv_encode, predict, EmbeddingTensor, EncodingConfig, SignalMatrix,
};
use trajsim::ingest::rng::SeededRng;
use trajsim::ingest::synth::{synth_generate, SynthConfig};
use trajsim::numcore::{Matrix, Tensor3};

fn random(rows: usize, cols: usize, rng: &mut SeededRng) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.standard_normal()).unwrap()
}

fn centered(m: &Matrix) -> Matrix {
    m.center_columns().0
}

/// Plain gradient descent on ‖XcW − Yc‖² + α‖W‖², started from zero.
fn gradient_descent_ridge(x: &Matrix, y: &Matrix, alpha: f64) -> Matrix {
    let (xc, yc) = (centered(x), centered(y));
    let xtx = xc.tr_matmul(&xc).unwrap();
    let xty = xc.tr_matmul(&yc).unwrap();
    // Lipschitz bound from the trace, which dominates the largest eigenvalue
    let step = 1.0 / (xtx.trace() + alpha);
    let mut w = Matrix::zeros(x.cols(), y.cols());
    for _ in 0..200_000 {
        let grad = xtx
            .matmul(&w)
            .unwrap()
            .sub(&xty)
            .unwrap()
            .add(&w.scale(alpha).unwrap())
            .unwrap();
        if grad.frobenius_norm() < 1e-13 {
            break;
        }
        w = w.sub(&grad.scale(step).unwrap()).unwrap();
    }
    w
}

fn rel_diff(a: &Matrix, b: &Matrix) -> f64 {
    a.sub(b).unwrap().frobenius_norm() / b.frobenius_norm().max(1e-300)
}

#[test]
fn ridge_matches_gradient_descent_oracle() {
    let mut rng = SeededRng::new(11);
    let x = random(20, 5, &mut rng);
    let y = random(20, 3, &mut rng);
    let fit = fit_ridge(&x, &y, 0.7).unwrap();
    let oracle = gradient_descent_ridge(&x, &y, 0.7);
    let diff = fit.weights.sub(&oracle).unwrap().frobenius_norm();
    assert!(diff < 1e-6, "diff {diff}");
}

#[test]
fn interpolation_limit() {
    // square once centred: 5 samples, 4 features, centred rank 4
    let mut rng = SeededRng::new(5);
    let x = random(5, 4, &mut rng);
    let w0 = random(4, 2, &mut rng);
    let y = x.matmul(&w0).unwrap();
    let fit = fit_ridge(&x, &y, 1e-12).unwrap();
    assert!(fit.weights.sub(&w0).unwrap().frobenius_norm() < 1e-6);
    let back = predict(&fit, &x).unwrap();
    assert!(back.sub(&y).unwrap().frobenius_norm() < 1e-6);
}

#[test]
fn infinite_shrinkage_limit() {
    let mut rng = SeededRng::new(6);
    let x = random(12, 3, &mut rng);
    let y = random(12, 2, &mut rng);
    let fit = fit_ridge(&x, &y, 1e12).unwrap();
    assert!(fit.weights.frobenius_norm() < 1e-9);
    let means = y.column_means();
    let pred = predict(&fit, &random(4, 3, &mut rng)).unwrap();
    for i in 0..4 {
        for j in 0..2 {
            assert!((pred[(i, j)] - means[j]).abs() < 1e-9);
        }
    }
}

#[test]
fn zero_variance_features_predict_target_means() {
    let x = Matrix::from_fn(6, 2, |_, j| j as f64 + 3.0).unwrap();
    let y = Matrix::from_rows(&[[1.0], [2.0], [3.0], [4.0], [5.0], [9.0]]).unwrap();
    let fit = fit_ridge(&x, &y, 1.0).unwrap();
    let pred = predict(&fit, &Matrix::from_rows(&[[3.0, 4.0], [10.0, -1.0]]).unwrap()).unwrap();
    assert_eq!(pred.as_slice(), &[4.0, 4.0]);
}

#[test]
fn held_out_prediction_by_hand() {
    let x = Matrix::from_rows(&[[0.0, 1.0], [2.0, 1.0], [4.0, 4.0]]).unwrap();
    let y = Matrix::from_rows(&[[1.0], [0.0], [5.0]]).unwrap();
    let fit = fit_ridge(&x, &y, 0.5).unwrap();
    // means: x̄ = (2, 2), ȳ = 2
    assert_eq!(fit.feature_means, vec![2.0, 2.0]);
    assert_eq!(fit.target_means, vec![2.0]);
    let (w1, w2) = (fit.weights[(0, 0)], fit.weights[(1, 0)]);
    let row = [3.0, -1.0];
    let manual = (row[0] - 2.0) * w1 + (row[1] - 2.0) * w2 + 2.0;
    let pred = predict(&fit, &Matrix::from_rows(&[row]).unwrap()).unwrap();
    assert!((pred[(0, 0)] - manual).abs() < 1e-14);
    // affine form with the stored intercept agrees
    let affine = row[0] * w1 + row[1] * w2 + fit.intercept[0];
    assert!((pred[(0, 0)] - affine).abs() < 1e-12);
    // closed form of the 2×2 normal equations: XcᵀXc = [[8, 6], [6, 6]], Xcᵀyc = [8, 9]
    let (a, b, c) = (8.5, 6.0, 6.5);
    let det = a * c - b * b;
    assert!((w1 - (c * 8.0 - b * 9.0) / det).abs() < 1e-12);
    assert!((w2 - (a * 9.0 - b * 8.0) / det).abs() < 1e-12);
}

#[test]
fn dual_form_matches_oracle() {
    let mut rng = SeededRng::new(8);
    let x = random(8, 20, &mut rng);
    let y = random(8, 2, &mut rng);
    let fit = fit_ridge(&x, &y, 0.3).unwrap();
    assert!(rel_diff(&fit.weights, &conjugate_gradient_ridge(&x, &y, 0.3)) < 1e-6);
}

fn cfg(seed: u64) -> EncodingConfig {
    EncodingConfig {
        seed,
        ..EncodingConfig::default()
    }
}

#[test]
fn synthetic_coupling_recovers_layer() {
    let out = synth_generate(&SynthConfig {
        n: 120,
        d: 8,
        layers: 5,
        dim: 12,
        coupled_layer: 2,
        noise_sigma: 0.3,
        seed: 4,
        time_bins: 4,
    })
    .unwrap();
    let report = nested_cv_encode(&out.embedding, &out.signal, &cfg(1)).unwrap();
    assert_eq!(report.best_layer, 2);
    let again = nested_cv_encode(&out.embedding, &out.signal, &cfg(1)).unwrap();
    assert_eq!(report, again);
}

#[test]
fn pure_noise_has_null_correlation() {
    let mut rng = SeededRng::new(99);
    let (n, layers, dim, d) = (200, 3, 10, 6);
    let emb = Tensor3::from_fn([n, layers, dim], |_, _, _| rng.standard_normal()).unwrap();
    let sig = random(n, d, &mut rng);
    let report = nested_cv_encode(
        &EmbeddingTensor::unlabeled(emb).unwrap(),
        &SignalMatrix::unlabeled(sig).unwrap(),
        &cfg(3),
    )
    .unwrap();
    for l in &report.layers {
        let r = l.r.unwrap();
        assert!(r.abs() <= 0.15, "layer {} r = {r}", l.layer);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_form_matches_iterative_oracle(
        n in 3usize..30, p in 1usize..30, d in 1usize..4, seed in any::<u64>(), log_alpha in -1.0f64..2.0,
    ) {
        let mut rng = SeededRng::new(seed);
        let x = random(n, p, &mut rng);
        let y = random(n, d, &mut rng);
        let alpha = 10f64.powf(log_alpha);
        let fit = fit_ridge(&x, &y, alpha).unwrap();
        let oracle = conjugate_gradient_ridge(&x, &y, alpha);
        prop_assert!(rel_diff(&fit.weights, &oracle) < 1e-6);
    }

    #[test]
    fn test_rows_are_predicted_independently(seed in any::<u64>(), m in 2usize..10) {
        let mut rng = SeededRng::new(seed);
        let fit = fit_ridge(&random(15, 4, &mut rng), &random(15, 2, &mut rng), 0.5).unwrap();
        let test = random(m, 4, &mut rng);
        let mut perm: Vec<usize> = (0..m).collect();
        rng.shuffle(&mut perm);
        let a = predict(&fit, &test).unwrap().select_rows(&perm);
        let b = predict(&fit, &test.select_rows(&perm)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn shrinkage_is_monotone(seed in any::<u64>(), a1 in 0.01f64..10.0, factor in 1.01f64..100.0) {
        let mut rng = SeededRng::new(seed);
        let x = random(12, 6, &mut rng);
        let y = random(12, 2, &mut rng);
        let w1 = fit_ridge(&x, &y, a1).unwrap().weights.frobenius_norm();
        let w2 = fit_ridge(&x, &y, a1 * factor).unwrap().weights.frobenius_norm();
        prop_assert!(w1 >= w2);
    }

    #[test]
    fn folds_are_a_disjoint_cover(k in 2usize..10, extra in 0usize..50, seed in any::<u64>()) {
        let n = 2 * k + extra;
        let a = fold_assignment(n, k, seed);
        prop_assert_eq!(a.len(), n);
        let mut sizes = vec![0usize; k];
        for &f in &a {
            prop_assert!(f < k);
            sizes[f] += 1;
        }
        let (lo, hi) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
        prop_assert!(*lo >= 2 && hi - lo <= 1);
        prop_assert_eq!(a, fold_assignment(n, k, seed));
    }
}

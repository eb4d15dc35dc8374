use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encoding::ridge::{fit_ridge, predict, RidgeFit, RidgePath};
use crate::encoding::types::{EmbeddingTensor, SignalMatrix};
use crate::error::{Error, Result};
use crate::ingest::rng::{mix_seed, SeededRng};
use crate::numcore::Matrix;
use crate::repsim::{cka, compute_rdm, mse, pearson_score, rsa_pearson, rsa_score};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncodingConfig {
    pub outer_folds: usize,
    pub inner_folds: usize,
    /// Candidate penalties, ascending.
    pub alpha_grid: Vec<f64>,
    pub seed: u64,
}

/// `count` log-spaced values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..count)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64))
        .collect()
}

impl Default for EncodingConfig {
    fn default() -> Self {
        Self {
            outer_folds: 5,
            inner_folds: 3,
            alpha_grid: log_grid(1e-3, 1e3, 13),
            seed: 0,
        }
    }
}

impl EncodingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.outer_folds < 2 {
            return Err(Error::param("outer_folds", "must be at least 2"));
        }
        if self.inner_folds < 2 {
            return Err(Error::param("inner_folds", "must be at least 2"));
        }
        if self.alpha_grid.is_empty() {
            return Err(Error::param("alpha_grid", "must not be empty"));
        }
        if self.alpha_grid.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            return Err(Error::param("alpha_grid", "entries must be positive reals"));
        }
        if self.alpha_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("alpha_grid", "must be strictly ascending"));
        }
        Ok(())
    }
}

/// Seeded shuffle followed by contiguous blocks; returns the fold of each
/// sample. Block sizes differ by at most one, larger blocks first.
pub fn fold_assignment(n: usize, folds: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    SeededRng::new(seed).shuffle(&mut order);
    let base = n / folds;
    let extra = n % folds;
    let mut assignment = vec![0; n];
    let mut pos = 0;
    for fold in 0..folds {
        let size = base + usize::from(fold < extra);
        for &idx in &order[pos..pos + size] {
            assignment[idx] = fold;
        }
        pos += size;
    }
    assignment
}

fn split(assignment: &[usize], fold: usize) -> (Vec<usize>, Vec<usize>) {
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (i, &f) in assignment.iter().enumerate() {
        if f == fold {
            test.push(i);
        } else {
            train.push(i);
        }
    }
    (train, test)
}

/// Picks the penalty with the lowest mean inner-validation MSE; ties go to
/// the smaller penalty.
fn select_alpha(x: &Matrix, y: &Matrix, cfg: &EncodingConfig, seed: u64) -> Result<f64> {
    let inner = fold_assignment(x.rows(), cfg.inner_folds, seed);
    let mut totals = vec![0.0; cfg.alpha_grid.len()];
    for fold in 0..cfg.inner_folds {
        let (train, val) = split(&inner, fold);
        let path = RidgePath::new(&x.select_rows(&train), &y.select_rows(&train))?;
        let xv = x.select_rows(&val);
        let yv = y.select_rows(&val);
        for (total, &alpha) in totals.iter_mut().zip(&cfg.alpha_grid) {
            *total += mse(&predict(&path.fit(alpha)?, &xv)?, &yv)?;
        }
    }
    let mut best = 0;
    for (i, t) in totals.iter().enumerate() {
        if *t < totals[best] {
            best = i;
        }
    }
    Ok(cfg.alpha_grid[best])
}

struct OuterFold {
    fit: RidgeFit,
    test: Vec<usize>,
    prediction: Matrix,
}

fn run_outer_fold(
    x: &Matrix,
    y: &Matrix,
    assignment: &[usize],
    fold: usize,
    cfg: &EncodingConfig,
) -> Result<OuterFold> {
    let (train, test) = split(assignment, fold);
    let xt = x.select_rows(&train);
    let yt = y.select_rows(&train);
    let alpha = select_alpha(&xt, &yt, cfg, mix_seed(cfg.seed, fold as u64 + 1))?;
    let mut fit = fit_ridge(&xt, &yt, alpha)?;
    fit.fold = Some(fold);
    let prediction = predict(&fit, &x.select_rows(&test))?;
    Ok(OuterFold { fit, test, prediction })
}

fn check_sizes(n: usize, cfg: &EncodingConfig) -> Result<()> {
    cfg.validate()?;
    if n < 2 * cfg.outer_folds {
        return Err(Error::InsufficientSamples {
            needed: 2 * cfg.outer_folds,
            got: n,
        });
    }
    // every inner split must leave at least two training and one validation row
    let smallest_train = n - n.div_ceil(cfg.outer_folds);
    if smallest_train < 2 * cfg.inner_folds {
        return Err(Error::InsufficientSamples {
            needed: 2 * cfg.inner_folds,
            got: smallest_train,
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldScore {
    pub fold: usize,
    pub alpha: f64,
    pub n_test: usize,
    pub mse: f64,
    /// Mean per-feature Pearson r; `None` when every column was degenerate.
    pub r: Option<f64>,
    pub skipped_columns: usize,
    /// Spearman RSA over the test split's RDMs.
    pub rsa: Option<f64>,
    /// Pearson correlation of the same RDM upper triangles.
    pub rsa_pearson: Option<f64>,
    pub cka: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerSummary {
    pub layer: usize,
    pub mse: f64,
    pub r: Option<f64>,
    pub rsa: Option<f64>,
    pub rsa_pearson: Option<f64>,
    pub cka: Option<f64>,
    pub folds: Vec<FoldScore>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EncodingReport {
    pub config: EncodingConfig,
    pub n_samples: usize,
    pub n_features: usize,
    pub layer_count: usize,
    pub embedding_dim: usize,
    /// Outer fold of every sample.
    pub fold_assignment: Vec<usize>,
    pub layers: Vec<LayerSummary>,
    /// Layer with the highest mean r (lowest index on ties).
    pub best_layer: usize,
}

fn mean_of(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let v: Vec<f64> = values.flatten().collect();
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

fn score_fold(fold: &OuterFold, y: &Matrix) -> Result<FoldScore> {
    let obs = y.select_rows(&fold.test);
    let pred = &fold.prediction;
    let (r, skipped_columns) = match pearson_score(pred, &obs) {
        Ok(c) => (Some(c.mean), c.skipped),
        Err(Error::AllColumnsDegenerate) => (None, obs.cols()),
        Err(e) => return Err(e),
    };
    let (rsa, rsa_p) = if obs.rows() >= 3 {
        let (a, b) = (compute_rdm(pred)?, compute_rdm(&obs)?);
        (rsa_score(&a, &b).ok(), rsa_pearson(&a, &b).ok())
    } else {
        (None, None)
    };
    Ok(FoldScore {
        fold: fold.fit.fold.unwrap_or(0),
        alpha: fold.fit.alpha,
        n_test: obs.rows(),
        mse: mse(pred, &obs)?,
        r,
        skipped_columns,
        rsa,
        rsa_pearson: rsa_p,
        cka: cka(pred, &obs).ok(),
    })
}

/// Layerwise ridge encoding with nested K-fold cross-validation.
///
/// Layers run in parallel; the report is assembled in layer order so the
/// result does not depend on scheduling.
pub fn nested_cv_encode(emb: &EmbeddingTensor, sig: &SignalMatrix, cfg: &EncodingConfig) -> Result<EncodingReport> {
    emb.check_aligned(sig)?;
    let n = sig.n_samples();
    check_sizes(n, cfg)?;
    let assignment = fold_assignment(n, cfg.outer_folds, cfg.seed);
    let y = sig.data();
    let layers: Vec<LayerSummary> = (0..emb.layer_count())
        .into_par_iter()
        .map(|layer| {
            let x = emb.layer(layer);
            let folds = (0..cfg.outer_folds)
                .map(|k| {
                    let mut outer = run_outer_fold(&x, y, &assignment, k, cfg)?;
                    outer.fit.layer = Some(layer);
                    score_fold(&outer, y)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(LayerSummary {
                layer,
                mse: folds.iter().map(|f| f.mse).sum::<f64>() / folds.len() as f64,
                r: mean_of(folds.iter().map(|f| f.r)),
                rsa: mean_of(folds.iter().map(|f| f.rsa)),
                rsa_pearson: mean_of(folds.iter().map(|f| f.rsa_pearson)),
                cka: mean_of(folds.iter().map(|f| f.cka)),
                folds,
            })
        })
        .collect::<Result<_>>()?;
    let mut best: Option<(usize, f64)> = None;
    for l in &layers {
        if let Some(r) = l.r {
            if best.is_none_or(|(_, b)| r > b) {
                best = Some((l.layer, r));
            }
        }
    }
    let best_layer = best.ok_or(Error::AllColumnsDegenerate)?.0;
    Ok(EncodingReport {
        config: cfg.clone(),
        n_samples: n,
        n_features: sig.n_features(),
        layer_count: emb.layer_count(),
        embedding_dim: emb.dim(),
        fold_assignment: assignment,
        layers,
        best_layer,
    })
}

/// Out-of-fold predictions for one feature matrix, using the same folds and
/// penalty selection as [`nested_cv_encode`]. Row `i` is predicted by the
/// model that did not see sample `i`.
pub fn cross_validated_predictions(features: &Matrix, targets: &Matrix, cfg: &EncodingConfig) -> Result<Matrix> {
    if features.rows() != targets.rows() {
        return Err(Error::LengthMismatch {
            left: features.rows(),
            right: targets.rows(),
        });
    }
    check_sizes(features.rows(), cfg)?;
    let assignment = fold_assignment(features.rows(), cfg.outer_folds, cfg.seed);
    let mut out = Matrix::zeros(targets.rows(), targets.cols());
    for k in 0..cfg.outer_folds {
        let fold = run_outer_fold(features, targets, &assignment, k, cfg)?;
        for (row, &i) in fold.test.iter().enumerate() {
            for j in 0..targets.cols() {
                out[(i, j)] = fold.prediction[(row, j)];
            }
        }
    }
    Ok(out)
}

//! Largest Lyapunov exponent from a scalar series by nearest-neighbour
//! divergence (Rosenstein's method).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this many points the estimate is flagged as low confidence.
pub const LOW_CONFIDENCE_LEN: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LyapunovConfig {
    pub embedding_dim: usize,
    pub lag: usize,
    /// Neighbours closer than this in time are excluded.
    pub theiler: usize,
    /// Longest divergence horizon tracked, in steps.
    pub horizon: usize,
    /// Slope is fitted over divergence steps `0..=fit_steps`.
    pub fit_steps: usize,
}

impl Default for LyapunovConfig {
    fn default() -> Self {
        Self {
            embedding_dim: 2,
            lag: 1,
            theiler: 1,
            horizon: 10,
            fit_steps: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LyapunovEstimate {
    /// Nats per step.
    pub exponent: f64,
    /// Reference points that found a neighbour.
    pub pairs: usize,
    /// Mean log-distance at each tracked step.
    pub mean_log_divergence: Vec<f64>,
    pub fit_steps: usize,
    pub low_confidence: bool,
}

/// Least-squares slope of `y` against `0, 1, …`.
pub fn divergence_slope(y: &[f64]) -> f64 {
    let n = y.len() as f64;
    if y.len() < 2 {
        return 0.0;
    }
    let mean_x = (n - 1.0) / 2.0;
    let mean_y = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, v) in y.iter().enumerate() {
        let dx = i as f64 - mean_x;
        sxy += dx * (v - mean_y);
        sxx += dx * dx;
    }
    sxy / sxx
}

pub fn lyapunov_exponent(series: &[f64]) -> Result<LyapunovEstimate> {
    lyapunov_exponent_with(series, &LyapunovConfig::default())
}

pub fn lyapunov_exponent_with(series: &[f64], cfg: &LyapunovConfig) -> Result<LyapunovEstimate> {
    if series.len() < 8 {
        return Err(Error::TooShort {
            needed: 8,
            got: series.len(),
        });
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("series"));
    }
    if cfg.embedding_dim == 0 || cfg.lag == 0 || cfg.horizon == 0 || cfg.fit_steps == 0 {
        return Err(Error::param(
            "lyapunov",
            "embedding_dim, lag, horizon and fit_steps must be positive",
        ));
    }
    let low_confidence = series.len() < LOW_CONFIDENCE_LEN;
    if series.iter().all(|&v| v == series[0]) {
        // no divergence at all
        return Ok(LyapunovEstimate {
            exponent: 0.0,
            pairs: 0,
            mean_log_divergence: Vec::new(),
            fit_steps: 0,
            low_confidence,
        });
    }
    let span = (cfg.embedding_dim - 1) * cfg.lag;
    if series.len() <= span + 2 {
        return Err(Error::TooShort {
            needed: span + 3,
            got: series.len(),
        });
    }
    let n_vec = series.len() - span;
    let horizon = cfg.horizon.min(n_vec / 4).max(1);
    let usable = n_vec - horizon;
    let point = |i: usize| (0..cfg.embedding_dim).map(move |k| series[i + k * cfg.lag]);
    let dist = |i: usize, j: usize| -> f64 {
        point(i)
            .zip(point(j))
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    };

    let mut sums = vec![0.0; horizon + 1];
    let mut counts = vec![0usize; horizon + 1];
    let mut pairs = 0;
    for i in 0..usable {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..usable {
            if i.abs_diff(j) <= cfg.theiler {
                continue;
            }
            let d = dist(i, j);
            if d > 0.0 && best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        let Some((j, _)) = best else { continue };
        pairs += 1;
        for k in 0..=horizon {
            let d = dist(i + k, j + k);
            if d > 0.0 {
                sums[k] += d.ln();
                counts[k] += 1;
            }
        }
    }
    if pairs == 0 {
        return Err(Error::NoValidPairs);
    }
    let fit_steps = cfg.fit_steps.min(horizon);
    if counts[..=fit_steps].contains(&0) {
        return Err(Error::NoValidPairs);
    }
    let mean_log_divergence: Vec<f64> = sums
        .iter()
        .zip(&counts)
        .map(|(s, &c)| if c > 0 { s / c as f64 } else { f64::NAN })
        .collect();
    let exponent = divergence_slope(&mean_log_divergence[..=fit_steps]);
    Ok(LyapunovEstimate {
        exponent,
        pairs,
        // NaN entries cannot be serialised; keep the defined prefix
        mean_log_divergence: mean_log_divergence.into_iter().take_while(|v| v.is_finite()).collect(),
        fit_steps,
        low_confidence,
    })
}

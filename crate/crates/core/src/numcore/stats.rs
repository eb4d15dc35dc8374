//! Descriptive statistics and correlation coefficients.
//!
//! All reductions walk their inputs front to back so results do not depend on
//! how callers schedule work.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Population variance (divides by `n`).
pub fn variance(x: &[f64]) -> f64 {
    let m = mean(x);
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / x.len() as f64
}

/// Sample Pearson correlation coefficient, clamped to `[-1, 1]`.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: x.len(),
        });
    }
    let mx = mean(x);
    let my = mean(y);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let r = sxy / (sxx.sqrt() * syy.sqrt());
    Ok(r.clamp(-1.0, 1.0))
}

/// Ranks starting at 1, ties sharing the average of the ranks they span.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && x[order[j + 1]] == x[order[i]] {
            j += 1;
        }
        // positions i..=j hold ranks i+1..=j+1
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation (Pearson of average ranks).
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: x.len(),
        });
    }
    let all_tied = |v: &[f64]| v.iter().all(|&a| a == v[0]);
    if all_tied(x) || all_tied(y) {
        return Err(Error::AllTied);
    }
    pearson(&average_ranks(x), &average_ranks(y))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    /// Population variance.
    pub variance: f64,
    /// Moment skewness `E[(x−μ)³]/σ³`.
    pub skewness: f64,
    /// Fisher (excess) kurtosis `E[(x−μ)⁴]/σ⁴ − 3`; zero for a normal.
    pub excess_kurtosis: f64,
}

pub fn moments(x: &[f64]) -> Result<Moments> {
    if x.len() < 4 {
        return Err(Error::TooShort {
            needed: 4,
            got: x.len(),
        });
    }
    let n = x.len() as f64;
    let m = mean(x);
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for v in x {
        let d = v - m;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if m2 <= f64::MIN_POSITIVE {
        return Err(Error::ZeroVariance);
    }
    Ok(Moments {
        mean: m,
        variance: m2,
        skewness: m3 / m2.powf(1.5),
        excess_kurtosis: m4 / (m2 * m2) - 3.0,
    })
}

/// Piecewise-linear resampling of `series` onto `len` evenly spaced points
/// spanning the same index range.
pub fn resample_linear(series: &[f64], len: usize) -> Vec<f64> {
    if series.is_empty() || len == 0 {
        return Vec::new();
    }
    if series.len() == 1 || len == 1 {
        return vec![series[0]; len];
    }
    let scale = (series.len() - 1) as f64 / (len - 1) as f64;
    (0..len)
        .map(|i| {
            let pos = i as f64 * scale;
            let lo = (pos.floor() as usize).min(series.len() - 2);
            let frac = pos - lo as f64;
            series[lo] * (1.0 - frac) + series[lo + 1] * frac
        })
        .collect()
}

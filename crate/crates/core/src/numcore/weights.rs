use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nonnegative per-step weights summing to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightSchedule {
    weights: Vec<f64>,
}

impl WeightSchedule {
    /// Normalises `raw` to sum to one.
    pub fn from_unnormalized(raw: Vec<f64>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::TooShort { needed: 1, got: 0 });
        }
        if raw.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::param("weights", "entries must be finite and nonnegative"));
        }
        let total: f64 = raw.iter().sum();
        if total <= 0.0 {
            return Err(Error::param("weights", "weights sum to zero"));
        }
        Ok(Self {
            weights: raw.into_iter().map(|w| w / total).collect(),
        })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Gamma(shape `beta`, rate 1) density evaluated at `t = 1..=steps`, renormalised.
///
/// Evaluated in the log domain so large `steps` or `beta` do not underflow.
pub fn gamma_weights(steps: usize, beta: f64) -> Result<WeightSchedule> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::param("beta", format!("must be a positive real, got {beta}")));
    }
    if steps == 0 {
        return Err(Error::TooShort { needed: 1, got: 0 });
    }
    let log_density: Vec<f64> = (1..=steps)
        .map(|t| {
            let t = t as f64;
            (beta - 1.0) * t.ln() - t
        })
        .collect();
    let max = log_density.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    WeightSchedule::from_unnormalized(log_density.iter().map(|l| (l - max).exp()).collect())
}

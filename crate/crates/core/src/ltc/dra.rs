//! Dynamic representational alignment between two trajectories that share a
//! dimension and length.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ltc::trajectory::Trajectory;
use crate::numcore::eigen::{dot, norm};
use crate::numcore::{gamma_weights, gaussian_kl, GaussianSummary};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DraNormalization {
    /// `Σ ω x`; stays in `[0, 1]` when every `x ∈ [0, 1]`.
    #[default]
    Convex,
    /// `Σ ω x / √(Σ (ω x)² + Σ ω²)`.
    L2,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DraConfig {
    /// Gamma shape of the step weights.
    pub beta: f64,
    /// Weight of the KL penalty, in `(0, 5]`.
    pub alpha_penalty: f64,
    pub epsilon: f64,
    pub normalization: DraNormalization,
    pub clamp_negative: bool,
    /// Common-space dimension; `None` picks it automatically.
    pub common_dim: Option<usize>,
}

impl Default for DraConfig {
    fn default() -> Self {
        Self {
            beta: 2.0,
            alpha_penalty: 1.0,
            epsilon: 1e-8,
            normalization: DraNormalization::Convex,
            clamp_negative: true,
            common_dim: None,
        }
    }
}

impl DraConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::param(
                "beta",
                format!("must be a positive real, got {}", self.beta),
            ));
        }
        if !(self.alpha_penalty > 0.0 && self.alpha_penalty <= 5.0) {
            return Err(Error::param(
                "alpha_penalty",
                format!("must lie in (0, 5], got {}", self.alpha_penalty),
            ));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::param(
                "epsilon",
                format!("must be positive, got {}", self.epsilon),
            ));
        }
        if self.common_dim == Some(0) {
            return Err(Error::param("common_dim", "must be at least 1"));
        }
        Ok(())
    }
}

/// Per-step ingredients of the score.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DraTerms {
    pub cosines: Vec<f64>,
    pub coherences: Vec<f64>,
    pub kls: Vec<f64>,
}

impl DraTerms {
    pub fn len(&self) -> usize {
        self.cosines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosines.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DraStep {
    /// 1-based step index.
    pub step: usize,
    pub weight: f64,
    pub cosine: f64,
    pub coherence: f64,
    pub kl: f64,
    /// `x_t` before clamping.
    pub raw_score: f64,
    pub score: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DraReport {
    pub value: f64,
    /// Same normalisation applied to the unclamped per-step scores.
    pub unclamped_value: f64,
    /// Normaliser actually used (`1` for the convex variant).
    pub z_t: f64,
    pub steps: Vec<DraStep>,
    pub config: DraConfig,
}

fn combine(weights: &[f64], x: &[f64], normalization: DraNormalization) -> (f64, f64) {
    let weighted: Vec<f64> = weights.iter().zip(x).map(|(w, v)| w * v).collect();
    let sum: f64 = weighted.iter().sum();
    match normalization {
        DraNormalization::Convex => (sum, 1.0),
        DraNormalization::L2 => {
            let z = (weighted.iter().map(|v| v * v).sum::<f64>() + weights.iter().map(|w| w * w).sum::<f64>()).sqrt();
            (sum / z, z)
        }
    }
}

/// Weights, clamps and normalises precomputed per-step terms.
pub fn combine_terms(terms: &DraTerms, cfg: &DraConfig) -> Result<DraReport> {
    cfg.validate()?;
    let t = terms.len();
    if terms.coherences.len() != t || terms.kls.len() != t {
        return Err(Error::LengthMismatch {
            left: t,
            right: if terms.coherences.len() != t {
                terms.coherences.len()
            } else {
                terms.kls.len()
            },
        });
    }
    if t == 0 {
        return Err(Error::TooFewSteps { needed: 1, got: 0 });
    }
    let weights = gamma_weights(t, cfg.beta)?;
    let weights = weights.as_slice();
    let raw: Vec<f64> = (0..t)
        .map(|i| terms.cosines[i] * terms.coherences[i] * (-cfg.alpha_penalty * terms.kls[i]).exp())
        .collect();
    if raw.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("dra terms"));
    }
    let scores: Vec<f64> = if cfg.clamp_negative {
        raw.iter().map(|v| v.max(0.0)).collect()
    } else {
        raw.clone()
    };
    let (value, z_t) = combine(weights, &scores, cfg.normalization);
    let (unclamped_value, _) = combine(weights, &raw, cfg.normalization);
    let steps = (0..t)
        .map(|i| DraStep {
            step: i + 1,
            weight: weights[i],
            cosine: terms.cosines[i],
            coherence: terms.coherences[i],
            kl: terms.kls[i],
            raw_score: raw[i],
            score: scores[i],
        })
        .collect();
    Ok(DraReport {
        value,
        unclamped_value,
        z_t,
        steps,
        config: *cfg,
    })
}

fn deltas(h: &Trajectory) -> Vec<Vec<f64>> {
    let s = h.states();
    let mut d: Vec<Vec<f64>> = s
        .windows(2)
        .map(|w| w[1].iter().zip(&w[0]).map(|(b, a)| b - a).collect())
        .collect();
    // the first step borrows the second step's difference
    d.insert(0, d[0].clone());
    d
}

/// Cosines, coherences and KL divergences for each step.
pub fn dra_terms(
    e: &Trajectory,
    l: &Trajectory,
    p: &[GaussianSummary],
    q: &[GaussianSummary],
    epsilon: f64,
) -> Result<DraTerms> {
    if e.len() != l.len() {
        return Err(Error::LengthMismatch {
            left: e.len(),
            right: l.len(),
        });
    }
    if e.dim() != l.dim() {
        return Err(Error::DimensionMismatch {
            expected: e.dim(),
            found: l.dim(),
        });
    }
    if p.len() != e.len() || q.len() != e.len() {
        return Err(Error::LengthMismatch {
            left: e.len(),
            right: if p.len() != e.len() { p.len() } else { q.len() },
        });
    }
    let mut cosines = Vec::with_capacity(e.len());
    for t in 0..e.len() {
        let (a, b) = (e.state(t), l.state(t));
        let denom = norm(a) * norm(b);
        if denom == 0.0 {
            return Err(Error::ZeroState(t + 1));
        }
        cosines.push((dot(a, b) / denom).clamp(-1.0, 1.0));
    }
    let coherences = deltas(e)
        .iter()
        .zip(deltas(l).iter())
        .map(|(de, dl)| dot(de, dl) / (norm(de) * norm(dl) + epsilon))
        .collect();
    let kls = p
        .iter()
        .zip(q)
        .map(|(pt, qt)| gaussian_kl(pt, qt))
        .collect::<Result<Vec<_>>>()?;
    Ok(DraTerms {
        cosines,
        coherences,
        kls,
    })
}

/// DRA with explicit per-step Gaussian summaries.
pub fn dra_with_summaries(
    e: &Trajectory,
    l: &Trajectory,
    p: &[GaussianSummary],
    q: &[GaussianSummary],
    cfg: &DraConfig,
) -> Result<DraReport> {
    cfg.validate()?;
    combine_terms(&dra_terms(e, l, p, q, cfg.epsilon)?, cfg)
}

/// DRA of mean-only trajectories: each step's summary is a unit-covariance
/// Gaussian at the state.
pub fn dra(e: &Trajectory, l: &Trajectory, cfg: &DraConfig) -> Result<DraReport> {
    let iso = |h: &Trajectory| -> Vec<GaussianSummary> {
        h.states()
            .iter()
            .map(|s| GaussianSummary::isotropic(s.clone()))
            .collect()
    };
    dra_with_summaries(e, l, &iso(e), &iso(l), cfg)
}

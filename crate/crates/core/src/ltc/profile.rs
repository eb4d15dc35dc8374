use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ltc::dynamics::{normalized_dynamics_with, step_dynamics, DynamicsScale, NormalizedDynamics};
use crate::ltc::entropy::{confidence_series, matrix_entropy};
use crate::ltc::lyapunov::{lyapunov_exponent, LyapunovEstimate};
use crate::ltc::mi::{default_bins, mutual_info};
use crate::ltc::pca::pca_trajectory;
use crate::ltc::trajectory::{Axis, StateEnsemble, Trajectory};
use crate::numcore::stats::resample_linear;
use crate::numcore::{moments, pearson};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileConfig {
    /// Rényi order of the matrix entropy.
    pub entropy_alpha: f64,
    pub epsilon: f64,
    /// `None` uses [`default_bins`] of the sample count.
    pub mi_bins: Option<usize>,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        Self {
            entropy_alpha: 1.0,
            epsilon: 1e-8,
            mi_bins: None,
        }
    }
}

/// Step with the largest absolute change in each series. A heuristic
/// marker only; no detection rule is implied.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TransitionMarkers {
    pub magnitude: Option<usize>,
    pub angle: Option<usize>,
    pub entropy: Option<usize>,
    pub confidence: Option<usize>,
    pub mi: Option<usize>,
}

/// Index `i` maximising `|x[i+1] − x[i]|`, ties to the earliest.
pub fn max_abs_change(x: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, w) in x.windows(2).enumerate() {
        let d = (w[1] - w[0]).abs();
        if best.is_none_or(|(_, b)| d > b) {
            best = Some((i, d));
        }
    }
    best.map(|(i, _)| i)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryProfile {
    pub axis: Axis,
    pub steps: usize,
    pub step_labels: Vec<String>,
    pub step_magnitudes: Vec<f64>,
    /// `None` where an adjacent state is zero.
    pub step_angles: Vec<Option<f64>>,
    pub dynamics: NormalizedDynamics,
    pub entropy_series: Vec<f64>,
    pub confidence_series: Vec<f64>,
    pub mi_series: Vec<f64>,
    pub mi_bins: usize,
    pub skewness: Option<f64>,
    pub excess_kurtosis: Option<f64>,
    pub lyapunov: Option<LyapunovEstimate>,
    pub pca1: Option<Vec<f64>>,
    pub transitions: TransitionMarkers,
    /// Degenerate metrics and the reason each was left undefined.
    pub notes: Vec<String>,
    pub config: ProfileConfig,
}

impl TrajectoryProfile {
    /// Angle series with undefined steps dropped.
    pub fn defined_angles(&self) -> Vec<f64> {
        self.step_angles.iter().flatten().copied().collect()
    }
}

/// Every per-step series and scalar descriptor of one system.
pub fn compute_profile(traj: &Trajectory, ens: &StateEnsemble, cfg: &ProfileConfig) -> Result<TrajectoryProfile> {
    if ens.len() != traj.len() {
        return Err(Error::LengthMismatch {
            left: traj.len(),
            right: ens.len(),
        });
    }
    if !(cfg.epsilon.is_finite() && cfg.epsilon > 0.0) {
        return Err(Error::param("epsilon", "must be positive"));
    }
    let mut notes = Vec::new();
    let d = step_dynamics(traj);
    for s in d.zero_state_steps() {
        notes.push(format!("angle undefined at step {s}: zero state"));
    }
    let dynamics = normalized_dynamics_with(&d, DynamicsScale::PerTrajectoryMax)?;

    let entropy_series = ens
        .steps()
        .iter()
        .map(|z| matrix_entropy(z, cfg.entropy_alpha))
        .collect::<Result<Vec<_>>>()?;
    let confidence = confidence_series(&entropy_series, cfg.epsilon)?;

    let bins = cfg.mi_bins.unwrap_or_else(|| default_bins(ens.n_samples()));
    let last = &ens.steps()[ens.len() - 1];
    let mut mi_series = Vec::with_capacity(ens.len());
    for (i, z) in ens.steps().iter().enumerate() {
        let est = mutual_info(z, last, bins)?;
        if est.degenerate {
            notes.push(format!("mi at step {i}: zero-variance projection, set to 0"));
        }
        mi_series.push(est.value);
    }

    let flat: Vec<f64> = traj.states().iter().flatten().copied().collect();
    let (skewness, excess_kurtosis) = match moments(&flat) {
        Ok(m) => (Some(m.skewness), Some(m.excess_kurtosis)),
        Err(e) => {
            notes.push(format!("skewness/kurtosis undefined: {e}"));
            (None, None)
        }
    };

    let pca1 = match pca_trajectory(traj) {
        Ok(p) => Some(p),
        Err(e) => {
            notes.push(format!("pca-1 undefined: {e}"));
            None
        }
    };
    let lyapunov = match &pca1 {
        Some(p) => match lyapunov_exponent(p) {
            Ok(l) => Some(l),
            Err(e) => {
                notes.push(format!("lyapunov undefined: {e}"));
                None
            }
        },
        None => None,
    };

    let angles: Vec<f64> = d.angles.iter().flatten().copied().collect();
    let transitions = TransitionMarkers {
        magnitude: max_abs_change(&d.magnitudes),
        angle: max_abs_change(&angles),
        entropy: max_abs_change(&entropy_series),
        confidence: max_abs_change(&confidence),
        mi: max_abs_change(&mi_series),
    };

    Ok(TrajectoryProfile {
        axis: traj.axis(),
        steps: traj.len(),
        step_labels: traj.step_labels().to_vec(),
        step_magnitudes: d.magnitudes,
        step_angles: d.angles,
        dynamics,
        entropy_series,
        confidence_series: confidence,
        mi_series,
        mi_bins: bins,
        skewness,
        excess_kurtosis,
        lyapunov,
        pca1,
        transitions,
        notes,
        config: *cfg,
    })
}

/// Pearson correlation of two series after resampling both to the longer
/// length.
pub fn align_series(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: a.len().min(b.len()),
        });
    }
    let len = a.len().max(b.len());
    let ra = resample_linear(a, len);
    let rb = resample_linear(b, len);
    pearson(&ra, &rb).map_err(|e| match e {
        Error::ZeroVariance => Error::DegenerateSeries,
        other => other,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricAlignment {
    pub metric: String,
    /// `None` when either series is constant or too short.
    pub alignment: Option<f64>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlignmentProfile {
    /// In the order entropy, confidence, magnitude, angle, mi.
    pub metrics: Vec<MetricAlignment>,
    /// EEG minus LLM.
    pub skewness_delta: Option<f64>,
    pub kurtosis_delta: Option<f64>,
    pub lyapunov_delta: Option<f64>,
    /// Fixed scales shared by both systems (max over both).
    pub shared_scale_dynamics: SharedScaleDynamics,
    pub resampling: String,
}

impl AlignmentProfile {
    pub fn get(&self, metric: &str) -> Option<f64> {
        self.metrics
            .iter()
            .find(|m| m.metric == metric)
            .and_then(|m| m.alignment)
    }
}

/// Normalised dynamics of both systems under scales shared across them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharedScaleDynamics {
    pub eeg: NormalizedDynamics,
    pub llm: NormalizedDynamics,
}

pub const ALIGNED_METRICS: [&str; 5] = ["entropy", "confidence", "magnitude", "angle", "mi"];

fn delta(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    Some(a? - b?)
}

pub fn align_profiles(eeg: &TrajectoryProfile, llm: &TrajectoryProfile) -> Result<AlignmentProfile> {
    let pairs: [(Vec<f64>, Vec<f64>); 5] = [
        (eeg.entropy_series.clone(), llm.entropy_series.clone()),
        (eeg.confidence_series.clone(), llm.confidence_series.clone()),
        (eeg.step_magnitudes.clone(), llm.step_magnitudes.clone()),
        (eeg.defined_angles(), llm.defined_angles()),
        (eeg.mi_series.clone(), llm.mi_series.clone()),
    ];
    let metrics = ALIGNED_METRICS
        .iter()
        .zip(pairs.iter())
        .map(|(name, (a, b))| match align_series(a, b) {
            Ok(r) => MetricAlignment {
                metric: name.to_string(),
                alignment: Some(r),
                note: None,
            },
            Err(e) => MetricAlignment {
                metric: name.to_string(),
                alignment: None,
                note: Some(e.to_string()),
            },
        })
        .collect();

    let z_mag = eeg.dynamics.z_mag.max(llm.dynamics.z_mag);
    let z_ang = eeg.dynamics.z_ang.max(llm.dynamics.z_ang);
    let shared = DynamicsScale::Fixed {
        magnitude: z_mag,
        angle: z_ang,
    };
    let rebuild = |p: &TrajectoryProfile| crate::ltc::dynamics::StepDynamics {
        magnitudes: p.step_magnitudes.clone(),
        angles: p.step_angles.clone(),
    };
    let shared_scale_dynamics = SharedScaleDynamics {
        eeg: normalized_dynamics_with(&rebuild(eeg), shared)?,
        llm: normalized_dynamics_with(&rebuild(llm), shared)?,
    };

    Ok(AlignmentProfile {
        metrics,
        skewness_delta: delta(eeg.skewness, llm.skewness),
        kurtosis_delta: delta(eeg.excess_kurtosis, llm.excess_kurtosis),
        lyapunov_delta: delta(
            eeg.lyapunov.as_ref().map(|l| l.exponent),
            llm.lyapunov.as_ref().map(|l| l.exponent),
        ),
        shared_scale_dynamics,
        resampling: "linear interpolation to the longer series".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn change_marker() {
        assert_eq!(max_abs_change(&[0.0, 0.1, 1.0, 1.1]), Some(1));
        assert_eq!(max_abs_change(&[1.0]), None);
    }

    #[test]
    fn constant_series_is_degenerate() {
        assert!(matches!(
            align_series(&[1.0, 1.0, 1.0], &[0.0, 1.0]),
            Err(Error::DegenerateSeries)
        ));
    }
}

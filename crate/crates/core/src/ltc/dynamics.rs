use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ltc::trajectory::Trajectory;
use crate::numcore::eigen::norm;

/// `‖b − a‖₂`.
pub fn step_magnitude(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (y - x) * (y - x)).sum::<f64>().sqrt()
}

/// Angle in `[0, π]` between two nonzero vectors.
///
/// Equal to `acos` of the clamped cosine, evaluated as
/// `2·atan2(‖â − b̂‖, ‖â + b̂‖)` on the unit vectors so that parallel states
/// give exactly 0 rather than `acos` rounding noise near 1.
pub fn step_angle(a: &[f64], b: &[f64]) -> Option<f64> {
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return None;
    }
    let (mut diff, mut sum) = (0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (u, v) = (x / na, y / nb);
        diff += (u - v) * (u - v);
        sum += (u + v) * (u + v);
    }
    Some(2.0 * diff.sqrt().atan2(sum.sqrt()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepDynamics {
    pub magnitudes: Vec<f64>,
    /// `None` where either adjacent state is the zero vector.
    pub angles: Vec<Option<f64>>,
}

impl StepDynamics {
    /// Steps whose angle is undefined.
    pub fn zero_state_steps(&self) -> Vec<usize> {
        (0..self.angles.len()).filter(|&i| self.angles[i].is_none()).collect()
    }
}

pub fn step_dynamics(h: &Trajectory) -> StepDynamics {
    let states = h.states();
    let pairs = states.windows(2);
    StepDynamics {
        magnitudes: pairs.clone().map(|w| step_magnitude(&w[0], &w[1])).collect(),
        angles: pairs.map(|w| step_angle(&w[0], &w[1])).collect(),
    }
}

/// How the per-step magnitude and angle are scaled before averaging.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum DynamicsScale {
    /// Each series divided by its own maximum.
    PerTrajectoryMax,
    /// Fixed constants, e.g. shared across the systems being compared.
    Fixed { magnitude: f64, angle: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizedDynamics {
    pub mag: f64,
    pub ang: f64,
    pub z_mag: f64,
    pub z_ang: f64,
}

fn normalized_mean(values: &[f64], z: f64) -> f64 {
    if z == 0.0 || values.is_empty() {
        return 0.0;
    }
    values.iter().map(|v| v / z).sum::<f64>() / values.len() as f64
}

/// Mean normalised step magnitude and angle. Undefined angles are left out
/// of the angle mean; a zero scale yields zero.
pub fn normalized_dynamics_with(d: &StepDynamics, scale: DynamicsScale) -> Result<NormalizedDynamics> {
    let angles: Vec<f64> = d.angles.iter().flatten().copied().collect();
    let (z_mag, z_ang) = match scale {
        DynamicsScale::PerTrajectoryMax => (
            d.magnitudes.iter().copied().fold(0.0, f64::max),
            angles.iter().copied().fold(0.0, f64::max),
        ),
        DynamicsScale::Fixed { magnitude, angle } => {
            if !(magnitude.is_finite() && magnitude >= 0.0 && angle.is_finite() && angle >= 0.0) {
                return Err(Error::param("scale", "fixed scales must be finite and nonnegative"));
            }
            (magnitude, angle)
        }
    };
    Ok(NormalizedDynamics {
        mag: normalized_mean(&d.magnitudes, z_mag),
        ang: normalized_mean(&angles, z_ang),
        z_mag,
        z_ang,
    })
}

pub fn normalized_dynamics(h: &Trajectory) -> NormalizedDynamics {
    normalized_dynamics_with(&step_dynamics(h), DynamicsScale::PerTrajectoryMax)
        .expect("per-trajectory scaling cannot fail")
}

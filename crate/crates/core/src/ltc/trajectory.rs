use serde::{Deserialize, Serialize};

use crate::encoding::EmbeddingTensor;
use crate::error::{Error, Result};
use crate::numcore::stats::resample_linear;
use crate::numcore::{Matrix, Tensor3};
use crate::repsim::window_starts;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Time,
    Layer,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reduce {
    /// Average over samples; no ensemble is kept.
    Mean,
    /// Keep the per-sample states alongside the mean trajectory.
    #[default]
    Sample,
}

/// Ordered states `h_0 … h_L` of one system.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    states: Vec<Vec<f64>>,
    axis: Axis,
    step_labels: Vec<String>,
}

impl Trajectory {
    pub fn new(states: Vec<Vec<f64>>, axis: Axis, step_labels: Vec<String>) -> Result<Self> {
        if states.len() < 2 {
            return Err(Error::TooFewSteps {
                needed: 2,
                got: states.len(),
            });
        }
        let dim = states[0].len();
        if dim == 0 {
            return Err(Error::DimMismatch("trajectory states are empty".into()));
        }
        if let Some(bad) = states.iter().find(|s| s.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        if states.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("trajectory"));
        }
        if step_labels.len() != states.len() {
            return Err(Error::LengthMismatch {
                left: states.len(),
                right: step_labels.len(),
            });
        }
        Ok(Self {
            states,
            axis,
            step_labels,
        })
    }

    /// Labels steps `0, 1, …`.
    pub fn unlabeled(states: Vec<Vec<f64>>, axis: Axis) -> Result<Self> {
        let labels = (0..states.len()).map(|i| i.to_string()).collect();
        Self::new(states, axis, labels)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].len()
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn states(&self) -> &[Vec<f64>] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &[f64] {
        &self.states[i]
    }

    pub fn step_labels(&self) -> &[String] {
        &self.step_labels
    }

    /// One row per state.
    pub fn stacked(&self) -> Matrix {
        Matrix::from_rows(&self.states).expect("validated trajectory")
    }

    /// Linear interpolation of every coordinate onto `len` evenly spaced steps.
    pub fn resample(&self, len: usize) -> Result<Trajectory> {
        if len == self.len() {
            return Ok(self.clone());
        }
        let columns: Vec<Vec<f64>> = (0..self.dim())
            .map(|j| {
                let series: Vec<f64> = self.states.iter().map(|s| s[j]).collect();
                resample_linear(&series, len)
            })
            .collect();
        let states = (0..len).map(|t| columns.iter().map(|c| c[t]).collect()).collect();
        let labels = (0..len).map(|t| format!("r{t}")).collect();
        Trajectory::new(states, self.axis, labels)
    }
}

/// Per-step `N × D` state matrices of one system.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateEnsemble {
    steps: Vec<Matrix>,
}

impl StateEnsemble {
    pub fn new(steps: Vec<Matrix>) -> Result<Self> {
        if steps.len() < 2 {
            return Err(Error::TooFewSteps {
                needed: 2,
                got: steps.len(),
            });
        }
        let shape = steps[0].shape();
        if shape.0 < 2 {
            return Err(Error::InsufficientSamples {
                needed: 2,
                got: shape.0,
            });
        }
        if let Some(bad) = steps.iter().find(|m| m.shape() != shape) {
            return Err(Error::ShapeMismatch {
                left: vec![shape.0, shape.1],
                right: vec![bad.rows(), bad.cols()],
            });
        }
        Ok(Self { steps })
    }

    pub fn steps(&self) -> &[Matrix] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn n_samples(&self) -> usize {
        self.steps[0].rows()
    }

    pub fn mean_trajectory(&self, axis: Axis, labels: Vec<String>) -> Result<Trajectory> {
        Trajectory::new(self.steps.iter().map(Matrix::column_means).collect(), axis, labels)
    }
}

/// Where trajectory states come from.
#[derive(Clone, Copy, Debug)]
pub enum TrajectorySource<'a> {
    /// `samples × channels × time` epochs, averaged inside sliding windows.
    SignalEpochs {
        epochs: &'a Tensor3,
        window: usize,
        stride: usize,
    },
    /// One state per layer.
    Embedding(&'a EmbeddingTensor),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BuiltTrajectory {
    pub trajectory: Trajectory,
    /// Present when built with [`Reduce::Sample`].
    pub ensemble: Option<StateEnsemble>,
}

/// Builds a trajectory along time (signal windows) or depth (layers).
///
/// Time axis: state `l` is, per channel, the mean over the time points of
/// window `l`. Layer axis: state `l` is the layer-`l` embedding.
pub fn build_trajectory(source: TrajectorySource<'_>, reduce: Reduce) -> Result<BuiltTrajectory> {
    let (steps, labels, axis) = match source {
        TrajectorySource::SignalEpochs { epochs, window, stride } => {
            let [n, c, t] = epochs.dims();
            let starts = window_starts(t, window, stride)?;
            let steps = starts
                .iter()
                .map(|&s| {
                    Matrix::from_fn(n, c, |i, ch| {
                        (s..s + window).map(|k| epochs.get(i, ch, k)).sum::<f64>() / window as f64
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let labels = starts.iter().map(|s| format!("t{s}-{}", s + window)).collect();
            (steps, labels, Axis::Time)
        }
        TrajectorySource::Embedding(emb) => {
            let steps: Vec<Matrix> = (0..emb.layer_count()).map(|l| emb.layer(l)).collect();
            let labels = (0..emb.layer_count()).map(|l| format!("layer{l}")).collect();
            (steps, labels, Axis::Layer)
        }
    };
    if steps.len() < 2 {
        return Err(Error::TooFewSteps {
            needed: 2,
            got: steps.len(),
        });
    }
    let trajectory = Trajectory::new(steps.iter().map(Matrix::column_means).collect(), axis, labels)?;
    let ensemble = match reduce {
        Reduce::Mean => None,
        Reduce::Sample => Some(StateEnsemble::new(steps)?),
    };
    Ok(BuiltTrajectory { trajectory, ensemble })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_short_or_ragged() {
        assert!(matches!(
            Trajectory::unlabeled(vec![vec![1.0]], Axis::Time),
            Err(Error::TooFewSteps { .. })
        ));
        assert!(matches!(
            Trajectory::unlabeled(vec![vec![1.0], vec![1.0, 2.0]], Axis::Time),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn single_window_is_too_few_steps() {
        let epochs = Tensor3::new([2, 1, 4], vec![0.0; 8]).unwrap();
        let src = TrajectorySource::SignalEpochs {
            epochs: &epochs,
            window: 3,
            stride: 2,
        };
        assert!(matches!(
            build_trajectory(src, Reduce::Mean),
            Err(Error::TooFewSteps { .. })
        ));
        let src = TrajectorySource::SignalEpochs {
            epochs: &epochs,
            window: 5,
            stride: 1,
        };
        assert!(matches!(
            build_trajectory(src, Reduce::Mean),
            Err(Error::WindowTooLarge { .. })
        ));
    }

    #[test]
    fn resample_identity_and_endpoints() {
        let t = Trajectory::unlabeled(vec![vec![0.0, 1.0], vec![2.0, 3.0]], Axis::Layer).unwrap();
        assert_eq!(t.resample(2).unwrap(), t);
        let r = t.resample(3).unwrap();
        assert_eq!(r.state(1), &[1.0, 2.0]);
        assert_eq!(r.state(2), &[2.0, 3.0]);
    }
}

//! Mapping two systems of different dimension and length onto a shared
//! coordinate frame before DRA.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ltc::pca::project_onto;
use crate::ltc::trajectory::{BuiltTrajectory, StateEnsemble, Trajectory};
use crate::numcore::stats::resample_linear;
use crate::numcore::{principal_axes, GaussianSummary, Matrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommonSpace {
    pub eeg: Trajectory,
    pub llm: Trajectory,
    pub eeg_summaries: Vec<GaussianSummary>,
    pub llm_summaries: Vec<GaussianSummary>,
    pub dim: usize,
    /// Common length after resampling.
    pub length: usize,
    /// Description of the mapping, echoed into reports.
    pub method: String,
}

struct Frame {
    axes: Vec<Vec<f64>>,
    scale: f64,
}

impl Frame {
    fn map(&self, state: &[f64]) -> Vec<f64> {
        project_onto(state, &self.axes)
            .into_iter()
            .map(|v| v / self.scale)
            .collect()
    }
}

fn available_axes(traj: &Trajectory) -> Result<Vec<Vec<f64>>> {
    let (centered, _) = traj.stacked().center_columns();
    let (_, axes) = principal_axes(&centered, traj.dim().min(traj.len()))?;
    if axes.is_empty() {
        return Err(Error::DegenerateVariance);
    }
    Ok(axes)
}

/// Axes oriented so each coordinate grows from the first to the last state,
/// and a scale giving the projected states unit RMS norm.
fn frame(traj: &Trajectory, mut axes: Vec<Vec<f64>>) -> Result<Frame> {
    let first = traj.state(0);
    let last = traj.state(traj.len() - 1);
    for axis in &mut axes {
        let drift: f64 = last
            .iter()
            .zip(first)
            .zip(axis.iter())
            .map(|((b, a), v)| (b - a) * v)
            .sum();
        if drift < 0.0 {
            axis.iter_mut().for_each(|v| *v = -*v);
        }
    }
    let ms: f64 = traj
        .states()
        .iter()
        .map(|s| project_onto(s, &axes).iter().map(|v| v * v).sum::<f64>())
        .sum::<f64>()
        / traj.len() as f64;
    if ms == 0.0 {
        return Err(Error::DegenerateVariance);
    }
    Ok(Frame { axes, scale: ms.sqrt() })
}

fn summaries(traj: &Trajectory, ens: Option<&StateEnsemble>, f: &Frame) -> Result<Vec<GaussianSummary>> {
    match ens {
        Some(ens) => ens
            .steps()
            .iter()
            .map(|m| {
                let rows: Vec<Vec<f64>> = m.row_iter().map(|r| f.map(r)).collect();
                GaussianSummary::from_samples(&Matrix::from_rows(&rows)?)
            })
            .collect(),
        None => Ok(traj
            .states()
            .iter()
            .map(|s| GaussianSummary::isotropic(f.map(s)))
            .collect()),
    }
}

fn resample_summaries(s: &[GaussianSummary], len: usize) -> Result<Vec<GaussianSummary>> {
    if s.len() == len {
        return Ok(s.to_vec());
    }
    let k = s[0].dim();
    let means: Vec<Vec<f64>> = (0..k)
        .map(|j| resample_linear(&s.iter().map(|g| g.mean[j]).collect::<Vec<_>>(), len))
        .collect();
    let covs: Vec<Vec<f64>> = (0..k * k)
        .map(|idx| resample_linear(&s.iter().map(|g| g.covariance.as_slice()[idx]).collect::<Vec<_>>(), len))
        .collect();
    (0..len)
        .map(|t| {
            let mean = means.iter().map(|c| c[t]).collect();
            let cov = Matrix::new(k, k, covs.iter().map(|c| c[t]).collect())?;
            GaussianSummary::new(mean, cov)
        })
        .collect()
}

/// Projects each system onto its own top principal axes, orients and
/// RMS-scales them, then resamples the shorter system to the longer length.
///
/// With `common_dim = None` the dimension is the number of nondegenerate
/// axes both systems have.
pub fn to_common_space(eeg: &BuiltTrajectory, llm: &BuiltTrajectory, common_dim: Option<usize>) -> Result<CommonSpace> {
    let ae = available_axes(&eeg.trajectory)?;
    let al = available_axes(&llm.trajectory)?;
    let avail = ae.len().min(al.len());
    let dim = match common_dim {
        None => avail,
        Some(0) => return Err(Error::param("common_dim", "must be at least 1")),
        Some(k) if k > avail => {
            return Err(Error::param(
                "common_dim",
                format!("{k} exceeds the {avail} nondegenerate principal axes available"),
            ))
        }
        Some(k) => k,
    };
    let fe = frame(&eeg.trajectory, ae.into_iter().take(dim).collect())?;
    let fl = frame(&llm.trajectory, al.into_iter().take(dim).collect())?;
    let length = eeg.trajectory.len().max(llm.trajectory.len());

    let map_traj = |b: &BuiltTrajectory, f: &Frame| -> Result<Trajectory> {
        let states = b.trajectory.states().iter().map(|s| f.map(s)).collect();
        Trajectory::new(states, b.trajectory.axis(), b.trajectory.step_labels().to_vec())?.resample(length)
    };
    let eeg_t = map_traj(eeg, &fe)?;
    let llm_t = map_traj(llm, &fl)?;
    let eeg_s = resample_summaries(&summaries(&eeg.trajectory, eeg.ensemble.as_ref(), &fe)?, length)?;
    let llm_s = resample_summaries(&summaries(&llm.trajectory, llm.ensemble.as_ref(), &fl)?, length)?;
    Ok(CommonSpace {
        eeg: eeg_t,
        llm: llm_t,
        eeg_summaries: eeg_s,
        llm_summaries: llm_s,
        dim,
        length,
        method: format!(
            "pca: top {dim} axes per system, oriented first-to-last, RMS-scaled; linear resampling to {length} steps"
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltc::Axis;

    fn built(states: Vec<Vec<f64>>) -> BuiltTrajectory {
        BuiltTrajectory {
            trajectory: Trajectory::unlabeled(states, Axis::Time).unwrap(),
            ensemble: None,
        }
    }

    #[test]
    fn different_dims_and_lengths_meet() {
        let a = built(vec![vec![0.0, 1.0, 2.0], vec![1.0, 1.0, 0.0], vec![2.0, 0.0, 1.0]]);
        let b = built(vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![1.0, 1.0], vec![3.0, 0.5]]);
        let c = to_common_space(&a, &b, None).unwrap();
        assert_eq!(c.length, 4);
        assert_eq!(c.eeg.dim(), c.llm.dim());
        assert_eq!(c.eeg.len(), 4);
        assert_eq!(c.eeg_summaries.len(), 4);
    }

    #[test]
    fn too_many_axes_requested() {
        let a = built(vec![vec![0.0, 1.0], vec![1.0, 1.0]]);
        assert!(matches!(
            to_common_space(&a, &a, Some(2)),
            Err(Error::InvalidParameter { .. })
        ));
    }
}

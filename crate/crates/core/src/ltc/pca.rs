use crate::error::{Error, Result};
use crate::ltc::trajectory::{StateEnsemble, Trajectory};
use crate::numcore::eigen::dot;
use crate::numcore::{principal_axes, Matrix};

fn fix_sign(coords: &mut [f64]) {
    if coords[coords.len() - 1] < coords[0] {
        coords.iter_mut().for_each(|c| *c = -*c);
    }
}

fn first_axis(stacked: &Matrix) -> Result<(Vec<f64>, Vec<f64>)> {
    let (centered, means) = stacked.center_columns();
    let (_, axes) = principal_axes(&centered, 1)?;
    let axis = axes.into_iter().next().ok_or(Error::DegenerateVariance)?;
    Ok((axis, means))
}

fn project(state: &[f64], axis: &[f64], means: &[f64]) -> f64 {
    state.iter().zip(means).zip(axis).map(|((s, m), a)| (s - m) * a).sum()
}

/// First-principal-component coordinate of each state, oriented so the last
/// coordinate is not below the first.
pub fn pca_trajectory(traj: &Trajectory) -> Result<Vec<f64>> {
    let (axis, means) = first_axis(&traj.stacked())?;
    let mut coords: Vec<f64> = traj.states().iter().map(|s| project(s, &axis, &means)).collect();
    fix_sign(&mut coords);
    Ok(coords)
}

/// As [`pca_trajectory`], with the axis fitted on every sample of every
/// step and each step's coordinate averaged over its samples.
pub fn pca_ensemble(ens: &StateEnsemble) -> Result<Vec<f64>> {
    let rows: Vec<&[f64]> = ens.steps().iter().flat_map(|m| m.row_iter()).collect();
    let (axis, means) = first_axis(&Matrix::from_rows(&rows)?)?;
    let mut coords: Vec<f64> = ens
        .steps()
        .iter()
        .map(|m| m.row_iter().map(|r| project(r, &axis, &means)).sum::<f64>() / m.rows() as f64)
        .collect();
    fix_sign(&mut coords);
    Ok(coords)
}

/// Coordinates of `state` along `axis`; exposed for callers that project
/// several systems with shared axes.
pub fn project_onto(state: &[f64], axes: &[Vec<f64>]) -> Vec<f64> {
    axes.iter().map(|a| dot(state, a)).collect()
}

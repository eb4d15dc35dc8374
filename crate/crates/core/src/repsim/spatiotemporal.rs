use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numcore::{pearson, Matrix, Tensor3};

/// Channel × time-bin correlation map between observed and predicted epochs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StCorrelationMap {
    pub channels: Vec<String>,
    pub time_bins: Vec<String>,
    /// `channels × time_bins`; skipped cells hold 0.
    pub values: Matrix,
    /// `(channel, time_bin)` cells where either side had zero variance.
    pub skipped: Vec<(usize, usize)>,
}

/// Pearson across samples for every `(channel, time)` cell.
pub fn st_correlation(
    obs: &Tensor3,
    pred: &Tensor3,
    channels: &[String],
    time_bins: &[String],
) -> Result<StCorrelationMap> {
    if obs.dims() != pred.dims() {
        return Err(Error::ShapeMismatch {
            left: obs.dims().to_vec(),
            right: pred.dims().to_vec(),
        });
    }
    let [n, c, t] = obs.dims();
    if n < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: n });
    }
    if channels.len() != c || time_bins.len() != t {
        return Err(Error::DimMismatch(format!(
            "{} channel and {} time labels for a {c}×{t} map",
            channels.len(),
            time_bins.len()
        )));
    }
    let mut values = Matrix::zeros(c, t);
    let mut skipped = Vec::new();
    let mut xo = vec![0.0; n];
    let mut xp = vec![0.0; n];
    for ch in 0..c {
        for bin in 0..t {
            for s in 0..n {
                xo[s] = obs.get(s, ch, bin);
                xp[s] = pred.get(s, ch, bin);
            }
            match pearson(&xo, &xp) {
                Ok(r) => values[(ch, bin)] = r,
                Err(Error::ZeroVariance) => skipped.push((ch, bin)),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(StCorrelationMap {
        channels: channels.to_vec(),
        time_bins: time_bins.to_vec(),
        values,
        skipped,
    })
}

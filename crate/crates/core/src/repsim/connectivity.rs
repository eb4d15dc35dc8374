use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numcore::{pearson, Matrix, Tensor3};

/// Channel × channel Pearson correlations inside one time window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectivityMatrix {
    pub channels: Vec<String>,
    /// First time index in the window.
    pub window_start: usize,
    /// One past the last time index.
    pub window_end: usize,
    /// Symmetric, unit diagonal. Pairs involving a zero-variance channel hold 0.
    pub values: Matrix,
    /// Channels with zero variance in this window.
    pub skipped_channels: Vec<usize>,
}

/// Start indices of full windows; a trailing partial window is dropped.
pub fn window_starts(len: usize, window: usize, stride: usize) -> Result<Vec<usize>> {
    if window == 0 {
        return Err(Error::param("window", "must be at least 1"));
    }
    if stride == 0 {
        return Err(Error::param("stride", "must be at least 1"));
    }
    if window > len {
        return Err(Error::WindowTooLarge { window, len });
    }
    Ok((0..=len - window).step_by(stride).collect())
}

/// Sliding-window functional connectivity of `samples × channels × time` data.
///
/// Within each window the observations of a channel are all
/// `(sample, time)` pairs, pooled.
pub fn functional_connectivity(
    sig: &Tensor3,
    channels: &[String],
    window: usize,
    stride: usize,
) -> Result<Vec<ConnectivityMatrix>> {
    let [n, c, t] = sig.dims();
    if channels.len() != c {
        return Err(Error::DimMismatch(format!(
            "{} channel labels for {c} channels",
            channels.len()
        )));
    }
    let starts = window_starts(t, window, stride)?;
    if n * window < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: n * window,
        });
    }
    starts
        .par_iter()
        .map(|&start| {
            let pooled: Vec<Vec<f64>> = (0..c)
                .map(|ch| {
                    let mut v = Vec::with_capacity(n * window);
                    for s in 0..n {
                        for k in start..start + window {
                            v.push(sig.get(s, ch, k));
                        }
                    }
                    v
                })
                .collect();
            let flat: Vec<bool> = pooled.iter().map(|v| v.iter().all(|&x| x == v[0])).collect();
            let mut values = Matrix::identity(c);
            for i in 0..c {
                for j in (i + 1)..c {
                    let r = if flat[i] || flat[j] {
                        0.0
                    } else {
                        pearson(&pooled[i], &pooled[j])?
                    };
                    values[(i, j)] = r;
                    values[(j, i)] = r;
                }
            }
            Ok(ConnectivityMatrix {
                channels: channels.to_vec(),
                window_start: start,
                window_end: start + window,
                values,
                skipped_channels: (0..c).filter(|&i| flat[i]).collect(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows_tile_and_drop_partial() {
        assert_eq!(window_starts(10, 4, 3).unwrap(), vec![0, 3, 6]);
        assert_eq!(window_starts(4, 4, 1).unwrap(), vec![0]);
        assert!(matches!(window_starts(3, 4, 1), Err(Error::WindowTooLarge { .. })));
        assert!(matches!(window_starts(3, 1, 0), Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn flat_channel_is_reported() {
        let sig = Tensor3::from_fn([2, 2, 3], |s, c, t| if c == 0 { 1.0 } else { (s + t) as f64 }).unwrap();
        let fc = functional_connectivity(&sig, &["a".into(), "b".into()], 3, 1).unwrap();
        assert_eq!(fc.len(), 1);
        assert_eq!(fc[0].skipped_channels, vec![0]);
        assert_eq!(fc[0].values[(0, 1)], 0.0);
        assert_eq!(fc[0].values[(0, 0)], 1.0);
    }
}

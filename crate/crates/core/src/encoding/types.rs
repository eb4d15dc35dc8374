use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::numcore::{Matrix, Tensor3};

fn check_unique(labels: &[String], what: &str) -> Result<()> {
    let mut seen = HashSet::with_capacity(labels.len());
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::DuplicateIds(format!("{what} (`{l}`)")));
        }
    }
    Ok(())
}

pub(crate) fn default_ids(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Recorded responses: `N` samples × `d` features.
///
/// Features are stored channel-major when the matrix holds epochs: feature
/// `c·T + t` is channel `c` at time bin `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct SignalMatrix {
    data: Matrix,
    sample_ids: Vec<String>,
    feature_labels: Vec<String>,
}

impl SignalMatrix {
    pub fn new(data: Matrix, sample_ids: Vec<String>, feature_labels: Vec<String>) -> Result<Self> {
        if data.rows() < 2 {
            return Err(Error::InsufficientSamples {
                needed: 2,
                got: data.rows(),
            });
        }
        if sample_ids.len() != data.rows() {
            return Err(Error::DimMismatch(format!(
                "{} sample ids for {} signal rows",
                sample_ids.len(),
                data.rows()
            )));
        }
        if feature_labels.len() != data.cols() {
            return Err(Error::DimMismatch(format!(
                "{} feature labels for {} signal columns",
                feature_labels.len(),
                data.cols()
            )));
        }
        check_unique(&sample_ids, "signal sample ids")?;
        check_unique(&feature_labels, "signal feature labels")?;
        Ok(Self {
            data,
            sample_ids,
            feature_labels,
        })
    }

    /// Default labels `s0..` and `f0..`.
    pub fn unlabeled(data: Matrix) -> Result<Self> {
        let ids = default_ids("s", data.rows());
        let labels = default_ids("f", data.cols());
        Self::new(data, ids, labels)
    }

    /// Labels features `"{channel}@{bin}"` for a channel-major epoch layout.
    pub fn from_epochs(epochs: &Tensor3, sample_ids: Vec<String>, channels: &[String]) -> Result<Self> {
        let [_, c, t] = epochs.dims();
        if channels.len() != c {
            return Err(Error::DimMismatch(format!(
                "{} channel labels for {c} channels",
                channels.len()
            )));
        }
        let labels = channels
            .iter()
            .flat_map(|ch| (0..t).map(move |b| format!("{ch}@{b}")))
            .collect();
        Self::new(epochs.flatten_trailing(), sample_ids, labels)
    }

    pub fn data(&self) -> &Matrix {
        &self.data
    }

    pub fn sample_ids(&self) -> &[String] {
        &self.sample_ids
    }

    pub fn feature_labels(&self) -> &[String] {
        &self.feature_labels
    }

    pub fn n_samples(&self) -> usize {
        self.data.rows()
    }

    pub fn n_features(&self) -> usize {
        self.data.cols()
    }

    /// Reshapes to `N × channels × time_bins`.
    pub fn to_epochs(&self, channels: usize) -> Result<Tensor3> {
        Tensor3::from_flat(&self.data, channels)
    }
}

/// Layerwise model embeddings: `N` samples × `L` layers × `D` dims.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingTensor {
    data: Tensor3,
    sample_ids: Vec<String>,
}

impl EmbeddingTensor {
    pub fn new(data: Tensor3, sample_ids: Vec<String>) -> Result<Self> {
        let [n, l, d] = data.dims();
        if sample_ids.len() != n {
            return Err(Error::DimMismatch(format!(
                "{} sample ids for {n} embedding rows",
                sample_ids.len()
            )));
        }
        if l == 0 || d == 0 {
            return Err(Error::DimMismatch(format!("embedding has {l} layers of width {d}")));
        }
        check_unique(&sample_ids, "embedding sample ids")?;
        Ok(Self { data, sample_ids })
    }

    pub fn unlabeled(data: Tensor3) -> Result<Self> {
        let ids = default_ids("s", data.dims()[0]);
        Self::new(data, ids)
    }

    pub fn data(&self) -> &Tensor3 {
        &self.data
    }

    pub fn sample_ids(&self) -> &[String] {
        &self.sample_ids
    }

    pub fn n_samples(&self) -> usize {
        self.data.dims()[0]
    }

    pub fn layer_count(&self) -> usize {
        self.data.dims()[1]
    }

    pub fn dim(&self) -> usize {
        self.data.dims()[2]
    }

    /// `N × D` features of one layer.
    pub fn layer(&self, l: usize) -> Matrix {
        self.data.middle_slice(l)
    }

    /// Errors unless both sides carry the same sample ids in the same order.
    pub fn check_aligned(&self, sig: &SignalMatrix) -> Result<()> {
        if self.n_samples() != sig.n_samples() {
            return Err(Error::DimMismatch(format!(
                "embedding has {} samples, signal has {}",
                self.n_samples(),
                sig.n_samples()
            )));
        }
        if let Some(i) = (0..self.n_samples()).find(|&i| self.sample_ids[i] != sig.sample_ids()[i]) {
            return Err(Error::DimMismatch(format!(
                "sample {i} is `{}` in the embedding but `{}` in the signal",
                self.sample_ids[i],
                sig.sample_ids()[i]
            )));
        }
        Ok(())
    }
}

//! Dataset manifests.
//!
//! A manifest is a TOML document; relative paths resolve against the
//! manifest's directory.
//!
//! ```toml
//! format = "trajsim-manifest/1"
//! signal = "signal.trjl"          # N × (channels·time_bins) or N × channels × time_bins
//! embedding = "embedding.trjl"    # N × layers × dim
//! channels = ["Fz", "Cz", "Pz"]
//! time_bins = 4
//! sampling_rate_hz = 250.0        # optional
//! sample_ids = ["s0", "s1"]       # optional, defaults to s0, s1, ...
//! layer_names = ["emb", "l1"]     # optional, defaults to layer0, layer1, ...
//! channel_coordinates = "coords.csv"  # optional; header `channel,x,y` or `channel,x,y,z`
//! ```
//!
//! `signal` may also point at a `.csv` file (header row of feature names).

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::encoding::types::default_ids;
use crate::encoding::{EmbeddingTensor, SignalMatrix};
use crate::error::{Error, Result};
use crate::ingest::csv_import::read_csv_matrix;
use crate::ingest::tensorfile::read_tensor;
use crate::numcore::Tensor3;

pub const MANIFEST_FORMAT: &str = "trajsim-manifest/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetManifest {
    pub format: String,
    pub signal: PathBuf,
    pub embedding: PathBuf,
    pub channels: Vec<String>,
    pub time_bins: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling_rate_hz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_ids: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layer_names: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel_coordinates: Option<PathBuf>,
}

impl DatasetManifest {
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let m: Self = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if m.format != MANIFEST_FORMAT {
            return Err(Error::Parse(format!(
                "unsupported manifest format `{}` (expected `{MANIFEST_FORMAT}`)",
                m.format
            )));
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelCoordinate {
    pub channel: String,
    pub x: f64,
    pub y: f64,
    pub z: Option<f64>,
}

/// A validated, loaded dataset.
#[derive(Clone, Debug)]
pub struct Dataset {
    pub manifest: DatasetManifest,
    pub signal: SignalMatrix,
    pub embedding: EmbeddingTensor,
    pub channels: Vec<String>,
    pub time_bins: usize,
    pub layer_names: Vec<String>,
    pub coordinates: Option<Vec<ChannelCoordinate>>,
}

impl Dataset {
    /// Signal as `N × channels × time_bins`.
    pub fn epochs(&self) -> Tensor3 {
        self.signal
            .to_epochs(self.channels.len())
            .expect("layout validated on load")
    }

    pub fn time_bin_labels(&self) -> Vec<String> {
        (0..self.time_bins).map(|t| t.to_string()).collect()
    }
}

fn unique(labels: &[String], what: &str) -> Result<()> {
    let mut seen = HashSet::new();
    match labels.iter().find(|l| !seen.insert(l.as_str())) {
        Some(dup) => Err(Error::DuplicateIds(format!("{what} (`{dup}`)"))),
        None => Ok(()),
    }
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn read_coordinates(path: &Path, channels: &[String]) -> Result<Vec<ChannelCoordinate>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Parse(format!("{other:?}")),
    })?;
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::Parse(e.to_string()))?
        .iter()
        .map(|h| h.trim().to_ascii_lowercase())
        .collect();
    let has_z = match header.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["channel", "x", "y"] => false,
        ["channel", "x", "y", "z"] => true,
        _ => {
            return Err(Error::Parse(format!(
                "{}: coordinate header must be `channel,x,y[,z]`",
                path.display()
            )))
        }
    };
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        let num = |i: usize| -> Result<f64> {
            record[i]
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{}: bad coordinate `{}`", path.display(), &record[i])))
        };
        out.push(ChannelCoordinate {
            channel: record[0].trim().to_string(),
            x: num(1)?,
            y: num(2)?,
            z: if has_z { Some(num(3)?) } else { None },
        });
    }
    if out.len() != channels.len() {
        return Err(Error::DimMismatch(format!(
            "{} channel coordinates for {} channels",
            out.len(),
            channels.len()
        )));
    }
    if let Some((c, ch)) = out.iter().zip(channels).find(|(c, ch)| &c.channel != *ch) {
        return Err(Error::DimMismatch(format!(
            "coordinate row `{}` does not match channel `{ch}`",
            c.channel
        )));
    }
    Ok(out)
}

fn load_signal(path: &Path, channels: &[String], time_bins: usize, ids: Option<&[String]>) -> Result<SignalMatrix> {
    let width = channels.len() * time_bins;
    let matrix = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        read_csv_matrix(path)?.1
    } else {
        let t = read_tensor(path)?;
        match t.dims.len() {
            2 => t.to_matrix()?,
            _ => {
                if t.dims[1] != channels.len() || t.dims[2] != time_bins {
                    return Err(Error::DimMismatch(format!(
                        "signal tensor is {:?} but the manifest declares {} channels × {time_bins} time bins",
                        t.dims,
                        channels.len()
                    )));
                }
                t.to_tensor3()?.flatten_trailing()
            }
        }
    };
    if matrix.cols() != width {
        return Err(Error::DimMismatch(format!(
            "signal has {} features but the manifest declares {} channels × {time_bins} time bins",
            matrix.cols(),
            channels.len()
        )));
    }
    let ids = match ids {
        Some(ids) => {
            if ids.len() != matrix.rows() {
                return Err(Error::DimMismatch(format!(
                    "{} sample ids for {} signal rows",
                    ids.len(),
                    matrix.rows()
                )));
            }
            ids.to_vec()
        }
        None => default_ids("s", matrix.rows()),
    };
    let epochs = Tensor3::from_flat(&matrix, channels.len())?;
    SignalMatrix::from_epochs(&epochs, ids, channels)
}

/// Reads and cross-checks a manifest and everything it references.
pub fn load_manifest(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let manifest = DatasetManifest::from_toml(&text)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    if manifest.channels.is_empty() {
        return Err(Error::DimMismatch("manifest lists no channels".into()));
    }
    if manifest.time_bins == 0 {
        return Err(Error::DimMismatch("time_bins must be at least 1".into()));
    }
    if let Some(rate) = manifest.sampling_rate_hz {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::Parse(format!("sampling_rate_hz must be positive, got {rate}")));
        }
    }
    unique(&manifest.channels, "channels")?;
    if let Some(ids) = &manifest.sample_ids {
        unique(ids, "sample ids")?;
    }

    let signal_path = resolve(base, &manifest.signal);
    let embedding_path = resolve(base, &manifest.embedding);
    for p in [&signal_path, &embedding_path] {
        if !p.exists() {
            return Err(Error::MissingFile(p.clone()));
        }
    }
    let signal = load_signal(
        &signal_path,
        &manifest.channels,
        manifest.time_bins,
        manifest.sample_ids.as_deref(),
    )?;
    let emb_tensor = read_tensor(&embedding_path)?.to_tensor3()?;
    if emb_tensor.dims()[0] != signal.n_samples() {
        return Err(Error::DimMismatch(format!(
            "embedding has {} samples, signal has {}",
            emb_tensor.dims()[0],
            signal.n_samples()
        )));
    }
    let embedding = EmbeddingTensor::new(emb_tensor, signal.sample_ids().to_vec())?;

    let layer_names = match &manifest.layer_names {
        Some(names) => {
            if names.len() != embedding.layer_count() {
                return Err(Error::DimMismatch(format!(
                    "{} layer names for {} layers",
                    names.len(),
                    embedding.layer_count()
                )));
            }
            unique(names, "layer names")?;
            names.clone()
        }
        None => default_ids("layer", embedding.layer_count()),
    };
    let coordinates = manifest
        .channel_coordinates
        .as_ref()
        .map(|p| read_coordinates(&resolve(base, p), &manifest.channels))
        .transpose()?;

    Ok(Dataset {
        channels: manifest.channels.clone(),
        time_bins: manifest.time_bins,
        layer_names,
        coordinates,
        signal,
        embedding,
        manifest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_fields_rejected() {
        let text = r#"
format = "trajsim-manifest/1"
signal = "s.trjl"
embedding = "e.trjl"
channels = ["a"]
time_bins = 1
colour = "blue"
"#;
        assert!(matches!(DatasetManifest::from_toml(text), Err(Error::Parse(_))));
    }

    #[test]
    fn wrong_format_tag() {
        let text = r#"
format = "something-else"
signal = "s.trjl"
embedding = "e.trjl"
channels = ["a"]
time_bins = 1
"#;
        assert!(DatasetManifest::from_toml(text).is_err());
    }
}

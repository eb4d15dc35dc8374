use serde::{Deserialize, Serialize};

use crate::encoding::types::default_ids;
use crate::encoding::{EmbeddingTensor, SignalMatrix};
use crate::error::{Error, Result};
use crate::ingest::rng::SeededRng;
use crate::numcore::{Matrix, Tensor3};

/// Parameters of a coupled embedding/signal pair with a known readout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub n: usize,
    /// Signal features, laid out as `channels × time_bins`.
    pub d: usize,
    pub layers: usize,
    pub dim: usize,
    pub coupled_layer: usize,
    pub noise_sigma: f64,
    pub seed: u64,
    /// Must divide `d`.
    pub time_bins: usize,
}

impl SynthConfig {
    /// Four time bins when `d` allows at least two channels of four, else one.
    pub fn default_time_bins(d: usize) -> usize {
        if d >= 8 && d.is_multiple_of(4) {
            4
        } else {
            1
        }
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |name, reason: &str| Err(Error::param(name, reason.to_string()));
        if self.n < 2 {
            return invalid("n", "must be at least 2");
        }
        if self.d == 0 {
            return invalid("d", "must be at least 1");
        }
        if self.layers == 0 {
            return invalid("layers", "must be at least 1");
        }
        if self.dim == 0 {
            return invalid("dim", "must be at least 1");
        }
        if self.coupled_layer >= self.layers {
            return Err(Error::param(
                "coupled_layer",
                format!("{} is out of range for {} layers", self.coupled_layer, self.layers),
            ));
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return invalid("noise", "must be a nonnegative real");
        }
        if self.time_bins == 0 || !self.d.is_multiple_of(self.time_bins) {
            return Err(Error::param(
                "time_bins",
                format!("{} does not divide d = {}", self.time_bins, self.d),
            ));
        }
        Ok(())
    }

    pub fn channels(&self) -> usize {
        self.d / self.time_bins
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    /// `dim × d` readout from the coupled layer.
    pub w_true: Matrix,
    pub coupled_layer: usize,
    pub noise_sigma: f64,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct SynthOutput {
    pub config: SynthConfig,
    pub embedding: EmbeddingTensor,
    pub signal: SignalMatrix,
    pub channels: Vec<String>,
    pub truth: GroundTruth,
}

/// Draws, in this order from one stream seeded with `cfg.seed`: the
/// `n × layers × dim` embeddings, the `dim × d` readout (scaled by `1/√dim`),
/// then the `n × d` noise. Signals are `emb[:, coupled, :] · W + σ·noise`.
pub fn synth_generate(cfg: &SynthConfig) -> Result<SynthOutput> {
    cfg.validate()?;
    let mut rng = SeededRng::new(cfg.seed);
    let emb = Tensor3::from_fn([cfg.n, cfg.layers, cfg.dim], |_, _, _| rng.standard_normal())?;
    let scale = 1.0 / (cfg.dim as f64).sqrt();
    let w_true = Matrix::from_fn(cfg.dim, cfg.d, |_, _| rng.standard_normal() * scale)?;
    let noise = Matrix::from_fn(cfg.n, cfg.d, |_, _| rng.standard_normal())?;
    let clean = emb.middle_slice(cfg.coupled_layer).matmul(&w_true)?;
    let signal = clean.add(&noise.scale(cfg.noise_sigma)?)?;

    let ids = default_ids("s", cfg.n);
    let channels = default_ids("ch", cfg.channels());
    let epochs = Tensor3::from_flat(&signal, channels.len())?;
    Ok(SynthOutput {
        config: cfg.clone(),
        embedding: EmbeddingTensor::new(emb, ids.clone())?,
        signal: SignalMatrix::from_epochs(&epochs, ids, &channels)?,
        channels,
        truth: GroundTruth {
            w_true,
            coupled_layer: cfg.coupled_layer,
            noise_sigma: cfg.noise_sigma,
            seed: cfg.seed,
        },
    })
}

use std::path::Path;

use clap::{Args, ValueEnum};
use serde::Serialize;

use crate::cli::output::OutDir;
use crate::cli::usage;
use crate::error::Result;
use crate::ingest::tensorfile::{TensorData, TensorValues};
use crate::ingest::{synth_generate, DatasetManifest, SynthConfig, MANIFEST_FORMAT};
use crate::numcore::Matrix;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DtypeArg {
    F32,
    F64,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Number of samples.
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    /// Signal features per sample (channels × time bins).
    #[arg(long, default_value_t = 16)]
    pub d: usize,
    #[arg(long, default_value_t = 8)]
    pub layers: usize,
    /// Embedding dimension.
    #[arg(long, default_value_t = 32)]
    pub dim: usize,
    #[arg(long, default_value_t = 3)]
    pub coupled_layer: usize,
    /// Noise standard deviation.
    #[arg(long, default_value_t = 0.5)]
    pub noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Time bins per channel; must divide `d` (default 4 when d ≥ 8 and 4 | d, else 1).
    #[arg(long)]
    pub time_bins: Option<usize>,
    /// Storage type of the written tensors.
    #[arg(long, value_enum, default_value_t = DtypeArg::F64)]
    pub dtype: DtypeArg,
}

#[derive(Serialize)]
struct GroundTruthRecord<'a> {
    config: &'a SynthConfig,
    coupled_layer: usize,
    noise_sigma: f64,
    seed: u64,
    channels: &'a [String],
    w_true: &'a Matrix,
}

fn stored(t: TensorData, dtype: DtypeArg) -> Result<TensorData> {
    match dtype {
        DtypeArg::F64 => Ok(t),
        DtypeArg::F32 => {
            let v = t.values.to_f64().into_iter().map(|x| x as f32).collect();
            TensorData::new(t.dims, TensorValues::F32(v))
        }
    }
}

pub(crate) fn run(args: &SynthArgs, out: &Path) -> Result<()> {
    let cfg = SynthConfig {
        n: args.n,
        d: args.d,
        layers: args.layers,
        dim: args.dim,
        coupled_layer: args.coupled_layer,
        noise_sigma: args.noise,
        seed: args.seed,
        time_bins: args.time_bins.unwrap_or_else(|| SynthConfig::default_time_bins(args.d)),
    };
    cfg.validate().map_err(usage)?;
    let data = synth_generate(&cfg)?;
    let dir = OutDir::create(out)?;

    let signal = stored(TensorData::from_matrix(data.signal.data()), args.dtype)?;
    let embedding = stored(TensorData::from_tensor3(data.embedding.data()), args.dtype)?;
    crate::ingest::write_tensor(dir.path("signal.trjl"), &signal)?;
    crate::ingest::write_tensor(dir.path("embedding.trjl"), &embedding)?;
    let manifest = DatasetManifest {
        format: MANIFEST_FORMAT.into(),
        signal: "signal.trjl".into(),
        embedding: "embedding.trjl".into(),
        channels: data.channels.clone(),
        time_bins: cfg.time_bins,
        sampling_rate_hz: None,
        sample_ids: None,
        layer_names: None,
        channel_coordinates: None,
    };
    dir.write_text("manifest.toml", &manifest.to_toml()?)?;
    dir.write_json(
        "ground_truth.json",
        &GroundTruthRecord {
            config: &cfg,
            coupled_layer: data.truth.coupled_layer,
            noise_sigma: data.truth.noise_sigma,
            seed: data.truth.seed,
            channels: &data.channels,
            w_true: &data.truth.w_true,
        },
    )?;
    log::info!("synth: wrote {} samples to {}", cfg.n, out.display());
    Ok(())
}

use std::path::{Path, PathBuf};

use clap::Args;

use crate::cli::output::{num, opt_num, OutDir};
use crate::cli::usage;
use crate::encoding::{cross_validated_predictions, log_grid, nested_cv_encode, EncodingConfig};
use crate::error::Result;
use crate::ingest::{load_manifest, write_tensor, TensorData};

#[derive(Debug, Args)]
pub struct EncodeArgs {
    /// Dataset manifest.
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long, default_value_t = 5)]
    pub outer_folds: usize,
    #[arg(long, default_value_t = 3)]
    pub inner_folds: usize,
    /// Explicit penalty grid, comma separated; overrides the log grid.
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1e-3)]
    pub alpha_min: f64,
    #[arg(long, default_value_t = 1e3)]
    pub alpha_max: f64,
    #[arg(long, default_value_t = 13)]
    pub alpha_count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub(crate) fn config(args: &EncodeArgs) -> Result<EncodingConfig> {
    let alpha_grid = match &args.alphas {
        Some(a) => a.clone(),
        None => {
            if !(args.alpha_min > 0.0 && args.alpha_max >= args.alpha_min && args.alpha_count >= 1) {
                return Err(usage(crate::Error::param(
                    "alpha_grid",
                    "need 0 < alpha-min ≤ alpha-max and alpha-count ≥ 1",
                )));
            }
            log_grid(args.alpha_min, args.alpha_max, args.alpha_count)
        }
    };
    let cfg = EncodingConfig {
        outer_folds: args.outer_folds,
        inner_folds: args.inner_folds,
        alpha_grid,
        seed: args.seed,
    };
    cfg.validate().map_err(usage)?;
    Ok(cfg)
}

pub(crate) fn run(args: &EncodeArgs, out: &Path) -> Result<()> {
    let cfg = config(args)?;
    let data = load_manifest(&args.manifest)?;
    let report = nested_cv_encode(&data.embedding, &data.signal, &cfg)?;
    let predictions = cross_validated_predictions(&data.embedding.layer(report.best_layer), data.signal.data(), &cfg)?;

    let dir = OutDir::create(out)?;
    dir.write_json("encoding_report.json", &report)?;
    let rows: Vec<Vec<String>> = report
        .layers
        .iter()
        .map(|l| {
            vec![
                l.layer.to_string(),
                data.layer_names[l.layer].clone(),
                num(l.mse),
                opt_num(l.r),
                opt_num(l.rsa),
                opt_num(l.rsa_pearson),
                opt_num(l.cka),
            ]
        })
        .collect();
    dir.write_csv(
        "encoding_layers.csv",
        &["layer", "name", "mse", "r", "rsa", "rsa_pearson", "cka"],
        &rows,
    )?;
    write_tensor(dir.path("predictions.trjl"), &TensorData::from_matrix(&predictions))?;
    log::info!("encode: best layer {}", report.best_layer);
    Ok(())
}

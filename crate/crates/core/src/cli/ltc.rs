use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Serialize;

use crate::cli::output::{num, opt_num, OutDir};
use crate::cli::usage;
use crate::encoding::SignalMatrix;
use crate::error::{Error, Result};
use crate::ingest::{load_manifest, read_tensor, Dataset};
use crate::ltc::{
    align_profiles, build_trajectory, compute_profile, dra_with_summaries, to_common_space, AlignmentProfile,
    BuiltTrajectory, DraConfig, DraNormalization, DraReport, ProfileConfig, Reduce, TrajectoryProfile,
    TrajectorySource,
};
use crate::numcore::{GaussianSummary, Tensor3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceArg {
    /// Signal epochs, one state per time window.
    Signal,
    /// Model embeddings, one state per layer.
    Embedding,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum NormalizationArg {
    Convex,
    L2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DraSpaceArg {
    /// Top principal axes of each system.
    Pca,
    /// Observed versus ridge-predicted signal (needs `--predicted`).
    Encoding,
}

#[derive(Debug, Args)]
pub struct LtcArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Source of the first ("eeg") trajectory.
    #[arg(long, value_enum, default_value_t = SourceArg::Signal)]
    pub eeg_source: SourceArg,
    /// Source of the second ("llm") trajectory.
    #[arg(long, value_enum, default_value_t = SourceArg::Embedding)]
    pub llm_source: SourceArg,
    /// Time window (bins) for signal trajectories.
    #[arg(long, default_value_t = 1)]
    pub window: usize,
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    /// Gamma shape of the DRA step weights.
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    /// KL penalty weight, in (0, 5].
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value_t = NormalizationArg::Convex)]
    pub normalization: NormalizationArg,
    /// Keep negative per-step DRA scores.
    #[arg(long)]
    pub no_clamp: bool,
    /// Common-space dimension for the PCA mapping (default: automatic).
    #[arg(long)]
    pub common_dim: Option<usize>,
    /// Rényi order of the matrix entropy.
    #[arg(long, default_value_t = 1.0)]
    pub entropy_alpha: f64,
    /// Histogram bins for mutual information (default: max(2, round(1 + √(N/40)))).
    #[arg(long)]
    pub mi_bins: Option<usize>,
    #[arg(long, value_enum, default_value_t = DraSpaceArg::Pca)]
    pub dra_space: DraSpaceArg,
    /// Predicted signal tensor for `--dra-space encoding`.
    #[arg(long)]
    pub predicted: Option<PathBuf>,
}

#[derive(Serialize)]
struct DraOutput<'a> {
    space: DraSpaceArg,
    mapping: String,
    common_dim: usize,
    length: usize,
    primary: &'a DraReport,
    /// The same terms under both normalisations.
    variants: BTreeMap<&'static str, f64>,
}

#[derive(Serialize)]
struct SystemSeries {
    magnitude: Vec<f64>,
    angle: Vec<Option<f64>>,
    entropy: Vec<f64>,
    confidence: Vec<f64>,
    mi: Vec<f64>,
}

#[derive(Serialize)]
struct Descriptors {
    skewness: Option<f64>,
    excess_kurtosis: Option<f64>,
    lyapunov: Option<f64>,
}

#[derive(Serialize)]
struct Summary<'a> {
    sources: BTreeMap<&'static str, SourceArg>,
    series: BTreeMap<&'static str, SystemSeries>,
    descriptors: BTreeMap<&'static str, Descriptors>,
    dra: f64,
    dra_normalization: &'static str,
    alignment: &'a AlignmentProfile,
    estimators: BTreeMap<&'static str, String>,
}

fn series(p: &TrajectoryProfile) -> SystemSeries {
    SystemSeries {
        magnitude: p.step_magnitudes.clone(),
        angle: p.step_angles.clone(),
        entropy: p.entropy_series.clone(),
        confidence: p.confidence_series.clone(),
        mi: p.mi_series.clone(),
    }
}

fn descriptors(p: &TrajectoryProfile) -> Descriptors {
    Descriptors {
        skewness: p.skewness,
        excess_kurtosis: p.excess_kurtosis,
        lyapunov: p.lyapunov.as_ref().map(|l| l.exponent),
    }
}

fn build(data: &Dataset, epochs: &Tensor3, source: SourceArg, window: usize, stride: usize) -> Result<BuiltTrajectory> {
    let src = match source {
        SourceArg::Signal => TrajectorySource::SignalEpochs { epochs, window, stride },
        SourceArg::Embedding => TrajectorySource::Embedding(&data.embedding),
    };
    build_trajectory(src, Reduce::Sample)
}

fn ensemble_summaries(b: &BuiltTrajectory) -> Result<Vec<GaussianSummary>> {
    let ens = b.ensemble.as_ref().expect("built with samples");
    ens.steps().iter().map(GaussianSummary::from_samples).collect()
}

fn dra_config(args: &LtcArgs) -> Result<DraConfig> {
    let cfg = DraConfig {
        beta: args.beta,
        alpha_penalty: args.alpha,
        epsilon: args.epsilon,
        normalization: match args.normalization {
            NormalizationArg::Convex => DraNormalization::Convex,
            NormalizationArg::L2 => DraNormalization::L2,
        },
        clamp_negative: !args.no_clamp,
        common_dim: args.common_dim,
    };
    cfg.validate().map_err(usage)?;
    Ok(cfg)
}

fn profile_config(args: &LtcArgs) -> Result<ProfileConfig> {
    if !(args.entropy_alpha.is_finite() && args.entropy_alpha > 0.0) {
        return Err(usage(Error::param("entropy_alpha", "must be a positive real")));
    }
    if matches!(args.mi_bins, Some(b) if b < 2) {
        return Err(usage(Error::param("mi_bins", "need at least 2")));
    }
    Ok(ProfileConfig {
        entropy_alpha: args.entropy_alpha,
        epsilon: args.epsilon,
        mi_bins: args.mi_bins,
    })
}

pub(crate) fn run(args: &LtcArgs, out: &Path) -> Result<()> {
    let dcfg = dra_config(args)?;
    let pcfg = profile_config(args)?;
    if args.window == 0 || args.stride == 0 {
        return Err(usage(Error::param(
            if args.window == 0 { "window" } else { "stride" },
            "must be at least 1",
        )));
    }
    if args.dra_space == DraSpaceArg::Encoding && args.predicted.is_none() {
        return Err(usage(Error::param("predicted", "required with --dra-space encoding")));
    }
    let data = load_manifest(&args.manifest)?;
    let epochs = data.epochs();
    let eeg = build(&data, &epochs, args.eeg_source, args.window, args.stride)?;
    let llm = build(&data, &epochs, args.llm_source, args.window, args.stride)?;

    let profile =
        |b: &BuiltTrajectory| compute_profile(&b.trajectory, b.ensemble.as_ref().expect("built with samples"), &pcfg);
    let eeg_p = profile(&eeg)?;
    let llm_p = profile(&llm)?;
    let alignment = align_profiles(&eeg_p, &llm_p)?;

    let (e, l, p, q, mapping, common_dim, length) = match args.dra_space {
        DraSpaceArg::Pca => {
            let cs = to_common_space(&eeg, &llm, dcfg.common_dim)?;
            (
                cs.eeg,
                cs.llm,
                cs.eeg_summaries,
                cs.llm_summaries,
                cs.method,
                cs.dim,
                cs.length,
            )
        }
        DraSpaceArg::Encoding => {
            let pred = read_tensor(args.predicted.as_ref().expect("checked above"))?.to_matrix()?;
            let obs = data.signal.data();
            if pred.shape() != obs.shape() {
                return Err(Error::ShapeMismatch {
                    left: vec![obs.rows(), obs.cols()],
                    right: vec![pred.rows(), pred.cols()],
                });
            }
            let pred_epochs = SignalMatrix::unlabeled(pred)?.to_epochs(data.channels.len())?;
            let observed = build(&data, &epochs, SourceArg::Signal, args.window, args.stride)?;
            let predicted = build(&data, &pred_epochs, SourceArg::Signal, args.window, args.stride)?;
            let (p, q) = (ensemble_summaries(&observed)?, ensemble_summaries(&predicted)?);
            let dim = observed.trajectory.dim();
            let len = observed.trajectory.len();
            (
                observed.trajectory,
                predicted.trajectory,
                p,
                q,
                "encoding: observed versus predicted signal, channel space".to_string(),
                dim,
                len,
            )
        }
    };
    let report = dra_with_summaries(&e, &l, &p, &q, &dcfg)?;
    let mut variants = BTreeMap::new();
    for (name, norm) in [("convex", DraNormalization::Convex), ("l2", DraNormalization::L2)] {
        let cfg = DraConfig {
            normalization: norm,
            ..dcfg
        };
        variants.insert(name, dra_with_summaries(&e, &l, &p, &q, &cfg)?.value);
    }
    let norm_name = match dcfg.normalization {
        DraNormalization::Convex => "convex",
        DraNormalization::L2 => "l2",
    };

    let dir = OutDir::create(out)?;
    dir.write_json("profile_eeg.json", &eeg_p)?;
    dir.write_json("profile_llm.json", &llm_p)?;
    dir.write_json("alignment.json", &alignment)?;
    dir.write_json(
        "dra.json",
        &DraOutput {
            space: args.dra_space,
            mapping,
            common_dim,
            length,
            primary: &report,
            variants,
        },
    )?;

    let mut pca_rows = Vec::new();
    for (name, prof) in [("eeg", &eeg_p), ("llm", &llm_p)] {
        if let Some(c) = &prof.pca1 {
            for (i, v) in c.iter().enumerate() {
                pca_rows.push(vec![
                    name.to_string(),
                    i.to_string(),
                    prof.step_labels[i].clone(),
                    num(*v),
                ]);
            }
        }
    }
    dir.write_csv("pca1.csv", &["system", "step", "label", "pc1"], &pca_rows)?;

    let mut long = Vec::new();
    for (name, prof) in [("eeg", &eeg_p), ("llm", &llm_p)] {
        let mut push = |metric: &str, values: Vec<String>| {
            for (i, v) in values.into_iter().enumerate() {
                long.push(vec![i.to_string(), name.to_string(), metric.to_string(), v]);
            }
        };
        push("magnitude", prof.step_magnitudes.iter().map(|v| num(*v)).collect());
        push("angle", prof.step_angles.iter().map(|v| opt_num(*v)).collect());
        push("entropy", prof.entropy_series.iter().map(|v| num(*v)).collect());
        push("confidence", prof.confidence_series.iter().map(|v| num(*v)).collect());
        push("mi", prof.mi_series.iter().map(|v| num(*v)).collect());
    }
    dir.write_csv("series.csv", &["step", "system", "metric", "value"], &long)?;

    let mut estimators = BTreeMap::new();
    estimators.insert(
        "entropy",
        format!("matrix Renyi entropy, alpha = {}", pcfg.entropy_alpha),
    );
    estimators.insert(
        "mi",
        format!(
            "first principal component per side, equal-width bins, {} bins",
            eeg_p.mi_bins
        ),
    );
    estimators.insert(
        "lyapunov",
        "nearest-neighbour divergence on the PCA-1 series, embedding dim 2, lag 1, slope over the first 5 steps".into(),
    );
    estimators.insert(
        "dynamics_scale",
        "per-trajectory maximum (shared-scale values in alignment)".into(),
    );
    estimators.insert("resampling", "linear".into());
    let mut sources = BTreeMap::new();
    sources.insert("eeg", args.eeg_source);
    sources.insert("llm", args.llm_source);
    let mut all_series = BTreeMap::new();
    all_series.insert("eeg", series(&eeg_p));
    all_series.insert("llm", series(&llm_p));
    let mut all_desc = BTreeMap::new();
    all_desc.insert("eeg", descriptors(&eeg_p));
    all_desc.insert("llm", descriptors(&llm_p));
    dir.write_json(
        "ltc_summary.json",
        &Summary {
            sources,
            series: all_series,
            descriptors: all_desc,
            dra: report.value,
            dra_normalization: norm_name,
            alignment: &alignment,
            estimators,
        },
    )?;
    log::info!("ltc: DRA ({norm_name}) = {}", report.value);
    Ok(())
}

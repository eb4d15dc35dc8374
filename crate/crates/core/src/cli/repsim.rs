use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Serialize;

use crate::cli::output::{num, OutDir};
use crate::cli::usage;
use crate::encoding::SignalMatrix;
use crate::error::{Error, Result};
use crate::ingest::{load_manifest, read_tensor};
use crate::numcore::{Matrix, Tensor3};
use crate::repsim::{
    cka, compute_rdm_with, functional_connectivity, mse, pearson_score, rsa_pearson, rsa_score, st_correlation,
    ConnectivityMatrix, Distance, Rdm,
};

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceArg {
    Euclidean,
    Cosine,
}

impl From<DistanceArg> for Distance {
    fn from(d: DistanceArg) -> Self {
        match d {
            DistanceArg::Euclidean => Distance::Euclidean,
            DistanceArg::Cosine => Distance::Cosine,
        }
    }
}

#[derive(Debug, Args)]
pub struct RepsimArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Predicted signal tensor (`N × features`); defaults to `predictions.trjl`
    /// in the output directory.
    #[arg(long)]
    pub predicted: Option<PathBuf>,
    /// Connectivity window in time bins (default: half the bins, at least 1).
    #[arg(long)]
    pub window: Option<usize>,
    /// Connectivity stride in time bins (default: half the window, at least 1).
    #[arg(long)]
    pub stride: Option<usize>,
    #[arg(long, value_enum, default_value_t = DistanceArg::Euclidean)]
    pub distance: DistanceArg,
}

#[derive(Serialize)]
struct Summary {
    n_samples: usize,
    n_features: usize,
    channels: Vec<String>,
    time_bins: usize,
    distance: DistanceArg,
    window: usize,
    stride: usize,
    mse: f64,
    r: Option<f64>,
    skipped_columns: usize,
    rsa_spearman: Option<f64>,
    rsa_pearson: Option<f64>,
    cka: Option<f64>,
    st_mean_r: Option<f64>,
    st_skipped_cells: usize,
    connectivity_windows: usize,
    notes: Vec<String>,
}

fn rdm_rows(rdm: &Rdm, ids: &[String]) -> Vec<Vec<String>> {
    let d = rdm.distances();
    ids.iter()
        .enumerate()
        .map(|(i, id)| {
            let mut row = vec![id.clone()];
            row.extend((0..d.cols()).map(|j| num(d[(i, j)])));
            row
        })
        .collect()
}

fn connectivity_rows(windows: &[ConnectivityMatrix]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for w in windows {
        for i in 0..w.channels.len() {
            for j in 0..w.channels.len() {
                rows.push(vec![
                    w.window_start.to_string(),
                    w.window_end.to_string(),
                    w.channels[i].clone(),
                    w.channels[j].clone(),
                    num(w.values[(i, j)]),
                ]);
            }
        }
    }
    rows
}

pub(crate) fn run(args: &RepsimArgs, out: &Path) -> Result<()> {
    if args.window == Some(0) {
        return Err(usage(Error::param("window", "must be at least 1")));
    }
    if args.stride == Some(0) {
        return Err(usage(Error::param("stride", "must be at least 1")));
    }
    let data = load_manifest(&args.manifest)?;
    let pred_path = args.predicted.clone().unwrap_or_else(|| out.join("predictions.trjl"));
    let pred: Matrix = read_tensor(&pred_path)?.to_matrix()?;
    let obs = data.signal.data();
    if pred.shape() != obs.shape() {
        return Err(Error::ShapeMismatch {
            left: vec![obs.rows(), obs.cols()],
            right: vec![pred.rows(), pred.cols()],
        });
    }
    let window = args.window.unwrap_or((data.time_bins / 2).max(1));
    let stride = args.stride.unwrap_or((window / 2).max(1));
    let mut notes = Vec::new();

    let (r, skipped_columns) = match pearson_score(&pred, obs) {
        Ok(c) => (Some(c.mean), c.skipped),
        Err(e) => {
            notes.push(format!("r undefined: {e}"));
            (None, obs.cols())
        }
    };
    let metric = Distance::from(args.distance);
    let rdm_obs = compute_rdm_with(obs, metric)?;
    let rdm_pred = compute_rdm_with(&pred, metric)?;
    let mut keep = |name: &str, v: Result<f64>| match v {
        Ok(x) => Some(x),
        Err(e) => {
            notes.push(format!("{name} undefined: {e}"));
            None
        }
    };
    let rsa_s = keep("rsa_spearman", rsa_score(&rdm_pred, &rdm_obs));
    let rsa_p = keep("rsa_pearson", rsa_pearson(&rdm_pred, &rdm_obs));
    let cka_v = keep("cka", cka(&pred, obs));

    let channels = data.channels.clone();
    let obs_epochs: Tensor3 = data.epochs();
    let pred_epochs = SignalMatrix::unlabeled(pred.clone())?.to_epochs(channels.len())?;
    let st = st_correlation(&obs_epochs, &pred_epochs, &channels, &data.time_bin_labels())?;
    let conn_obs = functional_connectivity(&obs_epochs, &channels, window, stride)?;
    let conn_pred = functional_connectivity(&pred_epochs, &channels, window, stride)?;

    let defined: Vec<f64> = (0..channels.len())
        .flat_map(|c| (0..data.time_bins).map(move |t| (c, t)))
        .filter(|cell| !st.skipped.contains(cell))
        .map(|(c, t)| st.values[(c, t)])
        .collect();
    let st_mean_r = (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64);

    let dir = OutDir::create(out)?;
    let ids = data.signal.sample_ids();
    let mut header = vec!["sample"];
    header.extend(ids.iter().map(String::as_str));
    dir.write_csv("rdm_observed.csv", &header, &rdm_rows(&rdm_obs, ids))?;
    dir.write_csv("rdm_predicted.csv", &header, &rdm_rows(&rdm_pred, ids))?;
    let st_rows: Vec<Vec<String>> = (0..channels.len())
        .flat_map(|c| (0..data.time_bins).map(move |t| (c, t)))
        .map(|(c, t)| {
            let skipped = st.skipped.contains(&(c, t));
            vec![
                channels[c].clone(),
                t.to_string(),
                if skipped { String::new() } else { num(st.values[(c, t)]) },
                skipped.to_string(),
            ]
        })
        .collect();
    dir.write_csv("st_map.csv", &["channel", "time_bin", "r", "skipped"], &st_rows)?;
    let conn_header = ["window_start", "window_end", "channel_a", "channel_b", "r"];
    dir.write_csv("connectivity_observed.csv", &conn_header, &connectivity_rows(&conn_obs))?;
    dir.write_csv(
        "connectivity_predicted.csv",
        &conn_header,
        &connectivity_rows(&conn_pred),
    )?;
    dir.write_json(
        "repsim_summary.json",
        &Summary {
            n_samples: obs.rows(),
            n_features: obs.cols(),
            channels,
            time_bins: data.time_bins,
            distance: args.distance,
            window,
            stride,
            mse: mse(&pred, obs)?,
            r,
            skipped_columns,
            rsa_spearman: rsa_s,
            rsa_pearson: rsa_p,
            cka: cka_v,
            st_mean_r,
            st_skipped_cells: st.skipped.len(),
            connectivity_windows: conn_obs.len(),
            notes,
        },
    )?;
    Ok(())
}

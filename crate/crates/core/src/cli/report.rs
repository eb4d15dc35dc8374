use std::collections::BTreeMap;
use std::path::Path;

use clap::Args;
use serde_json::Value;

use crate::cli::output::OutDir;
use crate::error::{Error, Result};

/// Stage outputs merged into `report.json`, keyed by stage.
pub const STAGE_FILES: [(&str, &str); 4] = [
    ("synth", "ground_truth.json"),
    ("encode", "encoding_report.json"),
    ("repsim", "repsim_summary.json"),
    ("ltc", "ltc_summary.json"),
];

#[derive(Debug, Args)]
pub struct ReportArgs {}

pub(crate) fn run(_args: &ReportArgs, out: &Path) -> Result<()> {
    let mut stages = BTreeMap::new();
    for (stage, file) in STAGE_FILES {
        let path = out.join(file);
        if !path.exists() {
            continue;
        }
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let mut value: Value =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        if stage == "synth" {
            // the readout matrix is large and already on disk
            if let Some(obj) = value.as_object_mut() {
                obj.remove("w_true");
            }
        }
        stages.insert(stage, value);
    }
    if stages.is_empty() {
        return Err(Error::MissingFile(out.join("encoding_report.json")));
    }
    let dir = OutDir::create(out)?;
    let mut report = BTreeMap::new();
    report.insert(
        "stages",
        Value::Object(stages.into_iter().map(|(k, v)| (k.to_string(), v)).collect()),
    );
    dir.write_json("report.json", &report)
}

//! Helpers shared by the end-to-end test targets.
#![allow(dead_code)]

pub mod oracles;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

pub const BIN: &str = env!("CARGO_BIN_EXE_trajsim");

pub fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .arg("--out")
        .arg(out)
        .args(args)
        .env_remove("TRAJSIM_OUT")
        .env_remove("RUST_LOG")
        .output()
        .expect("spawn trajsim")
}

pub fn run_ok(out: &Path, args: &[&str]) -> Output {
    let o = run(out, args);
    assert!(
        o.status.success(),
        "trajsim {args:?} failed: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    o
}

pub fn manifest(out: &Path) -> String {
    out.join("manifest.toml").display().to_string()
}

/// synth, encode, repsim, ltc and report with the given synth flags.
pub fn pipeline(out: &Path, synth: &[&str], extra_global: &[&str]) {
    let with = |args: &[&str]| -> Vec<String> { extra_global.iter().chain(args).map(|s| s.to_string()).collect() };
    let m = manifest(out);
    let mut steps: Vec<Vec<String>> = vec![with(&[&["synth"], synth].concat())];
    steps.push(with(&["encode", "--manifest", &m]));
    steps.push(with(&["repsim", "--manifest", &m]));
    steps.push(with(&["ltc", "--manifest", &m]));
    steps.push(with(&["report"]));
    for s in steps {
        let refs: Vec<&str> = s.iter().map(String::as_str).collect();
        run_ok(out, &refs);
    }
}

pub fn read_json(path: impl AsRef<Path>) -> Value {
    let text = std::fs::read_to_string(path.as_ref()).unwrap_or_else(|e| panic!("{}: {e}", path.as_ref().display()));
    serde_json::from_str(&text).expect("valid JSON")
}

pub fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas")
}

/// JSON file name to schema name.
pub const SCHEMA_FOR: [(&str, &str); 9] = [
    ("ground_truth.json", "ground_truth"),
    ("encoding_report.json", "encoding_report"),
    ("repsim_summary.json", "repsim_summary"),
    ("profile_eeg.json", "profile"),
    ("profile_llm.json", "profile"),
    ("alignment.json", "alignment"),
    ("dra.json", "dra"),
    ("ltc_summary.json", "ltc_summary"),
    ("report.json", "report"),
];

/// Validation errors for every JSON file in `dir`, keyed by file name.
pub fn schema_errors(dir: &Path) -> BTreeMap<String, Vec<String>> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let name = entry.unwrap().file_name().to_string_lossy().to_string();
        if !name.ends_with(".json") {
            continue;
        }
        let errors = match SCHEMA_FOR.iter().find(|(f, _)| *f == name) {
            None => vec!["no schema for this file".to_string()],
            Some((_, schema)) => {
                let schema = read_json(schema_dir().join(format!("{schema}.schema.json")));
                let validator = jsonschema::validator_for(&schema).expect("schema compiles");
                let instance = read_json(dir.join(&name));
                validator
                    .iter_errors(&instance)
                    .map(|e| format!("{} at {}", e, e.instance_path()))
                    .collect()
            }
        };
        out.insert(name, errors);
    }
    out
}

/// All regular files in `dir` with their bytes.
pub fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().to_string(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect()
}

pub fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("expected a number, got {v}"))
}

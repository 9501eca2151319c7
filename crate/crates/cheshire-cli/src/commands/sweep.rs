//! `sweep` — noiseless detection-probability curve over the phase grid.

use std::path::Path;

use serde::Serialize;

use cheshire::experiment::sweep;

use super::{predictions, OutputFormat, Predictions};
use crate::config::FileConfig;
use crate::io::{sweep_csv, write_json, write_text};
use crate::manifest::RunManifest;
use crate::CliError;

#[derive(Serialize)]
struct Sidecar<'a> {
    predictions: &'a Predictions,
    manifest: &'a RunManifest,
}

#[derive(Serialize)]
struct JsonOutput<'a> {
    curve: Vec<CurvePoint>,
    predictions: &'a Predictions,
    manifest: &'a RunManifest,
}

#[derive(Serialize)]
struct CurvePoint {
    phase_rad: f64,
    probability: f64,
}

pub fn run(config_path: &Path, out: &Path, format: OutputFormat) -> Result<(), CliError> {
    let file_cfg = FileConfig::load(config_path)?;
    let (cfg, src, _) = file_cfg.to_core();
    let curve = sweep(&cfg)?;
    let predictions = predictions(&cfg, &src)?;
    // A noiseless sweep consumes no randomness; the digest pins seed 0.
    let manifest = RunManifest::new(file_cfg.digest(0), 0);

    match format {
        OutputFormat::Csv => {
            write_text(out, &sweep_csv(&curve))?;
            let sidecar = Sidecar {
                predictions: &predictions,
                manifest: &manifest,
            };
            write_json(&out.with_extension("json"), &sidecar)?;
        }
        OutputFormat::Json => {
            let output = JsonOutput {
                curve: curve
                    .points
                    .iter()
                    .map(|p| CurvePoint {
                        phase_rad: p.phase,
                        probability: p.probability,
                    })
                    .collect(),
                predictions: &predictions,
                manifest: &manifest,
            };
            write_json(out, &output)?;
        }
    }
    println!(
        "sweep: {} points, mean probability {:.6}, visibility {}",
        curve.points.len(),
        curve.mean_probability(),
        predictions
            .exact_visibility
            .map_or("undefined".to_string(), |v| format!("{v:.6}")),
    );
    Ok(())
}

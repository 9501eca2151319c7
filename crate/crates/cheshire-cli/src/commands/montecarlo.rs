//! `montecarlo` — seeded stochastic counting run over the phase grid.

use std::path::Path;

use serde::Serialize;

use cheshire::montecarlo::{simulate_sweep, CountRecord};

use super::OutputFormat;
use crate::config::FileConfig;
use crate::io::{counts_csv, write_json, write_text};
use crate::manifest::RunManifest;
use crate::CliError;

#[derive(Serialize)]
struct JsonOutput<'a> {
    records: &'a [CountRecord],
    manifest: &'a RunManifest,
}

pub fn run(config_path: &Path, seed: u64, out: &Path, format: OutputFormat) -> Result<(), CliError> {
    let file_cfg = FileConfig::load(config_path)?;
    let (cfg, src, jitter) = file_cfg.to_core();
    let records = simulate_sweep(&cfg, &src, &jitter, seed)?;
    let manifest = RunManifest::new(file_cfg.digest(seed), seed);

    match format {
        OutputFormat::Csv => {
            write_text(out, &counts_csv(&records))?;
            write_json(&out.with_extension("manifest.json"), &manifest)?;
        }
        OutputFormat::Json => {
            let output = JsonOutput {
                records: &records,
                manifest: &manifest,
            };
            write_json(out, &output)?;
        }
    }
    let mean = records.iter().map(|r| r.counts as f64).sum::<f64>() / records.len().max(1) as f64;
    println!(
        "montecarlo: {} bins, mean counts {:.1}, seed {}",
        records.len(),
        mean,
        seed
    );
    Ok(())
}

//! Human-editable run configuration.
//!
//! One TOML file holds every knob. All angles are written in degrees and
//! converted to radians at the boundary; internals never see degrees. Every
//! section and field is optional and defaults to the reference bench setup.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use cheshire::experiment::{phase_grid, ExperimentConfig};
use cheshire::montecarlo::{JitterModel, JitterTargets, SourceModel};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub experiment: ExperimentSection,
    pub phase_grid: PhaseGridSection,
    pub source: SourceSection,
    pub jitter: JitterSection,
}

impl Default for FileConfig {
    fn default() -> Self {
        Self {
            experiment: ExperimentSection::default(),
            phase_grid: PhaseGridSection::default(),
            source: SourceSection::default(),
            jitter: JitterSection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSection {
    pub transmission_arm1: f64,
    pub transmission_arm2: f64,
    pub theta1_deg: f64,
    pub theta2_deg: f64,
    pub delta1_deg: f64,
    pub delta2_deg: f64,
    pub visibility_scale: f64,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        Self {
            transmission_arm1: 1.0,
            transmission_arm2: 1.0,
            theta1_deg: 0.0,
            theta2_deg: 0.0,
            delta1_deg: 0.0,
            delta2_deg: 0.0,
            visibility_scale: 0.72,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhaseGridSection {
    pub start_deg: f64,
    pub stop_deg: f64,
    pub points: usize,
}

impl Default for PhaseGridSection {
    fn default() -> Self {
        Self {
            start_deg: 0.0,
            stop_deg: 720.0,
            points: 61,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SourceSection {
    /// Expected coincidences per bin at the ideal no-filter configuration.
    pub mean_counts_per_bin: f64,
    pub bin_seconds: f64,
    pub efficiency_idler: f64,
    pub efficiency_signal: f64,
    pub coincidence_window_ns: f64,
    pub accidental_rate_hz: f64,
}

impl Default for SourceSection {
    fn default() -> Self {
        Self {
            mean_counts_per_bin: 2526.0,
            bin_seconds: 5.0,
            efficiency_idler: 0.30,
            efficiency_signal: 0.30,
            coincidence_window_ns: 8.0,
            accidental_rate_hz: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JitterSection {
    pub waveplate_sigma_deg: f64,
    /// Subset of {"theta1", "theta2", "delta1", "delta2"}.
    pub targets: Vec<String>,
}

impl Default for JitterSection {
    fn default() -> Self {
        Self {
            waveplate_sigma_deg: 2.0,
            targets: vec![
                "theta1".into(),
                "theta2".into(),
                "delta1".into(),
                "delta2".into(),
            ],
        }
    }
}

impl FileConfig {
    /// Loads and parses a config file. Parse errors keep the line-anchored
    /// diagnostic from the TOML parser, flattened to a single line.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|_| {
            CliError::usage(format!("config not found: {}", path.display()))
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: FileConfig = toml::from_str(text)
            .map_err(|e| CliError::usage(format!("malformed config: {}", flatten(&e.to_string()))))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let (experiment, source, _) = self.to_core();
        experiment
            .validate()
            .map_err(|e| CliError::usage(format!("invalid config: {e}")))?;
        source
            .validate()
            .map_err(|e| CliError::usage(format!("invalid config: {e}")))?;
        for t in &self.jitter.targets {
            if !matches!(t.as_str(), "theta1" | "theta2" | "delta1" | "delta2") {
                return Err(CliError::usage(format!(
                    "invalid config: unknown jitter target \"{t}\""
                )));
            }
        }
        if self.jitter.waveplate_sigma_deg < 0.0 {
            return Err(CliError::usage(
                "invalid config: jitter sigma must be non-negative".into(),
            ));
        }
        if self.phase_grid.points < 2 {
            return Err(CliError::usage(
                "invalid config: phase_grid.points must be at least 2".into(),
            ));
        }
        if self.phase_grid.stop_deg <= self.phase_grid.start_deg {
            return Err(CliError::usage(
                "invalid config: phase_grid.stop_deg must exceed start_deg".into(),
            ));
        }
        Ok(())
    }

    /// Converts to the simulation types (radians, seconds).
    pub fn to_core(&self) -> (ExperimentConfig, SourceModel, JitterModel) {
        let e = &self.experiment;
        let g = &self.phase_grid;
        let s = &self.source;
        let experiment = ExperimentConfig {
            transmission_arm1: e.transmission_arm1,
            transmission_arm2: e.transmission_arm2,
            theta1: e.theta1_deg.to_radians(),
            theta2: e.theta2_deg.to_radians(),
            delta1: e.delta1_deg.to_radians(),
            delta2: e.delta2_deg.to_radians(),
            phase_grid: phase_grid(g.start_deg.to_radians(), g.stop_deg.to_radians(), g.points),
            visibility_scale: e.visibility_scale,
            source_mean: s.mean_counts_per_bin,
            bin_seconds: s.bin_seconds,
        };
        let mut source = SourceModel::from_baseline_mean(s.mean_counts_per_bin, s.bin_seconds);
        source.efficiency_idler = s.efficiency_idler;
        source.efficiency_signal = s.efficiency_signal;
        source.pair_rate =
            s.mean_counts_per_bin / (s.bin_seconds * s.efficiency_idler * s.efficiency_signal);
        source.coincidence_window = s.coincidence_window_ns * 1e-9;
        source.accidental_rate = s.accidental_rate_hz;
        let jitter = JitterModel {
            waveplate_sigma: self.jitter.waveplate_sigma_deg.to_radians(),
            targets: JitterTargets {
                theta1: self.jitter.targets.iter().any(|t| t == "theta1"),
                theta2: self.jitter.targets.iter().any(|t| t == "theta2"),
                delta1: self.jitter.targets.iter().any(|t| t == "delta1"),
                delta2: self.jitter.targets.iter().any(|t| t == "delta2"),
            },
        };
        (experiment, source, jitter)
    }

    /// Canonical serialization used for digests; field order is fixed by the
    /// struct definitions.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Stable hex digest of the configuration and seed.
    pub fn digest(&self, seed: u64) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.canonical_json().as_bytes());
        hasher.update(seed.to_le_bytes());
        hex::encode(hasher.finalize())
    }
}

fn flatten(message: &str) -> String {
    message
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join("; ")
}

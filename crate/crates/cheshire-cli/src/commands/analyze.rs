//! `analyze` — fringe fit and weak-value estimates for a counts file.
//!
//! The fringe fit always runs. Presence weak values additionally need a
//! no-filter baseline run (`--baseline`) and a filter in the config;
//! polarization magnitudes need a nonzero rotation angle. Whatever is
//! derivable is reported, with the quadratic inversion as the headline
//! number and the first-order ratio alongside.

use std::path::Path;

use serde::Serialize;

use cheshire::analysis::{
    estimate_pi_weak, estimate_sigma_weak, fit_fringe, mean_counts, Estimate, FringeFit,
    SigmaMethod,
};

use super::{predictions, Predictions};
use crate::config::FileConfig;
use crate::io::{read_counts_file, write_json, write_text};
use crate::manifest::RunManifest;
use crate::svg::render_counts_plot;
use crate::CliError;

#[derive(Serialize)]
struct PresenceEstimate {
    arm: u8,
    reflectivity: f64,
    estimate: Estimate,
}

#[derive(Serialize)]
struct PolarizationEstimate {
    arm: u8,
    theta_deg: f64,
    quadratic: Estimate,
    first_order: Estimate,
}

#[derive(Serialize)]
struct WeakValueSection {
    presence: Vec<PresenceEstimate>,
    polarization: Vec<PolarizationEstimate>,
}

#[derive(Serialize)]
struct Report<'a> {
    fit: &'a FringeFit,
    mean_counts: f64,
    mean_counts_sdm: f64,
    predictions: &'a Predictions,
    weak_values: WeakValueSection,
    manifest: &'a RunManifest,
}

pub struct AnalyzeArgs<'a> {
    pub counts: &'a Path,
    pub config: &'a Path,
    pub out: &'a Path,
    pub baseline: Option<&'a Path>,
    pub svg: bool,
}

pub fn run(args: &AnalyzeArgs<'_>) -> Result<(), CliError> {
    let file_cfg = FileConfig::load(args.config)?;
    let (cfg, src, jitter) = file_cfg.to_core();
    let records = read_counts_file(args.counts)?;
    let fit = fit_fringe(&records)?;
    let counts_stats = mean_counts(&records)?;
    let predictions = predictions(&cfg, &src)?;

    let delta_sigma = jitter.waveplate_sigma;
    let theta_sigma = jitter.waveplate_sigma;

    let mut presence = Vec::new();
    if let Some(baseline_path) = args.baseline {
        let baseline = mean_counts(&read_counts_file(baseline_path)?)?;
        for (arm, transmission) in [(1u8, cfg.transmission_arm1), (2u8, cfg.transmission_arm2)] {
            if transmission < 1.0 {
                let reflectivity = 1.0 - transmission;
                presence.push(PresenceEstimate {
                    arm,
                    reflectivity,
                    estimate: estimate_pi_weak(&baseline, &counts_stats, reflectivity, delta_sigma)?,
                });
            }
        }
    }

    let mut polarization = Vec::new();
    for (arm, theta) in [(1u8, cfg.theta1), (2u8, cfg.theta2)] {
        if theta != 0.0 {
            let pi_weak = presence
                .iter()
                .find(|p| p.arm == arm)
                .map_or(0.0, |p| p.estimate.value);
            let visibility = Estimate::new(fit.visibility, fit.param_stderr.visibility, 0.0);
            let quadratic = estimate_sigma_weak(
                &visibility,
                theta,
                cfg.visibility_scale,
                pi_weak,
                SigmaMethod::Quadratic,
                theta_sigma,
            )?;
            let first_order = estimate_sigma_weak(
                &visibility,
                theta,
                cfg.visibility_scale,
                pi_weak,
                SigmaMethod::FirstOrder,
                theta_sigma,
            )?;
            polarization.push(PolarizationEstimate {
                arm,
                theta_deg: theta.to_degrees(),
                quadratic,
                first_order,
            });
        }
    }

    let manifest = RunManifest::new(file_cfg.digest(0), 0);
    let report = Report {
        fit: &fit,
        mean_counts: counts_stats.mean,
        mean_counts_sdm: counts_stats.sdm,
        predictions: &predictions,
        weak_values: WeakValueSection {
            presence,
            polarization,
        },
        manifest: &manifest,
    };
    write_json(args.out, &report)?;

    if args.svg {
        let svg = render_counts_plot(&records, Some(&fit), "coincidence counts and fringe fit");
        write_text(&args.out.with_extension("svg"), &svg)?;
    }

    println!(
        "analyze: {} bins, mean {:.1}, fitted visibility {:.4} ± {:.4}",
        records.len(),
        counts_stats.mean,
        fit.visibility,
        fit.param_stderr.visibility
    );
    Ok(())
}

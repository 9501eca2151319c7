//! Subcommand implementations.

pub mod analyze;
pub mod fresnel;
pub mod montecarlo;
pub mod reproduce;
pub mod sweep;

use serde::Serialize;

use cheshire::experiment::{postselector, preselect, ExperimentConfig};
use cheshire::state::{Arm, Observable};
use cheshire::weak_values::{exact_visibility, weak_value, PrePostPair};

/// Main output format of a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Closed-form predictions for one configuration, evaluated at φ = 0.
#[derive(Debug, Clone, Serialize)]
pub struct Predictions {
    /// Phase-averaged detection probability over the grid.
    pub mean_probability: f64,
    /// Fringe visibility of the noiseless model; absent when undefined.
    pub exact_visibility: Option<f64>,
    /// The same visibility scaled by the bench's maximum observed visibility.
    pub scaled_visibility: Option<f64>,
    /// Expected coincidences per bin at the mean probability.
    pub expected_mean_counts: f64,
    pub weak_values: Option<PredictedWeakValues>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PredictedWeakValues {
    pub re_pi_1: f64,
    pub re_pi_2: f64,
    pub abs_sigma_pi_1: f64,
    pub abs_sigma_pi_2: f64,
}

pub(crate) fn predictions(
    cfg: &ExperimentConfig,
    src: &cheshire::montecarlo::SourceModel,
) -> Result<Predictions, crate::CliError> {
    let curve = cheshire::experiment::sweep(cfg)?;
    let mean_probability = curve.mean_probability();
    let exact = exact_visibility(
        cfg.transmission_arm1,
        cfg.transmission_arm2,
        cfg.theta1,
        cfg.theta2,
    )
    .ok();
    let weak_values = PrePostPair::new(preselect(cfg, 0.0), postselector(cfg))
        .ok()
        .map(|pair| PredictedWeakValues {
            re_pi_1: weak_value(&Observable::presence(Arm::One), &pair).re,
            re_pi_2: weak_value(&Observable::presence(Arm::Two), &pair).re,
            abs_sigma_pi_1: weak_value(&Observable::circular_polarization_in_arm(Arm::One), &pair)
                .norm(),
            abs_sigma_pi_2: weak_value(&Observable::circular_polarization_in_arm(Arm::Two), &pair)
                .norm(),
        });
    Ok(Predictions {
        mean_probability,
        exact_visibility: exact,
        scaled_visibility: exact.map(|v| v * cfg.visibility_scale),
        expected_mean_counts: src.expected_coincidences(mean_probability),
        weak_values,
    })
}

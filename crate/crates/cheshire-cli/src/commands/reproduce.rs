//! `reproduce-paper` — runs the canonical bench configurations and tabulates
//! simulated observables against the reported reference values.
//!
//! Covered runs: presence measurements (no filter, filter in arm 1, filter
//! in arm 2, no rotations), polarization measurements (rotations of 10° and
//! 20° in each arm, no filter), and the simultaneous combination (filter in
//! arm 2 with arm-1 rotations). Theory numbers come from the closed forms;
//! simulated numbers from a seeded Monte Carlo session.

use std::path::Path;

use serde::Serialize;

use cheshire::analysis::{fit_fringe, mean_counts, weak_value_report, SigmaMethod, WeakValueReport};
use cheshire::elements::SlideGeometry;
use cheshire::montecarlo::{simulate_measurement_set, simulate_sweep};
use cheshire::weak_values::exact_visibility;

use crate::config::FileConfig;
use crate::io::{write_json, write_text};
use crate::manifest::RunManifest;
use crate::reference;
use crate::CliError;

#[derive(Debug, Clone, Serialize)]
struct Row {
    quantity: &'static str,
    theory: Option<f64>,
    simulated: Option<f64>,
    simulated_err: Option<f64>,
    reported: Option<f64>,
    reported_err: Option<f64>,
}

impl Row {
    fn reported(mut self, r: reference::Reported) -> Self {
        self.reported = Some(r.value);
        self.reported_err = r.err;
        self
    }
}

fn row(quantity: &'static str, theory: f64, simulated: f64, simulated_err: f64) -> Row {
    Row {
        quantity,
        theory: Some(theory),
        simulated: Some(simulated),
        simulated_err: Some(simulated_err),
        reported: None,
        reported_err: None,
    }
}

#[derive(Serialize)]
struct ReproduceReport {
    quadratic: WeakValueReport,
    first_order: WeakValueReport,
    rows: Vec<Row>,
    manifest: RunManifest,
}

pub fn run(out_dir: &Path, seed: u64) -> Result<(), CliError> {
    let file_cfg = FileConfig::default();
    let (base, src, jitter) = file_cfg.to_core();
    let slide = SlideGeometry::default();
    let transmission = slide.transmission()?;
    let reflectivity = 1.0 - transmission;
    let angles = [10.0f64.to_radians(), 20.0f64.to_radians()];
    let vm = base.visibility_scale;
    let delta_sigma = jitter.waveplate_sigma;

    // Seeded Monte Carlo session.
    let set = simulate_measurement_set(&base, transmission, &angles, &src, &jitter, seed)?;
    let quadratic = weak_value_report(&set, vm, SigmaMethod::Quadratic, delta_sigma, delta_sigma)?;
    let first_order =
        weak_value_report(&set, vm, SigmaMethod::FirstOrder, delta_sigma, delta_sigma)?;

    let n0 = mean_counts(&set.no_filter)?;
    let n1 = mean_counts(&set.filter_arm1)?;
    let n2 = mean_counts(&set.filter_arm2)?;
    let drop_of = |nf: &cheshire::analysis::MeanCount| {
        let drop = (n0.mean - nf.mean) / n0.mean;
        let err = (nf.mean / n0.mean)
            * ((nf.sdm / nf.mean).powi(2) + (n0.sdm / n0.mean).powi(2)).sqrt();
        (drop, err)
    };
    let (drop1, drop1_err) = drop_of(&n1);
    let (drop2, drop2_err) = drop_of(&n2);

    let mut rows = vec![
        row("mean_counts_no_filter", src.expected_coincidences(0.25), n0.mean, n0.sdm)
            .reported(reference::MEAN_COUNTS_NO_FILTER),
        row("mean_counts_filter_arm1", src.expected_coincidences(0.25), n1.mean, n1.sdm)
            .reported(reference::MEAN_COUNTS_FILTER_ARM1),
        row(
            "mean_counts_filter_arm2",
            src.expected_coincidences(0.25 * transmission),
            n2.mean,
            n2.sdm,
        )
        .reported(reference::MEAN_COUNTS_FILTER_ARM2),
        row("intensity_drop_arm1", 0.0, drop1, drop1_err),
        row("intensity_drop_arm2", reflectivity, drop2, drop2_err)
            .reported(reference::INTENSITY_DROP_ARM2),
        row(
            "re_pi_1_weak",
            0.0,
            quadratic.re_pi_1.value,
            quadratic.re_pi_1.total_err(),
        )
        .reported(reference::RE_PI_1),
        row(
            "re_pi_2_weak",
            1.0,
            quadratic.re_pi_2.value,
            quadratic.re_pi_2.total_err(),
        )
        .reported(reference::RE_PI_2),
        row(
            "abs_sigma_pi_1_weak",
            1.0,
            quadratic.abs_sigma_1.value,
            quadratic.abs_sigma_1.total_err(),
        )
        .reported(reference::ABS_SIGMA_PI_1),
        row(
            "abs_sigma_pi_2_weak",
            0.0,
            quadratic.abs_sigma_2.value,
            quadratic.abs_sigma_2.total_err(),
        )
        .reported(reference::ABS_SIGMA_PI_2),
    ];

    // Fringe visibilities of the arm-1 rotation runs, scaled into count space
    // by the bench's maximum visibility.
    let reported_vis = [
        reference::VISIBILITY_ARM1_10DEG,
        reference::VISIBILITY_ARM1_20DEG,
    ];
    let vis_labels = ["visibility_arm1_10deg", "visibility_arm1_20deg"];
    for (i, (theta, records)) in set.rotations_arm1.iter().enumerate() {
        let fit = fit_fringe(records)?;
        let theory = exact_visibility(1.0, 1.0, *theta, 0.0)? * vm;
        rows.push(
            row(vis_labels[i], theory, fit.visibility, fit.param_stderr.visibility)
                .reported(reported_vis[i]),
        );
    }

    // Residual fringes with no rotations at all.
    let residual = fit_fringe(&set.no_filter)?;
    rows.push(
        row("residual_visibility", 0.0, residual.visibility, residual.param_stderr.visibility)
            .reported(reference::RESIDUAL_VISIBILITY),
    );

    // Mean-rate dependence on an arm-2 rotation: cos²θ₂.
    for (theta, records) in &set.rotations_arm2 {
        if (theta.to_degrees() - 20.0).abs() < 1e-9 {
            let m = mean_counts(records)?;
            let ratio = m.mean / n0.mean;
            let err = ratio * ((m.sdm / m.mean).powi(2) + (n0.sdm / n0.mean).powi(2)).sqrt();
            rows.push(row(
                "mean_ratio_theta2_20deg",
                theta.cos().powi(2),
                ratio,
                err,
            ));
        }
    }

    // Simultaneous weak measurements: filter in arm 2 plus arm-1 rotations.
    let sim_labels = ["visibility_filtered_10deg", "visibility_filtered_20deg"];
    let sim_reported = [
        reference::VISIBILITY_FILTERED_10DEG,
        reference::VISIBILITY_FILTERED_20DEG,
    ];
    for (i, &theta) in angles.iter().enumerate() {
        let mut cfg = base.clone();
        cfg.transmission_arm2 = transmission;
        cfg.theta1 = theta;
        let records = simulate_sweep(&cfg, &src, &jitter, seed.wrapping_add(9000 + i as u64))?;
        let fit = fit_fringe(&records)?;
        let theory = exact_visibility(1.0, transmission, theta, 0.0)? * vm;
        rows.push(
            row(sim_labels[i], theory, fit.visibility, fit.param_stderr.visibility)
                .reported(sim_reported[i]),
        );
    }

    let manifest = RunManifest::new(file_cfg.digest(seed), seed);
    write_text(&out_dir.join("comparison.csv"), &comparison_csv(&rows))?;
    write_json(
        &out_dir.join("report.json"),
        &ReproduceReport {
            quadratic,
            first_order,
            rows: rows.clone(),
            manifest,
        },
    )?;
    let config_text = toml::to_string_pretty(&file_cfg)
        .map_err(|e| CliError::runtime(format!("cannot serialize config: {e}")))?;
    write_text(&out_dir.join("config.toml"), &config_text)?;

    print_table(&rows);
    println!("\nwrote {}", out_dir.join("comparison.csv").display());
    Ok(())
}

fn comparison_csv(rows: &[Row]) -> String {
    let mut out = String::from("quantity,theory,simulated,simulated_err,reported,reported_err\n");
    let fmt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.6}"));
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.quantity,
            fmt(r.theory),
            fmt(r.simulated),
            fmt(r.simulated_err),
            fmt(r.reported),
            fmt(r.reported_err),
        ));
    }
    out
}

fn print_table(rows: &[Row]) {
    println!(
        "{:<28} {:>10} {:>12} {:>10} {:>12}",
        "quantity", "theory", "simulated", "sim_err", "reported"
    );
    for r in rows {
        let fmt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.4}"));
        let reported = match (r.reported, r.reported_err) {
            (Some(v), Some(e)) => format!("{v:.3}({e:.3})"),
            (Some(v), None) => format!("{v:.3}"),
            _ => "-".to_string(),
        };
        println!(
            "{:<28} {:>10} {:>12} {:>10} {:>12}",
            r.quantity,
            fmt(r.theory),
            fmt(r.simulated),
            fmt(r.simulated_err),
            reported
        );
    }
}

//! End-to-end calibration of the weak-value estimators: the full chain
//! (pipeline → Poisson counts → fringe fits → estimators) must be unbiased
//! against the closed-form predictions, and the quoted uncertainties must
//! cover the observed seed-to-seed spread.

use cheshire::analysis::{
    estimate_pi_weak, estimate_sigma_weak, weak_value_report, Estimate, MeanCount, SigmaMethod,
};
use cheshire::experiment::{phase_grid, sweep, ExperimentConfig};
use cheshire::montecarlo::{simulate_measurement_set, JitterModel, SourceModel};
use cheshire::weak_values::exact_visibility;

const FILTER_TRANSMISSION: f64 = 0.852;
const VISIBILITY_SCALE: f64 = 0.72;

fn paper_base_config() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::ideal();
    cfg.visibility_scale = VISIBILITY_SCALE;
    cfg.phase_grid = phase_grid(0.0, 4.0 * std::f64::consts::PI, 61);
    cfg
}

fn rotation_angles() -> Vec<f64> {
    vec![10.0f64.to_radians(), 20.0f64.to_radians()]
}

/// Noiseless estimator consistency: with exact inputs the presence
/// estimators return the ideal weak values exactly, and the quadratic
/// polarization estimator sits within the second-order truncation bound.
#[test]
fn estimators_are_exact_on_noiseless_sweeps() {
    let base = paper_base_config();

    let mean_of = |cfg: &ExperimentConfig| MeanCount {
        mean: sweep(cfg).unwrap().mean_probability(),
        sdm: 0.0,
        bins: cfg.phase_grid.len(),
    };

    let n0 = mean_of(&base);
    let mut f1 = base.clone();
    f1.transmission_arm1 = FILTER_TRANSMISSION;
    let mut f2 = base.clone();
    f2.transmission_arm2 = FILTER_TRANSMISSION;
    let r = 1.0 - FILTER_TRANSMISSION;

    let pi1 = estimate_pi_weak(&n0, &mean_of(&f1), r, 0.0).unwrap();
    let pi2 = estimate_pi_weak(&n0, &mean_of(&f2), r, 0.0).unwrap();
    assert!(pi1.value.abs() < 1e-9, "noiseless arm-1 presence {}", pi1.value);
    assert!((pi2.value - 1.0).abs() < 1e-9, "noiseless arm-2 presence {}", pi2.value);

    for theta in rotation_angles() {
        let v = exact_visibility(1.0, 1.0, theta, 0.0).unwrap();
        let est = estimate_sigma_weak(
            &Estimate::new(v, 0.0, 0.0),
            theta,
            1.0,
            0.0,
            SigmaMethod::Quadratic,
            0.0,
        )
        .unwrap();
        assert!(
            (est.value - 1.0).abs() <= theta * theta / 6.0 + 1e-9,
            "arm-1 polarization magnitude {} at theta {theta}",
            est.value
        );
        // Arm-2 rotations produce no fringe at all.
        let v2 = exact_visibility(1.0, 1.0, 0.0, theta).unwrap();
        assert!(v2.abs() < 1e-12);
    }
}

/// Seed-ensemble calibration at the reference operating point.
#[test]
fn estimator_ensemble_is_calibrated() {
    let base = paper_base_config();
    let src = SourceModel::default();
    let jitter = JitterModel::disabled();
    let angles = rotation_angles();
    let delta_sigma = 2.0f64.to_radians();
    let theta_sigma = 2.0f64.to_radians();

    let seeds = 200u64;
    let mut values = [Vec::new(), Vec::new(), Vec::new(), Vec::new()];
    let mut quoted = [Vec::new(), Vec::new(), Vec::new(), Vec::new()];
    for seed in 0..seeds {
        let set = simulate_measurement_set(&base, FILTER_TRANSMISSION, &angles, &src, &jitter, seed)
            .unwrap();
        let report = weak_value_report(
            &set,
            VISIBILITY_SCALE,
            SigmaMethod::Quadratic,
            delta_sigma,
            theta_sigma,
        )
        .unwrap();
        for (i, est) in [
            report.re_pi_1,
            report.re_pi_2,
            report.abs_sigma_1,
            report.abs_sigma_2,
        ]
        .iter()
        .enumerate()
        {
            values[i].push(est.value);
            quoted[i].push(est.total_err());
        }
    }

    let predictions = [0.0, 1.0, 1.0, 0.0];
    // Estimator response on exact inputs: the quadratic inversion of the true
    // visibility lands at sin θ / θ, averaged over the two settings.
    let sigma1_fixed_point: f64 = angles.iter().map(|t| t.sin() / t).sum::<f64>() / 2.0;

    for i in 0..4 {
        let mean = values[i].iter().sum::<f64>() / seeds as f64;
        let quoted_mean = quoted[i].iter().sum::<f64>() / seeds as f64;
        assert!(
            (mean - predictions[i]).abs() <= quoted_mean,
            "estimator {i}: ensemble mean {mean} further than the mean quoted error \
             {quoted_mean} from prediction {}",
            predictions[i]
        );
        let covered = values[i]
            .iter()
            .zip(&quoted[i])
            .filter(|(v, q)| (**v - predictions[i]).abs() <= **q)
            .count();
        assert!(
            covered * 100 >= values[i].len() * 60,
            "estimator {i}: quoted errors cover only {covered}/{} seeds",
            values[i].len()
        );
    }

    // Tighter unbiasedness regressions against the estimator fixed points.
    let mean_pi1 = values[0].iter().sum::<f64>() / seeds as f64;
    let mean_pi2 = values[1].iter().sum::<f64>() / seeds as f64;
    let mean_s1 = values[2].iter().sum::<f64>() / seeds as f64;
    let mean_s2 = values[3].iter().sum::<f64>() / seeds as f64;
    assert!(mean_pi1.abs() < 0.005, "arm-1 presence mean {mean_pi1}");
    assert!((mean_pi2 - 1.0).abs() < 0.005, "arm-2 presence mean {mean_pi2}");
    assert!(
        (mean_s1 - sigma1_fixed_point).abs() < 0.01,
        "arm-1 polarization mean {mean_s1} vs fixed point {sigma1_fixed_point}"
    );
    // Folded-positive noise floor only.
    assert!((0.0..0.05).contains(&mean_s2), "arm-2 polarization mean {mean_s2}");
}

/// The measurement set is reproducible from the master seed alone.
#[test]
fn measurement_set_is_deterministic() {
    let base = paper_base_config();
    let src = SourceModel::default();
    let angles = rotation_angles();
    let a = simulate_measurement_set(&base, FILTER_TRANSMISSION, &angles, &src, &JitterModel::default(), 7)
        .unwrap();
    let b = simulate_measurement_set(&base, FILTER_TRANSMISSION, &angles, &src, &JitterModel::default(), 7)
        .unwrap();
    assert_eq!(a, b);
}

//! Closed-form weak values and the detection-probability predictions they
//! generate.
//!
//! The weak value of an observable A between preselection |ψ⟩ and
//! postselection |φ⟩ is ⟨A⟩_w = ⟨φ|A|ψ⟩ / ⟨φ|ψ⟩. For the Cheshire-cat
//! pre/postselection the presence weak values are ⟨Π₁⟩_w = 0 and ⟨Π₂⟩_w = 1
//! while the circular-polarization weak values are |⟨σΠ₁⟩_w| = 1 and
//! ⟨σΠ₂⟩_w = 0: presence registers only in arm 2, polarization only in arm 1.
//!
//! Weak values here are always computed exactly from the definition; the
//! perturbative predictors (absorber shift, rotated detection probability)
//! are kept separate so that tests can measure the approximation error
//! directly.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{apply_matrix, inner_product, Observable, PolPathState};

/// Smallest pre/post overlap magnitude for which a weak value is considered
/// defined.
pub const MIN_OVERLAP: f64 = 1e-9;

/// Largest absorber reflectivity for which the first-order absorber-shift
/// prediction is documented to be reliable. The reference apparatus operates
/// just inside this window at R = 0.148.
pub const ABSORBER_VALIDITY_MAX_REFLECTIVITY: f64 = 0.2;

/// Largest rotation angle (radians) for which the second-order rotated
/// detection probability is documented to be reliable. 20° ≈ 0.35 rad sits
/// inside this window.
pub const ROTATION_VALIDITY_MAX_ANGLE: f64 = 0.5;

/// Bound on imperfection angles: the generalized weak values are meant for
/// the small-imperfection regime.
pub const MAX_IMPERFECTION_ANGLE: f64 = std::f64::consts::PI / 8.0;

/// A normalized preselection/postselection pair with non-negligible overlap.
#[derive(Debug, Clone, PartialEq)]
pub struct PrePostPair {
    pre: PolPathState,
    post: PolPathState,
}

impl PrePostPair {
    /// Validates that both states are normalized and that the pair is far
    /// enough from orthogonal for weak values to be defined.
    pub fn new(pre: PolPathState, post: PolPathState) -> Result<Self> {
        for s in [&pre, &post] {
            let n = s.norm_squared();
            if (n - 1.0).abs() > 1e-9 {
                return Err(Error::StateNotNormalized(n));
            }
        }
        let overlap = inner_product(&post, &pre).norm();
        if overlap <= MIN_OVERLAP {
            return Err(Error::DegeneratePostselection { overlap });
        }
        Ok(Self { pre, post })
    }

    pub fn pre(&self) -> &PolPathState {
        &self.pre
    }

    pub fn post(&self) -> &PolPathState {
        &self.post
    }

    /// ⟨φ|ψ⟩.
    pub fn overlap(&self) -> Complex64 {
        inner_product(&self.post, &self.pre)
    }
}

/// The weak value ⟨φ|A|ψ⟩ / ⟨φ|ψ⟩.
pub fn weak_value(observable: &Observable, pair: &PrePostPair) -> Complex64 {
    let numerator = inner_product(pair.post(), &apply_matrix(observable.matrix(), pair.pre()));
    numerator / pair.overlap()
}

/// First-order relative drop in detection probability caused by an absorber
/// with reflectivity R in an arm whose presence weak value is `pi_weak`:
/// Δp ≈ R · Re⟨Π_k⟩_w. Positive values mean the count rate decreases.
pub fn predicted_absorber_shift(pi_weak: Complex64, reflectivity: f64) -> f64 {
    reflectivity * pi_weak.re
}

/// Detection probability after a polarization rotation by `theta` in one arm,
/// to second order in the angle:
///
/// ```text
/// p ≈ base · (1 + 2θ Im⟨σΠ⟩_w − θ² Re⟨Π⟩_w + θ² |⟨σΠ⟩_w|²)
/// ```
pub fn predicted_rotation_probability(
    sigma_weak: Complex64,
    pi_weak: Complex64,
    theta: f64,
    base: f64,
) -> f64 {
    base * (1.0 + 2.0 * theta * sigma_weak.im - theta * theta * pi_weak.re
        + theta * theta * sigma_weak.norm_sqr())
}

/// Fringe visibility implied by the second-order rotated detection
/// probability when Im⟨σΠ⟩_w = −|⟨σΠ⟩_w| cos φ:
///
/// ```text
/// V = 2θ|W| / (1 − θ² Re⟨Π⟩_w + θ² |W|²)
/// ```
///
/// This is the forward model inverted by the polarization weak-value
/// estimator.
pub fn rotation_fringe_visibility(sigma_abs: f64, re_pi: f64, theta: f64) -> f64 {
    2.0 * theta * sigma_abs / (1.0 - theta * theta * re_pi + theta * theta * sigma_abs * sigma_abs)
}

/// Nonorthogonality angles of the imperfect pre- and postselected states:
/// `delta1` tilts the arm-1 polarization away from vertical, `delta2` tilts
/// the postselection away from horizontal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImperfectionAngles {
    delta1: f64,
    delta2: f64,
}

impl ImperfectionAngles {
    pub fn new(delta1: f64, delta2: f64) -> Result<Self> {
        for d in [delta1, delta2] {
            if d.abs() >= MAX_IMPERFECTION_ANGLE || d.is_nan() {
                return Err(Error::ImperfectionAngleTooLarge(d));
            }
        }
        Ok(Self { delta1, delta2 })
    }

    pub fn delta1(&self) -> f64 {
        self.delta1
    }

    pub fn delta2(&self) -> f64 {
        self.delta2
    }

    /// The cumulative offset δ = δ₁ + δ₂ measuring the deviation from
    /// orthogonality between arm 1 and the postselection.
    pub fn total(&self) -> f64 {
        self.delta1 + self.delta2
    }
}

/// Exact presence weak values for the imperfect pre/postselected states:
///
/// ```text
/// ⟨Π₁⟩_w = [1 + e^{iφ} cos δ₂ / sin(δ₁ + δ₂)]⁻¹,   ⟨Π₂⟩_w = 1 − ⟨Π₁⟩_w
/// ```
///
/// evaluated in the numerically stable form sin δ / (sin δ + e^{iφ} cos δ₂),
/// whose δ → 0 limit is exactly zero.
pub fn generalized_weak_values(imp: &ImperfectionAngles, phi: f64) -> (Complex64, Complex64) {
    let s = imp.total().sin();
    let c2 = imp.delta2().cos();
    let denom = Complex64::new(s, 0.0) + Complex64::from_polar(c2, phi);
    let w1 = Complex64::new(s, 0.0) / denom;
    (w1, Complex64::new(1.0, 0.0) - w1)
}

/// Small-angle approximation of the imperfect presence weak value,
/// ⟨Π₁⟩_w ≈ δ e^{−iφ} with δ the cumulative offset in radians.
pub fn small_angle_presence_weak_value(delta_total: f64, phi: f64) -> Complex64 {
    Complex64::from_polar(delta_total, -phi)
}

/// Exact postselection probability with absorbers and rotations in place:
///
/// ```text
/// P_H = ¼ [T₁ sin²θ₁ + T₂ cos²θ₂ − 2 √(T₁T₂) cos θ₂ sin θ₁ cos φ]
/// ```
pub fn exact_detection_probability(t1: f64, t2: f64, theta1: f64, theta2: f64, phi: f64) -> f64 {
    let s1 = theta1.sin();
    let c2 = theta2.cos();
    0.25 * (t1 * s1 * s1 + t2 * c2 * c2 - 2.0 * (t1 * t2).sqrt() * c2 * s1 * phi.cos())
}

/// Exact fringe visibility of the detection probability:
///
/// ```text
/// V = 2 √(T₁T₂) cos θ₂ sin θ₁ / (T₁ sin²θ₁ + T₂ cos²θ₂)
/// ```
///
/// Fails when the mean probability vanishes (both interfering components
/// extinguished).
pub fn exact_visibility(t1: f64, t2: f64, theta1: f64, theta2: f64) -> Result<f64> {
    let s1 = theta1.sin();
    let c2 = theta2.cos();
    let denom = t1 * s1 * s1 + t2 * c2 * c2;
    if denom <= 0.0 {
        return Err(Error::UndefinedVisibility);
    }
    Ok(2.0 * (t1 * t2).sqrt() * c2 * s1 / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::{preselect_ideal, postselect_ideal};
    use crate::state::Arm;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn ideal_pair(phi: f64) -> PrePostPair {
        PrePostPair::new(preselect_ideal(phi), postselect_ideal()).unwrap()
    }

    #[test]
    fn cheshire_weak_values_at_random_phases() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let phi = rng.gen_range(0.0..2.0 * PI);
            let pair = ideal_pair(phi);
            let w_pi1 = weak_value(&Observable::presence(Arm::One), &pair);
            let w_pi2 = weak_value(&Observable::presence(Arm::Two), &pair);
            let w_s1 = weak_value(&Observable::circular_polarization_in_arm(Arm::One), &pair);
            let w_s2 = weak_value(&Observable::circular_polarization_in_arm(Arm::Two), &pair);

            assert_abs_diff_eq!(w_pi1.norm(), 0.0, epsilon = crate::EXACT_TOL);
            assert_abs_diff_eq!((w_pi2 - Complex64::new(1.0, 0.0)).norm(), 0.0, epsilon = crate::EXACT_TOL);
            // ⟨σΠ₁⟩_w = −i e^{−iφ}
            let expected = Complex64::new(0.0, -1.0) * Complex64::from_polar(1.0, -phi);
            assert_abs_diff_eq!((w_s1 - expected).norm(), 0.0, epsilon = crate::EXACT_TOL);
            assert_abs_diff_eq!(w_s1.norm(), 1.0, epsilon = crate::EXACT_TOL);
            assert_abs_diff_eq!(w_s1.im, -phi.cos(), epsilon = crate::EXACT_TOL);
            assert_abs_diff_eq!(w_s2.norm(), 0.0, epsilon = crate::EXACT_TOL);
        }
    }

    #[test]
    fn identity_weak_value_is_one() {
        let pair = ideal_pair(0.4);
        let w = weak_value(&Observable::identity(), &pair);
        assert_abs_diff_eq!((w - Complex64::new(1.0, 0.0)).norm(), 0.0, epsilon = crate::EXACT_TOL);
    }

    #[test]
    fn orthogonal_pair_is_rejected() {
        // Preselection at φ = 0 but postselecting |1,V⟩: zero overlap... use
        // a state orthogonal to the preselection instead.
        let pre = preselect_ideal(0.0);
        let post = crate::state::PolPathState::basis_state(Arm::One, crate::state::Polarization::Horizontal);
        assert!(matches!(
            PrePostPair::new(pre, post),
            Err(Error::DegeneratePostselection { .. })
        ));
    }

    #[test]
    fn absorber_shift_examples() {
        assert_abs_diff_eq!(
            predicted_absorber_shift(Complex64::new(0.0, 0.0), 0.148),
            0.0,
            epsilon = crate::EXACT_TOL
        );
        assert_abs_diff_eq!(
            predicted_absorber_shift(Complex64::new(1.0, 0.0), 0.148),
            0.148,
            epsilon = crate::EXACT_TOL
        );
        assert_abs_diff_eq!(
            predicted_absorber_shift(Complex64::new(1.0, 0.0), 0.0),
            0.0,
            epsilon = crate::EXACT_TOL
        );
    }

    #[test]
    fn rotation_probability_reduces_to_base_at_zero_angle() {
        let p = predicted_rotation_probability(
            Complex64::new(0.3, -0.4),
            Complex64::new(0.2, 0.0),
            0.0,
            0.25,
        );
        assert_abs_diff_eq!(p, 0.25, epsilon = crate::EXACT_TOL);
    }

    #[test]
    fn rotation_probability_matches_arm_one_fringe_form() {
        // Ideal arm-1 weak values give base · (1 − 2θ cos φ + θ²).
        let theta = 0.15;
        for phi in [0.0, 0.7, 2.1] {
            let sigma = Complex64::new(0.0, -1.0) * Complex64::from_polar(1.0, -phi);
            let p = predicted_rotation_probability(sigma, Complex64::new(0.0, 0.0), theta, 0.25);
            let expected = 0.25 * (1.0 - 2.0 * theta * phi.cos() + theta * theta);
            assert_abs_diff_eq!(p, expected, epsilon = crate::EXACT_TOL);
        }
    }

    #[test]
    fn rotation_in_arm_two_has_no_first_order_shift() {
        // Arm-2 ideal values: ⟨σΠ₂⟩_w = 0, ⟨Π₂⟩_w = 1. The change is pure θ².
        let theta = 0.05;
        let p = predicted_rotation_probability(
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            theta,
            0.25,
        );
        assert_abs_diff_eq!(p, 0.25 * (1.0 - theta * theta), epsilon = crate::EXACT_TOL);
    }

    #[test]
    fn rotation_prediction_error_is_third_order() {
        // |prediction − exact| ≤ 5 θ³ · base for θ ≤ 0.05 rad.
        for theta in [0.01, 0.03, 0.05] {
            for phi in [0.0, 1.0, 2.5] {
                let base = exact_detection_probability(1.0, 1.0, 0.0, 0.0, phi);
                let sigma = Complex64::new(0.0, -1.0) * Complex64::from_polar(1.0, -phi);
                let predicted =
                    predicted_rotation_probability(sigma, Complex64::new(0.0, 0.0), theta, base);
                let exact = exact_detection_probability(1.0, 1.0, theta, 0.0, phi);
                assert!(
                    (predicted - exact).abs() <= 5.0 * theta.powi(3) * base + crate::EXACT_TOL,
                    "theta={theta} phi={phi}: |{predicted} - {exact}| too large"
                );
            }
        }
    }

    #[test]
    fn absorber_shift_approximation_bound() {
        // The first-order form R·Re⟨Π₂⟩_w and the amplitude form 2(1 − √T)
        // differ from the exact drop 1 − T₂ by at most the documented bound.
        for t in [0.85, 0.9, 0.95, 0.99] {
            let r: f64 = 1.0 - t;
            let exact_drop = r; // detection probability is proportional to T₂
            let first_order = predicted_absorber_shift(Complex64::new(1.0, 0.0), r);
            let amplitude_form = 2.0 * (1.0 - t.sqrt());
            let bound = (1.0 - t.sqrt() - r / 2.0).abs() * 2.0;
            assert!((first_order - exact_drop).abs() <= bound + crate::EXACT_TOL);
            assert!((amplitude_form - exact_drop).abs() <= bound + crate::EXACT_TOL);
        }
    }

    #[test]
    fn generalized_weak_values_recover_ideal_limit() {
        let imp = ImperfectionAngles::new(0.0, 0.0).unwrap();
        for phi in [0.0, 1.0, 3.0] {
            let (w1, w2) = generalized_weak_values(&imp, phi);
            assert_abs_diff_eq!(w1.norm(), 0.0, epsilon = crate::EXACT_TOL);
            assert_abs_diff_eq!((w2 - Complex64::new(1.0, 0.0)).norm(), 0.0, epsilon = crate::EXACT_TOL);
        }
    }

    #[test]
    fn generalized_weak_values_at_one_degree_each() {
        let d = 1.0f64.to_radians();
        let imp = ImperfectionAngles::new(d, d).unwrap();
        let (w1, _) = generalized_weak_values(&imp, 0.0);
        // sin 2° / (sin 2° + cos 1°), frozen from independent evaluation.
        assert_abs_diff_eq!(w1.re, 0.033727558747760476, epsilon = 1e-12);
        assert_abs_diff_eq!(w1.im, 0.0, epsilon = crate::EXACT_TOL);
        assert_abs_diff_eq!(w1.re, 0.0337, epsilon = 5e-5);
    }

    #[test]
    fn small_angle_form_at_two_degrees() {
        let w = small_angle_presence_weak_value(2.0f64.to_radians(), 0.0);
        assert_abs_diff_eq!(w.re, 0.03490658503988659, epsilon = 1e-15);
        assert_abs_diff_eq!(w.re, 0.0349, epsilon = 5e-5);
    }

    #[test]
    fn generalized_weak_values_match_first_principles() {
        // The closed form must agree with the definition applied to the
        // explicitly built imperfect states.
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let cfg_base = crate::experiment::ExperimentConfig::ideal();
        for _ in 0..100 {
            let d1 = rng.gen_range(-0.3..0.3);
            let d2 = rng.gen_range(-0.3..0.3);
            let phi = rng.gen_range(0.0..2.0 * PI);
            let mut cfg = cfg_base.clone();
            cfg.delta1 = d1;
            cfg.delta2 = d2;
            let pair = PrePostPair::new(
                crate::experiment::preselect(&cfg, phi),
                crate::experiment::postselector(&cfg),
            )
            .unwrap();
            let direct1 = weak_value(&Observable::presence(Arm::One), &pair);
            let direct2 = weak_value(&Observable::presence(Arm::Two), &pair);
            let imp = ImperfectionAngles::new(d1, d2).unwrap();
            let (w1, w2) = generalized_weak_values(&imp, phi);
            assert_abs_diff_eq!((w1 - direct1).norm(), 0.0, epsilon = 1e-11);
            assert_abs_diff_eq!((w2 - direct2).norm(), 0.0, epsilon = 1e-11);
        }
    }

    #[test]
    fn detection_probability_examples() {
        for phi in [0.0, 0.9, 4.2] {
            assert_abs_diff_eq!(
                exact_detection_probability(1.0, 1.0, 0.0, 0.0, phi),
                0.25,
                epsilon = crate::EXACT_TOL
            );
            assert_abs_diff_eq!(
                exact_detection_probability(1.0, 0.852, 0.0, 0.0, phi),
                0.213,
                epsilon = crate::EXACT_TOL
            );
        }
        assert_abs_diff_eq!(
            exact_detection_probability(1.0, 1.0, 10.0f64.to_radians(), 0.0, 0.0),
            0.1707143335682963,
            epsilon = 1e-12
        );
    }

    #[test]
    fn visibility_examples() {
        assert_abs_diff_eq!(
            exact_visibility(1.0, 1.0, 0.0, 0.0).unwrap(),
            0.0,
            epsilon = crate::EXACT_TOL
        );
        let v10 = exact_visibility(1.0, 1.0, 10.0f64.to_radians(), 0.0).unwrap();
        let v20 = exact_visibility(1.0, 1.0, 20.0f64.to_radians(), 0.0).unwrap();
        assert_abs_diff_eq!(v10, 0.3371306231658866, epsilon = 1e-12);
        assert_abs_diff_eq!(v20, 0.6124027709901022, epsilon = 1e-12);
        // Scaled by the maximum observed visibility 0.72 these give the
        // predicted fringe contrasts 0.24 and 0.44.
        assert_abs_diff_eq!(v10 * 0.72, 0.24, epsilon = 0.005);
        assert_abs_diff_eq!(v20 * 0.72, 0.44, epsilon = 0.005);

        let v20f = exact_visibility(1.0, 0.852, 20.0f64.to_radians(), 0.0).unwrap();
        assert_abs_diff_eq!(v20f, 0.6516098793194466, epsilon = 1e-12);
        assert_abs_diff_eq!(v20f * 0.72, 0.47, epsilon = 0.005);

        // Exactly extinguished interferometer: nothing transmitted from arm 2
        // and no interfering component from arm 1.
        assert!(matches!(
            exact_visibility(1.0, 0.0, 0.0, 0.0),
            Err(Error::UndefinedVisibility)
        ));
    }

    #[test]
    fn small_angle_agreement_with_exact_form() {
        // The relative gap grows like δ (in radians): ~3.5% at the 2°
        // operating point. On the unit weak-value scale the absolute gap
        // stays below 0.05 out to δ = 5°.
        let d = 2.0f64.to_radians();
        let imp = ImperfectionAngles::new(d / 2.0, d / 2.0).unwrap();
        let (exact, _) = generalized_weak_values(&imp, 0.0);
        let approx = small_angle_presence_weak_value(d, 0.0);
        let rel = (approx - exact).norm() / exact.norm();
        assert!(rel < 0.05, "relative gap {rel} at 2 degrees");

        for tenths in 1..=50 {
            let delta = (tenths as f64 / 10.0).to_radians();
            let imp = ImperfectionAngles::new(delta / 2.0, delta / 2.0).unwrap();
            for phi in [0.0, 1.2, PI] {
                let (exact, _) = generalized_weak_values(&imp, phi);
                let approx = small_angle_presence_weak_value(delta, phi);
                assert!(
                    (approx - exact).norm() <= 0.05,
                    "absolute gap too large at delta={delta} phi={phi}"
                );
            }
        }
    }

    proptest! {
        #[test]
        fn presence_weak_values_sum_to_one(phi in 0.0..(2.0 * PI), d1 in -0.3f64..0.3, d2 in -0.3f64..0.3) {
            let mut cfg = crate::experiment::ExperimentConfig::ideal();
            cfg.delta1 = d1;
            cfg.delta2 = d2;
            let pre = crate::experiment::preselect(&cfg, phi);
            let post = crate::experiment::postselector(&cfg);
            prop_assume!(inner_product(&post, &pre).norm() > MIN_OVERLAP);
            let pair = PrePostPair::new(pre, post).unwrap();
            let w1 = weak_value(&Observable::presence(Arm::One), &pair);
            let w2 = weak_value(&Observable::presence(Arm::Two), &pair);
            prop_assert!((w1 + w2 - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        }

        #[test]
        fn visibility_matches_probability_extrema(t1 in 0.5f64..1.0, t2 in 0.5f64..1.0, th1 in 0.01f64..0.6, th2 in -0.3f64..0.3) {
            let v = exact_visibility(t1, t2, th1, th2).unwrap();
            let pmax = exact_detection_probability(t1, t2, th1, th2, PI);
            let pmin = exact_detection_probability(t1, t2, th1, th2, 0.0);
            let direct = (pmax - pmin) / (pmax + pmin);
            prop_assert!((v - direct).abs() < 1e-9);
        }
    }
}

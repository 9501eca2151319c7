//! The assembled interferometer pipeline and deterministic phase sweeps.
//!
//! A run prepares the preselected state, applies the per-arm weak
//! interactions in the canonical order (polarization rotation, then
//! absorber — the two commute for this state family, the order is fixed for
//! determinism), recombines, and projects onto the postselector. The arm-1
//! wave plate's initial H → V conversion is part of preselection, not of θ₁.
//!
//! Sweeps are parameterized directly by the relative phase φ between the
//! arms. The bench hardware scans φ by tilting a glass slide with a motorized
//! actuator; the tilt-to-phase map is an apparatus detail kept out of the
//! model, so any actuator calibration is cosmetic axis labeling only.

use nalgebra::Vector4;
use num_complex::Complex64;

use crate::elements::{absorber_channel, rotation_channel};
use crate::error::{Error, Result};
use crate::state::{basis_index, inner_product, Arm, PolPathState, Polarization};

/// All physical knobs of one experimental configuration. Angles are radians.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Absorber transmission in arm 1.
    pub transmission_arm1: f64,
    /// Absorber transmission in arm 2.
    pub transmission_arm2: f64,
    /// Polarization rotation in arm 1 (beyond the preselection H → V flip).
    pub theta1: f64,
    /// Polarization rotation in arm 2.
    pub theta2: f64,
    /// Preselection imperfection: arm-1 polarization tilt away from vertical.
    pub delta1: f64,
    /// Postselection imperfection: analyzer tilt away from horizontal.
    pub delta2: f64,
    /// Phases at which the sweep is evaluated, strictly increasing.
    pub phase_grid: Vec<f64>,
    /// Maximum observed fringe visibility of the bench, V_m. Degrades fringe
    /// contrast in simulated counts and scales predicted visibilities; never
    /// enters the quantum state itself.
    pub visibility_scale: f64,
    /// Expected coincidences per bin at the no-filter reference probability.
    pub source_mean: f64,
    /// Counting-bin duration in seconds.
    pub bin_seconds: f64,
}

impl ExperimentConfig {
    /// The ideal configuration: unit transmissions, no rotations, no
    /// imperfections, reference counting rate.
    pub fn ideal() -> Self {
        Self {
            transmission_arm1: 1.0,
            transmission_arm2: 1.0,
            theta1: 0.0,
            theta2: 0.0,
            delta1: 0.0,
            delta2: 0.0,
            phase_grid: default_phase_grid(),
            visibility_scale: 1.0,
            source_mean: 2526.0,
            bin_seconds: 5.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (label, t) in [
            ("transmission_arm1", self.transmission_arm1),
            ("transmission_arm2", self.transmission_arm2),
        ] {
            if !(0.0..=1.0).contains(&t) || t.is_nan() {
                return Err(Error::InvalidConfig(format!("{label} = {t} outside [0, 1]")));
            }
        }
        if self.phase_grid.is_empty() {
            return Err(Error::InvalidConfig("phase grid is empty".into()));
        }
        if self.phase_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig(
                "phase grid must be strictly increasing".into(),
            ));
        }
        if !(self.visibility_scale > 0.0 && self.visibility_scale <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "visibility_scale = {} outside (0, 1]",
                self.visibility_scale
            )));
        }
        if !(self.source_mean > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "source_mean = {} must be positive",
                self.source_mean
            )));
        }
        if !(self.bin_seconds > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "bin_seconds = {} must be positive",
                self.bin_seconds
            )));
        }
        Ok(())
    }
}

/// Evenly spaced phases covering two full fringes, endpoints included.
pub fn default_phase_grid() -> Vec<f64> {
    phase_grid(0.0, 4.0 * std::f64::consts::PI, 61)
}

/// Evenly spaced grid from `start` to `stop` inclusive.
pub fn phase_grid(start: f64, stop: f64, points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![start];
    }
    let step = (stop - start) / (points - 1) as f64;
    (0..points).map(|i| start + step * i as f64).collect()
}

/// The preselected state at relative phase φ:
///
/// ```text
/// |ψ⟩ = (1/√2) [ |1⟩ (cos δ₁ |V⟩ + sin δ₁ |H⟩) + e^{iφ} |2⟩ |H⟩ ]
/// ```
///
/// At δ₁ = 0 this is the ideal orthogonally tagged superposition.
pub fn preselect(cfg: &ExperimentConfig, phi: f64) -> PolPathState {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = Vector4::zeros();
    v[basis_index(Arm::One, Polarization::Horizontal)] =
        Complex64::new(inv_sqrt2 * cfg.delta1.sin(), 0.0);
    v[basis_index(Arm::One, Polarization::Vertical)] =
        Complex64::new(inv_sqrt2 * cfg.delta1.cos(), 0.0);
    v[basis_index(Arm::Two, Polarization::Horizontal)] = Complex64::from_polar(inv_sqrt2, phi);
    PolPathState::new(v).expect("preselected state is normalized by construction")
}

/// The postselected state:
///
/// ```text
/// |φ⟩ = (1/√2) (|1⟩ + |2⟩) (cos δ₂ |H⟩ + sin δ₂ |V⟩)
/// ```
pub fn postselector(cfg: &ExperimentConfig) -> PolPathState {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let h = Complex64::new(inv_sqrt2 * cfg.delta2.cos(), 0.0);
    let v = Complex64::new(inv_sqrt2 * cfg.delta2.sin(), 0.0);
    let mut out = Vector4::zeros();
    out[basis_index(Arm::One, Polarization::Horizontal)] = h;
    out[basis_index(Arm::One, Polarization::Vertical)] = v;
    out[basis_index(Arm::Two, Polarization::Horizontal)] = h;
    out[basis_index(Arm::Two, Polarization::Vertical)] = v;
    PolPathState::new(out).expect("postselector is normalized by construction")
}

/// Ideal preselected state (δ₁ = 0) at relative phase φ.
pub fn preselect_ideal(phi: f64) -> PolPathState {
    let mut cfg = ExperimentConfig::ideal();
    cfg.phase_grid = vec![0.0];
    preselect(&cfg, phi)
}

/// Ideal postselector (δ₂ = 0).
pub fn postselect_ideal() -> PolPathState {
    let mut cfg = ExperimentConfig::ideal();
    cfg.phase_grid = vec![0.0];
    postselector(&cfg)
}

/// One point of a noiseless sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub phase: f64,
    pub probability: f64,
}

/// A noiseless detection-probability curve over the phase grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCurve {
    pub points: Vec<SweepPoint>,
}

impl SweepCurve {
    pub fn mean_probability(&self) -> f64 {
        if self.points.is_empty() {
            return 0.0;
        }
        self.points.iter().map(|p| p.probability).sum::<f64>() / self.points.len() as f64
    }

    pub fn min_probability(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p.probability)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_probability(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p.probability)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Fringe contrast (max − min)/(max + min) over the evaluated grid.
    pub fn visibility_from_extrema(&self) -> f64 {
        let max = self.max_probability();
        let min = self.min_probability();
        if max + min <= 0.0 {
            0.0
        } else {
            (max - min) / (max + min)
        }
    }
}

/// Runs the full pipeline at one phase and returns the detection probability
/// |⟨φ_post|ψ'⟩|². Element order: preselection, rotation in arm 1, rotation
/// in arm 2, absorber in arm 1, absorber in arm 2, postselection.
pub fn run_pipeline(cfg: &ExperimentConfig, phi: f64) -> Result<f64> {
    cfg.validate()?;
    Ok(run_pipeline_unchecked(cfg, phi))
}

pub(crate) fn run_pipeline_unchecked(cfg: &ExperimentConfig, phi: f64) -> f64 {
    let mut state = preselect(cfg, phi);
    state = rotation_channel(Arm::One, cfg.theta1).apply(&state);
    state = rotation_channel(Arm::Two, cfg.theta2).apply(&state);
    state = absorber_channel(Arm::One, cfg.transmission_arm1)
        .expect("validated transmission")
        .apply(&state);
    state = absorber_channel(Arm::Two, cfg.transmission_arm2)
        .expect("validated transmission")
        .apply(&state);
    inner_product(&postselector(cfg), &state).norm_sqr()
}

/// Evaluates the pipeline at every grid phase. Points are ordered by grid
/// index regardless of how they are evaluated.
pub fn sweep(cfg: &ExperimentConfig) -> Result<SweepCurve> {
    cfg.validate()?;
    let points = cfg
        .phase_grid
        .iter()
        .map(|&phase| SweepPoint {
            phase,
            probability: run_pipeline_unchecked(cfg, phase),
        })
        .collect();
    Ok(SweepCurve { points })
}

/// Mean detection probability over one full fringe period. The phase enters
/// the probability only through cos φ and sin φ, so four equally spaced
/// evaluations integrate the first harmonic exactly.
pub(crate) fn mean_over_period(cfg: &ExperimentConfig) -> f64 {
    let quarter = std::f64::consts::FRAC_PI_2;
    (0..4)
        .map(|i| run_pipeline_unchecked(cfg, quarter * i as f64))
        .sum::<f64>()
        / 4.0
}

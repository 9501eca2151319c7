//! Stochastic photon counting.
//!
//! Converts noiseless detection probabilities into heralded coincidence
//! counts with Poisson statistics. Counts are anchored to a configured
//! baseline mean per bin at the no-filter reference probability 1/4 — the
//! bench reports observed coincidences, not absolute pair rates, so the
//! source brightness is back-solved from that anchor.
//!
//! Determinism contract: every bin derives its own RNG seed from the master
//! seed and the bin index, and jitter offsets are drawn from a dedicated
//! stream, so identical inputs give identical count sequences regardless of
//! evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::elements::{absorber_channel, rotation_channel, Channel};
use crate::error::Result;
use crate::experiment::{
    mean_over_period, postselector, preselect, run_pipeline_unchecked, ExperimentConfig,
};
use crate::state::{Arm, DensityMatrix};

/// Detection probability of the ideal no-filter configuration, used as the
/// reference point when anchoring count rates.
pub const REFERENCE_PROBABILITY: f64 = 0.25;

/// Heralded-pair source and detection constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceModel {
    /// Generated photon pairs per second.
    pub pair_rate: f64,
    /// Detection efficiency of the heralding (idler) arm.
    pub efficiency_idler: f64,
    /// Detection efficiency of the signal arm.
    pub efficiency_signal: f64,
    /// Coincidence window in seconds. Retained for realism; enters the count
    /// model only through the accidental rate.
    pub coincidence_window: f64,
    /// Accidental coincidences per second.
    pub accidental_rate: f64,
    /// Counting-bin duration in seconds.
    pub bin_seconds: f64,
}

impl Default for SourceModel {
    fn default() -> Self {
        Self::from_baseline_mean(2526.0, 5.0)
    }
}

impl SourceModel {
    /// Builds a source whose expected coincidences per bin equal
    /// `mean_per_bin` at the no-filter reference probability.
    pub fn from_baseline_mean(mean_per_bin: f64, bin_seconds: f64) -> Self {
        let efficiency = 0.30;
        Self {
            pair_rate: mean_per_bin / (bin_seconds * efficiency * efficiency),
            efficiency_idler: efficiency,
            efficiency_signal: efficiency,
            coincidence_window: 8e-9,
            accidental_rate: 0.0,
            bin_seconds,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (label, v) in [
            ("pair_rate", self.pair_rate),
            ("coincidence_window", self.coincidence_window),
            ("accidental_rate", self.accidental_rate),
        ] {
            if v < 0.0 || v.is_nan() {
                return Err(crate::Error::InvalidConfig(format!(
                    "{label} = {v} must be non-negative"
                )));
            }
        }
        for (label, e) in [
            ("efficiency_idler", self.efficiency_idler),
            ("efficiency_signal", self.efficiency_signal),
        ] {
            if !(0.0..=1.0).contains(&e) || e.is_nan() {
                return Err(crate::Error::InvalidConfig(format!(
                    "{label} = {e} outside [0, 1]"
                )));
            }
        }
        if !(self.bin_seconds > 0.0) {
            return Err(crate::Error::InvalidConfig(format!(
                "bin_seconds = {} must be positive",
                self.bin_seconds
            )));
        }
        Ok(())
    }

    /// Expected coincidences in one bin at the given detection probability.
    pub fn expected_coincidences(&self, p_detect: f64) -> f64 {
        self.pair_rate
            * self.bin_seconds
            * self.efficiency_idler
            * self.efficiency_signal
            * (p_detect / REFERENCE_PROBABILITY)
            + self.accidental_rate * self.bin_seconds
    }
}

/// One counting bin of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountRecord {
    /// Phase setpoint in radians.
    pub phase: f64,
    /// Coincidences registered in the bin.
    pub counts: u64,
    /// Bin duration in seconds.
    pub duration: f64,
    /// The derived per-bin RNG seed, for reproducing a single bin.
    pub seed_tag: u64,
}

/// Which wave-plate-driven angles receive a systematic offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct JitterTargets {
    pub theta1: bool,
    pub theta2: bool,
    pub delta1: bool,
    pub delta2: bool,
}

impl Default for JitterTargets {
    fn default() -> Self {
        Self {
            theta1: true,
            theta2: true,
            delta1: true,
            delta2: true,
        }
    }
}

/// Wave-plate setting imprecision. The edgeless wave-plate mounts limit how
/// accurately angles can be read and set, so the offset is drawn once per
/// sweep (a systematic misset), not per bin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JitterModel {
    /// Standard deviation of the polarization-rotation offset, radians.
    pub waveplate_sigma: f64,
    pub targets: JitterTargets,
}

impl Default for JitterModel {
    fn default() -> Self {
        Self {
            waveplate_sigma: 2.0f64.to_radians(),
            targets: JitterTargets::default(),
        }
    }
}

impl JitterModel {
    /// No angle jitter at all.
    pub fn disabled() -> Self {
        Self {
            waveplate_sigma: 0.0,
            targets: JitterTargets::default(),
        }
    }
}

/// splitmix64 finalizer; decorrelates derived seeds from sequential stream
/// indices.
fn mix_seed(master: u64, stream: u64) -> u64 {
    let mut z = master ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const JITTER_STREAM: u64 = 0;
const BIN_STREAM_BASE: u64 = 1;

/// Samples one counting bin. The Poisson mean is the source expectation at
/// `p_detect`; a zero mean yields zero counts.
pub fn simulate_bin(phase: f64, p_detect: f64, src: &SourceModel, rng_seed: u64) -> CountRecord {
    let mean = src.expected_coincidences(p_detect);
    let counts = if mean > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let poisson = Poisson::new(mean).expect("positive Poisson mean");
        poisson.sample(&mut rng) as u64
    } else {
        0
    };
    CountRecord {
        phase,
        counts,
        duration: src.bin_seconds,
        seed_tag: rng_seed,
    }
}

/// Applies the sweep-level systematic angle offsets. Four standard normals
/// are always drawn in a fixed order, so enabling or disabling a target does
/// not change the offsets of the others.
fn jittered_config(cfg: &ExperimentConfig, jitter: &JitterModel, rng_seed: u64) -> ExperimentConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(rng_seed, JITTER_STREAM));
    let mut draw = || {
        let z: f64 = StandardNormal.sample(&mut rng);
        z * jitter.waveplate_sigma
    };
    let offsets = [draw(), draw(), draw(), draw()];
    let mut out = cfg.clone();
    if jitter.targets.theta1 {
        out.theta1 += offsets[0];
    }
    if jitter.targets.theta2 {
        out.theta2 += offsets[1];
    }
    if jitter.targets.delta1 {
        out.delta1 += offsets[2];
    }
    if jitter.targets.delta2 {
        out.delta2 += offsets[3];
    }
    out
}

/// Simulates a full counting sweep: one bin per grid phase, Poisson counts,
/// systematic angle jitter drawn once, and fringe contrast degraded by the
/// configured visibility scale (mode-overlap imperfection lives in the
/// counts, never in the quantum state; the phase-averaged rate is preserved
/// exactly).
pub fn simulate_sweep(
    cfg: &ExperimentConfig,
    src: &SourceModel,
    jitter: &JitterModel,
    rng_seed: u64,
) -> Result<Vec<CountRecord>> {
    cfg.validate()?;
    src.validate()?;
    let effective = jittered_config(cfg, jitter, rng_seed);
    let mean_p = mean_over_period(&effective);
    let records = effective
        .phase_grid
        .iter()
        .enumerate()
        .map(|(i, &phase)| {
            let p = run_pipeline_unchecked(&effective, phase);
            let p_contrast = mean_p + cfg.visibility_scale * (p - mean_p);
            let seed = mix_seed(rng_seed, BIN_STREAM_BASE + i as u64);
            simulate_bin(phase, p_contrast, src, seed)
        })
        .collect();
    Ok(records)
}

/// The counting runs of one full weak-measurement session: presence runs
/// (no filter, filter in arm 1, filter in arm 2, all without rotations) and
/// polarization runs (a sweep per rotation angle per arm, no filter).
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    pub no_filter: Vec<CountRecord>,
    pub filter_arm1: Vec<CountRecord>,
    pub filter_arm2: Vec<CountRecord>,
    /// (θ₁, records) per rotation setting in arm 1.
    pub rotations_arm1: Vec<(f64, Vec<CountRecord>)>,
    /// (θ₂, records) per rotation setting in arm 2.
    pub rotations_arm2: Vec<(f64, Vec<CountRecord>)>,
    /// Transmission of the filter used in the presence runs.
    pub filter_transmission: f64,
}

const PRESENCE_SWEEP_STREAM: u64 = 1 << 32;
const ROTATION_ARM1_STREAM: u64 = 2 << 32;
const ROTATION_ARM2_STREAM: u64 = 3 << 32;

/// Simulates the full session. `base` supplies the grid, imperfection
/// angles, visibility scale and count anchor; transmissions and rotations
/// are overridden per run. Every run draws from its own seed stream, so the
/// whole set is reproducible from the single master seed.
pub fn simulate_measurement_set(
    base: &ExperimentConfig,
    filter_transmission: f64,
    rotation_angles: &[f64],
    src: &SourceModel,
    jitter: &JitterModel,
    rng_seed: u64,
) -> Result<MeasurementSet> {
    let mut presence = base.clone();
    presence.theta1 = 0.0;
    presence.theta2 = 0.0;
    presence.transmission_arm1 = 1.0;
    presence.transmission_arm2 = 1.0;

    let no_filter = simulate_sweep(&presence, src, jitter, mix_seed(rng_seed, PRESENCE_SWEEP_STREAM))?;
    let mut f1 = presence.clone();
    f1.transmission_arm1 = filter_transmission;
    let filter_arm1 = simulate_sweep(&f1, src, jitter, mix_seed(rng_seed, PRESENCE_SWEEP_STREAM + 1))?;
    let mut f2 = presence.clone();
    f2.transmission_arm2 = filter_transmission;
    let filter_arm2 = simulate_sweep(&f2, src, jitter, mix_seed(rng_seed, PRESENCE_SWEEP_STREAM + 2))?;

    let mut rotations_arm1 = Vec::with_capacity(rotation_angles.len());
    let mut rotations_arm2 = Vec::with_capacity(rotation_angles.len());
    for (i, &theta) in rotation_angles.iter().enumerate() {
        let mut r1 = presence.clone();
        r1.theta1 = theta;
        rotations_arm1.push((
            theta,
            simulate_sweep(&r1, src, jitter, mix_seed(rng_seed, ROTATION_ARM1_STREAM + i as u64))?,
        ));
        let mut r2 = presence.clone();
        r2.theta2 = theta;
        rotations_arm2.push((
            theta,
            simulate_sweep(&r2, src, jitter, mix_seed(rng_seed, ROTATION_ARM2_STREAM + i as u64))?,
        ));
    }

    Ok(MeasurementSet {
        no_filter,
        filter_arm1,
        filter_arm2,
        rotations_arm1,
        rotations_arm2,
        filter_transmission,
    })
}

/// Brute-force probability oracle: evolves the full density matrix through
/// every Kraus branch of every element, tracking the absorbed fraction, and
/// reads out the postselector expectation. Independent of the pure-amplitude
/// fast path.
pub fn density_oracle(cfg: &ExperimentConfig, phi: f64) -> Result<f64> {
    cfg.validate()?;
    let channels: [Channel; 4] = [
        rotation_channel(Arm::One, cfg.theta1),
        rotation_channel(Arm::Two, cfg.theta2),
        absorber_channel(Arm::One, cfg.transmission_arm1)?,
        absorber_channel(Arm::Two, cfg.transmission_arm2)?,
    ];
    let mut rho = DensityMatrix::from_pure(&preselect(cfg, phi));
    let mut absorbed_total = 0.0;
    for ch in &channels {
        let (next, absorbed) = ch.apply_density(&rho);
        rho = next;
        absorbed_total += absorbed;
    }
    debug_assert!(
        (rho.trace() + absorbed_total - 1.0).abs() < crate::ORACLE_TOL,
        "trace bookkeeping violated"
    );
    let post = DensityMatrix::from_pure(&postselector(cfg));
    let p = (post.matrix() * rho.matrix()).trace().re;
    Ok(p)
}

//! Simulation and analysis toolkit for a single-photon quantum Cheshire cat
//! interferometer.
//!
//! The crate models a two-arm interferometer whose path degree of freedom is
//! tagged by polarization: arm 1 carries vertical polarization, arm 2 carries
//! horizontal polarization, and the detector postselects horizontally
//! polarized light at one output port. Weak measurements of photon presence
//! (high-transmission Brewster-slide absorbers) and of circular polarization
//! (small wave-plate rotations) are read out through changes in the
//! postselected count rate and fringe visibility.
//!
//! Layers, from bottom to top:
//!
//! * [`state`] — exact linear algebra on the 4-dimensional path ⊗ polarization
//!   Hilbert space.
//! * [`elements`] — optical elements as Kraus channels: beam-block absorbers,
//!   wave-plate rotations, phase shifters, and the Brewster-angle slide with a
//!   Fresnel reflectance calculator.
//! * [`weak_values`] — closed-form weak values, perturbative detection
//!   probability predictors, and the exact fringe formulas.
//! * [`experiment`] — the assembled pipeline: preselection, per-arm weak
//!   interactions, recombination, postselection, and noiseless phase sweeps.
//! * [`montecarlo`] — stochastic photon counting with Poisson statistics,
//!   deterministic seeding, and a density-matrix oracle.
//! * [`analysis`] — sinusoidal fringe fits and weak-value estimators with
//!   propagated uncertainties.

pub mod analysis;
pub mod elements;
pub mod error;
pub mod experiment;
pub mod montecarlo;
pub mod state;
pub mod weak_values;

pub use error::{Error, Result};
pub use state::{Arm, DensityMatrix, Observable, PolPathState, Polarization};

/// Absolute tolerance for closed-form 4-dimensional algebra, where the only
/// error source is floating-point rounding.
pub const EXACT_TOL: f64 = 1e-12;

/// Absolute tolerance for quantities accumulated through a chain of matrix
/// products (density-matrix evolution, completeness checks).
pub const ORACLE_TOL: f64 = 1e-10;

//! Exact linear algebra over the 4-dimensional Hilbert space of path
//! (arms 1 and 2) tensored with polarization (H and V).
//!
//! The basis ordering is fixed across the whole crate:
//!
//! ```text
//! index 0: |1,H⟩    index 1: |1,V⟩    index 2: |2,H⟩    index 3: |2,V⟩
//! ```
//!
//! i.e. `index = 2 * arm + polarization` with arm 1 ↦ 0, arm 2 ↦ 1,
//! H ↦ 0, V ↦ 1. Every operator in the crate is written against this
//! ordering, which removes index ambiguity between modules.
//!
//! States may be sub-normalized: lossy elements only ever shrink the norm, so
//! the squared norm of any physically evolved state stays in `[0, 1]`.

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::EXACT_TOL;

/// Dimension of the path ⊗ polarization space.
pub const DIM: usize = 4;

/// Slack allowed above exact bounds when validating norms and traces.
pub const NORM_SLACK: f64 = 1e-12;

/// Tolerance for positive-semidefiniteness checks (eigenvalues may dip this
/// far below zero from accumulated rounding).
pub const PSD_TOL: f64 = 1e-10;

/// One of the two interferometer arms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arm {
    /// Arm 1, the vertically polarized arm after preselection.
    One,
    /// Arm 2, the horizontally polarized arm.
    Two,
}

impl Arm {
    /// Zero-based index into the path factor.
    pub fn index(self) -> usize {
        match self {
            Arm::One => 0,
            Arm::Two => 1,
        }
    }

    /// The opposite arm.
    pub fn other(self) -> Arm {
        match self {
            Arm::One => Arm::Two,
            Arm::Two => Arm::One,
        }
    }
}

/// Linear polarization basis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    Horizontal,
    Vertical,
}

impl Polarization {
    /// Zero-based index into the polarization factor.
    pub fn index(self) -> usize {
        match self {
            Polarization::Horizontal => 0,
            Polarization::Vertical => 1,
        }
    }
}

/// Index of `|arm, pol⟩` in the fixed product basis.
pub fn basis_index(arm: Arm, pol: Polarization) -> usize {
    2 * arm.index() + pol.index()
}

/// A (possibly sub-normalized) pure state of the path ⊗ polarization space.
#[derive(Debug, Clone, PartialEq)]
pub struct PolPathState {
    amplitudes: Vector4<Complex64>,
}

impl PolPathState {
    /// Builds a state from amplitudes in the fixed basis ordering.
    ///
    /// Fails if the squared norm exceeds 1 (beyond rounding slack); loss can
    /// only ever decrease the norm of a physical state.
    pub fn new(amplitudes: Vector4<Complex64>) -> Result<Self> {
        let norm_sq = amplitudes.norm_squared();
        if !(0.0..=1.0 + NORM_SLACK).contains(&norm_sq) || norm_sq.is_nan() {
            return Err(Error::StateNormOutOfRange(norm_sq));
        }
        Ok(Self { amplitudes })
    }

    /// The basis state `|arm, pol⟩`.
    pub fn basis_state(arm: Arm, pol: Polarization) -> Self {
        let mut amplitudes = Vector4::zeros();
        amplitudes[basis_index(arm, pol)] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    /// Builds a state without the norm check. Used internally where the
    /// amplitudes come from applying an operator to an already-valid state.
    pub(crate) fn from_vector_unchecked(amplitudes: Vector4<Complex64>) -> Self {
        Self { amplitudes }
    }

    /// Amplitude of the `|arm, pol⟩` component.
    pub fn amplitude(&self, arm: Arm, pol: Polarization) -> Complex64 {
        self.amplitudes[basis_index(arm, pol)]
    }

    /// The full amplitude vector.
    pub fn amplitudes(&self) -> &Vector4<Complex64> {
        &self.amplitudes
    }

    /// Squared norm ⟨ψ|ψ⟩. Equals 1 for normalized states, less after loss.
    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.norm_squared()
    }
}

/// Inner product ⟨a|b⟩, conjugating the first argument.
pub fn inner_product(a: &PolPathState, b: &PolPathState) -> Complex64 {
    a.amplitudes.dotc(&b.amplitudes)
}

/// Applies a 4×4 matrix to a state. No renormalization is performed.
pub fn apply_matrix(m: &Matrix4<Complex64>, s: &PolPathState) -> PolPathState {
    PolPathState::from_vector_unchecked(m * s.amplitudes)
}

/// Kronecker product of a path-factor operator with a polarization-factor
/// operator, laid out in the fixed basis ordering.
pub(crate) fn kron2(path: &Matrix2<Complex64>, pol: &Matrix2<Complex64>) -> Matrix4<Complex64> {
    let mut out = Matrix4::zeros();
    for pr in 0..2 {
        for pc in 0..2 {
            for qr in 0..2 {
                for qc in 0..2 {
                    out[(2 * pr + qr, 2 * pc + qc)] = path[(pr, pc)] * pol[(qr, qc)];
                }
            }
        }
    }
    out
}

/// The circular-polarization operator on the polarization factor alone,
/// with eigenstates (|H⟩ ± i|V⟩)/√2 and eigenvalues ±1.
pub fn sigma_circ_pol() -> Matrix2<Complex64> {
    Matrix2::new(
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, 0.0),
    )
}

/// A polarization-factor eigenvector together with its eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarizationEigenpair {
    /// Amplitudes on (|H⟩, |V⟩).
    pub vector: Vector2<Complex64>,
    pub eigenvalue: f64,
}

/// The circular-polarization eigenbasis |±⟩ = (|H⟩ ± i|V⟩)/√2, returned as
/// `[plus, minus]` with eigenvalues +1 and −1.
pub fn sigma_circ_eigenbasis() -> [PolarizationEigenpair; 2] {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let plus = Vector2::new(
        Complex64::new(inv_sqrt2, 0.0),
        Complex64::new(0.0, inv_sqrt2),
    );
    let minus = Vector2::new(
        Complex64::new(inv_sqrt2, 0.0),
        Complex64::new(0.0, -inv_sqrt2),
    );
    [
        PolarizationEigenpair {
            vector: plus,
            eigenvalue: 1.0,
        },
        PolarizationEigenpair {
            vector: minus,
            eigenvalue: -1.0,
        },
    ]
}

/// Largest elementwise deviation of `m` from its conjugate transpose.
pub(crate) fn hermitian_defect(m: &Matrix4<Complex64>) -> f64 {
    let adj = m.adjoint();
    (m - adj).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Checks that a Hermitian matrix has all eigenvalues ≥ −tol, by attempting a
/// Cholesky factorization of `m + (tol + margin)·I`.
pub(crate) fn is_psd_within(m: &Matrix4<Complex64>, tol: f64) -> bool {
    let margin = 1e-14;
    let shifted = m + Matrix4::identity().scale(tol + margin);
    shifted.cholesky().is_some()
}

/// A Hermitian observable on the full 4-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: Matrix4<Complex64>,
}

impl Observable {
    /// Wraps a matrix, checking Hermiticity elementwise.
    pub fn new(matrix: Matrix4<Complex64>) -> Result<Self> {
        let defect = hermitian_defect(&matrix);
        if defect > EXACT_TOL {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self { matrix })
    }

    /// The identity observable.
    pub fn identity() -> Self {
        Self {
            matrix: Matrix4::identity(),
        }
    }

    /// The presence projector Π_k onto the given arm.
    pub fn presence(arm: Arm) -> Self {
        let mut path = Matrix2::zeros();
        path[(arm.index(), arm.index())] = Complex64::new(1.0, 0.0);
        Self {
            matrix: kron2(&path, &Matrix2::identity()),
        }
    }

    /// The circular-polarization observable acting on both arms.
    pub fn circular_polarization() -> Self {
        Self {
            matrix: kron2(&Matrix2::identity(), &sigma_circ_pol()),
        }
    }

    /// The arm-resolved circular-polarization observable σ_circ Π_k, with
    /// eigenvalues 0 and ±1.
    pub fn circular_polarization_in_arm(arm: Arm) -> Self {
        let mut path = Matrix2::zeros();
        path[(arm.index(), arm.index())] = Complex64::new(1.0, 0.0);
        Self {
            matrix: kron2(&path, &sigma_circ_pol()),
        }
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.matrix
    }
}

/// A 4×4 density matrix: Hermitian, positive semidefinite, trace ≤ 1.
///
/// This is the oracle representation for lossy evolution: the trace drops by
/// exactly the absorbed fraction when a loss branch fires.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: Matrix4<Complex64>,
}

impl DensityMatrix {
    /// Wraps a matrix after validating Hermiticity, positivity and trace.
    pub fn new(matrix: Matrix4<Complex64>) -> Result<Self> {
        let defect = hermitian_defect(&matrix);
        if defect > EXACT_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (largest asymmetry {defect:.3e})"
            )));
        }
        if !is_psd_within(&matrix, PSD_TOL) {
            return Err(Error::InvalidDensityMatrix(
                "negative eigenvalue beyond tolerance".to_string(),
            ));
        }
        let trace = matrix.trace().re;
        if !(-NORM_SLACK..=1.0 + NORM_SLACK).contains(&trace) || trace.is_nan() {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace {trace} outside [0, 1]"
            )));
        }
        Ok(Self { matrix })
    }

    /// The projector |ψ⟩⟨ψ| of a pure (possibly sub-normalized) state.
    pub fn from_pure(state: &PolPathState) -> Self {
        let v = state.amplitudes();
        Self {
            matrix: v * v.adjoint(),
        }
    }

    pub(crate) fn from_matrix_unchecked(matrix: Matrix4<Complex64>) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.matrix
    }

    /// Tr ρ. Equals 1 minus the total absorbed fraction after lossy evolution.
    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Tr ρ², maximal (= (Tr ρ)²) exactly for pure states.
    pub fn purity(&self) -> f64 {
        (self.matrix * self.matrix).trace().re
    }

    /// Expectation value Tr(A ρ) of a Hermitian observable; real by symmetry.
    pub fn expectation(&self, observable: &Observable) -> f64 {
        (observable.matrix() * self.matrix).trace().re
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Preselected state (|1,V⟩ + e^{iφ}|2,H⟩)/√2.
    fn preselected(phase: f64) -> PolPathState {
        let p = Complex64::from_polar(FRAC_1_SQRT_2, phase);
        PolPathState::new(Vector4::new(c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0), p, c(0.0, 0.0)))
            .unwrap()
    }

    /// Postselected state (|1,H⟩ + |2,H⟩)/√2.
    fn postselected() -> PolPathState {
        PolPathState::new(Vector4::new(
            c(FRAC_1_SQRT_2, 0.0),
            c(0.0, 0.0),
            c(FRAC_1_SQRT_2, 0.0),
            c(0.0, 0.0),
        ))
        .unwrap()
    }

    #[test]
    fn inner_product_of_normalized_state_is_one() {
        let psi = preselected(0.3);
        assert_abs_diff_eq!(inner_product(&psi, &psi).re, 1.0, epsilon = EXACT_TOL);
        assert_abs_diff_eq!(inner_product(&psi, &psi).im, 0.0, epsilon = EXACT_TOL);
    }

    #[test]
    fn pre_post_overlap_is_one_half() {
        // Hand expansion: only the |2,H⟩ component survives, (1/√2)·(1/√2).
        let ov = inner_product(&postselected(), &preselected(0.0));
        assert_abs_diff_eq!(ov.re, 0.5, epsilon = EXACT_TOL);
        assert_abs_diff_eq!(ov.im, 0.0, epsilon = EXACT_TOL);
        assert_abs_diff_eq!(ov.norm_sqr(), 0.25, epsilon = EXACT_TOL);
    }

    #[test]
    fn orthogonal_basis_states_have_zero_overlap() {
        let a = PolPathState::basis_state(Arm::One, Polarization::Horizontal);
        let b = PolPathState::basis_state(Arm::Two, Polarization::Vertical);
        assert_eq!(inner_product(&a, &b), c(0.0, 0.0));
    }

    #[test]
    fn inner_product_conjugates_first_argument() {
        let a = preselected(0.7);
        let b = postselected();
        let ab = inner_product(&a, &b);
        let ba = inner_product(&b, &a);
        assert_abs_diff_eq!(ab.re, ba.re, epsilon = EXACT_TOL);
        assert_abs_diff_eq!(ab.im, -ba.im, epsilon = EXACT_TOL);
    }

    #[test]
    fn apply_identity_is_identity() {
        let s = preselected(1.1);
        let out = apply_matrix(&Matrix4::identity(), &s);
        assert_eq!(out, s);
    }

    #[test]
    fn presence_projector_keeps_only_its_arm() {
        let s = preselected(0.0);
        let out = apply_matrix(Observable::presence(Arm::One).matrix(), &s);
        assert_abs_diff_eq!(
            out.amplitude(Arm::One, Polarization::Vertical).re,
            FRAC_1_SQRT_2,
            epsilon = EXACT_TOL
        );
        assert_eq!(out.amplitude(Arm::Two, Polarization::Horizontal), c(0.0, 0.0));
        assert_eq!(out.amplitude(Arm::One, Polarization::Horizontal), c(0.0, 0.0));
    }

    #[test]
    fn sigma_circ_maps_h_to_i_v_in_each_arm() {
        // σ_circ (1,0) = (0, i) on the polarization factor.
        for arm in [Arm::One, Arm::Two] {
            let s = PolPathState::basis_state(arm, Polarization::Horizontal);
            let out = apply_matrix(Observable::circular_polarization().matrix(), &s);
            assert_abs_diff_eq!(
                (out.amplitude(arm, Polarization::Vertical) - c(0.0, 1.0)).norm(),
                0.0,
                epsilon = EXACT_TOL
            );
            assert_eq!(out.amplitude(arm, Polarization::Horizontal), c(0.0, 0.0));
        }
    }

    #[test]
    fn circular_eigenbasis_has_unit_eigenvalues_and_is_orthonormal() {
        let [plus, minus] = sigma_circ_eigenbasis();
        let sigma = sigma_circ_pol();
        for pair in [&plus, &minus] {
            let applied = sigma * pair.vector;
            let expected = pair.vector.scale(pair.eigenvalue);
            assert_abs_diff_eq!((applied - expected).norm(), 0.0, epsilon = EXACT_TOL);
            assert_abs_diff_eq!(pair.vector.norm(), 1.0, epsilon = EXACT_TOL);
        }
        assert_eq!(plus.eigenvalue, 1.0);
        assert_eq!(minus.eigenvalue, -1.0);
        assert_abs_diff_eq!(plus.vector.dotc(&minus.vector).norm(), 0.0, epsilon = EXACT_TOL);
    }

    #[test]
    fn projectors_are_complete_and_idempotent() {
        let pi1 = Observable::presence(Arm::One);
        let pi2 = Observable::presence(Arm::Two);
        let sum = pi1.matrix() + pi2.matrix();
        assert_abs_diff_eq!(
            (sum - Matrix4::identity()).norm(),
            0.0,
            epsilon = EXACT_TOL
        );
        for pi in [&pi1, &pi2] {
            let sq = pi.matrix() * pi.matrix();
            assert_abs_diff_eq!((sq - pi.matrix()).norm(), 0.0, epsilon = EXACT_TOL);
        }
    }

    #[test]
    fn arm_resolved_sigma_squares_to_presence() {
        for arm in [Arm::One, Arm::Two] {
            let sp = Observable::circular_polarization_in_arm(arm);
            let sq = sp.matrix() * sp.matrix();
            assert_eq!(sq, *Observable::presence(arm).matrix());
        }
    }

    #[test]
    fn observable_rejects_non_hermitian_matrix() {
        let mut m = Matrix4::identity();
        m[(0, 1)] = c(0.5, 0.0);
        assert!(matches!(Observable::new(m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn state_rejects_norm_above_one() {
        let v = Vector4::from_element(c(1.0, 0.0));
        assert!(matches!(
            PolPathState::new(v),
            Err(Error::StateNormOutOfRange(_))
        ));
    }

    #[test]
    fn pure_density_matrix_purity_matches_trace_squared() {
        // Also holds for sub-normalized pure states.
        let psi = preselected(0.4);
        let shrunk = apply_matrix(&Matrix4::identity().scale(0.9), &psi);
        for s in [&psi, &shrunk] {
            let rho = DensityMatrix::from_pure(s);
            assert_relative_eq!(rho.purity(), rho.trace().powi(2), epsilon = EXACT_TOL);
        }
    }

    #[test]
    fn density_matrix_validation_rejects_negative_and_overweight() {
        let mut neg = Matrix4::zeros();
        neg[(0, 0)] = c(-0.5, 0.0);
        assert!(DensityMatrix::new(neg).is_err());
        let over = Matrix4::identity();
        assert!(DensityMatrix::new(over).is_err()); // trace 4 > 1
    }

    #[test]
    fn density_expectation_matches_pure_state_value() {
        let psi = preselected(0.9);
        let rho = DensityMatrix::from_pure(&psi);
        let pi2 = Observable::presence(Arm::Two);
        let direct = inner_product(&psi, &apply_matrix(pi2.matrix(), &psi)).re;
        assert_abs_diff_eq!(rho.expectation(&pi2), direct, epsilon = EXACT_TOL);
    }

    /// Random unitary built by QR-decomposing a random complex matrix.
    fn random_unitary(entries: &[f64; 32]) -> Matrix4<Complex64> {
        let m = Matrix4::from_fn(|r, col| c(entries[8 * r + 2 * col], entries[8 * r + 2 * col + 1]));
        let qr = m.qr();
        qr.q()
    }

    proptest! {
        #[test]
        fn unitaries_preserve_norm(entries in prop::array::uniform32(-1.0f64..1.0), phase in 0.0..(2.0 * PI)) {
            let u = random_unitary(&entries);
            // Guard against degenerate (rank-deficient) random draws.
            prop_assume!((u.adjoint() * u - Matrix4::identity()).norm() < 1e-9);
            let s = preselected(phase);
            let out = apply_matrix(&u, &s);
            prop_assert!((out.norm_squared() - s.norm_squared()).abs() < EXACT_TOL);
        }
    }
}

//! Optical elements as quantum channels.
//!
//! Every element is a [`Channel`]: a single surviving Kraus operator (all
//! elements here are either unitary or pure amplitude damping on one arm)
//! plus, for lossy elements, an explicit loss operator that routes the
//! absorbed amplitude out of the detected space. Keeping the loss branch
//! explicit lets the density-matrix oracle verify completeness while the fast
//! pure-state path applies only the surviving operator.
//!
//! The weak absorber is a microscope slide tilted to Brewster's angle: at that
//! incidence the p-polarized component is fully transmitted while the
//! s-polarized component reflects with probability R ≈ 0.148 for glass, so
//! orienting the tilt axis selects which arm's (polarization-tagged) light is
//! attenuated. [`fresnel_s_reflectance`] computes R from first principles.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{
    apply_matrix, inner_product, is_psd_within, kron2, Arm, DensityMatrix, PolPathState,
    Polarization,
};
use crate::EXACT_TOL;

/// Default refractive index of the glass slide. Reproduces both the quoted
/// Brewster angle of 56.3° and the s-reflectance of 0.148.
pub const DEFAULT_REFRACTIVE_INDEX: f64 = 1.5;

/// A quantum channel with one surviving Kraus operator and an optional loss
/// branch. The loss branch maps amplitude out of the beam (scattered photons
/// never reach the detector), so it contributes to trace bookkeeping but not
/// to detected probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    surviving: Matrix4<Complex64>,
    loss: Option<Matrix4<Complex64>>,
}

impl Channel {
    /// The do-nothing channel.
    pub fn identity() -> Self {
        Self {
            surviving: Matrix4::identity(),
            loss: None,
        }
    }

    /// A channel with a single unitary Kraus operator.
    pub fn unitary(u: Matrix4<Complex64>) -> Self {
        Self {
            surviving: u,
            loss: None,
        }
    }

    /// The surviving (no-absorption) Kraus operator.
    pub fn surviving_op(&self) -> &Matrix4<Complex64> {
        &self.surviving
    }

    /// The loss Kraus operator, present only for absorbing elements.
    pub fn loss_op(&self) -> Option<&Matrix4<Complex64>> {
        self.loss.as_ref()
    }

    /// The complete Kraus list, surviving operator first.
    pub fn kraus_ops(&self) -> Vec<Matrix4<Complex64>> {
        let mut ops = vec![self.surviving];
        if let Some(l) = self.loss {
            ops.push(l);
        }
        ops
    }

    /// Applies the surviving branch to a pure state. No renormalization: the
    /// squared norm of the output is the survival probability times the input
    /// norm.
    pub fn apply(&self, state: &PolPathState) -> PolPathState {
        apply_matrix(&self.surviving, state)
    }

    /// Evolves a density matrix through the channel. Returns the detected-beam
    /// density matrix (surviving branch only) and the absorbed fraction routed
    /// to the loss branch, so that output trace + absorbed = input trace.
    pub fn apply_density(&self, rho: &DensityMatrix) -> (DensityMatrix, f64) {
        let m = rho.matrix();
        let out = self.surviving * m * self.surviving.adjoint();
        let absorbed = match &self.loss {
            Some(l) => (l * m * l.adjoint()).trace().re,
            None => 0.0,
        };
        (DensityMatrix::from_matrix_unchecked(out), absorbed)
    }

    /// I − Σ K†K over all Kraus operators. Zero (to rounding) for a complete
    /// channel; used by tests to verify that the loss branch accounts for
    /// exactly the removed amplitude.
    pub fn completeness_defect(&self) -> Matrix4<Complex64> {
        let mut sum = self.surviving.adjoint() * self.surviving;
        if let Some(l) = &self.loss {
            sum += l.adjoint() * l;
        }
        Matrix4::identity() - sum
    }

    /// True when the channel is a single unitary Kraus operator.
    pub fn is_unitary(&self) -> bool {
        if self.loss.is_some() {
            return false;
        }
        let residual = self.surviving.adjoint() * self.surviving - Matrix4::identity();
        residual.norm() <= EXACT_TOL
    }

    /// True when the channel is trace non-increasing within tolerance:
    /// Σ K†K ≼ I.
    pub fn is_trace_nonincreasing(&self) -> bool {
        is_psd_within(&self.completeness_defect(), crate::state::PSD_TOL)
    }
}

/// Embeds a 2×2 polarization-factor operator into the given arm, acting as the
/// identity on the other arm.
fn embed_in_arm(arm: Arm, op: &Matrix2<Complex64>) -> Matrix4<Complex64> {
    let mut this_arm = Matrix2::zeros();
    this_arm[(arm.index(), arm.index())] = Complex64::new(1.0, 0.0);
    let mut other_arm = Matrix2::zeros();
    other_arm[(arm.other().index(), arm.other().index())] = Complex64::new(1.0, 0.0);
    kron2(&this_arm, op) + kron2(&other_arm, &Matrix2::identity())
}

/// Weak absorber in one arm with transmission T: the surviving branch is
/// `1 − (1 − √T) Π_k`, the loss branch `√(1−T) Π_k` accounts for the photon
/// scattered from the beam.
pub fn absorber_channel(arm: Arm, transmission: f64) -> Result<Channel> {
    if !(0.0..=1.0).contains(&transmission) || transmission.is_nan() {
        return Err(Error::TransmissionOutOfRange(transmission));
    }
    let sqrt_t = transmission.sqrt();
    let surviving = embed_in_arm(arm, &Matrix2::identity().scale(sqrt_t));
    let loss = if transmission < 1.0 {
        let sqrt_r = (1.0 - transmission).sqrt();
        let mut loss_pol = Matrix2::zeros();
        loss_pol[(0, 0)] = Complex64::new(sqrt_r, 0.0);
        loss_pol[(1, 1)] = Complex64::new(sqrt_r, 0.0);
        // √R Π_k: nonzero only on the absorbing arm.
        let mut this_arm = Matrix2::zeros();
        this_arm[(arm.index(), arm.index())] = Complex64::new(1.0, 0.0);
        Some(kron2(&this_arm, &loss_pol))
    } else {
        None
    };
    Ok(Channel { surviving, loss })
}

/// Polarization rotation by `theta` in one arm, the action of a half-wave
/// plate pair oriented at `theta / 2`:
///
/// ```text
/// U(θ) = ( cos θ  −sin θ )
///        ( sin θ   cos θ )
/// ```
pub fn rotation_channel(arm: Arm, theta: f64) -> Channel {
    let (sin, cos) = theta.sin_cos();
    let u = Matrix2::new(
        Complex64::new(cos, 0.0),
        Complex64::new(-sin, 0.0),
        Complex64::new(sin, 0.0),
        Complex64::new(cos, 0.0),
    );
    Channel::unitary(embed_in_arm(arm, &u))
}

/// Adjustable phase shift: multiplies the amplitudes of one arm by e^{iφ}.
pub fn phase_channel(arm: Arm, phi: f64) -> Channel {
    let factor = Complex64::from_polar(1.0, phi);
    let shifted = Matrix2::from_diagonal_element(factor);
    Channel::unitary(embed_in_arm(arm, &shifted))
}

/// Brewster's angle arctan(n) for an external interface.
pub fn brewster_angle(refractive_index: f64) -> f64 {
    refractive_index.atan()
}

/// s-polarization reflectance of a single air–glass interface:
///
/// ```text
/// R_s = |(cos θᵢ − n cos θₜ) / (cos θᵢ + n cos θₜ)|²,   sin θₜ = sin θᵢ / n
/// ```
pub fn fresnel_s_reflectance(refractive_index: f64, incidence: f64) -> Result<f64> {
    let (cos_i, cos_t) = interface_cosines(refractive_index, incidence)?;
    let r = (cos_i - refractive_index * cos_t) / (cos_i + refractive_index * cos_t);
    Ok(r * r)
}

/// p-polarization reflectance of the same interface. Vanishes at Brewster
/// incidence.
pub fn fresnel_p_reflectance(refractive_index: f64, incidence: f64) -> Result<f64> {
    let (cos_i, cos_t) = interface_cosines(refractive_index, incidence)?;
    let r = (refractive_index * cos_i - cos_t) / (refractive_index * cos_i + cos_t);
    Ok(r * r)
}

fn interface_cosines(refractive_index: f64, incidence: f64) -> Result<(f64, f64)> {
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&incidence) || incidence.is_nan() {
        return Err(Error::InvalidIncidenceAngle(incidence));
    }
    let sin_t = incidence.sin() / refractive_index;
    if sin_t.abs() > 1.0 {
        // Unreachable for external incidence (n > 1); kept for completeness.
        return Err(Error::TotalInternalReflection {
            incidence_rad: incidence,
        });
    }
    Ok((incidence.cos(), (1.0 - sin_t * sin_t).sqrt()))
}

/// Geometry of the Brewster-slide weak absorber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlideGeometry {
    pub refractive_index: f64,
    /// Tilt of the slide from normal incidence, in radians.
    pub incidence_angle: f64,
    /// Which arm's light the tilt axis exposes to s-polarized reflection.
    /// `None` models the slide at normal incidence straddling neither arm.
    pub filtered_arm: Option<Arm>,
    /// Model both glass–air interfaces of the slide instead of one. A real
    /// 1-mm slide has two surfaces that each reflect s-polarization, but the
    /// single-interface reflectance matches the observed intensity drop, so
    /// this is off by default.
    pub double_interface: bool,
}

impl SlideGeometry {
    pub fn new(refractive_index: f64, incidence_angle: f64, filtered_arm: Option<Arm>) -> Result<Self> {
        if refractive_index <= 1.0 || refractive_index.is_nan() {
            return Err(Error::InvalidRefractiveIndex(refractive_index));
        }
        if !(0.0..std::f64::consts::FRAC_PI_2).contains(&incidence_angle) {
            return Err(Error::InvalidIncidenceAngle(incidence_angle));
        }
        Ok(Self {
            refractive_index,
            incidence_angle,
            filtered_arm,
            double_interface: false,
        })
    }

    /// The default glass slide tilted to Brewster's angle.
    pub fn brewster(filtered_arm: Option<Arm>) -> Self {
        Self {
            refractive_index: DEFAULT_REFRACTIVE_INDEX,
            incidence_angle: brewster_angle(DEFAULT_REFRACTIVE_INDEX),
            filtered_arm,
            double_interface: false,
        }
    }

    pub fn with_double_interface(mut self) -> Self {
        self.double_interface = true;
        self
    }

    /// Effective transmission of the filtered arm.
    pub fn transmission(&self) -> Result<f64> {
        let r = fresnel_s_reflectance(self.refractive_index, self.incidence_angle)?;
        let t = 1.0 - r;
        Ok(if self.double_interface { t * t } else { t })
    }
}

impl Default for SlideGeometry {
    fn default() -> Self {
        Self::brewster(Some(Arm::Two))
    }
}

/// The Brewster-slide absorber as a channel: amplitude damping of the
/// designated arm with T = 1 − R_s. With no filtered arm the slide acts as
/// the identity (the reflected fraction leaves neither tagged beam).
pub fn brewster_filter_channel(geometry: &SlideGeometry) -> Result<Channel> {
    match geometry.filtered_arm {
        None => Ok(Channel::identity()),
        Some(arm) => absorber_channel(arm, geometry.transmission()?),
    }
}

/// Projects onto the postselected state (|1⟩ + |2⟩)|H⟩/√2 — the horizontally
/// polarized component at output port 1 — returning the projected state and
/// the detection probability |⟨φ|ψ⟩|².
pub fn postselect_h_port1(state: &PolPathState) -> (PolPathState, f64) {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut post = nalgebra::Vector4::zeros();
    post[crate::state::basis_index(Arm::One, Polarization::Horizontal)] =
        Complex64::new(inv_sqrt2, 0.0);
    post[crate::state::basis_index(Arm::Two, Polarization::Horizontal)] =
        Complex64::new(inv_sqrt2, 0.0);
    let post_state = PolPathState::from_vector_unchecked(post);
    let overlap = inner_product(&post_state, state);
    let projected =
        PolPathState::from_vector_unchecked(post_state.amplitudes().map(|c| c * overlap));
    (projected, overlap.norm_sqr())
}

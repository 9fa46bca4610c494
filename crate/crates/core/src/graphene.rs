//! Dirac-model polarization tensor of undoped, gapless graphene.
//!
//! Two forms are provided:
//!
//! * the exact thermal tensor at zero Matsubara frequency, which depends on the
//!   dimensionless temperature τ through a one-dimensional integral, and
//! * the zero-temperature closed form, used at every nonzero Matsubara
//!   frequency and for the continuous-frequency energy at T = 0.
//!
//! All components are dimensionless (scaled by 2a/ħ).

use crate::error::{Error, Result};
use crate::quad::Adaptive;
use crate::units::Constants;
use std::f64::consts::{FRAC_PI_2, PI};

/// Relative accuracy of the x-integrals in the thermal tensor.
const THERMAL_REL_TOL: f64 = 1e-10;

/// The two tensor combinations that enter the reflection coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorPair {
    /// Π̃₀₀
    pub pi00: f64,
    /// Π̃_tr − y²/(y²−ζ²)·Π̃₀₀, the combination in the TE coefficient.
    pub pi_tr_minus_weighted_pi00: f64,
}

impl TensorPair {
    pub const ZERO: TensorPair = TensorPair { pi00: 0.0, pi_tr_minus_weighted_pi00: 0.0 };
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrapheneSheet {
    fermi_velocity_ratio: f64,
    fine_structure: f64,
    present: bool,
}

impl GrapheneSheet {
    /// A graphene sheet with the Fermi velocity and fine-structure constant of `c`.
    pub fn new(c: &Constants) -> Self {
        Self { fermi_velocity_ratio: c.fermi_velocity_ratio, fine_structure: c.fine_structure, present: true }
    }

    /// No coating: every tensor component vanishes.
    pub fn absent() -> Self {
        let c = Constants::default();
        Self { present: false, ..Self::new(&c) }
    }

    pub fn with_fermi_velocity_ratio(mut self, ratio: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::domain(format!("Fermi velocity ratio must lie in (0, 1), got {ratio}")));
        }
        self.fermi_velocity_ratio = ratio;
        Ok(self)
    }

    pub fn is_present(&self) -> bool {
        self.present
    }

    pub fn fermi_velocity_ratio(&self) -> f64 {
        self.fermi_velocity_ratio
    }

    pub fn fine_structure(&self) -> f64 {
        self.fine_structure
    }

    fn check_thermal_args(y: f64, tau: f64) -> Result<()> {
        if !(y > 0.0 && y.is_finite()) {
            return Err(Error::domain(format!("y must be positive, got {y}")));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::domain(format!("tau must be positive, got {tau}")));
        }
        Ok(())
    }

    /// Π̃₀₀(0, y) at temperature τ:
    /// (8ατ/(π ṽ_F²)) ∫₀¹ dx ln(2 cosh(πθ/τ)), θ = ṽ_F y √(x(1−x)).
    pub fn pi00_thermal_zero_freq(&self, y: f64, tau: f64) -> Result<f64> {
        Self::check_thermal_args(y, tau)?;
        if !self.present {
            return Ok(0.0);
        }
        let v = self.fermi_velocity_ratio;
        // x = (1 + sin u)/2 makes √(x(1−x)) = cos(u)/2; the integrand is even in u.
        let scale = PI * v * y / (2.0 * tau);
        let integral = Adaptive::new(THERMAL_REL_TOL)
            .integrate(|u: f64| ln_two_cosh(scale * u.cos()) * u.cos(), &[0.0, FRAC_PI_2])?;
        Ok(8.0 * self.fine_structure * tau / (PI * v * v) * integral.value)
    }

    /// Π̃_tr(0, y) − Π̃₀₀(0, y) at temperature τ:
    /// 8α ṽ_F² y² ∫₀¹ dx x(1−x) tanh(πθ/τ)/θ.
    pub fn pi_tr_minus_pi00_thermal_zero_freq(&self, y: f64, tau: f64) -> Result<f64> {
        Self::check_thermal_args(y, tau)?;
        if !self.present {
            return Ok(0.0);
        }
        let v = self.fermi_velocity_ratio;
        let scale = PI * v * y / (2.0 * tau);
        let integral = Adaptive::new(THERMAL_REL_TOL)
            .integrate(|u: f64| u.cos().powi(3) * tanhc(scale * u.cos()), &[0.0, FRAC_PI_2])?;
        Ok(2.0 * self.fine_structure * v * v * y * y * (PI / tau) * integral.value)
    }

    /// Zero-temperature tensor at a Matsubara frequency ζ_l > 0, y ≥ ζ_l.
    pub fn tensor_at_nonzero_matsubara(&self, zeta: f64, y: f64) -> Result<TensorPair> {
        if !(zeta > 0.0) {
            return Err(Error::domain(format!("Matsubara frequency must be positive, got {zeta}")));
        }
        self.zero_temperature_tensor(zeta, y)
    }

    /// Zero-temperature tensor at continuous ζ ≥ 0, y ≥ ζ:
    /// Π̃₀₀ = πα(y² − ζ²)/f and Π̃_tr − y²Π̃₀₀/(y² − ζ²) = παf,
    /// with f = √(ṽ_F² y² + (1 − ṽ_F²) ζ²).
    pub fn zero_temperature_tensor(&self, zeta: f64, y: f64) -> Result<TensorPair> {
        if !(zeta >= 0.0 && zeta.is_finite()) {
            return Err(Error::domain(format!("frequency must be non-negative, got {zeta}")));
        }
        if !(y >= zeta && y > 0.0 && y.is_finite()) {
            return Err(Error::domain(format!("need y >= zeta and y > 0, got y = {y}, zeta = {zeta}")));
        }
        if !self.present {
            return Ok(TensorPair::ZERO);
        }
        let f = self.f(zeta, y);
        let pa = PI * self.fine_structure;
        Ok(TensorPair { pi00: pa * (y * y - zeta * zeta) / f, pi_tr_minus_weighted_pi00: pa * f })
    }

    /// y·Π̃₀₀/(y² − ζ²) of the zero-temperature tensor, = παy/f. Finite at y = ζ.
    pub fn reduced_pi00(&self, zeta: f64, y: f64) -> f64 {
        if !self.present {
            return 0.0;
        }
        PI * self.fine_structure * y / self.f(zeta, y)
    }

    fn f(&self, zeta: f64, y: f64) -> f64 {
        let v2 = self.fermi_velocity_ratio * self.fermi_velocity_ratio;
        (v2 * y * y + (1.0 - v2) * zeta * zeta).sqrt()
    }
}

/// ln(2 cosh z) without overflow.
fn ln_two_cosh(z: f64) -> f64 {
    let z = z.abs();
    z + (-2.0 * z).exp().ln_1p()
}

/// tanh(z)/z, continuous at z = 0.
fn tanhc(z: f64) -> f64 {
    if z.abs() < 1e-4 {
        1.0 - z * z / 3.0
    } else {
        z.tanh() / z
    }
}

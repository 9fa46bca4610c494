//! TM and TE reflection coefficients of a plate, optionally coated with graphene,
//! at imaginary frequencies.
//!
//! The coefficient functions take the permittivity and tensor values already
//! evaluated, so the engine can compute ε_l once per Matsubara frequency and
//! reuse it across the whole y-grid.

use crate::error::{Error, Result};
use crate::graphene::{GrapheneSheet, TensorPair};
use crate::materials::{PermittivityModel, StaticPermittivity};
use crate::units::Constants;

/// A half-space plate with an optional graphene sheet on top.
#[derive(Debug, Clone, PartialEq)]
pub struct Surface {
    plate: PermittivityModel,
    coating: GrapheneSheet,
}

impl Surface {
    pub fn new(plate: PermittivityModel, coating: GrapheneSheet) -> Self {
        Self { plate, coating }
    }

    pub fn bare(plate: PermittivityModel) -> Self {
        Self::new(plate, GrapheneSheet::absent())
    }

    pub fn coated(plate: PermittivityModel, c: &Constants) -> Self {
        Self::new(plate, GrapheneSheet::new(c))
    }

    pub fn plate(&self) -> &PermittivityModel {
        &self.plate
    }

    pub fn coating(&self) -> &GrapheneSheet {
        &self.coating
    }

    pub fn is_coated(&self) -> bool {
        self.coating.is_present()
    }

    /// R_TM(0, y) with the thermal polarization tensor at temperature τ.
    pub fn r_tm_zero_freq(&self, y: f64, tau: f64) -> Result<f64> {
        if !(y > 0.0) {
            return Err(Error::domain(format!("y must be positive, got {y}")));
        }
        let eps0 = self.plate.static_permittivity();
        if eps0.is_infinite() {
            return Ok(1.0);
        }
        let pi00 = if self.is_coated() { self.coating.pi00_thermal_zero_freq(y, tau)? } else { 0.0 };
        Ok(r_tm_zero_freq(eps0, y, pi00))
    }

    /// R_TE(0, y) with the thermal tensor. It never contributes to observables
    /// (it is multiplied by ζ₀² = 0) and is provided for diagnostics.
    pub fn r_te_zero_freq(&self, y: f64, tau: f64) -> Result<f64> {
        if !(y > 0.0) {
            return Err(Error::domain(format!("y must be positive, got {y}")));
        }
        if !self.is_coated() {
            return Ok(0.0);
        }
        let q0 = self.coating.pi_tr_minus_pi00_thermal_zero_freq(y, tau)?;
        Ok(r_te_zero_freq(y, q0))
    }
}

/// k = √(y² + (ε − 1)ζ²).
pub fn k_parameter(eps: f64, zeta: f64, y: f64) -> f64 {
    (y * y + (eps - 1.0) * zeta * zeta).sqrt()
}

fn check_nonzero_args(eps: f64, zeta: f64, y: f64) -> Result<()> {
    if !(eps >= 1.0) {
        return Err(Error::domain(format!("permittivity must be >= 1, got {eps}")));
    }
    if !(zeta >= 0.0 && zeta.is_finite()) {
        return Err(Error::domain(format!("frequency must be non-negative, got {zeta}")));
    }
    if !(y > zeta && y.is_finite()) {
        return Err(Error::domain(format!("need y > zeta, got y = {y}, zeta = {zeta}")));
    }
    Ok(())
}

/// R_TM(iζ, y) = [εy + k(yΠ̃₀₀/(y²−ζ²) − 1)] / [εy + k(yΠ̃₀₀/(y²−ζ²) + 1)].
pub fn r_tm(eps: f64, zeta: f64, y: f64, tensor: &TensorPair) -> Result<f64> {
    check_nonzero_args(eps, zeta, y)?;
    if eps.is_infinite() {
        return Ok(1.0);
    }
    let k = k_parameter(eps, zeta, y);
    let reduced = y * tensor.pi00 / (y * y - zeta * zeta);
    Ok((eps * y + k * (reduced - 1.0)) / (eps * y + k * (reduced + 1.0)))
}

/// R_TE(iζ, y) = [y − k − Q] / [y + k + Q], Q = Π̃_tr − y²Π̃₀₀/(y²−ζ²).
pub fn r_te(eps: f64, zeta: f64, y: f64, tensor: &TensorPair) -> Result<f64> {
    check_nonzero_args(eps, zeta, y)?;
    if eps.is_infinite() {
        return Ok(-1.0);
    }
    let k = k_parameter(eps, zeta, y);
    let q = tensor.pi_tr_minus_weighted_pi00;
    Ok((y - k - q) / (y + k + q))
}

/// R_TM(0, y) = (ε₀y − y + Π̃₀₀)/(ε₀y + y + Π̃₀₀); one for metals.
pub fn r_tm_zero_freq(eps0: StaticPermittivity, y: f64, pi00: f64) -> f64 {
    match eps0 {
        StaticPermittivity::Infinite => 1.0,
        StaticPermittivity::Finite(e) => (e * y - y + pi00) / (e * y + y + pi00),
    }
}

/// R_TE(0, y) = −Q₀/(2y + Q₀) with Q₀ = Π̃_tr(0,y) − Π̃₀₀(0,y).
pub fn r_te_zero_freq(y: f64, q0: f64) -> f64 {
    -q0 / (2.0 * y + q0)
}

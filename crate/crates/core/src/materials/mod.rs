//! Dielectric permittivity of the plate at imaginary frequencies ε(iξ).

mod database;
mod kramers_kronig;
mod tabulated;

pub use database::{builtin_material, builtin_material_names, lookup, parse_database, MaterialRecord};
pub use kramers_kronig::{kramers_kronig, kramers_kronig_imaginary, LowFrequencyExtrapolation, OpticalDataTable};
pub use tabulated::{ImaginaryAxisTable, LowTail};

use crate::error::{Error, Result};

/// One Lorentz oscillator term C/(1 + ξ²/ω² + γξ/ω²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillator {
    pub strength: f64,
    /// eV
    pub resonance: f64,
    /// eV
    pub damping: f64,
}

impl Oscillator {
    fn validate(&self) -> Result<()> {
        if !(self.strength.is_finite() && self.strength > 0.0) {
            return Err(Error::InvalidData(format!("oscillator strength must be positive, got {}", self.strength)));
        }
        if !(self.resonance.is_finite() && self.resonance > 0.0) {
            return Err(Error::InvalidData(format!("oscillator resonance must be positive, got {}", self.resonance)));
        }
        if !(self.damping.is_finite() && self.damping >= 0.0) {
            return Err(Error::InvalidData(format!("oscillator damping must be non-negative, got {}", self.damping)));
        }
        Ok(())
    }

    fn at(&self, xi: f64) -> f64 {
        let w2 = self.resonance * self.resonance;
        self.strength / (1.0 + (xi * xi + self.damping * xi) / w2)
    }
}

/// ε₀ = ε(0): finite for dielectrics, infinite for metals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StaticPermittivity {
    Finite(f64),
    Infinite,
}

impl StaticPermittivity {
    pub fn is_infinite(&self) -> bool {
        matches!(self, StaticPermittivity::Infinite)
    }

    /// Fresnel factor (ε₀−1)/(ε₀+1); one for metals.
    pub fn fresnel_factor(&self) -> f64 {
        match *self {
            StaticPermittivity::Finite(e) => (e - 1.0) / (e + 1.0),
            StaticPermittivity::Infinite => 1.0,
        }
    }

    pub fn as_f64(&self) -> f64 {
        match *self {
            StaticPermittivity::Finite(e) => e,
            StaticPermittivity::Infinite => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PermittivityModel {
    DrudeMetal { plasma_frequency: f64, relaxation: f64 },
    PlasmaMetal { plasma_frequency: f64 },
    OscillatorDielectric(Vec<Oscillator>),
    TabulatedImaginary(ImaginaryAxisTable),
    PerfectConductor,
    Vacuum,
}

impl PermittivityModel {
    pub fn drude(plasma_frequency: f64, relaxation: f64) -> Result<Self> {
        if !(plasma_frequency > 0.0 && plasma_frequency.is_finite() && relaxation > 0.0 && relaxation.is_finite()) {
            return Err(Error::InvalidData("Drude parameters must be positive".into()));
        }
        Ok(Self::DrudeMetal { plasma_frequency, relaxation })
    }

    pub fn plasma(plasma_frequency: f64) -> Result<Self> {
        if !(plasma_frequency > 0.0 && plasma_frequency.is_finite()) {
            return Err(Error::InvalidData("plasma frequency must be positive".into()));
        }
        Ok(Self::PlasmaMetal { plasma_frequency })
    }

    pub fn oscillators(terms: Vec<Oscillator>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidData("oscillator model needs at least one term".into()));
        }
        for t in &terms {
            t.validate()?;
        }
        Ok(Self::OscillatorDielectric(terms))
    }

    pub fn is_metal(&self) -> bool {
        self.static_permittivity().is_infinite()
    }

    /// ε(iξ) for ξ in eV.
    pub fn permittivity_at(&self, xi: f64) -> Result<f64> {
        if !(xi >= 0.0) || xi.is_infinite() {
            return Err(Error::domain(format!("imaginary frequency must be finite and non-negative, got {xi}")));
        }
        match self {
            Self::DrudeMetal { plasma_frequency, relaxation } => {
                if xi == 0.0 {
                    return Err(Error::domain("metal permittivity diverges at zero frequency"));
                }
                Ok(1.0 + plasma_frequency * plasma_frequency / (xi * (xi + relaxation)))
            }
            Self::PlasmaMetal { plasma_frequency } => {
                if xi == 0.0 {
                    return Err(Error::domain("metal permittivity diverges at zero frequency"));
                }
                Ok(1.0 + (plasma_frequency / xi).powi(2))
            }
            Self::OscillatorDielectric(terms) => Ok(1.0 + terms.iter().map(|t| t.at(xi)).sum::<f64>()),
            Self::TabulatedImaginary(table) => table.evaluate(xi),
            Self::PerfectConductor => Ok(f64::INFINITY),
            Self::Vacuum => Ok(1.0),
        }
    }

    pub fn static_permittivity(&self) -> StaticPermittivity {
        match self {
            Self::DrudeMetal { .. } | Self::PlasmaMetal { .. } | Self::PerfectConductor => StaticPermittivity::Infinite,
            Self::OscillatorDielectric(terms) => {
                StaticPermittivity::Finite(1.0 + terms.iter().map(|t| t.strength).sum::<f64>())
            }
            Self::TabulatedImaginary(table) => table.static_permittivity(),
            Self::Vacuum => StaticPermittivity::Finite(1.0),
        }
    }
}

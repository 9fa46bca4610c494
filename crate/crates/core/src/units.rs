//! Physical constants and the dimensionless variables of the Lifshitz formula.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Joules per electronvolt.
pub const JOULE_PER_EV: f64 = 1.602_176_634e-19;

/// Metres per nanometre.
pub const METRE_PER_NM: f64 = 1e-9;

/// Default Fermi velocity of graphene, m/s.
pub const FERMI_VELOCITY: f64 = 9.0e5;

/// The fixed constants every computation depends on.
///
/// The defaults are CODATA values. They can be overridden for reproducibility
/// experiments; all other modules read them from here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    /// ħc in eV·nm.
    pub hbar_c: f64,
    /// k_B in eV/K.
    pub boltzmann: f64,
    /// Fine-structure constant e²/(ħc).
    pub fine_structure: f64,
    /// v_F/c for graphene.
    pub fermi_velocity_ratio: f64,
    /// Volume of one atomic unit of polarizability, m³.
    pub polarizability_au: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self {
            hbar_c: 197.327,
            boltzmann: 8.617_333e-5,
            fine_structure: 1.0 / 137.035_999,
            fermi_velocity_ratio: FERMI_VELOCITY / SPEED_OF_LIGHT,
            polarizability_au: 1.482e-31,
        }
    }
}

impl Constants {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !(positive(self.hbar_c) && positive(self.boltzmann) && positive(self.polarizability_au)) {
            return Err(Error::domain("constants must be finite and positive"));
        }
        if !(positive(self.fine_structure) && self.fine_structure < 1.0) {
            return Err(Error::domain("fine-structure constant must lie in (0, 1)"));
        }
        if !(positive(self.fermi_velocity_ratio) && self.fermi_velocity_ratio < 1.0) {
            return Err(Error::domain("fermi velocity ratio must lie in (0, 1)"));
        }
        Ok(())
    }
}

/// Atom-plate separation and temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    separation_nm: f64,
    temperature: f64,
}

impl Geometry {
    /// Separation in nanometres, temperature in kelvin.
    pub fn new(separation_nm: f64, temperature: f64) -> Result<Self> {
        if !(separation_nm.is_finite() && separation_nm > 0.0) {
            return Err(Error::domain(format!("separation must be positive, got {separation_nm} nm")));
        }
        if !(temperature.is_finite() && temperature >= 0.0) {
            return Err(Error::domain(format!("temperature must be non-negative, got {temperature} K")));
        }
        Ok(Self { separation_nm, temperature })
    }

    pub fn from_metres(separation_m: f64, temperature: f64) -> Result<Self> {
        Self::new(separation_m / METRE_PER_NM, temperature)
    }

    pub fn separation_nm(&self) -> f64 {
        self.separation_nm
    }

    pub fn separation_m(&self) -> f64 {
        self.separation_nm * METRE_PER_NM
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn with_separation(&self, separation_nm: f64) -> Result<Self> {
        Self::new(separation_nm, self.temperature)
    }

    /// ħω_c = ħc/(2a) in eV: converts dimensionless ζ to ξ in eV.
    pub fn characteristic_energy(&self, c: &Constants) -> f64 {
        c.hbar_c / (2.0 * self.separation_nm)
    }

    /// k_B T in eV.
    pub fn thermal_energy(&self, c: &Constants) -> f64 {
        c.boltzmann * self.temperature
    }

    /// τ = 4π a k_B T/(ħc), the spacing of the dimensionless Matsubara frequencies.
    pub fn tau(&self, c: &Constants) -> f64 {
        4.0 * PI * self.separation_nm * self.thermal_energy(c) / c.hbar_c
    }

    /// ζ_l = l τ. Undefined at T = 0, where the Matsubara sum becomes an integral.
    pub fn matsubara_zeta(&self, c: &Constants, l: usize) -> Result<f64> {
        if self.temperature == 0.0 {
            return Err(Error::domain("Matsubara frequencies are undefined at T = 0; use the zero-temperature energy"));
        }
        Ok(l as f64 * self.tau(c))
    }

    /// Converts a dimensionless frequency to ξ in eV.
    pub fn zeta_to_ev(&self, c: &Constants, zeta: f64) -> f64 {
        zeta * self.characteristic_energy(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_constants_are_in_range() {
        let c = Constants::default();
        c.validate().unwrap();
        assert!((7.29e-3..=7.30e-3).contains(&c.fine_structure));
        assert!((c.fermi_velocity_ratio - 3.002e-3).abs() < 1e-6);
        assert_eq!(c.polarizability_au, 1.482e-31);
    }

    #[test]
    fn tau_at_100nm_room_temperature() {
        let c = Constants::default();
        let g = Geometry::new(100.0, 300.0).unwrap();
        assert!((g.tau(&c) - 0.164).abs() < 1e-3);
        assert_eq!(g.matsubara_zeta(&c, 1).unwrap(), g.tau(&c));
        assert_eq!(g.matsubara_zeta(&c, 0).unwrap(), 0.0);
        let g2 = Geometry::new(200.0, 300.0).unwrap();
        assert!((g2.tau(&c) - 0.329).abs() < 1e-3);
    }

    #[test]
    fn third_matsubara_frequency_at_one_micron() {
        let c = Constants::default();
        let g = Geometry::new(1000.0, 300.0).unwrap();
        let expected = 3.0 * 4.0 * PI * 1000.0 * (8.617_333e-5 * 300.0) / 197.327;
        let z = g.matsubara_zeta(&c, 3).unwrap();
        assert!((z - expected).abs() < 1e-12 * expected);
        assert!((z - 4.938).abs() < 1e-3);
    }

    #[test]
    fn zero_temperature() {
        let c = Constants::default();
        let g = Geometry::new(100.0, 0.0).unwrap();
        assert_eq!(g.tau(&c), 0.0);
        assert!(matches!(g.matsubara_zeta(&c, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn rejects_bad_geometry() {
        assert!(Geometry::new(0.0, 300.0).is_err());
        assert!(Geometry::new(-1.0, 300.0).is_err());
        assert!(Geometry::new(100.0, -1.0).is_err());
        assert!(Geometry::new(f64::NAN, 300.0).is_err());
    }

    #[test]
    fn zeta_is_linear_in_index() {
        let c = Constants::default();
        let g = Geometry::new(345.6, 291.0).unwrap();
        let tau = g.tau(&c);
        let mut prev = -1.0;
        for l in 0..200 {
            let z = g.matsubara_zeta(&c, l).unwrap();
            assert_eq!(z, l as f64 * tau);
            assert!(z > prev);
            prev = z;
        }
    }
}

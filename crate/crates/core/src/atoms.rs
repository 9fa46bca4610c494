//! Ground-state atoms in the single-oscillator approximation.

use crate::error::{Error, Result};

/// Atom described by α(iξ) = α(0)/(1 + ξ²/ω₀²).
#[derive(Debug, Clone, PartialEq)]
pub struct AtomModel {
    name: String,
    /// α(0) in atomic units.
    static_polarizability: f64,
    /// ħω₀ in eV.
    characteristic_frequency: f64,
}

/// (name, α(0) in a.u., ħω₀ in eV)
const CATALOG: [(&str, f64, f64); 4] =
    [("Rb", 319.9, 5.46), ("Na", 162.68, 2.14), ("Cs", 403.6, 1.55), ("He*", 315.638, 1.18)];

impl AtomModel {
    pub fn new(name: impl Into<String>, static_polarizability: f64, characteristic_frequency: f64) -> Result<Self> {
        if !(static_polarizability.is_finite() && static_polarizability > 0.0) {
            return Err(Error::domain("static polarizability must be positive"));
        }
        if !(characteristic_frequency.is_finite() && characteristic_frequency > 0.0) {
            return Err(Error::domain("characteristic frequency must be positive"));
        }
        Ok(Self { name: name.into(), static_polarizability, characteristic_frequency })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// α(0) in atomic units.
    pub fn static_polarizability(&self) -> f64 {
        self.static_polarizability
    }

    /// ħω₀ in eV.
    pub fn characteristic_frequency(&self) -> f64 {
        self.characteristic_frequency
    }

    /// α(iξ) in atomic units for ξ in eV.
    pub fn polarizability_at(&self, xi: f64) -> f64 {
        self.static_polarizability * self.relative_polarizability(xi)
    }

    /// α(iξ)/α(0).
    pub fn relative_polarizability(&self, xi: f64) -> f64 {
        let r = xi / self.characteristic_frequency;
        1.0 / (1.0 + r * r)
    }
}

/// Names accepted by [`builtin_atom`].
pub fn builtin_atom_names() -> Vec<&'static str> {
    CATALOG.iter().map(|(n, _, _)| *n).collect()
}

/// Looks up one of the built-in atoms. `He` is accepted for metastable `He*`;
/// matching ignores ASCII case.
pub fn builtin_atom(name: &str) -> Result<AtomModel> {
    let key = name.trim();
    let key = if key.eq_ignore_ascii_case("he") { "He*" } else { key };
    CATALOG
        .iter()
        .find(|(n, _, _)| n.eq_ignore_ascii_case(key))
        .map(|&(n, a0, w0)| AtomModel { name: n.to_string(), static_polarizability: a0, characteristic_frequency: w0 })
        .ok_or_else(|| Error::UnknownAtom { name: name.to_string(), available: builtin_atom_names().join(", ") })
}

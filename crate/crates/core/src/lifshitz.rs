//! Matsubara summation and y-quadrature for the atom-plate free energy, force
//! and zero-temperature energy.
//!
//! In dimensionless variables the free energy is
//!
//! ```text
//! F(a,T) = −k_BT/(8a³) Σ'_l α(iξ_l) ∫_{ζ_l}^∞ dy e^{−y} {2y²R_TM − ζ_l²[R_TM + R_TE]}
//! ```
//!
//! and the force carries an extra factor y in the integrand and 1/a⁴ in front.
//! The l = 0 term uses the thermal graphene tensor; every l ≥ 1 uses the
//! zero-temperature tensor evaluated at ζ_l.

use crate::atoms::AtomModel;
use crate::error::{Error, Result};
use crate::quad::Adaptive;
use crate::reflection::{r_te, r_tm, Surface};
use crate::units::{Constants, Geometry, JOULE_PER_EV, METRE_PER_NM};
use rayon::prelude::*;
use std::cell::Cell;
use std::f64::consts::PI;

/// The e^{−y} weight makes everything beyond y − ζ = 40 negligible (< 1e-13 relative).
const Y_CUTOFF: f64 = 40.0;
const Y_BREAKS: [f64; 4] = [2.0, 8.0, 20.0, Y_CUTOFF];
/// Lower end of the y-interval is opened to ζ(1 + 1e-12).
const LIGHT_CONE_OFFSET: f64 = 1e-12;
const ZETA_CUTOFF: f64 = 50.0;
const ZETA_BREAKS: [f64; 7] = [0.0, 0.05, 0.5, 2.0, 6.0, 15.0, ZETA_CUTOFF];
/// Matsubara terms evaluated per parallel batch.
const BATCH: usize = 32;
/// Consecutive negligible terms required before the sum is truncated.
const NEGLIGIBLE_RUN: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComputeSettings {
    /// Relative tolerance of each y-integral.
    pub quad_rel_tol: f64,
    /// Truncation threshold for the Matsubara sum, relative to the partial sum.
    pub sum_rel_tol: f64,
    pub max_matsubara_terms: usize,
    /// Relative tolerance of the frequency integral at T = 0.
    pub zero_t_freq_tol: f64,
}

impl Default for ComputeSettings {
    fn default() -> Self {
        Self { quad_rel_tol: 1e-8, sum_rel_tol: 1e-9, max_matsubara_terms: 100_000, zero_t_freq_tol: 1e-8 }
    }
}

impl ComputeSettings {
    pub fn validate(&self) -> Result<()> {
        let in_unit = |v: f64| v > 0.0 && v < 1.0;
        if !(in_unit(self.quad_rel_tol) && in_unit(self.sum_rel_tol) && in_unit(self.zero_t_freq_tol)) {
            return Err(Error::domain("tolerances must lie in (0, 1)"));
        }
        if self.max_matsubara_terms < 10 {
            return Err(Error::domain("max_matsubara_terms must be at least 10"));
        }
        Ok(())
    }

    /// Bound on [`CpResult::est_error`] for a converged finite-temperature result.
    pub fn target_error(&self) -> f64 {
        self.quad_rel_tol + self.sum_rel_tol
    }
}

/// Free energy or force: selects the y-weight W(y) = 1 or y.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TermKind {
    Energy,
    Force,
}

impl TermKind {
    fn weight(self, y: f64) -> f64 {
        match self {
            TermKind::Energy => 1.0,
            TermKind::Force => y,
        }
    }
}

/// Physical quantity computed for one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    FreeEnergy,
    Force,
    /// Casimir-Polder energy at T = 0.
    ZeroTemperatureEnergy,
}

/// A converged free energy, force or energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpResult {
    /// Joules for energies, newtons for forces.
    pub value: f64,
    /// value·8a³/(k_BT α(0)) for the free energy, value·8a⁴/(k_BT α(0)) for the
    /// force and value·32πa⁴/(ħc α(0)) for the zero-temperature energy.
    pub dimensionless_value: f64,
    /// Matsubara terms summed, or frequency-integrand evaluations at T = 0.
    pub terms_used: usize,
    /// Estimated relative error.
    pub est_error: f64,
}

/// One dimensionless Matsubara term, normalised by α(0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermValue {
    pub value: f64,
    pub abs_error: f64,
}

/// Per-point outcome of a separation sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub separation_nm: f64,
    pub ratio: Result<f64>,
}

/// Evaluates the Lifshitz formula with fixed constants and tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Engine {
    constants: Constants,
    settings: ComputeSettings,
}

impl Engine {
    pub fn new(constants: Constants, settings: ComputeSettings) -> Result<Self> {
        constants.validate()?;
        settings.validate()?;
        Ok(Self { constants, settings })
    }

    pub fn constants(&self) -> &Constants {
        &self.constants
    }

    pub fn settings(&self) -> &ComputeSettings {
        &self.settings
    }

    fn y_quadrature(&self) -> Adaptive {
        Adaptive::new(self.settings.quad_rel_tol)
    }

    /// The l-th term α(iξ_l)/α(0) ∫ dy e^{−y} W(y){…}, including the factor ½
    /// of the primed sum at l = 0.
    pub fn matsubara_term(
        &self,
        surface: &Surface,
        atom: &AtomModel,
        geometry: &Geometry,
        l: usize,
        kind: TermKind,
    ) -> Result<TermValue> {
        let zeta = geometry.matsubara_zeta(&self.constants, l)?;
        if l == 0 {
            return self.zero_frequency_term(surface, geometry.tau(&self.constants), kind);
        }
        self.frequency_term(surface, atom, geometry, zeta, kind, self.y_quadrature())
    }

    fn zero_frequency_term(&self, surface: &Surface, tau: f64, kind: TermKind) -> Result<TermValue> {
        let failure: Cell<Option<Error>> = Cell::new(None);
        let integrand = |y: f64| {
            let r = surface.r_tm_zero_freq(y, tau).unwrap_or_else(|e| {
                failure.set(Some(e));
                0.0
            });
            (-y).exp() * kind.weight(y) * 2.0 * y * y * r
        };
        let mut points = vec![0.0];
        points.extend_from_slice(&Y_BREAKS);
        let integral = self.y_quadrature().integrate(integrand, &points)?;
        if let Some(e) = failure.take() {
            return Err(e);
        }
        Ok(TermValue { value: 0.5 * integral.value, abs_error: 0.5 * integral.abs_error })
    }

    /// Term at a positive (discrete or continuous) frequency ζ with the
    /// zero-temperature graphene tensor.
    fn frequency_term(
        &self,
        surface: &Surface,
        atom: &AtomModel,
        geometry: &Geometry,
        zeta: f64,
        kind: TermKind,
        quadrature: Adaptive,
    ) -> Result<TermValue> {
        let xi = geometry.zeta_to_ev(&self.constants, zeta);
        let eps = surface.plate().permittivity_at(xi)?;
        let polarizability = atom.relative_polarizability(xi);
        if polarizability == 0.0 {
            return Ok(TermValue { value: 0.0, abs_error: 0.0 });
        }
        let coating = surface.coating();
        let zeta2 = zeta * zeta;
        let failure: Cell<Option<Error>> = Cell::new(None);
        // y = ζ + t; the factor e^{−ζ} is applied outside the integral.
        let integrand = |t: f64| {
            let y = zeta + t;
            let bracket = coating
                .tensor_at_nonzero_matsubara(zeta, y)
                .and_then(|tensor| Ok((r_tm(eps, zeta, y, &tensor)?, r_te(eps, zeta, y, &tensor)?)))
                .map(|(tm, te)| 2.0 * y * y * tm - zeta2 * (tm + te));
            match bracket {
                Ok(b) => (-t).exp() * kind.weight(y) * b,
                Err(e) => {
                    failure.set(Some(e));
                    0.0
                }
            }
        };
        let mut points = vec![zeta * LIGHT_CONE_OFFSET];
        points.extend_from_slice(&Y_BREAKS);
        let integral = quadrature.integrate(integrand, &points)?;
        if let Some(e) = failure.take() {
            return Err(e);
        }
        let scale = polarizability * (-zeta).exp();
        Ok(TermValue { value: scale * integral.value, abs_error: scale * integral.abs_error })
    }

    /// Σ'_l of the Matsubara terms with the truncation rule; returns
    /// (sum, absolute error estimate, terms used).
    fn matsubara_sum(
        &self,
        surface: &Surface,
        atom: &AtomModel,
        geometry: &Geometry,
        kind: TermKind,
    ) -> Result<(f64, f64, usize)> {
        if geometry.temperature() == 0.0 {
            return Err(Error::domain("free energy and force need T > 0; use the zero-temperature energy"));
        }
        let first = self.matsubara_term(surface, atom, geometry, 0, kind)?;
        let mut sum = first.value;
        let mut quad_error = first.abs_error;
        let mut previous: Option<f64> = None;
        let mut negligible_run = 0;
        let mut next = 1;
        let max_terms = self.settings.max_matsubara_terms;
        let tol = self.settings.sum_rel_tol;
        while next < max_terms {
            let end = (next + BATCH).min(max_terms);
            let batch: Vec<Result<TermValue>> =
                (next..end).into_par_iter().map(|l| self.matsubara_term(surface, atom, geometry, l, kind)).collect();
            // Reduction in ascending l keeps the result independent of scheduling.
            for (offset, term) in batch.into_iter().enumerate() {
                let term = term?;
                sum += term.value;
                quad_error += term.abs_error;
                let magnitude = term.value.abs();
                negligible_run = if magnitude <= tol * sum.abs() { negligible_run + 1 } else { 0 };
                let tail = match previous {
                    _ if magnitude == 0.0 => 0.0,
                    // Term ratios creep upward once α(iξ) and ε(iξ) − 1 start
                    // to fall, so the geometric tail is doubled.
                    Some(p) if magnitude < p => {
                        let r = magnitude / p;
                        2.0 * magnitude * r / (1.0 - r)
                    }
                    _ => f64::INFINITY,
                };
                previous = Some(magnitude);
                if negligible_run >= NEGLIGIBLE_RUN && tail <= tol * sum.abs() {
                    return Ok((sum, quad_error + tail, next + offset + 1));
                }
            }
            next = end;
        }
        Err(Error::NonConvergence { terms: max_terms, partial_sum: sum })
    }

    fn prefactor(&self, atom: &AtomModel, geometry: &Geometry) -> f64 {
        let kt = geometry.thermal_energy(&self.constants) * JOULE_PER_EV;
        let alpha0 = atom.static_polarizability() * self.constants.polarizability_au;
        kt * alpha0 / 8.0
    }

    fn finish(&self, sum: f64, abs_error: f64, terms: usize, scale: f64) -> CpResult {
        let est_error = if sum == 0.0 { 0.0 } else { abs_error / sum.abs() };
        CpResult { value: -scale * sum, dimensionless_value: -sum, terms_used: terms, est_error }
    }

    /// Casimir-Polder free energy in joules.
    pub fn free_energy(&self, surface: &Surface, atom: &AtomModel, geometry: &Geometry) -> Result<CpResult> {
        let (sum, err, terms) = self.matsubara_sum(surface, atom, geometry, TermKind::Energy)?;
        let a = geometry.separation_m();
        Ok(self.finish(sum, err, terms, self.prefactor(atom, geometry) / a.powi(3)))
    }

    /// Casimir-Polder force in newtons (negative: attraction).
    pub fn force(&self, surface: &Surface, atom: &AtomModel, geometry: &Geometry) -> Result<CpResult> {
        let (sum, err, terms) = self.matsubara_sum(surface, atom, geometry, TermKind::Force)?;
        let a = geometry.separation_m();
        Ok(self.finish(sum, err, terms, self.prefactor(atom, geometry) / a.powi(4)))
    }

    /// Casimir-Polder energy at T = 0: the Matsubara sum becomes
    /// (ħc/(4πa)) ∫₀^∞ dζ with the zero-temperature tensor at every ζ.
    pub fn energy_zero_temperature(&self, surface: &Surface, atom: &AtomModel, separation_nm: f64) -> Result<CpResult> {
        let geometry = Geometry::new(separation_nm, 0.0)?;
        let inner = Adaptive::new((1e-2 * self.settings.quad_rel_tol.min(self.settings.zero_t_freq_tol)).max(1e-13));
        let failure: Cell<Option<Error>> = Cell::new(None);
        let integrand = |zeta: f64| match self.frequency_term(surface, atom, &geometry, zeta, TermKind::Energy, inner) {
            Ok(t) => t.value,
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        };
        let outer = Adaptive::new(self.settings.zero_t_freq_tol).integrate(integrand, &ZETA_BREAKS)?;
        if let Some(e) = failure.take() {
            return Err(e);
        }
        let hbar_c = self.constants.hbar_c * JOULE_PER_EV * METRE_PER_NM;
        let alpha0 = atom.static_polarizability() * self.constants.polarizability_au;
        let a = geometry.separation_m();
        let scale = hbar_c * alpha0 / (32.0 * PI * a.powi(4));
        let mut result = self.finish(outer.value, outer.abs_error, outer.evaluations, scale);
        result.est_error += inner.rel_tol;
        Ok(result)
    }

    /// Dispatches on `quantity`. The temperature of `geometry` is ignored for
    /// the zero-temperature energy.
    pub fn compute(
        &self,
        surface: &Surface,
        atom: &AtomModel,
        geometry: &Geometry,
        quantity: Quantity,
    ) -> Result<CpResult> {
        match quantity {
            Quantity::FreeEnergy => self.free_energy(surface, atom, geometry),
            Quantity::Force => self.force(surface, atom, geometry),
            Quantity::ZeroTemperatureEnergy => self.energy_zero_temperature(surface, atom, geometry.separation_nm()),
        }
    }

    /// coated/bare ratio of `quantity`.
    pub fn ratio(
        &self,
        coated: &Surface,
        bare: &Surface,
        atom: &AtomModel,
        geometry: &Geometry,
        quantity: Quantity,
    ) -> Result<f64> {
        let num = self.compute(coated, atom, geometry, quantity)?;
        let den = self.compute(bare, atom, geometry, quantity)?;
        if den.value == 0.0 {
            return Err(Error::domain("reference interaction vanishes; ratio undefined"));
        }
        Ok(num.value / den.value)
    }

    /// Element-wise coated/bare ratios over a list of separations (nm). Points
    /// are evaluated concurrently; each carries its own status.
    pub fn ratio_sweep(
        &self,
        coated: &Surface,
        bare: &Surface,
        atom: &AtomModel,
        separations_nm: &[f64],
        temperature: f64,
        quantity: Quantity,
    ) -> Result<Vec<SweepPoint>> {
        if separations_nm.is_empty() {
            return Err(Error::domain("separation list is empty"));
        }
        Ok(separations_nm
            .par_iter()
            .map(|&a| SweepPoint {
                separation_nm: a,
                ratio: Geometry::new(a, temperature).and_then(|g| self.ratio(coated, bare, atom, &g, quantity)),
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::builtin_atom;
    use crate::materials::{builtin_material, PermittivityModel};

    fn engine() -> Engine {
        Engine::default()
    }

    #[test]
    fn settings_validation() {
        assert!(ComputeSettings::default().validate().is_ok());
        let bad = ComputeSettings { quad_rel_tol: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = ComputeSettings { max_matsubara_terms: 5, ..Default::default() };
        assert!(Engine::new(Constants::default(), bad).is_err());
    }

    #[test]
    fn vacuum_plate_terms_vanish() {
        let e = engine();
        let s = Surface::bare(PermittivityModel::Vacuum);
        let rb = builtin_atom("Rb").unwrap();
        let g = Geometry::new(300.0, 300.0).unwrap();
        for l in [0, 1, 7] {
            for kind in [TermKind::Energy, TermKind::Force] {
                assert_eq!(e.matsubara_term(&s, &rb, &g, l, kind).unwrap().value, 0.0);
            }
        }
        let f = e.free_energy(&s, &rb, &g).unwrap();
        assert_eq!(f.value, 0.0);
        assert!(f.terms_used <= 1 + NEGLIGIBLE_RUN);
        assert_eq!(e.energy_zero_temperature(&s, &rb, 300.0).unwrap().value, 0.0);
    }

    #[test]
    fn perfect_conductor_zero_term() {
        let e = engine();
        let s = Surface::bare(PermittivityModel::PerfectConductor);
        let rb = builtin_atom("Rb").unwrap();
        let g = Geometry::new(1000.0, 300.0).unwrap();
        let t = e.matsubara_term(&s, &rb, &g, 0, TermKind::Energy).unwrap();
        assert!((t.value - 2.0).abs() < 1e-10);
        let t = e.matsubara_term(&s, &rb, &g, 0, TermKind::Force).unwrap();
        assert!((t.value - 6.0).abs() < 1e-10);
    }

    #[test]
    fn zero_temperature_rejected_for_matsubara_sum() {
        let e = engine();
        let s = Surface::bare(builtin_material("Au").unwrap());
        let rb = builtin_atom("Rb").unwrap();
        let g = Geometry::new(100.0, 0.0).unwrap();
        assert!(matches!(e.free_energy(&s, &rb, &g), Err(Error::Domain(_))));
    }

    #[test]
    fn non_convergence_reported() {
        let settings = ComputeSettings { max_matsubara_terms: 10, ..Default::default() };
        let e = Engine::new(Constants::default(), settings).unwrap();
        let s = Surface::bare(builtin_material("SiO2").unwrap());
        let rb = builtin_atom("Rb").unwrap();
        let g = Geometry::new(100.0, 300.0).unwrap();
        assert!(matches!(e.free_energy(&s, &rb, &g), Err(Error::NonConvergence { terms: 10, .. })));
    }

    #[test]
    fn result_diagnostics() {
        let e = engine();
        let c = *e.constants();
        let s = Surface::coated(builtin_material("SiO2").unwrap(), &c);
        let rb = builtin_atom("Rb").unwrap();
        let g = Geometry::new(1000.0, 300.0).unwrap();
        let r = e.free_energy(&s, &rb, &g).unwrap();
        assert!(r.value < 0.0 && r.dimensionless_value < 0.0);
        assert!(r.est_error <= e.settings().target_error(), "{}", r.est_error);
        assert!(r.terms_used > 3);
        let a = g.separation_m();
        let kt = c.boltzmann * 300.0 * JOULE_PER_EV;
        let alpha0 = 319.9 * c.polarizability_au;
        assert!((r.value * 8.0 * a.powi(3) / (kt * alpha0) - r.dimensionless_value).abs() < 1e-12);
    }

    #[test]
    fn empty_sweep_rejected() {
        let e = engine();
        let s = Surface::bare(builtin_material("Si").unwrap());
        let rb = builtin_atom("Rb").unwrap();
        assert!(e.ratio_sweep(&s, &s, &rb, &[], 300.0, Quantity::FreeEnergy).is_err());
        let pts = e.ratio_sweep(&s, &s, &rb, &[-1.0, 500.0], 300.0, Quantity::FreeEnergy).unwrap();
        assert!(pts[0].ratio.is_err());
        assert!((pts[1].ratio.clone().unwrap() - 1.0).abs() < 1e-15);
    }
}

//! Classical (high-temperature, large-separation) limits, where only the
//! zero-frequency Matsubara term survives, and their comparison with the full
//! Lifshitz computation.
//!
//! For a coated dielectric the zero-frequency TM coefficient is expanded in the
//! small parameter 1/Π̃₀₀(0), with Π̃₀₀(0) ≈ 8α ln2 τ/(π ṽ_F²) independent of y.
//! All energies are returned in joules and forces in newtons.

use crate::atoms::AtomModel;
use crate::error::{Error, Result};
use crate::lifshitz::{Engine, Quantity};
use crate::materials::StaticPermittivity;
use crate::reflection::Surface;
use crate::units::{Constants, Geometry, JOULE_PER_EV};
use rayon::prelude::*;
use std::f64::consts::{LN_2, PI};

/// Regime parameter πṽ_F y/(2τ) at y = 1 above which the y-independent
/// approximation of Π̃₀₀ is flagged as extrapolated.
pub const REGIME_THRESHOLD: f64 = 0.05;

/// Crossover grid: geometric, 1–20 μm, 50 points per decade.
pub const CROSSOVER_MIN_NM: f64 = 1_000.0;
pub const CROSSOVER_MAX_NM: f64 = 20_000.0;
pub const CROSSOVER_POINTS_PER_DECADE: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pi00Classical {
    pub value: f64,
    /// πṽ_F/(2τ), the largest πθ/τ at y = 1.
    pub regime_parameter: f64,
    pub extrapolated: bool,
}

/// Three-term classical expansion; `total` is their sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalExpansion {
    pub leading: f64,
    pub first_correction: f64,
    pub second_correction: f64,
    pub total: f64,
}

impl ClassicalExpansion {
    fn new(leading: f64, first_correction: f64, second_correction: f64) -> Self {
        Self { leading, first_correction, second_correction, total: leading + first_correction + second_correction }
    }
}

/// Π̃₀₀(0) ≈ 8α ln2 τ/(π ṽ_F²) = 32α ln2 a k_BT c/(ħ v_F²).
pub fn pi00_classical(geometry: &Geometry, c: &Constants) -> Pi00Classical {
    let tau = geometry.tau(c);
    let v = c.fermi_velocity_ratio;
    let value = 8.0 * c.fine_structure * LN_2 * tau / (PI * v * v);
    let regime_parameter = if tau > 0.0 { PI * v / (2.0 * tau) } else { f64::INFINITY };
    Pi00Classical { value, regime_parameter, extrapolated: regime_parameter >= REGIME_THRESHOLD }
}

/// α ln2 a k_BT c/(ħ v_F²) = Π̃₀₀(0)/32: the large parameter of the expansion.
fn expansion_parameter(geometry: &Geometry, c: &Constants) -> Result<f64> {
    if geometry.temperature() == 0.0 {
        return Err(Error::domain("classical limit needs T > 0"));
    }
    let v = c.fermi_velocity_ratio;
    Ok(c.fine_structure * LN_2 * geometry.separation_nm() * geometry.thermal_energy(c) / (c.hbar_c * v * v))
}

/// k_BT α(0) in J·m³.
fn thermal_scale(atom: &AtomModel, geometry: &Geometry, c: &Constants) -> f64 {
    geometry.thermal_energy(c) * JOULE_PER_EV * atom.static_polarizability() * c.polarizability_au
}

/// −k_BTα(0)/(4a³), the classical free energy next to a metal.
fn energy_leading(atom: &AtomModel, geometry: &Geometry, c: &Constants) -> f64 {
    -thermal_scale(atom, geometry, c) / (4.0 * geometry.separation_m().powi(3))
}

/// −3k_BTα(0)/(4a⁴), the classical force next to a metal.
fn force_leading(atom: &AtomModel, geometry: &Geometry, c: &Constants) -> f64 {
    -3.0 * thermal_scale(atom, geometry, c) / (4.0 * geometry.separation_m().powi(4))
}

/// Classical free energy next to a graphene-coated plate. For a metal only the
/// leading term remains.
pub fn classical_free_energy_coated(
    atom: &AtomModel,
    geometry: &Geometry,
    eps0: StaticPermittivity,
    c: &Constants,
) -> Result<ClassicalExpansion> {
    let x = expansion_parameter(geometry, c)?;
    let leading = energy_leading(atom, geometry, c);
    Ok(match eps0 {
        StaticPermittivity::Infinite => ClassicalExpansion::new(leading, 0.0, 0.0),
        StaticPermittivity::Finite(e) => {
            ClassicalExpansion::new(leading, -leading * 3.0 / (16.0 * x), leading * 3.0 * (e + 1.0) / (128.0 * x * x))
        }
    })
}

/// Classical force next to a graphene-coated plate: the negative a-derivative
/// of [`classical_free_energy_coated`], term by term.
pub fn classical_force_coated(
    atom: &AtomModel,
    geometry: &Geometry,
    eps0: StaticPermittivity,
    c: &Constants,
) -> Result<ClassicalExpansion> {
    let x = expansion_parameter(geometry, c)?;
    let leading = force_leading(atom, geometry, c);
    Ok(match eps0 {
        StaticPermittivity::Infinite => ClassicalExpansion::new(leading, 0.0, 0.0),
        StaticPermittivity::Finite(e) => {
            ClassicalExpansion::new(leading, -leading / (4.0 * x), leading * 5.0 * (e + 1.0) / (128.0 * x * x))
        }
    })
}

/// Classical free energy next to an uncoated plate: −k_BTα(0)/(4a³)·(ε₀−1)/(ε₀+1).
pub fn classical_free_energy_bare(
    atom: &AtomModel,
    geometry: &Geometry,
    eps0: StaticPermittivity,
    c: &Constants,
) -> f64 {
    energy_leading(atom, geometry, c) * eps0.fresnel_factor()
}

/// Classical force next to an uncoated plate: −3k_BTα(0)/(4a⁴)·(ε₀−1)/(ε₀+1).
pub fn classical_force_bare(atom: &AtomModel, geometry: &Geometry, eps0: StaticPermittivity, c: &Constants) -> f64 {
    force_leading(atom, geometry, c) * eps0.fresnel_factor()
}

/// The closed-form classical value appropriate for `surface` (coated or bare,
/// dielectric or metal).
pub fn classical_value(
    surface: &Surface,
    atom: &AtomModel,
    geometry: &Geometry,
    quantity: Quantity,
    c: &Constants,
) -> Result<f64> {
    let eps0 = surface.plate().static_permittivity();
    match (quantity, surface.is_coated()) {
        (Quantity::FreeEnergy, true) => Ok(classical_free_energy_coated(atom, geometry, eps0, c)?.total),
        (Quantity::Force, true) => Ok(classical_force_coated(atom, geometry, eps0, c)?.total),
        (Quantity::FreeEnergy, false) => {
            expansion_parameter(geometry, c)?;
            Ok(classical_free_energy_bare(atom, geometry, eps0, c))
        }
        (Quantity::Force, false) => {
            expansion_parameter(geometry, c)?;
            Ok(classical_force_bare(atom, geometry, eps0, c))
        }
        (Quantity::ZeroTemperatureEnergy, _) => Err(Error::domain("no classical limit at T = 0")),
    }
}

/// Outcome of a crossover search.
#[derive(Debug, Clone, PartialEq)]
pub struct Crossover {
    pub separation_nm: f64,
    /// (a in nm, |engine − classical|/|engine|) over the whole grid.
    pub profile: Vec<(f64, f64)>,
}

/// The crossover grid in nm.
pub fn crossover_grid() -> Vec<f64> {
    let decades = (CROSSOVER_MAX_NM / CROSSOVER_MIN_NM).log10();
    let intervals = (decades * CROSSOVER_POINTS_PER_DECADE).round() as usize;
    (0..=intervals)
        .map(|i| CROSSOVER_MIN_NM * (CROSSOVER_MAX_NM / CROSSOVER_MIN_NM).powf(i as f64 / intervals as f64))
        .collect()
}

/// Smallest grid separation from which on the classical expression stays
/// within `rel_tol` of the full computation.
pub fn crossover_separation(
    engine: &Engine,
    surface: &Surface,
    atom: &AtomModel,
    temperature: f64,
    rel_tol: f64,
    quantity: Quantity,
) -> Result<Crossover> {
    if !(rel_tol > 0.0 && rel_tol < 0.5) {
        return Err(Error::domain(format!("relative tolerance must lie in (0, 0.5), got {rel_tol}")));
    }
    if quantity == Quantity::ZeroTemperatureEnergy {
        return Err(Error::domain("crossover is defined for the free energy or the force"));
    }
    let c = engine.constants();
    let profile = crossover_grid()
        .par_iter()
        .map(|&a| {
            let g = Geometry::new(a, temperature)?;
            let exact = engine.compute(surface, atom, &g, quantity)?.value;
            let classical = classical_value(surface, atom, &g, quantity, c)?;
            Ok((a, ((exact - classical) / exact).abs()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut start = None;
    for (i, &(_, rel)) in profile.iter().enumerate().rev() {
        if rel <= rel_tol {
            start = Some(i);
        } else {
            break;
        }
    }
    match start {
        Some(i) => Ok(Crossover { separation_nm: profile[i].0, profile }),
        None => Err(Error::CrossoverNotFound(format!("relative deviation above {rel_tol} at {} nm", CROSSOVER_MAX_NM))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::builtin_atom;

    fn setup(a: f64) -> (AtomModel, Geometry, Constants) {
        (builtin_atom("He*").unwrap(), Geometry::new(a, 300.0).unwrap(), Constants::default())
    }

    #[test]
    fn pi00_classical_values() {
        let c = Constants::default();
        let g = Geometry::new(100.0, 300.0).unwrap();
        let p = pi00_classical(&g, &c);
        assert!((p.value - 235.290_706).abs() < 1e-5);
        let p2 = pi00_classical(&Geometry::new(200.0, 300.0).unwrap(), &c);
        assert!((p2.value / p.value - 2.0).abs() < 1e-14);
        let cold = pi00_classical(&Geometry::new(100.0, 0.0).unwrap(), &c);
        assert_eq!(cold.value, 0.0);
        assert!(cold.extrapolated);
        // 32α ln2 a k_BT c/(ħ v_F²) form
        let alt =
            32.0 * c.fine_structure * LN_2 * 100.0 * c.boltzmann * 300.0 / (c.hbar_c * c.fermi_velocity_ratio.powi(2));
        assert!((alt - p.value).abs() < 1e-10 * alt);
    }

    #[test]
    fn regime_flag() {
        let c = Constants::default();
        // πṽ_F/(2τ) < 0.05 for a ≥ 100 nm at room temperature
        assert!(!pi00_classical(&Geometry::new(100.0, 300.0).unwrap(), &c).extrapolated);
        assert!(pi00_classical(&Geometry::new(100.0, 0.5).unwrap(), &c).extrapolated);
    }

    #[test]
    fn metal_limits() {
        let (he, g, c) = setup(6000.0);
        let e = classical_free_energy_coated(&he, &g, StaticPermittivity::Infinite, &c).unwrap();
        assert_eq!(e.first_correction, 0.0);
        assert_eq!(e.second_correction, 0.0);
        let kt_alpha = c.boltzmann * 300.0 * JOULE_PER_EV * 315.638 * c.polarizability_au;
        let a = 6e-6;
        assert!((e.total + kt_alpha / (4.0 * a * a * a)).abs() < 1e-12 * e.total.abs());
        let f = classical_force_coated(&he, &g, StaticPermittivity::Infinite, &c).unwrap();
        assert!((f.total + 3.0 * kt_alpha / (4.0 * a.powi(4))).abs() < 1e-12 * f.total.abs());
        assert_eq!(classical_force_bare(&he, &g, StaticPermittivity::Infinite, &c), f.total);
        assert_eq!(classical_free_energy_bare(&he, &g, StaticPermittivity::Infinite, &c), e.total);
    }

    #[test]
    fn bare_fresnel_factor() {
        let (he, g, c) = setup(6000.0);
        assert_eq!(classical_free_energy_bare(&he, &g, StaticPermittivity::Finite(1.0), &c), 0.0);
        assert_eq!(classical_force_bare(&he, &g, StaticPermittivity::Finite(1.0), &c), 0.0);
        let metal = classical_free_energy_bare(&he, &g, StaticPermittivity::Infinite, &c);
        let sio2 = classical_free_energy_bare(&he, &g, StaticPermittivity::Finite(3.8), &c);
        assert!((sio2 / metal - 2.8 / 4.8).abs() < 1e-14);
    }

    #[test]
    fn second_correction_vanishes_at_minus_one() {
        let (he, g, c) = setup(6000.0);
        let e = classical_free_energy_coated(&he, &g, StaticPermittivity::Finite(-1.0), &c).unwrap();
        assert_eq!(e.second_correction, 0.0);
        let f = classical_force_coated(&he, &g, StaticPermittivity::Finite(-1.0), &c).unwrap();
        assert_eq!(f.second_correction, 0.0);
    }

    #[test]
    fn ordering_of_terms_in_regime() {
        let c = Constants::default();
        let he = builtin_atom("He*").unwrap();
        for a in [100.0, 1000.0, 6000.0] {
            let g = Geometry::new(a, 300.0).unwrap();
            for e0 in [3.8, 10.1, 11.7] {
                let eps = StaticPermittivity::Finite(e0);
                for x in [
                    classical_free_energy_coated(&he, &g, eps, &c).unwrap(),
                    classical_force_coated(&he, &g, eps, &c).unwrap(),
                ] {
                    assert!(x.second_correction.abs() < x.first_correction.abs());
                    assert!(x.first_correction.abs() < x.leading.abs());
                    assert_eq!(x.total, x.leading + x.first_correction + x.second_correction);
                }
            }
        }
    }

    #[test]
    fn first_two_terms_independent_of_eps0() {
        let (he, g, c) = setup(5000.0);
        let a = classical_force_coated(&he, &g, StaticPermittivity::Finite(3.8), &c).unwrap();
        let b = classical_force_coated(&he, &g, StaticPermittivity::Finite(11.7), &c).unwrap();
        assert_eq!(a.leading, b.leading);
        assert_eq!(a.first_correction, b.first_correction);
        let diff = (b.total - a.total) - (b.second_correction - a.second_correction);
        assert!(diff.abs() <= 1e-15 * a.total.abs());
    }

    #[test]
    fn force_is_negative_derivative_of_energy() {
        let c = Constants::default();
        let he = builtin_atom("He*").unwrap();
        let eps = StaticPermittivity::Finite(3.8);
        for a in [500.0, 2000.0, 8000.0] {
            let energy =
                |a_nm: f64| classical_free_energy_coated(&he, &Geometry::new(a_nm, 300.0).unwrap(), eps, &c).unwrap();
            let h = a * 2e-4;
            let g = Geometry::new(a, 300.0).unwrap();
            let force = classical_force_coated(&he, &g, eps, &c).unwrap();
            // five-point stencil per term; h in metres for the derivative
            let hm = h * 1e-9;
            let d = |f: &dyn Fn(&ClassicalExpansion) -> f64| {
                -(-f(&energy(a + 2.0 * h)) + 8.0 * f(&energy(a + h)) - 8.0 * f(&energy(a - h))
                    + f(&energy(a - 2.0 * h)))
                    / (12.0 * hm)
            };
            for (num, exact) in [
                (d(&|e| e.leading), force.leading),
                (d(&|e| e.first_correction), force.first_correction),
                (d(&|e| e.second_correction), force.second_correction),
            ] {
                assert!(((num - exact) / exact).abs() < 1e-10, "a={a}: {num} vs {exact}");
            }
        }
    }

    #[test]
    fn zero_temperature_rejected() {
        let c = Constants::default();
        let he = builtin_atom("He*").unwrap();
        let g = Geometry::new(1000.0, 0.0).unwrap();
        assert!(classical_force_coated(&he, &g, StaticPermittivity::Finite(3.8), &c).is_err());
    }

    #[test]
    fn grid_shape() {
        let g = crossover_grid();
        assert_eq!(g.len(), 66);
        assert_eq!(g[0], 1000.0);
        assert!((g[65] - 20000.0).abs() < 1e-9);
        let step = g[1] / g[0];
        assert!((step.log10() * 50.0 - 1.0).abs() < 0.02);
    }
}

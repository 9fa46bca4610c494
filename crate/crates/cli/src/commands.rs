use crate::config::{Defaults, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{header, Cell, Table};
use cpgraphene::asymptotics::{
    classical_force_bare, classical_force_coated, classical_free_energy_bare, classical_free_energy_coated,
    crossover_separation, ClassicalExpansion, CROSSOVER_MAX_NM, CROSSOVER_MIN_NM,
};
use cpgraphene::{Constants, Engine, Geometry, Quantity, Surface};
use rayon::prelude::*;

pub const COMPUTE: Defaults =
    Defaults { quantity: Quantity::FreeEnergy, allow_zero_temperature: true, needs_separations: true };
pub const RATIO: Defaults = COMPUTE;
pub const CLASSICAL: Defaults =
    Defaults { quantity: Quantity::Force, allow_zero_temperature: false, needs_separations: true };
pub const CROSSOVER: Defaults =
    Defaults { quantity: Quantity::Force, allow_zero_temperature: false, needs_separations: false };

fn engine(cfg: &RunConfig) -> CliResult<Engine> {
    Ok(Engine::new(Constants::default(), cfg.settings)?)
}

fn surface(cfg: &RunConfig, c: &Constants) -> Surface {
    if cfg.coated {
        Surface::coated(cfg.material.clone(), c)
    } else {
        Surface::bare(cfg.material.clone())
    }
}

fn metadata(command: &str, cfg: &RunConfig, c: &Constants) -> Vec<(String, String)> {
    let mut m = header(command, c);
    m.extend(cfg.echo.iter().cloned());
    m
}

/// Evaluates every separation concurrently and assembles rows in input order.
/// Without `keep_going` the first failing point (in input order) aborts the
/// run; with it, failures become status entries and the first one is
/// returned after the table is complete.
fn sweep<F>(cfg: &RunConfig, table: &mut Table, point: F) -> CliResult<Option<CliError>>
where
    F: Fn(f64) -> CliResult<Vec<Cell>> + Sync,
{
    if cfg.keep_going {
        table.columns.push("status".into());
    }
    let width = table.columns.len() - 1 - usize::from(cfg.keep_going);
    let results: Vec<CliResult<Vec<Cell>>> = cfg.separations.par_iter().map(|&a| point(a)).collect();
    let mut first_failure = None;
    for (&a, result) in cfg.separations.iter().zip(results) {
        let mut row = vec![Cell::Float(a)];
        match result {
            Ok(cells) => {
                row.extend(cells);
                if cfg.keep_going {
                    row.push(Cell::Text("ok".into()));
                }
            }
            Err(e) if cfg.keep_going => {
                row.extend(std::iter::repeat_n(Cell::Float(f64::NAN), width));
                row.push(Cell::Text(format!("error: {e}")));
                first_failure.get_or_insert(e);
            }
            Err(e) => return Err(e),
        }
        table.push(row);
    }
    Ok(first_failure)
}

pub fn compute(cfg: &RunConfig) -> CliResult<(Table, Option<CliError>)> {
    let e = engine(cfg)?;
    let c = *e.constants();
    let s = surface(cfg, &c);
    let mut table = Table::new(
        metadata("compute", cfg, &c),
        &["a_nm", "value_SI", "value_dimensionless", "terms_used", "est_error"],
    );
    let failure = sweep(cfg, &mut table, |a| {
        let r = e.compute(&s, &cfg.atom, &Geometry::new(a, cfg.temperature)?, cfg.quantity)?;
        Ok(vec![
            Cell::Float(r.value),
            Cell::Float(r.dimensionless_value),
            Cell::Int(r.terms_used),
            Cell::Float(r.est_error),
        ])
    })?;
    Ok((table, failure))
}

pub fn ratio(cfg: &RunConfig) -> CliResult<(Table, Option<CliError>)> {
    let e = engine(cfg)?;
    let c = *e.constants();
    let coated = Surface::coated(cfg.material.clone(), &c);
    let bare = Surface::bare(cfg.material.clone());
    let mut table = Table::new(metadata("ratio", cfg, &c), &["a_nm", "ratio_coated_over_bare"]);
    let failure = sweep(cfg, &mut table, |a| {
        let r = e.ratio(&coated, &bare, &cfg.atom, &Geometry::new(a, cfg.temperature)?, cfg.quantity)?;
        Ok(vec![Cell::Float(r)])
    })?;
    Ok((table, failure))
}

/// Classical expansion for the configured surface; uncoated plates have a
/// single term.
pub fn classical_expansion(cfg: &RunConfig, g: &Geometry, c: &Constants) -> CliResult<ClassicalExpansion> {
    let eps0 = cfg.material.static_permittivity();
    let single = |v: f64| ClassicalExpansion { leading: v, first_correction: 0.0, second_correction: 0.0, total: v };
    Ok(match (cfg.quantity, cfg.coated) {
        (Quantity::FreeEnergy, true) => classical_free_energy_coated(&cfg.atom, g, eps0, c)?,
        (Quantity::Force, true) => classical_force_coated(&cfg.atom, g, eps0, c)?,
        (Quantity::FreeEnergy, false) => single(classical_free_energy_bare(&cfg.atom, g, eps0, c)),
        (Quantity::Force, false) => single(classical_force_bare(&cfg.atom, g, eps0, c)),
        (Quantity::ZeroTemperatureEnergy, _) => {
            return Err(CliError::Config("classical limits exist for free-energy and force only".into()))
        }
    })
}

pub fn classical(cfg: &RunConfig) -> CliResult<(Table, Option<CliError>)> {
    let e = engine(cfg)?;
    let c = *e.constants();
    let s = surface(cfg, &c);
    if cfg.quantity == Quantity::ZeroTemperatureEnergy {
        return Err(CliError::Config("classical limits exist for free-energy and force only".into()));
    }
    let mut table = Table::new(
        metadata("classical", cfg, &c),
        &["a_nm", "leading", "first_correction", "second_correction", "total", "engine_SI", "rel_deviation"],
    );
    let failure = sweep(cfg, &mut table, |a| {
        let g = Geometry::new(a, cfg.temperature)?;
        let x = classical_expansion(cfg, &g, &c)?;
        let exact = e.compute(&s, &cfg.atom, &g, cfg.quantity)?.value;
        Ok(vec![
            Cell::Float(x.leading),
            Cell::Float(x.first_correction),
            Cell::Float(x.second_correction),
            Cell::Float(x.total),
            Cell::Float(exact),
            Cell::Float(((exact - x.total) / exact).abs()),
        ])
    })?;
    Ok((table, failure))
}

pub fn crossover(cfg: &RunConfig) -> CliResult<Table> {
    let e = engine(cfg)?;
    let c = *e.constants();
    let s = surface(cfg, &c);
    if cfg.quantity == Quantity::ZeroTemperatureEnergy {
        return Err(CliError::Config("crossover is defined for free-energy and force only".into()));
    }
    let x = crossover_separation(&e, &s, &cfg.atom, cfg.temperature, cfg.rel_tol, cfg.quantity)?;
    let mut meta = metadata("crossover", cfg, &c);
    meta.push(("grid_nm".into(), format!("{CROSSOVER_MIN_NM}..{CROSSOVER_MAX_NM} x{} log", x.profile.len())));
    meta.push(("rel_tol".into(), cfg.rel_tol.to_string()));
    meta.push(("crossover_a_nm".into(), format!("{:.16e}", x.separation_nm)));
    let mut table = Table::new(meta, &["a_nm", "rel_deviation"]);
    for (a, dev) in x.profile {
        table.push(vec![Cell::Float(a), Cell::Float(dev)]);
    }
    Ok(table)
}

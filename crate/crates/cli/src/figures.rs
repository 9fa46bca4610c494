//! Data files for the six figures: ratios and |F|a⁴ curves at 300 K.

use crate::config::{range, Format, Scale};
use crate::error::{CliError, CliResult};
use crate::output::{header, Cell, Table};
use cpgraphene::asymptotics::{classical_force_bare, classical_force_coated};
use cpgraphene::{builtin_atom, builtin_material, AtomModel, Constants, Engine, Geometry, Quantity, Surface};
use rayon::prelude::*;
use std::path::{Path, PathBuf};

const MATERIALS: [&str; 4] = ["Au", "Si", "Al2O3", "SiO2"];
const ATOMS: [&str; 4] = ["Rb", "Na", "Cs", "He*"];
const ROOM: f64 = 300.0;

struct Ctx<'a> {
    engine: &'a Engine,
    count: usize,
}

impl Ctx<'_> {
    fn c(&self) -> Constants {
        *self.engine.constants()
    }

    fn coated(&self, m: &str) -> CliResult<Surface> {
        Ok(Surface::coated(builtin_material(m)?, &self.c()))
    }

    fn bare(&self, m: &str) -> CliResult<Surface> {
        Ok(Surface::bare(builtin_material(m)?))
    }

    fn ratio(&self, m: &str, atom: &AtomModel, a: f64, t: f64, q: Quantity) -> CliResult<f64> {
        Ok(self.engine.ratio(&self.coated(m)?, &self.bare(m)?, atom, &Geometry::new(a, t)?, q)?)
    }

    /// One row per separation; columns computed by `row`, concurrently.
    fn table<F>(&self, name: &str, description: &str, lo: f64, hi: f64, columns: &[&str], row: F) -> CliResult<Table>
    where
        F: Fn(f64) -> CliResult<Vec<f64>> + Sync,
    {
        let mut meta = header("figures", &self.engine.constants().clone());
        meta.push(("figure".into(), name.into()));
        meta.push(("description".into(), description.into()));
        meta.push(("temperature_K".into(), ROOM.to_string()));
        meta.push(("separations_nm".into(), format!("{lo}..{hi} x{} log", self.count)));
        meta.push(("tol_quad".into(), format!("{:e}", self.engine.settings().quad_rel_tol)));
        meta.push(("tol_sum".into(), format!("{:e}", self.engine.settings().sum_rel_tol)));
        let grid = range(lo, hi, self.count, Scale::Log);
        let rows: Vec<CliResult<Vec<f64>>> = grid.par_iter().map(|&a| row(a)).collect();
        let mut cols = vec!["a_nm"];
        cols.extend_from_slice(columns);
        let mut table = Table::new(meta, &cols);
        for (a, r) in grid.iter().zip(rows) {
            let mut cells = vec![Cell::Float(*a)];
            cells.extend(r?.into_iter().map(Cell::Float));
            table.push(cells);
        }
        Ok(table)
    }
}

fn force_a4(engine: &Engine, s: &Surface, atom: &AtomModel, a: f64) -> CliResult<f64> {
    let g = Geometry::new(a, ROOM)?;
    Ok(engine.force(s, atom, &g)?.value.abs() * g.separation_m().powi(4))
}

pub fn build(engine: &Engine, count: usize) -> CliResult<Vec<(&'static str, Table)>> {
    let ctx = Ctx { engine, count };
    let rb = builtin_atom("Rb")?;
    let he = builtin_atom("He*")?;
    let c = ctx.c();
    let mut out = Vec::new();

    out.push((
        "fig1",
        ctx.table("fig1", "free-energy ratio coated/bare; Rb", 100.0, 6000.0, &MATERIALS, |a| {
            MATERIALS.iter().map(|m| ctx.ratio(m, &rb, a, ROOM, Quantity::FreeEnergy)).collect()
        })?,
    ));

    let silica_coated = ctx.coated("SiO2")?;
    let silica_bare = ctx.bare("SiO2")?;
    out.push((
        "fig2a",
        ctx.table("fig2a", "F(300 K)/E(0 K); Rb + SiO2", 100.0, 6000.0, &["bare", "coated"], |a| {
            [&silica_bare, &silica_coated]
                .iter()
                .map(|s| {
                    let f = engine.free_energy(s, &rb, &Geometry::new(a, ROOM)?)?.value;
                    let e0 = engine.energy_zero_temperature(s, &rb, a)?.value;
                    Ok(f / e0)
                })
                .collect()
        })?,
    ));

    out.push((
        "fig2b",
        ctx.table("fig2b", "coated/bare ratio; Rb + SiO2", 100.0, 6000.0, &["ratio_300K", "ratio_0K"], |a| {
            Ok(vec![
                ctx.ratio("SiO2", &rb, a, ROOM, Quantity::FreeEnergy)?,
                ctx.ratio("SiO2", &rb, a, 0.0, Quantity::ZeroTemperatureEnergy)?,
            ])
        })?,
    ));

    let atoms: Vec<AtomModel> = ATOMS.iter().map(|n| builtin_atom(n)).collect::<Result<_, _>>()?;
    out.push((
        "fig3",
        ctx.table("fig3", "free-energy ratio coated/bare; SiO2", 100.0, 1000.0, &ATOMS, |a| {
            atoms.iter().map(|atom| ctx.ratio("SiO2", atom, a, ROOM, Quantity::FreeEnergy)).collect()
        })?,
    ));

    out.push((
        "fig4",
        ctx.table("fig4", "force ratio coated/bare; He*", 100.0, 6000.0, &MATERIALS, |a| {
            MATERIALS.iter().map(|m| ctx.ratio(m, &he, a, ROOM, Quantity::Force)).collect()
        })?,
    ));

    let probe = Geometry::new(1000.0, ROOM)?;
    let metal = cpgraphene::StaticPermittivity::Infinite;
    // |F|a⁴ of the classical limit is separation independent
    let limit = |f: f64| (f * probe.separation_m().powi(4)).abs().to_string();

    let coated: Vec<Surface> = MATERIALS.iter().map(|m| ctx.coated(m)).collect::<CliResult<_>>()?;
    let mut fig5 = ctx.table("fig5", "|F_g| a^4 in N m^4, coated plates; He*", 100.0, 10000.0, &MATERIALS, |a| {
        coated.iter().map(|s| force_a4(engine, s, &he, a)).collect()
    })?;
    fig5.metadata.push(("classical_limit".into(), limit(classical_force_coated(&he, &probe, metal, &c)?.leading)));
    out.push(("fig5", fig5));

    let bare: Vec<Surface> = MATERIALS.iter().map(|m| ctx.bare(m)).collect::<CliResult<_>>()?;
    let mut fig6 = ctx.table("fig6", "|F| a^4 in N m^4, uncoated plates; He*", 100.0, 10000.0, &MATERIALS, |a| {
        bare.iter().map(|s| force_a4(engine, s, &he, a)).collect()
    })?;
    for (m, s) in MATERIALS.iter().zip(&bare) {
        let f = classical_force_bare(&he, &probe, s.plate().static_permittivity(), &c);
        fig6.metadata.push((format!("classical_limit_{m}"), limit(f)));
    }
    out.push(("fig6", fig6));
    Ok(out)
}

pub fn write_all(engine: &Engine, count: usize, dir: &Path, format: Format) -> CliResult<Vec<PathBuf>> {
    if count < 2 {
        return Err(CliError::Config("--a-count must be at least 2 for figures".into()));
    }
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let mut written = Vec::new();
    for (name, table) in build(engine, count)? {
        let path = dir.join(format!("{name}.{ext}"));
        table.write(format, Some(&path))?;
        written.push(path);
    }
    Ok(written)
}

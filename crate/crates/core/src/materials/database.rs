//! Text database of plate materials.
//!
//! ```text
//! # comment
//! <name> drude       <plasma eV> <relaxation eV>
//! <name> plasma      <plasma eV>
//! <name> oscillator  <strength:resonance:damping> ...
//! <name> perfect
//! <name> vacuum
//! <name> imaginary-table <file> [none|constant|drude:<wp>:<gamma>|plasma:<wp>]
//! <name> optical-table   <file> [none|drude:<wp>:<gamma>|plasma:<wp>]
//! ```
//!
//! Table paths are resolved against the directory of the database file.
//! Optical tables are Kramers-Kronig transformed onto a logarithmic ξ grid
//! (1 meV to 1 keV, 50 points per decade) when the database is loaded.

use super::kramers_kronig::{parse_columns, LowFrequencyExtrapolation, OpticalDataTable};
use super::tabulated::{ImaginaryAxisTable, LowTail};
use super::{Oscillator, PermittivityModel};
use crate::error::{Error, Result};
use std::path::Path;
use std::sync::OnceLock;

const BUILTIN_DATABASE: &str = include_str!("../../data/materials.db");

const ALIASES: [(&str, &str); 6] = [
    ("gold", "Au"),
    ("silicon", "Si"),
    ("sapphire", "Al2O3"),
    ("silica", "SiO2"),
    ("fused-silica", "SiO2"),
    ("pec", "perfect-conductor"),
];

const KK_XI_MIN: f64 = 1e-3;
const KK_XI_MAX: f64 = 1e3;
const KK_PER_DECADE: usize = 50;
const KK_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct MaterialRecord {
    pub name: String,
    pub model: PermittivityModel,
}

fn builtin_records() -> &'static [MaterialRecord] {
    static RECORDS: OnceLock<Vec<MaterialRecord>> = OnceLock::new();
    RECORDS.get_or_init(|| parse_database(BUILTIN_DATABASE, None).expect("built-in materials database is valid"))
}

pub fn builtin_material_names() -> Vec<&'static str> {
    builtin_records().iter().map(|r| r.name.as_str()).collect()
}

/// Looks up a built-in material by name or common alias, ignoring ASCII case.
pub fn builtin_material(name: &str) -> Result<PermittivityModel> {
    lookup(builtin_records(), name).ok_or_else(|| Error::UnknownMaterial {
        name: name.to_string(),
        available: builtin_material_names().join(", "),
    })
}

/// Finds `name` in `records`, resolving aliases.
pub fn lookup(records: &[MaterialRecord], name: &str) -> Option<PermittivityModel> {
    let key = name.trim();
    let key = ALIASES.iter().find(|(a, _)| a.eq_ignore_ascii_case(key)).map_or(key, |(_, n)| n);
    records.iter().find(|r| r.name.eq_ignore_ascii_case(key)).map(|r| r.model.clone())
}

pub fn parse_database(text: &str, base_dir: Option<&Path>) -> Result<Vec<MaterialRecord>> {
    let mut records: Vec<MaterialRecord> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line: line_no, message };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 2 {
            return Err(err("expected `<name> <variant> [parameters]`".into()));
        }
        let (name, variant, params) = (fields[0], fields[1], &fields[2..]);
        let number = |s: &str| s.parse::<f64>().map_err(|e| err(format!("`{s}`: {e}")));
        let arity = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(err(format!("variant `{variant}` takes {n} parameter(s), found {}", params.len())))
            }
        };
        let model = match variant {
            "drude" => {
                arity(2)?;
                PermittivityModel::drude(number(params[0])?, number(params[1])?)
            }
            "plasma" => {
                arity(1)?;
                PermittivityModel::plasma(number(params[0])?)
            }
            "oscillator" => {
                let mut terms = Vec::with_capacity(params.len());
                for p in params {
                    let parts: Vec<&str> = p.split(':').collect();
                    if parts.len() != 3 {
                        return Err(err(format!("oscillator term `{p}` must be strength:resonance:damping")));
                    }
                    terms.push(Oscillator {
                        strength: number(parts[0])?,
                        resonance: number(parts[1])?,
                        damping: number(parts[2])?,
                    });
                }
                PermittivityModel::oscillators(terms)
            }
            "perfect" => {
                arity(0)?;
                Ok(PermittivityModel::PerfectConductor)
            }
            "vacuum" => {
                arity(0)?;
                Ok(PermittivityModel::Vacuum)
            }
            "imaginary-table" | "optical-table" => {
                if params.is_empty() || params.len() > 2 {
                    return Err(err(format!("variant `{variant}` takes <file> [extrapolation]")));
                }
                let path = match base_dir {
                    Some(dir) => dir.join(params[0]),
                    None => Path::new(params[0]).to_path_buf(),
                };
                let text =
                    std::fs::read_to_string(&path).map_err(|e| err(format!("cannot read {}: {e}", path.display())))?;
                let rule = params.get(1).copied().unwrap_or("none");
                if variant == "imaginary-table" {
                    let tail = parse_low_tail(rule).map_err(err)?;
                    imaginary_table(&text, tail).map(PermittivityModel::TabulatedImaginary)
                } else {
                    let ext = parse_extrapolation(rule).map_err(err)?;
                    OpticalDataTable::parse(&text, ext)
                        .and_then(|t| t.to_imaginary_table(KK_XI_MIN, KK_XI_MAX, KK_PER_DECADE, KK_REL_TOL))
                        .map(PermittivityModel::TabulatedImaginary)
                }
            }
            other => return Err(err(format!("unknown variant `{other}`"))),
        }
        .map_err(|e| match e {
            Error::Parse { .. } => e,
            other => err(other.to_string()),
        })?;
        if records.iter().any(|r| r.name.eq_ignore_ascii_case(name)) {
            return Err(err(format!("duplicate material `{name}`")));
        }
        records.push(MaterialRecord { name: name.to_string(), model });
    }
    Ok(records)
}

fn imaginary_table(text: &str, tail: LowTail) -> Result<ImaginaryAxisTable> {
    ImaginaryAxisTable::new(&parse_columns(text)?, tail)
}

fn split_rule(rule: &str) -> std::result::Result<(String, Vec<f64>), String> {
    let mut parts = rule.split(':');
    let head = parts.next().unwrap_or("").to_ascii_lowercase();
    let nums = parts
        .map(|p| p.parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok((head, nums))
}

fn parse_low_tail(rule: &str) -> std::result::Result<LowTail, String> {
    match split_rule(rule)? {
        (h, n) if h == "none" && n.is_empty() => Ok(LowTail::None),
        (h, n) if h == "constant" && n.is_empty() => Ok(LowTail::Constant),
        (h, n) if h == "drude" && n.len() == 2 => Ok(LowTail::Drude { plasma_frequency: n[0], relaxation: n[1] }),
        (h, n) if h == "plasma" && n.len() == 1 => Ok(LowTail::Plasma { plasma_frequency: n[0] }),
        _ => Err(format!("invalid low-frequency rule `{rule}`")),
    }
}

fn parse_extrapolation(rule: &str) -> std::result::Result<LowFrequencyExtrapolation, String> {
    match split_rule(rule)? {
        (h, n) if h == "none" && n.is_empty() => Ok(LowFrequencyExtrapolation::None),
        (h, n) if h == "drude" && n.len() == 2 => {
            Ok(LowFrequencyExtrapolation::Drude { plasma_frequency: n[0], relaxation: n[1] })
        }
        (h, n) if h == "plasma" && n.len() == 1 => Ok(LowFrequencyExtrapolation::Plasma { plasma_frequency: n[0] }),
        _ => Err(format!("invalid extrapolation `{rule}`")),
    }
}

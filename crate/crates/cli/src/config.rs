//! Run configuration: a flat `key = value` file merged with command-line
//! flags (flags win).
//!
//! ```text
//! # comment
//! atom        = Rb                 # built-in name, or [name:]alpha0_au:omega0_eV
//! material    = SiO2               # built-in/database name, or an inline model
//! materials_db = extra.db
//! coated      = true
//! temperature = 300
//! separations = 100, 200, 6000     # nm; or a_start/a_stop/a_count/a_scale
//! quantity    = free-energy        # free-energy | force | energy-t0
//! format      = csv                # csv | json
//! ```

use crate::error::{CliError, CliResult};
use cpgraphene::materials::{builtin_material, lookup, parse_database, MaterialRecord};
use cpgraphene::{builtin_atom, AtomModel, ComputeSettings, PermittivityModel, Quantity};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub const KEYS: [&str; 18] = [
    "atom",
    "material",
    "materials_db",
    "coated",
    "temperature",
    "separations",
    "a_start",
    "a_stop",
    "a_count",
    "a_scale",
    "quantity",
    "out",
    "format",
    "keep_going",
    "tol_quad",
    "tol_sum",
    "max_terms",
    "rel_tol",
];

/// Where a raw value came from, for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub enum Origin {
    File { path: PathBuf, line: usize },
    Flag,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    values: BTreeMap<String, (String, Origin)>,
}

fn normalize(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

impl RawConfig {
    pub fn parse(text: &str, path: &Path) -> CliResult<Self> {
        let mut raw = RawConfig::default();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let at = || format!("{}:{line_no}", path.display());
            let (key, value) =
                body.split_once('=').ok_or_else(|| CliError::Config(format!("{}: expected `key = value`", at())))?;
            let key = normalize(key);
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::Config(format!("{}: unknown key `{key}`", at())));
            }
            if raw.values.contains_key(&key) {
                return Err(CliError::Config(format!("{}: duplicate key `{key}`", at())));
            }
            raw.values
                .insert(key, (value.trim().to_string(), Origin::File { path: path.to_path_buf(), line: line_no }));
        }
        Ok(raw)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text, path)
    }

    pub fn set(&mut self, key: &str, value: Option<String>) {
        if let Some(v) = value {
            self.values.insert(normalize(key), (v, Origin::Flag));
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|(v, _)| v.as_str())
    }

    fn field_error(&self, key: &str, message: impl std::fmt::Display) -> CliError {
        let place = match self.values.get(key).map(|(_, o)| o) {
            Some(Origin::File { path, line }) => format!("{}:{line}, field `{key}`", path.display()),
            _ => format!("--{}", key.replace('_', "-")),
        };
        CliError::Config(format!("{place}: {message}"))
    }

    fn typed<T: std::str::FromStr>(&self, key: &str) -> CliResult<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key).map(|v| v.parse::<T>().map_err(|e| self.field_error(key, format!("`{v}`: {e}")))).transpose()
    }

    fn flag(&self, key: &str) -> CliResult<bool> {
        match self.get(key) {
            None => Ok(false),
            Some(v) => match v.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" | "on" => Ok(true),
                "false" | "no" | "0" | "off" => Ok(false),
                _ => Err(self.field_error(key, format!("`{v}` is not a boolean"))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

pub fn quantity_name(q: Quantity) -> &'static str {
    match q {
        Quantity::FreeEnergy => "free-energy",
        Quantity::Force => "force",
        Quantity::ZeroTemperatureEnergy => "energy-t0",
    }
}

fn parse_quantity(s: &str) -> Option<Quantity> {
    match s.to_ascii_lowercase().as_str() {
        "free-energy" | "energy" => Some(Quantity::FreeEnergy),
        "force" => Some(Quantity::Force),
        "energy-t0" => Some(Quantity::ZeroTemperatureEnergy),
        _ => None,
    }
}

/// Defaults that differ between subcommands.
#[derive(Debug, Clone, Copy)]
pub struct Defaults {
    pub quantity: Quantity,
    pub allow_zero_temperature: bool,
    /// Crossover searches run on their own fixed grid.
    pub needs_separations: bool,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub atom: AtomModel,
    pub material: PermittivityModel,
    pub coated: bool,
    pub temperature: f64,
    pub separations: Vec<f64>,
    pub quantity: Quantity,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub keep_going: bool,
    pub settings: ComputeSettings,
    pub rel_tol: f64,
    /// Resolved settings in a fixed order, for the output metadata block.
    pub echo: Vec<(String, String)>,
}

pub fn resolve_atom(spec: &str) -> CliResult<AtomModel> {
    if !spec.contains(':') {
        return Ok(builtin_atom(spec)?);
    }
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    let (name, nums) = match parts.len() {
        2 => ("custom", &parts[..]),
        3 => (parts[0], &parts[1..]),
        _ => return Err(CliError::Config(format!("atom `{spec}`: expected [name:]alpha0_au:omega0_eV"))),
    };
    let num = |s: &str| s.parse::<f64>().map_err(|e| CliError::Config(format!("atom `{spec}`: `{s}`: {e}")));
    Ok(AtomModel::new(name, num(nums[0])?, num(nums[1])?)?)
}

/// Extra records from `materials_db` are searched before the built-ins. A
/// value that is not a known name is parsed as an inline model, e.g.
/// `drude 9 0.035`.
pub fn resolve_material(spec: &str, extra: &[MaterialRecord]) -> CliResult<PermittivityModel> {
    if let Some(m) = lookup(extra, spec) {
        return Ok(m);
    }
    match builtin_material(spec) {
        Ok(m) => Ok(m),
        Err(e) if spec.split_whitespace().count() > 1 => {
            let records = parse_database(&format!("inline {spec}"), None)
                .map_err(|p| CliError::Config(format!("material `{spec}`: {p}; {e}")))?;
            Ok(records.into_iter().next().expect("one record").model)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn load_materials_db(path: &Path) -> CliResult<Vec<MaterialRecord>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read materials database {}: {e}", path.display())))?;
    parse_database(&text, path.parent())
        .map_err(|e| CliError::Data(format!("materials database {}: {e}", path.display())))
}

fn separations(raw: &RawConfig) -> CliResult<(Vec<f64>, String)> {
    let range_keys = ["a_start", "a_stop", "a_count", "a_scale"];
    let has_range = range_keys.iter().any(|k| raw.get(k).is_some());
    if let Some(list) = raw.get("separations") {
        if has_range {
            return Err(raw.field_error("separations", "give either a list or a_start/a_stop/a_count, not both"));
        }
        let values = list
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>().map_err(|e| raw.field_error("separations", format!("`{s}`: {e}"))))
            .collect::<CliResult<Vec<f64>>>()?;
        if values.is_empty() {
            return Err(raw.field_error("separations", "empty list"));
        }
        if let Some(bad) = values.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
            return Err(raw.field_error("separations", format!("separation {bad} nm must be positive")));
        }
        return Ok((values, list.to_string()));
    }
    if !has_range {
        return Err(CliError::Config("no separations: use --separations or --a-start/--a-stop/--a-count".into()));
    }
    let start: f64 = raw.typed("a_start")?.ok_or_else(|| CliError::Config("--a-start is required".into()))?;
    let count: usize = raw.typed("a_count")?.unwrap_or(1);
    let stop: f64 = match raw.typed("a_stop")? {
        Some(s) => s,
        None if count == 1 => start,
        None => return Err(CliError::Config("--a-stop is required when --a-count > 1".into())),
    };
    let scale = match raw.get("a_scale").map(str::to_ascii_lowercase).as_deref() {
        None | Some("log") => Scale::Log,
        Some("linear") => Scale::Linear,
        Some(other) => return Err(raw.field_error("a_scale", format!("`{other}`: expected linear or log"))),
    };
    if count == 0 {
        return Err(raw.field_error("a_count", "must be at least 1"));
    }
    if !(start > 0.0 && stop > 0.0 && start.is_finite() && stop.is_finite()) {
        return Err(CliError::Config(format!("separations must be positive, got {start}..{stop}")));
    }
    Ok((range(start, stop, count, scale), format!("{start}..{stop} x{count} {scale:?}").to_lowercase()))
}

pub fn range(start: f64, stop: f64, count: usize, scale: Scale) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    let n = (count - 1) as f64;
    (0..count)
        .map(|i| {
            if i == count - 1 {
                return stop;
            }
            let f = i as f64 / n;
            match scale {
                Scale::Linear => start + (stop - start) * f,
                Scale::Log => start * (stop / start).powf(f),
            }
        })
        .collect()
}

pub fn format_from(raw: &RawConfig) -> CliResult<Format> {
    match raw.get("format").map(str::to_ascii_lowercase).as_deref() {
        None | Some("csv") => Ok(Format::Csv),
        Some("json") => Ok(Format::Json),
        Some(other) => Err(raw.field_error("format", format!("`{other}`: expected csv or json"))),
    }
}

pub fn settings_from(raw: &RawConfig) -> CliResult<ComputeSettings> {
    let mut s = ComputeSettings::default();
    if let Some(t) = raw.typed("tol_quad")? {
        s.quad_rel_tol = t;
        s.zero_t_freq_tol = t;
    }
    if let Some(t) = raw.typed("tol_sum")? {
        s.sum_rel_tol = t;
    }
    if let Some(n) = raw.typed("max_terms")? {
        s.max_matsubara_terms = n;
    }
    s.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(s)
}

impl RunConfig {
    pub fn resolve(raw: &RawConfig, defaults: Defaults) -> CliResult<Self> {
        let atom_spec = raw.get("atom").ok_or_else(|| CliError::Config("--atom is required".into()))?;
        let atom = resolve_atom(atom_spec)?;
        let material_name = raw.get("material").ok_or_else(|| CliError::Config("--material is required".into()))?;
        let extra = match raw.get("materials_db") {
            Some(p) => load_materials_db(Path::new(p))?,
            None => Vec::new(),
        };
        let material = resolve_material(material_name, &extra)?;
        let coated = raw.flag("coated")?;
        let quantity = match raw.get("quantity") {
            None => defaults.quantity,
            Some(q) => parse_quantity(q).ok_or_else(|| {
                raw.field_error("quantity", format!("`{q}`: expected free-energy, force or energy-t0"))
            })?,
        };
        let temperature: f64 = raw.typed("temperature")?.unwrap_or(300.0);
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(raw.field_error("temperature", format!("{temperature} K must be non-negative")));
        }
        if temperature == 0.0 && !(defaults.allow_zero_temperature && quantity == Quantity::ZeroTemperatureEnergy) {
            return Err(raw.field_error("temperature", "T = 0 is only valid with quantity energy-t0"));
        }
        let (separations, sep_echo) =
            if defaults.needs_separations { separations(raw)? } else { (Vec::new(), "fixed grid".to_string()) };
        let format = format_from(raw)?;
        let settings = settings_from(raw)?;
        let rel_tol: f64 = raw.typed("rel_tol")?.unwrap_or(0.02);
        let echo = vec![
            (
                "atom".to_string(),
                format!(
                    "{} (alpha0 = {} a.u., omega0 = {} eV)",
                    atom.name(),
                    atom.static_polarizability(),
                    atom.characteristic_frequency()
                ),
            ),
            ("material".into(), material_name.to_string()),
            ("materials_db".into(), raw.get("materials_db").unwrap_or("-").to_string()),
            ("coated".into(), coated.to_string()),
            ("temperature_K".into(), temperature.to_string()),
            ("separations_nm".into(), sep_echo),
            ("quantity".into(), quantity_name(quantity).to_string()),
            ("tol_quad".into(), format!("{:e}", settings.quad_rel_tol)),
            ("tol_sum".into(), format!("{:e}", settings.sum_rel_tol)),
            ("max_terms".into(), settings.max_matsubara_terms.to_string()),
        ];
        Ok(RunConfig {
            atom,
            material,
            coated,
            temperature,
            separations,
            quantity,
            out: raw.get("out").map(PathBuf::from),
            format,
            keep_going: raw.flag("keep_going")?,
            settings,
            rel_tol,
            echo,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(text: &str) -> RawConfig {
        RawConfig::parse(text, Path::new("run.cfg")).unwrap()
    }

    const DEFAULTS: Defaults =
        Defaults { quantity: Quantity::FreeEnergy, allow_zero_temperature: true, needs_separations: true };

    #[test]
    fn file_values_and_flag_override() {
        let mut r = raw("atom = Rb\nmaterial = SiO2 # silica\n\ntemperature = 300\nseparations = 100, 200\n");
        r.set("temperature", Some("77".into()));
        let cfg = RunConfig::resolve(&r, DEFAULTS).unwrap();
        assert_eq!(cfg.temperature, 77.0);
        assert_eq!(cfg.separations, vec![100.0, 200.0]);
        assert!(!cfg.coated);
    }

    #[test]
    fn errors_name_line_and_field() {
        let err = RawConfig::parse("atom = Rb\nbogus = 1\n", Path::new("x.cfg")).unwrap_err();
        assert!(err.to_string().contains("x.cfg:2"), "{err}");
        let r = raw("atom = Rb\nmaterial = Au\ntemperature = hot\nseparations = 100\n");
        let err = RunConfig::resolve(&r, DEFAULTS).unwrap_err();
        assert!(err.to_string().contains("run.cfg:3, field `temperature`"), "{err}");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn ranges() {
        assert_eq!(range(1.0, 100.0, 3, Scale::Log), vec![1.0, 10.0, 100.0]);
        assert_eq!(range(1.0, 3.0, 3, Scale::Linear), vec![1.0, 2.0, 3.0]);
        assert_eq!(range(5.0, 9.0, 1, Scale::Linear), vec![5.0]);
    }

    #[test]
    fn zero_temperature_only_for_t0_energy() {
        let r = raw("atom = Rb\nmaterial = Au\ntemperature = 0\nseparations = 100\n");
        assert!(RunConfig::resolve(&r, DEFAULTS).is_err());
        let mut r = r;
        r.set("quantity", Some("energy-t0".into()));
        assert!(RunConfig::resolve(&r, DEFAULTS).is_ok());
    }

    #[test]
    fn inline_atom_and_material() {
        let a = resolve_atom("X:100:2").unwrap();
        assert_eq!((a.name(), a.static_polarizability(), a.characteristic_frequency()), ("X", 100.0, 2.0));
        assert_eq!(resolve_atom("100:2").unwrap().name(), "custom");
        assert!(resolve_atom("1:2:3:4").is_err());
        let m = resolve_material("drude 9 0.035", &[]).unwrap();
        assert_eq!(m, PermittivityModel::drude(9.0, 0.035).unwrap());
        assert!(resolve_material("unobtainium", &[]).is_err());
    }
}

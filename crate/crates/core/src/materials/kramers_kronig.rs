use super::tabulated::{ImaginaryAxisTable, LowTail};
use crate::error::{Error, Result};
use crate::quad::Adaptive;
use std::f64::consts::FRAC_2_PI;
use std::path::Path;

/// Model used for Im ε(ω) below the first tabulated frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LowFrequencyExtrapolation {
    /// Im ε = 0 below the table.
    None,
    /// Im ε = ω_p²γ / (ω(ω² + γ²)) below the table.
    Drude { plasma_frequency: f64, relaxation: f64 },
    /// Im ε = 0 below the table and a free-electron pole ω_p²/ξ² added to ε(iξ).
    Plasma { plasma_frequency: f64 },
}

/// Measured Im ε(ω) on a real-frequency grid (ω in eV).
#[derive(Debug, Clone, PartialEq)]
pub struct OpticalDataTable {
    omega: Vec<f64>,
    im_eps: Vec<f64>,
    extrapolation: LowFrequencyExtrapolation,
}

impl OpticalDataTable {
    pub fn new(points: &[(f64, f64)], extrapolation: LowFrequencyExtrapolation) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidData("optical table needs at least two rows".into()));
        }
        for (i, &(w, e)) in points.iter().enumerate() {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidData(format!("row {}: frequency must be positive, got {w}", i + 1)));
            }
            if !(e.is_finite() && e >= 0.0) {
                return Err(Error::InvalidData(format!("row {}: Im eps must be non-negative, got {e}", i + 1)));
            }
            if i > 0 && w <= points[i - 1].0 {
                return Err(Error::InvalidData(format!("row {}: frequencies must be strictly increasing", i + 1)));
            }
        }
        match extrapolation {
            LowFrequencyExtrapolation::Drude { plasma_frequency: p, relaxation: g } if !(p > 0.0 && g > 0.0) => {
                return Err(Error::InvalidData("Drude extrapolation parameters must be positive".into()));
            }
            LowFrequencyExtrapolation::Plasma { plasma_frequency: p } if !(p > 0.0) => {
                return Err(Error::InvalidData("plasma frequency must be positive".into()));
            }
            _ => {}
        }
        Ok(Self {
            omega: points.iter().map(|p| p.0).collect(),
            im_eps: points.iter().map(|p| p.1).collect(),
            extrapolation,
        })
    }

    /// Parses two delimited columns (ω in eV, Im ε). Whitespace, comma and
    /// semicolon delimiters are accepted; `#` starts a comment.
    pub fn parse(text: &str, extrapolation: LowFrequencyExtrapolation) -> Result<Self> {
        Self::new(&parse_columns(text)?, extrapolation)
    }

    pub fn from_file(path: &Path, extrapolation: LowFrequencyExtrapolation) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidData(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, extrapolation)
    }

    pub fn extrapolation(&self) -> LowFrequencyExtrapolation {
        self.extrapolation
    }

    pub fn omega_range(&self) -> (f64, f64) {
        (self.omega[0], self.omega[self.omega.len() - 1])
    }

    /// Im ε(ω): power-law interpolation between rows, the extrapolation rule
    /// below the table and zero above it.
    pub fn im_eps_at(&self, omega: f64) -> f64 {
        let n = self.omega.len();
        if omega < self.omega[0] {
            return match self.extrapolation {
                LowFrequencyExtrapolation::Drude { plasma_frequency, relaxation } if omega > 0.0 => {
                    plasma_frequency * plasma_frequency * relaxation
                        / (omega * (omega * omega + relaxation * relaxation))
                }
                _ => 0.0,
            };
        }
        if omega > self.omega[n - 1] {
            return 0.0;
        }
        let k = self.omega.partition_point(|&w| w <= omega).saturating_sub(1).min(n - 2);
        let (w0, w1) = (self.omega[k], self.omega[k + 1]);
        let (e0, e1) = (self.im_eps[k], self.im_eps[k + 1]);
        if e0 > 0.0 && e1 > 0.0 {
            let p = (e1 / e0).ln() / (w1 / w0).ln();
            e0 * (omega / w0).powf(p)
        } else {
            e0 + (e1 - e0) * (omega - w0) / (w1 - w0)
        }
    }

    /// Samples ε(iξ) on a logarithmic grid and wraps it in an interpolating
    /// table whose low tail matches the extrapolation rule.
    pub fn to_imaginary_table(
        &self,
        xi_min: f64,
        xi_max: f64,
        per_decade: usize,
        rel_tol: f64,
    ) -> Result<ImaginaryAxisTable> {
        if !(xi_min > 0.0 && xi_max > xi_min && per_decade > 0) {
            return Err(Error::domain("invalid imaginary-frequency grid"));
        }
        let n = ((xi_max / xi_min).log10() * per_decade as f64).ceil() as usize + 1;
        let mut points = Vec::with_capacity(n);
        for i in 0..n {
            let xi = xi_min * (xi_max / xi_min).powf(i as f64 / (n - 1) as f64);
            points.push((xi, kramers_kronig_imaginary(self, xi, rel_tol)?));
        }
        // Enforce monotonicity against quadrature noise at the 1e-6 level.
        for i in 1..n {
            if points[i].1 > points[i - 1].1 {
                points[i].1 = points[i - 1].1;
            }
        }
        let tail = match self.extrapolation {
            LowFrequencyExtrapolation::None => LowTail::Constant,
            LowFrequencyExtrapolation::Drude { plasma_frequency, relaxation } => {
                LowTail::Drude { plasma_frequency, relaxation }
            }
            LowFrequencyExtrapolation::Plasma { plasma_frequency } => LowTail::Plasma { plasma_frequency },
        };
        ImaginaryAxisTable::new(&points, tail)
    }
}

/// Reads two numeric columns. Whitespace, comma and semicolon delimiters are
/// accepted; `#` starts a comment; the first column must strictly increase.
pub(crate) fn parse_columns(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut points: Vec<(f64, f64)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> =
            line.split(|c: char| c.is_whitespace() || c == ',' || c == ';').filter(|s| !s.is_empty()).collect();
        if fields.len() != 2 {
            return Err(Error::Parse { line: idx + 1, message: format!("expected 2 columns, found {}", fields.len()) });
        }
        let parse =
            |s: &str| s.parse::<f64>().map_err(|e| Error::Parse { line: idx + 1, message: format!("`{s}`: {e}") });
        let (x, y) = (parse(fields[0])?, parse(fields[1])?);
        if let Some(&(px, _)) = points.last() {
            if x <= px {
                return Err(Error::Parse { line: idx + 1, message: "frequencies must be strictly increasing".into() });
            }
        }
        points.push((x, y));
    }
    Ok(points)
}

/// ε(iξ) = 1 + (2/π) ∫₀^∞ ω Im ε(ω)/(ω² + ξ²) dω for an arbitrary absorption
/// spectrum supported on `[breakpoints[0], breakpoints[last]]`.
///
/// The interval is split at ξ and at every breakpoint; put resonances there.
pub fn kramers_kronig<F: Fn(f64) -> f64>(im_eps: F, xi: f64, breakpoints: &[f64], rel_tol: f64) -> Result<f64> {
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::domain(format!("Kramers-Kronig needs xi > 0, got {xi}")));
    }
    if breakpoints.len() < 2 || breakpoints[0] < 0.0 {
        return Err(Error::domain("Kramers-Kronig needs a support [lo, hi] with lo >= 0"));
    }
    let mut points = breakpoints.to_vec();
    if xi > points[0] && xi < points[points.len() - 1] && !points.contains(&xi) {
        points.push(xi);
        points.sort_by(f64::total_cmp);
    }
    let xi2 = xi * xi;
    let integral = Adaptive::new(rel_tol)
        .with_abs_tol(0.01 * rel_tol)
        .with_max_segments(20_000 + 4 * points.len())
        .integrate(|w| w * im_eps(w) / (w * w + xi2), &points)?;
    Ok(1.0 + FRAC_2_PI * integral.value)
}

/// Kramers-Kronig transform of a measured table, including the low-frequency
/// extrapolation.
pub fn kramers_kronig_imaginary(table: &OpticalDataTable, xi: f64, rel_tol: f64) -> Result<f64> {
    let mut points = Vec::with_capacity(table.omega.len() + 4);
    if let LowFrequencyExtrapolation::Drude { relaxation, .. } = table.extrapolation {
        points.push(0.0);
        if relaxation < table.omega[0] {
            points.push(relaxation);
        }
    }
    points.extend_from_slice(&table.omega);
    let eps = kramers_kronig(|w| table.im_eps_at(w), xi, &points, rel_tol)?;
    Ok(match table.extrapolation {
        LowFrequencyExtrapolation::Plasma { plasma_frequency } => eps + (plasma_frequency / xi).powi(2),
        _ => eps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_absorption_is_vacuum() {
        let table =
            OpticalDataTable::new(&[(0.1, 0.0), (1.0, 0.0), (10.0, 0.0)], LowFrequencyExtrapolation::None).unwrap();
        for xi in [0.01, 1.0, 100.0] {
            assert_eq!(kramers_kronig_imaginary(&table, xi, 1e-6).unwrap(), 1.0);
        }
    }

    #[test]
    fn rejects_nonpositive_xi() {
        assert!(kramers_kronig(|_| 0.0, 0.0, &[0.0, 1.0], 1e-6).is_err());
    }

    #[test]
    fn parse_table() {
        let text = "# omega eps2\n0.1, 2.0\n0.2\t1.0 # trailing\n\n0.5 0.5\n";
        let t = OpticalDataTable::parse(text, LowFrequencyExtrapolation::None).unwrap();
        assert_eq!(t.omega_range(), (0.1, 0.5));
        assert!((t.im_eps_at(0.2) - 1.0).abs() < 1e-15);
        // power law between (0.1, 2) and (0.2, 1): eps2 = 0.2/omega
        assert!((t.im_eps_at(0.15) - 0.2 / 0.15).abs() < 1e-12);
        assert_eq!(t.im_eps_at(1.0), 0.0);
        assert_eq!(t.im_eps_at(0.05), 0.0);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = OpticalDataTable::parse("0.1 1\n0.05 2\n", LowFrequencyExtrapolation::None).unwrap_err();
        assert_eq!(err, Error::Parse { line: 2, message: "frequencies must be strictly increasing".into() });
        let err = OpticalDataTable::parse("# c\n0.1 x\n", LowFrequencyExtrapolation::None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = OpticalDataTable::parse("0.1 1 3\n", LowFrequencyExtrapolation::None).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        assert!(OpticalDataTable::parse("0.1 -1\n0.2 1\n", LowFrequencyExtrapolation::None).is_err());
    }

    #[test]
    fn drude_tail_below_table() {
        let ext = LowFrequencyExtrapolation::Drude { plasma_frequency: 9.0, relaxation: 0.035 };
        let t = OpticalDataTable::new(&[(1.0, 1.0), (2.0, 0.5)], ext).unwrap();
        let w = 0.1;
        let expected = 81.0 * 0.035 / (w * (w * w + 0.035 * 0.035));
        assert!((t.im_eps_at(w) - expected).abs() < 1e-9 * expected);
    }
}

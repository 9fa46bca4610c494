use super::StaticPermittivity;
use crate::error::{Error, Result};

/// How a tabulated ε(iξ) continues below its first grid point.
///
/// Any rule other than `None` also enables the high-frequency continuation
/// ε − 1 ∝ ξ⁻² above the last grid point. With `None`, frequencies outside the
/// grid are an error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LowTail {
    None,
    /// Hold the first tabulated value (dielectric static limit).
    Constant,
    /// Continue with the Drude ξ-dependence, shifted to match the first point.
    Drude {
        plasma_frequency: f64,
        relaxation: f64,
    },
    /// Continue with the plasma-model ξ-dependence, shifted to match the first point.
    Plasma {
        plasma_frequency: f64,
    },
}

impl LowTail {
    fn metal_part(&self, xi: f64) -> f64 {
        match *self {
            LowTail::Drude { plasma_frequency, relaxation } => plasma_frequency.powi(2) / (xi * (xi + relaxation)),
            LowTail::Plasma { plasma_frequency } => (plasma_frequency / xi).powi(2),
            LowTail::None | LowTail::Constant => 0.0,
        }
    }
}

/// ε(iξ) sampled on a grid and interpolated with a monotone piecewise cubic
/// (Fritsch-Carlson slopes) in ln ξ.
#[derive(Debug, Clone, PartialEq)]
pub struct ImaginaryAxisTable {
    xi_min: f64,
    xi_max: f64,
    log_xi: Vec<f64>,
    eps: Vec<f64>,
    slopes: Vec<f64>,
    low_tail: LowTail,
}

impl ImaginaryAxisTable {
    /// `points` are (ξ in eV, ε(iξ)). ξ must be positive and strictly increasing,
    /// ε must be ≥ 1 and non-increasing.
    pub fn new(points: &[(f64, f64)], low_tail: LowTail) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidData("tabulated permittivity needs at least two points".into()));
        }
        for (i, &(xi, eps)) in points.iter().enumerate() {
            if !(xi.is_finite() && xi > 0.0) {
                return Err(Error::InvalidData(format!("row {}: frequency must be positive, got {xi}", i + 1)));
            }
            if !(eps.is_finite() && eps >= 1.0) {
                return Err(Error::InvalidData(format!("row {}: permittivity must be >= 1, got {eps}", i + 1)));
            }
            if i > 0 {
                let (pxi, peps) = points[i - 1];
                if xi <= pxi {
                    return Err(Error::InvalidData(format!("row {}: frequencies must be strictly increasing", i + 1)));
                }
                if eps > peps {
                    return Err(Error::InvalidData(format!("row {}: permittivity must be non-increasing", i + 1)));
                }
            }
        }
        let log_xi: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
        let eps: Vec<f64> = points.iter().map(|p| p.1).collect();
        let slopes = pchip_slopes(&log_xi, &eps);
        Ok(Self { xi_min: points[0].0, xi_max: points[points.len() - 1].0, log_xi, eps, slopes, low_tail })
    }

    pub fn low_tail(&self) -> LowTail {
        self.low_tail
    }

    pub fn xi_range(&self) -> (f64, f64) {
        (self.xi_min, self.xi_max)
    }

    pub fn static_permittivity(&self) -> StaticPermittivity {
        match self.low_tail {
            LowTail::Drude { .. } | LowTail::Plasma { .. } => StaticPermittivity::Infinite,
            LowTail::None | LowTail::Constant => StaticPermittivity::Finite(self.eps[0]),
        }
    }

    pub fn evaluate(&self, xi: f64) -> Result<f64> {
        let (min, max) = self.xi_range();
        let n = self.eps.len();
        if xi < min || xi > max {
            if self.low_tail == LowTail::None {
                return Err(Error::OutOfRange { xi, min, max });
            }
            if xi > max {
                return Ok(1.0 + (self.eps[n - 1] - 1.0) * (max / xi).powi(2));
            }
            return match self.low_tail {
                LowTail::Constant => Ok(self.eps[0]),
                tail => {
                    if xi == 0.0 {
                        return Err(Error::domain("metal permittivity diverges at zero frequency"));
                    }
                    Ok(self.eps[0] + tail.metal_part(xi) - tail.metal_part(min))
                }
            };
        }
        let x = xi.ln().clamp(self.log_xi[0], self.log_xi[n - 1]);
        let k = match self.log_xi.partition_point(|&v| v <= x) {
            0 => 0,
            p => (p - 1).min(n - 2),
        };
        let h = self.log_xi[k + 1] - self.log_xi[k];
        let t = (x - self.log_xi[k]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        let v = h00 * self.eps[k] + h10 * h * self.slopes[k] + h01 * self.eps[k + 1] + h11 * h * self.slopes[k + 1];
        Ok(v.max(1.0))
    }
}

/// Shape-preserving derivative estimates for monotone cubic Hermite interpolation.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        let (a, b) = (delta[k - 1], delta[k]);
        if a * b > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / a + w2 / b);
        }
    }
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if s.signum() != d0.signum() || d0 == 0.0 {
        0.0
    } else if d0.signum() != d1.signum() && s.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
        (0..n)
            .map(|i| {
                let xi = lo * (hi / lo).powf(i as f64 / (n - 1) as f64);
                (xi, f(xi))
            })
            .collect()
    }

    #[test]
    fn reproduces_nodes_and_smooth_function() {
        let f = |xi: f64| 1.0 + 2.8 / (1.0 + (xi / 0.12).powi(2));
        let table = ImaginaryAxisTable::new(&sample(f, 1e-3, 1e3, 301), LowTail::None).unwrap();
        for (xi, e) in sample(f, 1e-3, 1e3, 301) {
            assert!((table.evaluate(xi).unwrap() - e).abs() < 1e-12);
        }
        for k in 0..500 {
            let xi = 1.1e-3 * 10f64.powf(k as f64 / 84.0);
            let rel = (table.evaluate(xi).unwrap() - f(xi)).abs() / f(xi);
            assert!(rel < 1e-4, "xi={xi} rel={rel}");
        }
    }

    #[test]
    fn out_of_range_without_tail() {
        let table = ImaginaryAxisTable::new(&[(0.1, 3.0), (1.0, 2.0), (10.0, 1.5)], LowTail::None).unwrap();
        assert!(matches!(table.evaluate(0.01), Err(Error::OutOfRange { .. })));
        assert!(matches!(table.evaluate(100.0), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn tails() {
        let pts = [(0.1, 3.0), (1.0, 2.0), (10.0, 1.5)];
        let constant = ImaginaryAxisTable::new(&pts, LowTail::Constant).unwrap();
        assert_eq!(constant.evaluate(0.0).unwrap(), 3.0);
        assert_eq!(constant.evaluate(1e-5).unwrap(), 3.0);
        assert!((constant.evaluate(100.0).unwrap() - 1.005).abs() < 1e-12);
        assert_eq!(constant.static_permittivity(), StaticPermittivity::Finite(3.0));

        let drude = LowTail::Drude { plasma_frequency: 9.0, relaxation: 0.035 };
        let metal = ImaginaryAxisTable::new(&[(0.1, 6000.0), (1.0, 80.0), (10.0, 1.8)], drude).unwrap();
        assert!(metal.static_permittivity().is_infinite());
        assert!(metal.evaluate(0.01).unwrap() > 6000.0);
        assert!(metal.evaluate(0.0).is_err());
    }

    #[test]
    fn validation() {
        assert!(ImaginaryAxisTable::new(&[(1.0, 2.0)], LowTail::None).is_err());
        assert!(ImaginaryAxisTable::new(&[(1.0, 2.0), (1.0, 1.5)], LowTail::None).is_err());
        assert!(ImaginaryAxisTable::new(&[(1.0, 2.0), (2.0, 2.5)], LowTail::None).is_err());
        assert!(ImaginaryAxisTable::new(&[(1.0, 0.5), (2.0, 0.4)], LowTail::None).is_err());
        assert!(ImaginaryAxisTable::new(&[(-1.0, 2.0), (2.0, 1.5)], LowTail::None).is_err());
    }

    proptest! {
        #[test]
        fn interpolant_is_monotone(steps in proptest::collection::vec((0.01f64..2.0, 0.0f64..3.0), 2..20), probe in 0.0f64..1.0) {
            let mut xi = 1e-2;
            let mut eps = 1.0 + steps.iter().map(|s| s.1).sum::<f64>();
            let mut pts = vec![(xi, eps)];
            for (dx, de) in &steps {
                xi *= 1.0 + dx;
                eps -= de;
                pts.push((xi, eps.max(1.0)));
            }
            let table = ImaginaryAxisTable::new(&pts, LowTail::None).unwrap();
            let (lo, hi) = table.xi_range();
            let a = lo * (hi / lo).powf(probe);
            let b = (a * 1.001).min(hi);
            let (ea, eb) = (table.evaluate(a).unwrap(), table.evaluate(b).unwrap());
            prop_assert!(eb <= ea + 1e-12);
            prop_assert!(ea >= 1.0);
        }
    }
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown atom `{name}` (available: {available})")]
    UnknownAtom { name: String, available: String },

    #[error("unknown material `{name}` (available: {available})")]
    UnknownMaterial { name: String, available: String },

    /// Frequency outside a tabulated grid that has no extrapolation rule.
    #[error("frequency {xi} eV outside tabulated range [{min}, {max}] eV")]
    OutOfRange { xi: f64, min: f64, max: f64 },

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    #[error("quadrature tolerance not reached: estimate {estimate:e}, abs error {abs_error:e}")]
    Quadrature { estimate: f64, abs_error: f64 },

    #[error("Matsubara sum not converged after {terms} terms (partial sum {partial_sum:e})")]
    NonConvergence { terms: usize, partial_sum: f64 },

    #[error("no crossover found on the separation grid: {0}")]
    CrossoverNotFound(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by a failing numerical procedure rather than by
    /// bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Quadrature { .. } | Error::NonConvergence { .. } | Error::CrossoverNotFound(_))
    }
}

//! Error type shared across the library.

/// Errors reported by family constructors, quadrature and the verification
/// engine.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The argument lies outside the mathematical domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A level value outside the family's valid `t`-range.
    #[error("level t = {t} outside valid range ({lo}, {hi})")]
    OutOfRange { t: f64, lo: f64, hi: f64 },

    /// Degree doubling did not bring the quadrature error estimate below the
    /// requested threshold.
    #[error("quadrature did not converge: err_est {err_est:e} for value {value:e}")]
    NonConvergence { value: f64, err_est: f64 },

    /// A check was requested on a configuration that violates its hypothesis
    /// (e.g. non-constant mean curvature ratio, or K + M < 0).
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),

    /// Invalid run configuration.
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

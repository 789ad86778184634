//! Crate-wide error type.
//!
//! Numerical failures are explicit: quadrature that cannot reach its
//! tolerance, brackets without sign changes, fixed-point iterations that
//! stall, and structurally invalid cells each carry enough context to
//! diagnose the offending input.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature exhausted its panel budget before reaching the
    /// requested tolerance.
    #[error(
        "quadrature did not converge on [{lo}, {hi}]: error estimate {error_estimate:e} \
         after {panels} panels (tolerance {tolerance:e})"
    )]
    QuadratureNonConvergence {
        lo: f64,
        hi: f64,
        error_estimate: f64,
        tolerance: f64,
        panels: usize,
    },

    /// Root bracket does not straddle a sign change.
    #[error("no sign change on bracket [{lo}, {hi}]: f(lo)={f_lo:e}, f(hi)={f_hi:e}")]
    BracketViolation { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    /// Bracketed root refinement exceeded its iteration budget.
    #[error("root refinement on [{lo}, {hi}] exceeded {max_iter} iterations")]
    RootNonConvergence { lo: f64, hi: f64, max_iter: usize },

    /// Damped fixed-point iteration exceeded its iteration budget.
    #[error(
        "fixed point did not converge after {iterations} iterations: \
         last iterate {last}, residual {residual:e}"
    )]
    FixedPointNonConvergence {
        last: f64,
        iterations: usize,
        residual: f64,
        /// Full iterate history, oldest first, for post-mortems.
        history: Vec<f64>,
    },

    /// A scan failed to isolate a zero or extremum where one was required.
    #[error("zero isolation failed on [{lo}, {hi}]: {detail}")]
    ZeroIsolation { lo: f64, hi: f64, detail: String },

    /// Query outside the range covered by a table.
    #[error("query t={value} outside table range [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    /// The ladder equation could not be bracketed (inconsistent `c0`
    /// or a corrupted second-moment value).
    #[error("ladder root bracketing failed at T={t}: {detail}")]
    LadderBracket { t: f64, detail: String },

    /// A deformed generator violated sign-fixedness or the single-extremum
    /// requirement on its cell.
    #[error("deformation rejected: {reason} (witness x={witness})")]
    DeformationRejected { reason: String, witness: f64 },

    /// A binary ladder table failed its header or layout check.
    #[error("ladder table format: {0}")]
    TableFormat(String),

    /// Malformed external zero list.
    #[error("zero ingestion: {0}")]
    ZeroIngestion(String),

    /// Configuration value out of its validated band.
    #[error("configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

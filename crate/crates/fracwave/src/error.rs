//! Error type shared by every numerical routine in the crate.
//!
//! Each variant is named after the failure it reports, and the `Display`
//! string starts with a stable kebab-case tag so CLI output and logs can be
//! grepped reliably.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An order parameter fell outside the interval a constructor admits.
    #[error("order-out-of-range: alpha = {alpha} is not in [{lo}, {hi}]")]
    OrderOutOfRange { alpha: f64, lo: f64, hi: f64 },

    /// A plain argument precondition was violated (non-finite input, t <= 0, ...).
    #[error("invalid-input: {0}")]
    InvalidInput(&'static str),

    /// A power-series term overflowed before the requested number of terms.
    #[error("series-domain-exceeded: term {k} overflows for argument {x}")]
    SeriesDomainExceeded { x: f64, k: usize },

    /// No evaluation strategy can deliver the documented accuracy here.
    #[error("accuracy-unattainable: alpha = {alpha}, x = {x}")]
    AccuracyUnattainable { alpha: f64, x: f64 },

    /// The requested series representation does not exist at this point.
    #[error("series-not-applicable: {0}")]
    SeriesNotApplicable(&'static str),

    /// The adaptive quadrature hit its subdivision budget; the partial value
    /// and its error estimate are carried along for diagnostics.
    #[error("quadrature-no-convergence: value = {value}, error estimate = {error_estimate}")]
    QuadratureNoConvergence { value: f64, error_estimate: f64 },

    /// A declared endpoint exponent implies a divergent improper integral.
    #[error("divergent-endpoint: {endpoint} exponent {exponent} makes the integral divergent")]
    DivergentEndpoint { endpoint: &'static str, exponent: f64 },

    /// A moment or Mellin order lies outside the finite-moment window.
    #[error("moment-out-of-range: beta = {beta} is outside ({lo}, {hi})")]
    MomentOutOfRange { beta: f64, lo: f64, hi: f64 },

    /// The quantity has no finite value at alpha = 1.
    #[error("undefined-at-alpha-1: {0}")]
    UndefinedAtAlphaOne(&'static str),

    /// The quantity degenerates at alpha = 1 (the maximum sits at x = 0).
    #[error("degenerate-at-alpha-1: {0}")]
    DegenerateAtAlphaOne(&'static str),

    /// A 1D search could not establish or keep a valid bracket.
    #[error("search-no-bracket: {0}")]
    SearchNoBracket(&'static str),

    /// A value to invert lies outside the achievable range.
    #[error("out-of-range: {0}")]
    OutOfRange(String),
}

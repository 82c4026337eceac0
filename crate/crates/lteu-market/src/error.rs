//! Error type shared by every solver and analysis routine in this crate.

use thiserror::Error;

/// Failure modes of market construction, equilibrium solving, and threshold
/// searches.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum MarketError {
    /// A parameter is outside its admissible range or fields contradict
    /// each other (e.g. an entrant regime with the wrong entrant count).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A band-sharing denominator vanished, so the requested quantity is
    /// unbounded (e.g. `1 - beta (1 - alpha) <= 0` with a nonzero
    /// unlicensed band, or an entrant sharing a fully claimed band).
    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),

    /// An iterative routine exhausted its iteration budget before meeting
    /// its tolerance.
    #[error("solver did not converge after {iterations} iterations: {context}")]
    SolverNoConverge { iterations: usize, context: String },

    /// The requested operation has no implementation for the supplied
    /// congestion/demand kinds (e.g. a closed form that requires linear
    /// congestion and linear demand).
    #[error("unsupported functions: {0}")]
    UnsupportedFunctions(String),

    /// A root or threshold search found no sign change over the supplied
    /// bracket. The endpoint values are reported for diagnosis.
    #[error("no sign change on bracket [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
}

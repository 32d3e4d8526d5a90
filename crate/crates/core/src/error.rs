//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A spec string did not match the grammar.
    #[error("parse error: {0}")]
    Parse(String),

    /// A density (or assembled Φ) decreases somewhere it must not.
    #[error("not monotone: {0}")]
    NotMonotone(String),

    /// An operation requiring a Young function was applied to a
    /// general nondecreasing one.
    #[error("not a Young function: {0}")]
    NotYoung(String),

    /// φ⁻¹ requested above the supremum of a bounded density.
    #[error("density inverse unbounded: level {level} exceeds sup φ = {sup}")]
    Unbounded { level: f64, sup: f64 },

    /// A weighted integral diverges; the payload names the failing region.
    #[error("divergent integral: {0}")]
    DivergentIntegral(String),

    /// The tail integral α (or β) defining a condition diverges.
    #[error("divergent condition integral: {0}")]
    DivergentAlpha(String),

    /// No finite k makes the modular finite, so the gauge is infinite.
    #[error("no finite gauge: {0}")]
    NoFiniteGauge(String),

    /// The primary and φ⁻¹-form evaluations of a condition disagree.
    #[error("incompatible condition forms: {0}")]
    IncompatibleForms(String),

    /// Parameters fit none of the Remark's sign regimes.
    #[error("regime unsupported: {0}")]
    RegimeUnsupported(String),

    /// Operator not admissible for the requested check.
    #[error("unsupported operator: {0}")]
    UnsupportedOperator(String),

    /// Factorial breakpoints exceed exact 64-bit float range.
    #[error("range error: {0}")]
    Range(String),

    /// Malformed run configuration.
    #[error("config error: {0}")]
    Config(String),

    /// Invalid argument outside the grammar-level errors above.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

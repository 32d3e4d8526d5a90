//! Numerical machinery for power-weighted Orlicz classes.
//!
//! The crate provides:
//!
//! - [`youngfn`]: construction, evaluation, inversion and conjugation of Young
//!   functions and general nondecreasing densities, plus the Δ₂ and s-convexity
//!   checks;
//! - [`funcspace`]: step functions, power weights, weighted modular integrals
//!   and the gauge functionals ρ and ρ^(s);
//! - [`operators`]: closed-form application of the dilation-commuting operators
//!   P_p, Q_q, I, M and H to step functions, with exact pointwise evaluation
//!   and quadrature of modulars of the outputs;
//! - [`conditions`]: mechanical checkers for the BK, A_φ, Δ₂, maximal-operator,
//!   Hilbert-transform and four-weight integral conditions, each with a
//!   minimal-constant search;
//! - [`verify`]: empirical verification of the gauge ⇔ modular equivalences on
//!   reproducible step-function corpora, and the exact piecewise reproduction
//!   of the log/factorial counterexample family.
//!
//! Everything is pure and deterministic: identical inputs (including seeds and
//! thread counts) produce identical outputs.

pub mod conditions;
pub mod error;
pub mod funcspace;
pub mod grid;
pub mod operators;
pub mod parallel;
pub mod quad;
pub mod report;
pub mod solve;
pub mod verify;
pub mod youngfn;

pub use error::{Error, Result};
pub use funcspace::{Domain, GaugeResult, PowerWeight, StepFunction};
pub use grid::LogGrid;
pub use youngfn::YoungFunction;

/// Version string embedded in every report for provenance.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

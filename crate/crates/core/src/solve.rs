//! Bisection on monotone maps: gauge roots and minimal-constant searches.

use crate::error::{Error, Result};

/// Outcome of a gauge root solve.
#[derive(Debug, Clone, Copy)]
pub struct RootResult {
    pub value: f64,
    pub bracket: (f64, f64),
    pub iterations: u32,
    /// |g(value) - 1| at the returned point.
    pub residual: f64,
}

/// Find the λ with `g(λ) = 1` for a strictly decreasing continuous `g` with
/// g(0⁺) = ∞ and g(∞) = 0.
///
/// Starts at λ = 1 and doubles/halves until the values straddle 1, then
/// bisects. The map is strictly decreasing, so bisection is globally
/// convergent; 200 iterations drive the bracket far below f64 resolution.
pub fn decreasing_root_at_one(g: impl Fn(f64) -> f64, max_iter: u32) -> Result<RootResult> {
    let mut lo = 1.0_f64; // g(lo) >= 1 wanted
    let mut hi = 1.0_f64; // g(hi) <= 1 wanted
    let v1 = g(1.0);
    if v1 >= 1.0 {
        // need hi with g(hi) <= 1
        let mut steps = 0;
        while g(hi) > 1.0 {
            hi *= 2.0;
            steps += 1;
            if steps > 4000 {
                return Err(Error::NoFiniteGauge(
                    "modular stays above 1 for all dilations".into(),
                ));
            }
        }
    } else {
        let mut steps = 0;
        while g(lo) < 1.0 {
            lo *= 0.5;
            steps += 1;
            if steps > 4000 {
                // g < 1 all the way down: infimum is 0
                return Ok(RootResult {
                    value: 0.0,
                    bracket: (0.0, 1.0),
                    iterations: steps,
                    residual: (g(f64::MIN_POSITIVE) - 1.0).abs(),
                });
            }
        }
    }
    let mut iterations = 0;
    while iterations < max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // bracket at float resolution
        }
        if g(mid) >= 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let value = 0.5 * (lo + hi);
    Ok(RootResult {
        value,
        bracket: (lo, hi),
        iterations,
        residual: (g(value) - 1.0).abs(),
    })
}

/// Result of a minimal-constant search over `[lo_cap, hi_cap]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MinC {
    /// Smallest C (to relative width `rel`) making the predicate true.
    Holds(f64),
    /// Predicate false even at the upper cap.
    CapExceeded,
}

/// Default search interval for condition constants.
pub const C_CAP_LO: f64 = 1e-6;
pub const C_CAP_HI: f64 = 1e8;
/// Relative width at which the C bisection stops.
pub const C_REL_WIDTH: f64 = 1e-6;

/// Bisect (in log scale) for the smallest C with `pred(C)` true.
///
/// `pred` must be monotone: once true it stays true for larger C. Callers
/// spot-check this (predicate at 2·c_min) when it matters.
pub fn minimal_c(pred: impl Fn(f64) -> bool, lo_cap: f64, hi_cap: f64) -> MinC {
    if !pred(hi_cap) {
        return MinC::CapExceeded;
    }
    if pred(lo_cap) {
        return MinC::Holds(lo_cap);
    }
    let mut lo = lo_cap.ln();
    let mut hi = hi_cap.ln();
    while (hi - lo) > C_REL_WIDTH {
        let mid = 0.5 * (lo + hi);
        if pred(mid.exp()) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    MinC::Holds(hi.exp())
}

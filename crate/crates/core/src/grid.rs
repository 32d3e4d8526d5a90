//! Logarithmic evaluation grids.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A log-spaced grid on `[lo, hi]`, the desk-scale surrogate for "all t > 0".
///
/// The default spans twelve decades with 241 points, which is dense enough
/// for the power and log families shipped with the crate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogGrid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Default for LogGrid {
    fn default() -> Self {
        LogGrid {
            lo: 1e-6,
            hi: 1e6,
            points: 241,
        }
    }
}

impl LogGrid {
    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::InvalidArgument(format!(
                "log grid needs 0 < lo < hi, got [{lo}, {hi}]"
            )));
        }
        if points < 3 {
            return Err(Error::InvalidArgument(format!(
                "log grid needs at least 3 points, got {points}"
            )));
        }
        Ok(LogGrid { lo, hi, points })
    }

    /// Grid values, ascending, endpoints included.
    pub fn values(&self) -> Vec<f64> {
        let (la, lb) = (self.lo.ln(), self.hi.ln());
        (0..self.points)
            .map(|i| {
                let s = i as f64 / (self.points - 1) as f64;
                (la + s * (lb - la)).exp()
            })
            .collect()
    }

    /// Grid values merged with extra breakpoints (sorted, deduplicated,
    /// restricted to values > 0). Used when an integrand has known kinks.
    pub fn values_with(&self, extra: &[f64]) -> Vec<f64> {
        let mut v = self.values();
        v.extend(extra.iter().copied().filter(|x| *x > 0.0));
        v.sort_by(|a, b| a.partial_cmp(b).expect("non-NaN grid"));
        v.dedup();
        v
    }

    /// Compact description for report metadata.
    pub fn describe(&self) -> String {
        format!("log[{:e}, {:e}] x {}", self.lo, self.hi, self.points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_spans_twelve_decades() {
        let g = LogGrid::default();
        let v = g.values();
        assert_eq!(v.len(), 241);
        assert!((v[0] - 1e-6).abs() < 1e-18);
        assert!((v[240] - 1e6).abs() < 1e-4);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_degenerate_ranges() {
        assert!(LogGrid::new(1.0, 1.0, 10).is_err());
        assert!(LogGrid::new(-1.0, 1.0, 10).is_err());
        assert!(LogGrid::new(0.1, 1.0, 2).is_err());
    }
}

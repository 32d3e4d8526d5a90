//! Step functions, power weights, weighted modulars, and the gauges ρ, ρ^(s).
//!
//! A step function is finitely many disjoint intervals with nonnegative
//! constant values (zero off the pieces, compact support). Together with
//! power weights w(x) = c·|x|^γ every modular in this module is an exact
//! finite sum Σ Φ(k·cᵢ)·μ_γ(pieceᵢ); gauges are then bracketed and bisected
//! on the strictly decreasing map λ ↦ modular(f/λ)·ε/λ.

use crate::error::{Error, Result};
use crate::solve;
use crate::youngfn::YoungFunction;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    #[serde(rename = "r+")]
    RPlus,
    R,
}

/// One constant piece: value `c` on the open interval (a, b).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    pieces: Vec<Piece>,
    domain: Domain,
}

impl StepFunction {
    pub fn new(domain: Domain, mut pieces: Vec<Piece>) -> Result<Self> {
        pieces.retain(|p| p.c != 0.0);
        pieces.sort_by(|p, q| p.a.partial_cmp(&q.a).expect("non-NaN endpoints"));
        for p in &pieces {
            if !(p.a.is_finite() && p.b.is_finite() && p.a < p.b) {
                return Err(Error::InvalidArgument(format!(
                    "piece needs finite a < b, got ({}, {})",
                    p.a, p.b
                )));
            }
            if !(p.c >= 0.0) || !p.c.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "piece value must be finite and ≥ 0, got {}",
                    p.c
                )));
            }
            if domain == Domain::RPlus && p.a < 0.0 {
                return Err(Error::InvalidArgument(
                    "pieces on ℝ₊ must satisfy a ≥ 0".into(),
                ));
            }
        }
        for w in pieces.windows(2) {
            if w[1].a < w[0].b {
                return Err(Error::InvalidArgument(format!(
                    "pieces overlap at ({}, {})",
                    w[1].a, w[0].b
                )));
            }
        }
        Ok(StepFunction { pieces, domain })
    }

    /// Indicator of the interval (a, b).
    pub fn indicator(domain: Domain, a: f64, b: f64) -> Self {
        StepFunction::new(domain, vec![Piece { a, b, c: 1.0 }]).expect("valid indicator")
    }

    pub fn zero(domain: Domain) -> Self {
        StepFunction {
            pieces: Vec::new(),
            domain,
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        for p in &self.pieces {
            if x > p.a && x < p.b {
                return p.c;
            }
        }
        0.0
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * self.pieces.len());
        for p in &self.pieces {
            v.push(p.a);
            v.push(p.b);
        }
        v.sort_by(|a, b| a.partial_cmp(b).expect("non-NaN"));
        v.dedup();
        v
    }

    /// ∫ f dx.
    pub fn total_mass(&self) -> f64 {
        self.pieces.iter().map(|p| p.c * (p.b - p.a)).sum()
    }

    pub fn sup(&self) -> f64 {
        self.pieces.iter().map(|p| p.c).fold(0.0, f64::max)
    }

    /// y ↦ f(λ y): pieces map to (a/λ, b/λ).
    pub fn dilate(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "dilation needs λ > 0, got {lambda}"
            )));
        }
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                a: p.a / lambda,
                b: p.b / lambda,
                c: p.c,
            })
            .collect();
        StepFunction::new(self.domain, pieces)
    }

    /// c·f (c ≥ 0).
    pub fn scale(&self, c: f64) -> Result<Self> {
        if !(c >= 0.0) {
            return Err(Error::InvalidArgument("scale needs c ≥ 0".into()));
        }
        if c == 0.0 {
            return Ok(StepFunction::zero(self.domain));
        }
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                a: p.a,
                b: p.b,
                c: p.c * c,
            })
            .collect();
        StepFunction::new(self.domain, pieces)
    }

    /// Pointwise sum by breakpoint overlay (exact, stays a step function).
    pub fn add(&self, other: &StepFunction) -> Result<Self> {
        let mut cuts = self.breakpoints();
        cuts.extend(other.breakpoints());
        cuts.sort_by(|a, b| a.partial_cmp(b).expect("non-NaN"));
        cuts.dedup();
        let mut pieces = Vec::new();
        for w in cuts.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let c = self.eval(mid) + other.eval(mid);
            if c > 0.0 {
                pieces.push(Piece {
                    a: w[0],
                    b: w[1],
                    c,
                });
            }
        }
        StepFunction::new(self.domain, pieces)
    }

    /// f restricted to (0, n) (the monotone-convergence truncation).
    pub fn truncate(&self, n: f64) -> Result<Self> {
        let pieces = self
            .pieces
            .iter()
            .filter(|p| p.a < n)
            .map(|p| Piece {
                a: p.a,
                b: p.b.min(n),
                c: p.c,
            })
            .collect();
        StepFunction::new(self.domain, pieces)
    }
}

/// Weight w(x) = coeff·|x|^γ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerWeight {
    pub gamma: f64,
    pub coeff: f64,
}

impl PowerWeight {
    pub fn new(gamma: f64, coeff: f64) -> Result<Self> {
        if !(coeff > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "weight needs finite γ and coeff > 0, got γ={gamma}, coeff={coeff}"
            )));
        }
        Ok(PowerWeight { gamma, coeff })
    }

    pub fn plain(gamma: f64) -> Self {
        PowerWeight { gamma, coeff: 1.0 }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeff * x.abs().powf(self.gamma)
    }

    /// μ_γ(a, b) = ∫ₐᵇ coeff·|x|^γ dx for a ≤ b; +∞ when the interval
    /// reaches 0 with γ ≤ -1.
    pub fn mu(&self, a: f64, b: f64) -> f64 {
        debug_assert!(a <= b);
        if a >= 0.0 {
            self.mu_positive(a, b)
        } else if b <= 0.0 {
            self.mu_positive(-b, -a)
        } else {
            self.mu_positive(0.0, -a) + self.mu_positive(0.0, b)
        }
    }

    fn mu_positive(&self, a: f64, b: f64) -> f64 {
        if a == b {
            return 0.0;
        }
        if self.gamma == -1.0 {
            if a == 0.0 {
                return f64::INFINITY;
            }
            return self.coeff * (b / a).ln();
        }
        let e1 = self.gamma + 1.0;
        if e1 < 0.0 && a == 0.0 {
            return f64::INFINITY;
        }
        let pa = if a == 0.0 { 0.0 } else { a.powf(e1) };
        self.coeff * (b.powf(e1) - pa) / e1
    }
}

/// Weighted modular ∫ Φ(k·|f|)·w dx, an exact finite sum for step f.
///
/// Pieces where Φ(k·c) = 0 contribute nothing even when their weighted
/// measure is infinite; a positive integrand on a piece of infinite measure
/// is a genuine divergence.
pub fn modular(y: &YoungFunction, f: &StepFunction, w: &PowerWeight, k: f64) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::InvalidArgument(format!("modular needs k > 0, got {k}")));
    }
    let mut total = 0.0;
    for p in f.pieces() {
        let v = y.big_phi(k * p.c);
        if v == 0.0 {
            continue;
        }
        let m = w.mu(p.a, p.b);
        if m.is_infinite() {
            return Err(Error::DivergentIntegral(format!(
                "piece ({}, {}) has infinite weighted measure (γ = {} ≤ -1 at 0)",
                p.a, p.b, w.gamma
            )));
        }
        total += v * m;
    }
    Ok(total)
}

/// Result of a gauge computation: the infimum λ, its final bracket, the
/// iteration count, and |modular at λ − 1|.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GaugeResult {
    pub value: f64,
    pub bracket: (f64, f64),
    pub iterations: u32,
    pub residual: f64,
}

const GAUGE_MAX_ITER: u32 = 200;

/// The gauge ρ_{Φ, εw}(f) = inf{λ > 0 : ∫ Φ(|f|/λ)·(ε/λ)·w ≤ 1}.
pub fn gauge(y: &YoungFunction, f: &StepFunction, w: &PowerWeight, eps: f64) -> Result<GaugeResult> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("gauge needs ε > 0, got {eps}")));
    }
    if f.is_zero() {
        return Ok(GaugeResult {
            value: 0.0,
            bracket: (0.0, 0.0),
            iterations: 0,
            residual: 0.0,
        });
    }
    let mus = piece_measures(f, w)?;
    let g = |lambda: f64| -> f64 {
        let mut s = 0.0;
        for (p, m) in f.pieces().iter().zip(&mus) {
            s += y.big_phi(p.c / lambda) * m;
        }
        s * eps / lambda
    };
    let root = solve::decreasing_root_at_one(g, GAUGE_MAX_ITER)?;
    Ok(GaugeResult {
        value: root.value,
        bracket: root.bracket,
        iterations: root.iterations,
        residual: root.residual,
    })
}

/// The s-homogeneous gauge ρ^(s): inf{λ : ∫ Φ(|f|/λ^{1/s}) dμ ≤ 1};
/// satisfies ρ^(s)(cf) = c^s ρ^(s)(f) exactly.
pub fn gauge_s(
    y: &YoungFunction,
    f: &StepFunction,
    mu: &PowerWeight,
    s: f64,
) -> Result<GaugeResult> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::InvalidArgument(format!("gauge_s needs s ∈ (0,1], got {s}")));
    }
    if f.is_zero() {
        return Ok(GaugeResult {
            value: 0.0,
            bracket: (0.0, 0.0),
            iterations: 0,
            residual: 0.0,
        });
    }
    let mus = piece_measures(f, mu)?;
    let g = |lambda: f64| -> f64 {
        let scale = lambda.powf(1.0 / s);
        f.pieces()
            .iter()
            .zip(&mus)
            .map(|(p, m)| y.big_phi(p.c / scale) * m)
            .sum()
    };
    let root = solve::decreasing_root_at_one(g, GAUGE_MAX_ITER)?;
    Ok(GaugeResult {
        value: root.value,
        bracket: root.bracket,
        iterations: root.iterations,
        residual: root.residual,
    })
}

fn piece_measures(f: &StepFunction, w: &PowerWeight) -> Result<Vec<f64>> {
    f.pieces()
        .iter()
        .map(|p| {
            let m = w.mu(p.a, p.b);
            if m.is_infinite() {
                Err(Error::DivergentIntegral(format!(
                    "piece ({}, {}) has infinite weighted measure for γ = {}",
                    p.a, p.b, w.gamma
                )))
            } else {
                Ok(m)
            }
        })
        .collect()
}

/// JSON wire format for step functions: a list of {"a", "b", "c"} records.
pub fn step_from_json(domain: Domain, text: &str) -> Result<StepFunction> {
    let pieces: Vec<Piece> = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("step function JSON: {e}")))?;
    StepFunction::new(domain, pieces)
}

pub fn step_to_json(f: &StepFunction) -> String {
    serde_json::to_string(f.pieces()).expect("serializable pieces")
}

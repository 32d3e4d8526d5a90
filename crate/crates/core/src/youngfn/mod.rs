//! Young functions and general nondecreasing densities.
//!
//! A function Φ here is always presented through its density φ ≥ 0,
//! Φ(t) = ∫₀ᵗ φ(s) ds, as validated monotone segments in closed form or as
//! the log/factorial counterexample family backed by [`chi::Chi`]. Φ, φ⁻¹ and
//! the complementary function Ψ evaluate symbolically on the shipped forms
//! (the one exception: generic power-log densities fall back to tight
//! quadrature), so downstream condition checks carry no quadrature error from
//! this module.
//!
//! The generalized inverse convention is φ⁻¹(s) = sup{t : φ(t) ≤ s}; flat
//! density stretches map to the right endpoint of their level set, and
//! sup ∅ = 0.

pub mod chi;
mod parse;

pub use parse::parse_young_spec;

use crate::error::{Error, Result};
use crate::grid::LogGrid;
use crate::quad;
use serde::Serialize;
use std::sync::Arc;

/// Δ₂ ratios above this on a grid count as blow-up; genuine Δ₂ families have
/// ratios ≤ 2^r for moderate r.
pub const DELTA2_BLOWUP: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Young,
    GeneralNondecreasing,
}

/// One validated monotone piece of a density.
#[derive(Debug, Clone)]
pub struct DensitySegment {
    pub lo: f64,
    /// Exclusive upper end; `f64::INFINITY` for the last segment.
    pub hi: f64,
    pub form: SegmentForm,
}

#[derive(Debug, Clone)]
pub enum SegmentForm {
    Constant(f64),
    Linear { slope: f64, intercept: f64 },
    /// coeff · t^exponent; the exponent may be negative (then the density
    /// decreases and the function is only admissible as general kind).
    Power { coeff: f64, exponent: f64 },
    /// coeff · t^exponent · ln(e + t)^log_power
    PowerLog { coeff: f64, exponent: f64, log_power: f64 },
    /// coeff · e^{rate t}
    Exp { coeff: f64, rate: f64 },
}

impl SegmentForm {
    fn eval(&self, t: f64) -> f64 {
        match *self {
            SegmentForm::Constant(c) => c,
            SegmentForm::Linear { slope, intercept } => slope * t + intercept,
            SegmentForm::Power { coeff, exponent } => {
                if t == 0.0 && exponent == 0.0 {
                    coeff
                } else {
                    coeff * t.powf(exponent)
                }
            }
            SegmentForm::PowerLog {
                coeff,
                exponent,
                log_power,
            } => coeff * t.powf(exponent) * (std::f64::consts::E + t).ln().powf(log_power),
            SegmentForm::Exp { coeff, rate } => coeff * (rate * t).exp(),
        }
    }

    /// Exact ∫ₐᵇ of the form where a closed antiderivative exists; generic
    /// power-log pieces integrate by quadrature at 1e-13 relative.
    fn integral(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        match *self {
            SegmentForm::Constant(c) => c * (b - a),
            SegmentForm::Linear { slope, intercept } => {
                0.5 * slope * (b * b - a * a) + intercept * (b - a)
            }
            SegmentForm::Power { coeff, exponent } => {
                if exponent == -1.0 {
                    coeff * (b / a).ln()
                } else {
                    let e1 = exponent + 1.0;
                    let pa = if a == 0.0 { 0.0 } else { a.powf(e1) };
                    coeff * (b.powf(e1) - pa) / e1
                }
            }
            SegmentForm::PowerLog {
                coeff,
                exponent,
                log_power,
            } => {
                if log_power == 0.0 {
                    return SegmentForm::Power { coeff, exponent }.integral(a, b);
                }
                if exponent == 1.0 && log_power == 1.0 {
                    // ∫ s ln(e+s) ds = ((s²-e²)/2) ln(e+s) - s²/4 + es/2
                    let e = std::f64::consts::E;
                    let f = |s: f64| {
                        0.5 * (s * s - e * e) * (e + s).ln() - 0.25 * s * s + 0.5 * e * s
                    };
                    return coeff * (f(b) - f(a));
                }
                let r = quad::tanh_sinh(
                    |x, _, _| x.powf(exponent) * (std::f64::consts::E + x).ln().powf(log_power),
                    a,
                    b,
                    1e-300,
                    1e-13,
                );
                coeff * r.value
            }
            SegmentForm::Exp { coeff, rate } => {
                let top = (rate * b).exp();
                let bot = (rate * a).exp();
                coeff * (top - bot) / rate
            }
        }
    }

    /// Is the form nondecreasing on [lo, hi)?
    fn nondecreasing_on(&self, lo: f64, hi: f64) -> bool {
        match *self {
            SegmentForm::Constant(c) => c >= 0.0,
            SegmentForm::Linear { slope, intercept } => slope >= 0.0 && intercept + slope * lo >= 0.0,
            SegmentForm::Power { coeff, exponent } => coeff >= 0.0 && exponent >= 0.0,
            SegmentForm::PowerLog {
                coeff,
                exponent,
                log_power,
            } => {
                // d/dt [t^e ln(e+t)^a] ≥ 0 when e ≥ 0, a ≥ 0
                let _ = (lo, hi);
                coeff >= 0.0 && exponent >= 0.0 && log_power >= 0.0
            }
            SegmentForm::Exp { coeff, rate } => coeff >= 0.0 && rate >= 0.0,
        }
    }

    /// Is the form nonnegative on [lo, hi) (so that Φ is nondecreasing)?
    fn nonnegative_on(&self, lo: f64, hi: f64) -> bool {
        match *self {
            SegmentForm::Constant(c) => c >= 0.0,
            SegmentForm::Linear { slope, intercept } => {
                intercept + slope * lo >= 0.0
                    && (hi.is_infinite() && slope >= 0.0
                        || !hi.is_infinite() && intercept + slope * hi >= 0.0
                        || slope >= 0.0)
            }
            SegmentForm::Power { coeff, .. } => coeff >= 0.0,
            SegmentForm::PowerLog { coeff, .. } => coeff >= 0.0,
            SegmentForm::Exp { coeff, .. } => coeff >= 0.0,
        }
    }

    /// Largest t in [lo, hi] with form(t) ≤ s, assuming the form is
    /// nondecreasing and form(lo) ≤ s. Returns hi when the whole segment
    /// stays at or below s.
    fn inv_within(&self, lo: f64, hi: f64, s: f64) -> f64 {
        match *self {
            SegmentForm::Constant(c) => {
                if c <= s {
                    hi
                } else {
                    lo
                }
            }
            SegmentForm::Linear { slope, intercept } => {
                if slope == 0.0 {
                    return if intercept <= s { hi } else { lo };
                }
                ((s - intercept) / slope).clamp(lo, hi)
            }
            SegmentForm::Power { coeff, exponent } => {
                if exponent == 0.0 {
                    return if coeff <= s { hi } else { lo };
                }
                if s <= 0.0 {
                    return lo;
                }
                (s / coeff).powf(1.0 / exponent).clamp(lo, hi)
            }
            SegmentForm::Exp { coeff, rate } => {
                if s <= 0.0 {
                    return lo;
                }
                ((s / coeff).ln() / rate).clamp(lo, hi)
            }
            SegmentForm::PowerLog {
                coeff,
                exponent,
                log_power,
            } => {
                // no elementary inverse: guarded Newton from a power-law
                // seed, log-bisection as the safety net
                if self.eval(hi.min(1e300)) <= s {
                    return hi;
                }
                if s <= 0.0 || self.eval(lo.max(1e-300)) > s {
                    return lo;
                }
                let mut la = lo.max(1e-300).ln();
                let mut lb = hi.min(1e300).ln();
                let e = std::f64::consts::E;
                let mut x = if exponent > 0.0 {
                    (s / coeff).powf(1.0 / exponent).clamp(la.exp(), lb.exp())
                } else {
                    1.0
                };
                for _ in 0..60 {
                    let lx = (e + x).ln();
                    let fx = coeff * x.powf(exponent) * lx.powf(log_power);
                    if fx <= s {
                        la = la.max(x.ln());
                    } else {
                        lb = lb.min(x.ln());
                    }
                    let rel = (fx - s).abs();
                    if rel <= 1e-15 * s {
                        break;
                    }
                    let dfx = coeff
                        * (exponent * x.powf(exponent - 1.0) * lx.powf(log_power)
                            + x.powf(exponent) * log_power * lx.powf(log_power - 1.0) / (e + x));
                    let step = (fx - s) / dfx;
                    let xn = x - step;
                    if dfx > 0.0 && xn.is_finite() && xn.ln() > la && xn.ln() < lb {
                        x = xn;
                    } else {
                        // fall back to a bisection step in log scale
                        let m = 0.5 * (la + lb);
                        if m <= la || m >= lb {
                            break;
                        }
                        x = m.exp();
                    }
                }
                x.clamp(lo, hi)
            }
        }
    }
}

/// Internal representation of a Young (or general nondecreasing) function.
#[derive(Debug, Clone)]
enum Repr {
    Segments(Vec<DensitySegment>),
    /// Counterexample family: density φ(t) = χ⁻¹(t)^{-γ}, density inverse
    /// φ⁻¹(v) = χ(v^{-1/γ}). All evaluations are exact piecewise forms.
    Appendix2 { gamma: f64, chi: Arc<chi::Chi> },
    /// The complementary function of `inner`: density φ_inner⁻¹, with
    /// Φ = Ψ_inner evaluated through the conjugacy identity.
    Conjugate(Box<YoungFunction>),
}

/// Structural view used by condition checkers to pick exact closed forms.
#[derive(Debug, Clone, Copy)]
pub enum FamilyView<'a> {
    /// Φ(t) = t^r / r
    Power { r: f64 },
    /// density s^{r-1} ln(e+s)^a
    PowerLog { r: f64, a: f64 },
    /// Φ(t) = e^t - 1
    Expm1,
    /// counterexample family with its built-in exponent
    Appendix2 { gamma: f64, chi: &'a chi::Chi },
    /// complementary of the wrapped function
    Conjugate(&'a YoungFunction),
    /// anything else assembled from segments
    Other,
}

#[derive(Debug, Clone)]
pub struct YoungFunction {
    kind: Kind,
    repr: Repr,
    spec: String,
    density_monotone: bool,
    /// cumulative ∫₀^{lo_i} φ per segment (empty for non-segment reprs)
    cum: Vec<f64>,
}

impl YoungFunction {
    pub(crate) fn from_segments(spec: &str, segments: Vec<DensitySegment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Parse("density needs at least one segment".into()));
        }
        let mut prev_hi = 0.0;
        for seg in &segments {
            if seg.lo != prev_hi {
                return Err(Error::Parse(format!(
                    "segments must be contiguous from 0; gap at {}",
                    seg.lo
                )));
            }
            if !(seg.hi > seg.lo) {
                return Err(Error::Parse("segment must have positive length".into()));
            }
            if !seg.form.nonnegative_on(seg.lo, seg.hi) {
                return Err(Error::NotMonotone(
                    "density is negative somewhere, so Φ would decrease".into(),
                ));
            }
            prev_hi = seg.hi;
        }
        if prev_hi.is_finite() {
            return Err(Error::Parse("last segment must extend to infinity".into()));
        }
        // density monotone: each form nondecreasing and joins nondecreasing
        let mut density_monotone = true;
        for seg in &segments {
            if !seg.form.nondecreasing_on(seg.lo, seg.hi) {
                density_monotone = false;
            }
        }
        for w in segments.windows(2) {
            let end = w[0].form.eval(w[1].lo);
            let start = w[1].form.eval(w[1].lo);
            if start < end - 1e-12 * end.abs().max(1.0) {
                density_monotone = false;
            }
        }
        let phi0 = segments[0].form.eval(0.0);
        let unbounded = match segments.last().map(|s| &s.form) {
            Some(SegmentForm::Constant(_)) => false,
            Some(SegmentForm::Linear { slope, .. }) => *slope > 0.0,
            Some(SegmentForm::Power { coeff, exponent }) => *coeff > 0.0 && *exponent > 0.0,
            Some(SegmentForm::PowerLog {
                coeff,
                exponent,
                log_power,
            }) => *coeff > 0.0 && (*exponent > 0.0 || (*exponent == 0.0 && *log_power > 0.0)),
            Some(SegmentForm::Exp { coeff, rate }) => *coeff > 0.0 && *rate > 0.0,
            None => false,
        };
        let kind = if density_monotone && phi0 == 0.0 && unbounded {
            Kind::Young
        } else {
            Kind::GeneralNondecreasing
        };
        let mut cum = Vec::with_capacity(segments.len());
        let mut acc = 0.0;
        for seg in &segments {
            cum.push(acc);
            if seg.hi.is_finite() {
                acc += seg.form.integral(seg.lo, seg.hi);
            }
        }
        Ok(YoungFunction {
            kind,
            repr: Repr::Segments(segments),
            spec: spec.to_string(),
            density_monotone,
            cum,
        })
    }

    pub(crate) fn appendix2(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0) {
            return Err(Error::Parse(format!(
                "appendix2 family needs gamma > 0, got {gamma}"
            )));
        }
        Ok(YoungFunction {
            kind: Kind::Young,
            repr: Repr::Appendix2 {
                gamma,
                chi: Arc::new(chi::Chi::new()),
            },
            spec: format!("appendix2:gamma={gamma}"),
            density_monotone: true,
            cum: Vec::new(),
        })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn spec_str(&self) -> &str {
        &self.spec
    }

    pub fn family(&self) -> FamilyView<'_> {
        match &self.repr {
            Repr::Appendix2 { gamma, chi } => FamilyView::Appendix2 {
                gamma: *gamma,
                chi,
            },
            Repr::Conjugate(inner) => FamilyView::Conjugate(inner),
            Repr::Segments(segs) => {
                if segs.len() == 1 {
                    match segs[0].form {
                        SegmentForm::Power { coeff, exponent } => {
                            let r = exponent + 1.0;
                            if (coeff - 1.0).abs() < 1e-15 {
                                return FamilyView::Power { r };
                            }
                        }
                        SegmentForm::PowerLog {
                            coeff,
                            exponent,
                            log_power,
                        } => {
                            if (coeff - 1.0).abs() < 1e-15 {
                                return FamilyView::PowerLog {
                                    r: exponent + 1.0,
                                    a: log_power,
                                };
                            }
                        }
                        SegmentForm::Exp { coeff, rate } => {
                            if (coeff - 1.0).abs() < 1e-15 && (rate - 1.0).abs() < 1e-15 {
                                return FamilyView::Expm1;
                            }
                        }
                        _ => {}
                    }
                }
                FamilyView::Other
            }
        }
    }

    pub fn require_young(&self) -> Result<()> {
        if self.kind == Kind::Young {
            Ok(())
        } else {
            Err(Error::NotYoung(format!(
                "'{}' is general nondecreasing (φ(0⁺) ≠ 0 or bounded or non-monotone density)",
                self.spec
            )))
        }
    }

    /// Density value φ(t) (right-continuous at joins).
    pub fn phi(&self, t: f64) -> f64 {
        match &self.repr {
            Repr::Segments(segs) => {
                let i = segs.partition_point(|s| s.hi <= t).min(segs.len() - 1);
                segs[i].form.eval(t)
            }
            Repr::Appendix2 { gamma, chi } => {
                if t <= 0.0 {
                    return 0.0;
                }
                let y = chi.inv(t);
                if y.is_infinite() {
                    0.0
                } else {
                    y.powf(-gamma)
                }
            }
            Repr::Conjugate(inner) => inner.phi_inv(t).unwrap_or(f64::INFINITY),
        }
    }

    /// Φ(t) = ∫₀ᵗ φ, exact per piece; Φ(0) = 0.
    pub fn big_phi(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match &self.repr {
            Repr::Segments(segs) => {
                let i = segs.partition_point(|s| s.hi <= t).min(segs.len() - 1);
                self.cum[i] + segs[i].form.integral(segs[i].lo, t)
            }
            Repr::Appendix2 { gamma, chi } => appendix2_big_phi(chi, *gamma, t),
            Repr::Conjugate(inner) => inner.psi(t).unwrap_or(f64::INFINITY),
        }
    }

    /// sup φ for a bounded density, +∞ otherwise.
    fn density_sup(&self) -> f64 {
        match &self.repr {
            Repr::Segments(segs) => {
                let last = segs.last().expect("nonempty");
                if last.hi.is_infinite() {
                    match last.form {
                        SegmentForm::Constant(c) => c,
                        _ => {
                            if last.form.nondecreasing_on(last.lo, last.hi) {
                                f64::INFINITY
                            } else {
                                // decreasing tail: sup over segments is at some
                                // join; scan starts of segments
                                segs.iter()
                                    .map(|s| s.form.eval(s.lo).max(s.form.eval(s.hi.min(1e300))))
                                    .fold(0.0, f64::max)
                            }
                        }
                    }
                } else {
                    f64::INFINITY
                }
            }
            _ => f64::INFINITY,
        }
    }

    /// Generalized inverse φ⁻¹(s) = sup{t : φ(t) ≤ s}; sup ∅ = 0.
    ///
    /// Errors with [`Error::Unbounded`] when s reaches the supremum of a
    /// bounded density (the level set is all of ℝ₊), and with
    /// [`Error::NotMonotone`] when the density is not nondecreasing (the
    /// level sets are not intervals and the inverse is meaningless).
    pub fn phi_inv(&self, s: f64) -> Result<f64> {
        if !self.density_monotone {
            return Err(Error::NotMonotone(format!(
                "'{}' has a decreasing density; φ⁻¹ undefined",
                self.spec
            )));
        }
        match &self.repr {
            Repr::Segments(segs) => {
                let sup = self.density_sup();
                if sup.is_finite() && s >= sup {
                    return Err(Error::Unbounded { level: s, sup });
                }
                let mut result = 0.0;
                for seg in segs {
                    let start = seg.form.eval(seg.lo);
                    if start > s {
                        break;
                    }
                    let hi_val = if seg.hi.is_finite() {
                        seg.form.eval(seg.hi)
                    } else {
                        match seg.form {
                            SegmentForm::Constant(c) => c,
                            _ => f64::INFINITY,
                        }
                    };
                    if hi_val <= s {
                        result = seg.hi;
                    } else {
                        result = seg.form.inv_within(seg.lo, seg.hi, s);
                        break;
                    }
                }
                Ok(result)
            }
            Repr::Appendix2 { gamma, chi } => {
                if s <= 0.0 {
                    return Ok(0.0);
                }
                Ok(chi.eval(s.powf(-1.0 / gamma)))
            }
            Repr::Conjugate(inner) => Ok(inner.phi(s)),
        }
    }

    /// Complementary function Ψ(t) = ∫₀ᵗ φ⁻¹, via the conjugacy identity
    /// Ψ(t) = t·φ⁻¹(t) − Φ(φ⁻¹(t)) (exact for convex Φ); the counterexample
    /// family instead integrates its closed-form inverse piecewise.
    pub fn psi(&self, t: f64) -> Result<f64> {
        if t <= 0.0 {
            return Ok(0.0);
        }
        if !self.density_monotone {
            return Err(Error::NotMonotone(format!(
                "'{}' has a decreasing density; Ψ undefined",
                self.spec
            )));
        }
        match &self.repr {
            Repr::Appendix2 { gamma, chi } => Ok(chi.comp_power_integral(-1.0 / gamma, t)),
            Repr::Conjugate(inner) => Ok(inner.big_phi(t)),
            Repr::Segments(_) => match self.phi_inv(t) {
                Ok(x) => Ok(t * x - self.big_phi(x)),
                Err(Error::Unbounded { .. }) => Ok(f64::INFINITY),
                Err(e) => Err(e),
            },
        }
    }

    /// The complementary Young function as a value of its own.
    pub fn complementary(&self) -> Result<YoungFunction> {
        self.require_young()?;
        match &self.repr {
            Repr::Conjugate(inner) => Ok((**inner).clone()),
            Repr::Segments(segs) => {
                // pure powers invert in closed form and stay self-representable
                if segs.len() == 1 {
                    if let SegmentForm::Power { coeff, exponent } = segs[0].form {
                        if exponent > 0.0 {
                            let inv_exp = 1.0 / exponent;
                            let inv_coeff = coeff.powf(-inv_exp);
                            let mut y = YoungFunction::from_segments(
                                &format!("conjugate({})", self.spec),
                                vec![DensitySegment {
                                    lo: 0.0,
                                    hi: f64::INFINITY,
                                    form: SegmentForm::Power {
                                        coeff: inv_coeff,
                                        exponent: inv_exp,
                                    },
                                }],
                            )?;
                            y.spec = format!("conjugate({})", self.spec);
                            return Ok(y);
                        }
                    }
                }
                Ok(self.wrap_conjugate())
            }
            Repr::Appendix2 { .. } => Ok(self.wrap_conjugate()),
        }
    }

    fn wrap_conjugate(&self) -> YoungFunction {
        YoungFunction {
            kind: Kind::Young,
            repr: Repr::Conjugate(Box::new(self.clone())),
            spec: format!("conjugate({})", self.spec),
            density_monotone: true,
            cum: Vec::new(),
        }
    }

    /// Exact growth order of Φ at 0: lim_{u→0} ln Φ(u) / ln u.
    pub fn order_at_zero(&self) -> f64 {
        match &self.repr {
            Repr::Appendix2 { .. } => f64::INFINITY,
            Repr::Conjugate(inner) => conjugate_order(inner.order_at_zero()),
            Repr::Segments(segs) => match segs[0].form {
                SegmentForm::Constant(c) => {
                    if c > 0.0 {
                        1.0
                    } else {
                        f64::INFINITY
                    }
                }
                SegmentForm::Linear { intercept, .. } => {
                    if intercept > 0.0 {
                        1.0
                    } else {
                        2.0
                    }
                }
                SegmentForm::Power { exponent, .. } => exponent + 1.0,
                SegmentForm::PowerLog { exponent, .. } => exponent + 1.0,
                SegmentForm::Exp { .. } => 1.0,
            },
        }
    }

    /// Exact growth order of Φ at ∞ (∞ for exponential-type growth).
    pub fn order_at_inf(&self) -> f64 {
        match &self.repr {
            Repr::Appendix2 { .. } => f64::INFINITY,
            Repr::Conjugate(inner) => conjugate_order(inner.order_at_inf()),
            Repr::Segments(segs) => match segs.last().expect("nonempty").form {
                SegmentForm::Constant(_) => 1.0,
                SegmentForm::Linear { slope, .. } => {
                    if slope > 0.0 {
                        2.0
                    } else {
                        1.0
                    }
                }
                SegmentForm::Power { exponent, .. } => exponent + 1.0,
                SegmentForm::PowerLog { exponent, .. } => exponent + 1.0,
                SegmentForm::Exp { .. } => f64::INFINITY,
            },
        }
    }

    /// Breakpoints worth adding to evaluation grids (the factorial
    /// breakpoints of the counterexample family; empty otherwise).
    pub fn suggested_breakpoints(&self) -> Vec<f64> {
        match &self.repr {
            Repr::Appendix2 { chi, .. } => {
                let mut v = Vec::new();
                for k in 0..=chi::KMAX_EXACT {
                    v.push(chi.a(k));
                    v.push(chi.a(k) + 1.0);
                }
                v
            }
            Repr::Conjugate(inner) => inner.suggested_breakpoints(),
            Repr::Segments(_) => Vec::new(),
        }
    }

    /// Does ∫₀ φ⁻¹(s^{-γ}) ds converge at 0? Exact boundary per family.
    pub fn inv_comp_integrable(&self, gamma: f64) -> bool {
        if gamma <= 0.0 {
            // argument bounded near 0, inverse bounded on (0, t]
            return true;
        }
        match self.family() {
            FamilyView::Power { r } => gamma < r - 1.0,
            FamilyView::PowerLog { r, a } => {
                gamma < r - 1.0 || (gamma == r - 1.0 && a > r - 1.0)
            }
            FamilyView::Expm1 => true,
            FamilyView::Appendix2 { .. } => true,
            FamilyView::Conjugate(inner) => {
                // φ⁻¹ of the conjugate is the inner density φ: ∫₀ φ(s^{-γ})
                // converges iff γ·(order of φ at ∞) < 1.
                let rho = inner.order_at_inf();
                if rho.is_infinite() {
                    false
                } else {
                    gamma * (rho - 1.0) < 1.0
                }
            }
            FamilyView::Other => {
                // bounded densities: φ⁻¹ blows past sup φ; reject
                !self.density_sup().is_finite()
            }
        }
    }

    /// ∫₀ᵗ φ⁻¹(s^{-γ}) ds, exact for power / expm1 / counterexample
    /// families, quadrature otherwise.
    pub fn phi_inv_comp_integral(&self, gamma: f64, t: f64) -> Result<f64> {
        if t <= 0.0 {
            return Ok(0.0);
        }
        if !self.inv_comp_integrable(gamma) {
            return Err(Error::DivergentIntegral(format!(
                "∫₀ φ⁻¹(s^-{gamma}) diverges near 0 for '{}'",
                self.spec
            )));
        }
        match self.family() {
            FamilyView::Power { r } => {
                let q = gamma / (r - 1.0);
                Ok(t.powf(1.0 - q) / (1.0 - q))
            }
            FamilyView::Appendix2 { gamma: g, chi } => {
                if gamma == 0.0 {
                    return Ok(t); // φ⁻¹(1) = χ(1) = 1
                }
                Ok(chi.comp_power_integral(gamma / g, t))
            }
            FamilyView::Expm1 => {
                // φ⁻¹(v) = max(ln v, 0)
                if gamma == 0.0 {
                    return Ok(0.0);
                }
                if gamma > 0.0 {
                    let m = t.min(1.0);
                    Ok(gamma * (m - m * m.ln()))
                } else {
                    // s^{-γ} ≥ 1 only for s ≥ 1
                    if t <= 1.0 {
                        return Ok(0.0);
                    }
                    let g = -gamma;
                    Ok(g * (t * t.ln() - t + 1.0))
                }
            }
            _ => {
                let r = quad::tanh_sinh(
                    |s, _, _| {
                        self.phi_inv(s.powf(-gamma))
                            .unwrap_or(f64::INFINITY)
                    },
                    0.0,
                    t,
                    1e-300,
                    1e-11,
                );
                Ok(r.value)
            }
        }
    }
}

pub(crate) fn conjugate_order(r: f64) -> f64 {
    if r.is_infinite() {
        1.0
    } else if r <= 1.0 {
        f64::INFINITY
    } else {
        r / (r - 1.0)
    }
}

/// Φ of the counterexample family: ∫₀ᵗ χ⁻¹(u)^{-γ} du, closed form per piece.
fn appendix2_big_phi(chi: &chi::Chi, gamma: f64, t: f64) -> f64 {
    // pieces of χ⁻¹ over u: [2^{-k-1}, 2^{-k}) ramps, plus e^{1-u} for u ≥ 1
    let ramp_piece = |k: i32, u_lo: f64, u_hi: f64| -> f64 {
        // χ⁻¹(u) = a_k + 2 - 2^{k+1} u on the ramp
        let ak = chi.a(k as usize);
        let scale = 2.0f64.powi(k + 1);
        let z_at = |u: f64| ak + 2.0 - scale * u;
        let (z_hi, z_lo) = (z_at(u_lo), z_at(u_hi)); // z decreasing in u
        // ∫ z^{-γ} du = (1/scale) ∫ z^{-γ} dz over [z_lo, z_hi]
        if gamma == 1.0 {
            (z_hi / z_lo).ln() / scale
        } else {
            (z_hi.powf(1.0 - gamma) - z_lo.powf(1.0 - gamma)) / ((1.0 - gamma) * scale)
        }
    };
    let mut total = 0.0;
    if t > 1.0 {
        // χ⁻¹(u) = e^{1-u}: integrand e^{γ(u-1)}
        total += (((t - 1.0) * gamma).exp() - 1.0) / gamma;
    }
    let top = t.min(1.0);
    // accumulate ramps from the top down until contributions vanish
    let mut k: i32 = {
        let e = top.log2().floor();
        (-e as i32 - 1).max(0)
    };
    // the piece containing `top` may be partial
    loop {
        if k as usize >= 159 {
            break;
        }
        let u_hi_full = 0.5f64.powi(k);
        let u_lo = 0.5f64.powi(k + 1);
        let u_hi = u_hi_full.min(top);
        if u_hi <= u_lo {
            k += 1;
            continue;
        }
        let piece = ramp_piece(k, u_lo, u_hi);
        total += piece;
        if piece < 1e-17 * total.abs() + 1e-300 {
            break;
        }
        k += 1;
    }
    total
}

/// Outcome of a Δ₂ grid check.
#[derive(Debug, Clone, Serialize)]
pub struct Delta2Report {
    pub status: Delta2Status,
    pub c_min: Option<f64>,
    pub witness_t: Option<f64>,
    pub grid: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Delta2Status {
    Holds,
    Fails,
}

/// Grid check of Φ(2t) ≤ C Φ(t): c_min is the maximal ratio when it stays
/// below the blow-up threshold, otherwise the argmax witnesses failure.
pub fn check_delta2(y: &YoungFunction, grid: &LogGrid) -> Delta2Report {
    let mut worst = 0.0f64;
    let mut worst_t = None;
    let mut blown = None;
    for t in grid.values() {
        let p1 = y.big_phi(t);
        let p2 = y.big_phi(2.0 * t);
        if p1 == 0.0 || (p1.is_infinite() && p2.is_infinite()) {
            continue;
        }
        let ratio = p2 / p1;
        if !ratio.is_finite() || ratio > DELTA2_BLOWUP {
            blown = Some(t);
            break;
        }
        if ratio > worst {
            worst = ratio;
            worst_t = Some(t);
        }
    }
    match blown {
        Some(t) => Delta2Report {
            status: Delta2Status::Fails,
            c_min: None,
            witness_t: Some(t),
            grid: grid.describe(),
        },
        None => Delta2Report {
            status: Delta2Status::Holds,
            c_min: Some(worst),
            witness_t: worst_t,
            grid: grid.describe(),
        },
    }
}

/// Outcome of an s-convexity sampling check.
#[derive(Debug, Clone, Serialize)]
pub struct SConvexReport {
    pub holds: bool,
    /// Minimal slack α^sΦ(x)+β^sΦ(y)−Φ(αx+βy) over the samples (≥ 0 when
    /// the property holds).
    pub worst_slack: f64,
    pub witness: Option<(f64, f64, f64, f64)>,
    pub samples: usize,
}

/// Verify Φ(αx+βy) ≤ α^s Φ(x) + β^s Φ(y) over sampled tuples with
/// α^s + β^s = 1.
pub fn check_s_convex(y: &YoungFunction, s: f64, grid: &LogGrid) -> Result<SConvexReport> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::InvalidArgument(format!("s must be in (0,1], got {s}")));
    }
    let xs = grid.values();
    let weights: Vec<f64> = (1..10).map(|i| i as f64 / 10.0).collect();
    let mut worst = f64::INFINITY;
    let mut witness = None;
    let mut samples = 0;
    for &u in &weights {
        let alpha = u.powf(1.0 / s);
        let beta = (1.0 - u).powf(1.0 / s);
        for (i, &x) in xs.iter().enumerate().step_by(8) {
            for &yv in xs.iter().skip(i % 8).step_by(8) {
                let lhs = y.big_phi(alpha * x + beta * yv);
                let rhs = u * y.big_phi(x) + (1.0 - u) * y.big_phi(yv);
                if !lhs.is_finite() || !rhs.is_finite() {
                    continue;
                }
                let slack = rhs - lhs;
                samples += 1;
                let scale = rhs.abs().max(1e-300);
                if slack / scale < worst {
                    worst = slack / scale;
                    witness = Some((alpha, beta, x, yv));
                }
            }
        }
    }
    let holds = worst >= -1e-9;
    Ok(SConvexReport {
        holds,
        worst_slack: worst,
        witness: if holds { None } else { witness },
        samples,
    })
}

#[cfg(test)]
mod tests;

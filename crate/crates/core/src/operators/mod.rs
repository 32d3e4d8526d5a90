//! The dilation-commuting operators P_p, Q_q, I, M, H on step functions.
//!
//! Outputs are exact piecewise closed forms (constants, powers of x, and
//! log|x − b| terms), so pointwise evaluation is exact and downstream
//! weighted modulars only pay quadrature error once, here, at a controlled
//! tolerance. The maximal function is not a closed form but an exact
//! pointwise optimizer: for step data the interval average is a monotone
//! Möbius ratio in each endpoint, so the supremum is attained with both
//! endpoints among breakpoints(f) ∪ {x} and O(n²) enumeration is exact.

use crate::error::{Error, Result};
use crate::funcspace::{Domain, PowerWeight, StepFunction};
use crate::quad;
use crate::youngfn::YoungFunction;

/// One additive term of a closed-form piece.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Term {
    Const(f64),
    /// coeff · x^exponent (evaluated for x > 0 only; all power-bearing
    /// operators act on ℝ₊)
    Power { coeff: f64, exponent: f64 },
    /// coeff · ln|x − center|
    LogAbs { coeff: f64, center: f64 },
}

#[derive(Debug, Clone)]
pub struct PcfPiece {
    pub lo: f64,
    pub hi: f64,
    pub terms: Vec<Term>,
}

/// Symbolic operator output: pieces covering the domain, each a small sum
/// of closed-form terms. Evaluation at a non-breakpoint is finite; at a log
/// center it saturates to a signed infinity, which quadrature never samples.
#[derive(Debug, Clone)]
pub struct PiecewiseClosedForm {
    pieces: Vec<PcfPiece>,
    domain: Domain,
}

impl PiecewiseClosedForm {
    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn pieces(&self) -> &[PcfPiece] {
        &self.pieces
    }

    /// Interior finite piece boundaries (the only candidate singular points).
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .pieces
            .iter()
            .flat_map(|p| [p.lo, p.hi])
            .filter(|x| x.is_finite())
            .collect();
        v.sort_by(|a, b| a.partial_cmp(b).expect("non-NaN"));
        v.dedup();
        v
    }

    fn piece_at(&self, x: f64) -> Option<&PcfPiece> {
        self.pieces.iter().find(|p| x >= p.lo && x < p.hi)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_with_dist(x, &[])
    }

    /// Evaluate with explicit distances to known singular centers:
    /// `dists` pairs (center, |x - center|) computed by the caller without
    /// cancellation (tanh-sinh provides these at subinterval endpoints).
    pub fn eval_with_dist(&self, x: f64, dists: &[(f64, f64)]) -> f64 {
        let Some(p) = self.piece_at(x) else {
            return 0.0;
        };
        let mut s = 0.0;
        for t in &p.terms {
            s += match *t {
                Term::Const(c) => c,
                Term::Power { coeff, exponent } => coeff * x.powf(exponent),
                Term::LogAbs { coeff, center } => {
                    let d = dists
                        .iter()
                        .find(|(c, _)| *c == center)
                        .map(|(_, d)| *d)
                        .unwrap_or_else(|| (x - center).abs());
                    coeff * d.ln()
                }
            };
        }
        s
    }

    /// y ↦ g(λy), exact on the term algebra.
    pub fn dilate(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidArgument("dilation needs λ > 0".into()));
        }
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let mut terms = Vec::with_capacity(p.terms.len() + 1);
                let mut extra_const = 0.0;
                for t in &p.terms {
                    match *t {
                        Term::Const(c) => terms.push(Term::Const(c)),
                        Term::Power { coeff, exponent } => terms.push(Term::Power {
                            coeff: coeff * lambda.powf(exponent),
                            exponent,
                        }),
                        Term::LogAbs { coeff, center } => {
                            extra_const += coeff * lambda.ln();
                            terms.push(Term::LogAbs {
                                coeff,
                                center: center / lambda,
                            });
                        }
                    }
                }
                if extra_const != 0.0 {
                    terms.push(Term::Const(extra_const));
                }
                PcfPiece {
                    lo: p.lo / lambda,
                    hi: p.hi / lambda,
                    terms,
                }
            })
            .collect();
        Ok(PiecewiseClosedForm {
            pieces,
            domain: self.domain,
        })
    }

    /// Tail behaviour at +∞ (and by symmetry of the term algebra at −∞):
    /// `Decay { exponent, coeff }` means |g(x)| ~ coeff·|x|^{-exponent}.
    fn tail_behaviour(&self, positive_side: bool) -> TailBehaviour {
        let piece = if positive_side {
            self.pieces.iter().find(|p| p.hi.is_infinite())
        } else {
            self.pieces.iter().find(|p| p.lo.is_infinite())
        };
        let Some(p) = piece else {
            return TailBehaviour::Zero;
        };
        let mut const_sum = 0.0;
        let mut best_pow: Option<(f64, f64)> = None; // (exponent, coeff)
        let mut log_mass = 0.0; // Σ coeff·(center terms) → c/x asymptotics
        let mut log_coeff_sum = 0.0;
        for t in &p.terms {
            match *t {
                Term::Const(c) => const_sum += c,
                Term::Power { coeff, exponent } => {
                    if coeff != 0.0 {
                        match best_pow {
                            Some((e, _)) if e >= exponent => {}
                            _ => best_pow = Some((exponent, coeff)),
                        }
                    }
                }
                Term::LogAbs { coeff, center } => {
                    log_coeff_sum += coeff;
                    log_mass -= coeff * center;
                }
            }
        }
        // Σ cᵢ ln|x-aᵢ| with Σcᵢ = 0 decays like (Σ -cᵢaᵢ)/x; with Σcᵢ ≠ 0 it
        // grows logarithmically.
        if const_sum.abs() > 1e-300 {
            return TailBehaviour::NonDecaying;
        }
        if log_coeff_sum.abs() > 1e-12 {
            return TailBehaviour::LogGrowth;
        }
        let from_logs = if log_mass.abs() > 0.0 {
            Some((-1.0, log_mass))
        } else {
            None
        };
        let candidates = [best_pow, from_logs];
        let mut dominant: Option<(f64, f64)> = None;
        for c in candidates.into_iter().flatten() {
            match dominant {
                Some((e, _)) if e >= c.0 => {}
                _ => dominant = Some(c),
            }
        }
        match dominant {
            None => TailBehaviour::Zero,
            Some((e, c)) => {
                if e >= 0.0 {
                    TailBehaviour::NonDecaying
                } else {
                    TailBehaviour::Decay {
                        exponent: -e,
                        coeff: c.abs(),
                    }
                }
            }
        }
    }

    /// Growth exponent as x → 0⁺ (only meaningful on ℝ₊):
    /// |g(x)| ~ coeff·x^{-exponent} or bounded.
    fn origin_behaviour(&self) -> OriginBehaviour {
        let Some(p) = self.pieces.first() else {
            return OriginBehaviour::Bounded(0.0);
        };
        if p.lo > 0.0 {
            return OriginBehaviour::Bounded(0.0);
        }
        let mut bound = 0.0;
        let mut worst: Option<(f64, f64)> = None;
        for t in &p.terms {
            match *t {
                Term::Const(c) => bound += c.abs(),
                Term::Power { coeff, exponent } => {
                    if exponent < 0.0 && coeff != 0.0 {
                        match worst {
                            Some((e, _)) if e <= exponent => {}
                            _ => worst = Some((exponent, coeff)),
                        }
                    } else {
                        bound += coeff.abs(); // x^e bounded by coeff on (0,1)
                    }
                }
                Term::LogAbs { .. } => bound += 1.0, // log is weaker than any power
            }
        }
        match worst {
            Some((e, c)) => OriginBehaviour::Grows {
                exponent: -e,
                coeff: c.abs(),
            },
            None => OriginBehaviour::Bounded(bound),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum TailBehaviour {
    Zero,
    Decay { exponent: f64, coeff: f64 },
    NonDecaying,
    LogGrowth,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum OriginBehaviour {
    Bounded(f64),
    Grows { exponent: f64, coeff: f64 },
}

/// (P_p f)(t) = t^{-1/p} ∫₀ᵗ f(s) s^{1/p - 1} ds, exact piecewise.
pub fn hardy_p(p: f64, f: &StepFunction) -> Result<PiecewiseClosedForm> {
    if p == 0.0 || !p.is_finite() {
        return Err(Error::InvalidArgument("P_p needs finite p ≠ 0".into()));
    }
    if f.domain() != Domain::RPlus {
        return Err(Error::InvalidArgument("P_p acts on ℝ₊".into()));
    }
    let ip = 1.0 / p;
    if ip <= 0.0 {
        if let Some(p0) = f.pieces().first() {
            if p0.a == 0.0 && p0.c > 0.0 {
                return Err(Error::DivergentIntegral(format!(
                    "∫₀ f(s)s^{}⁻¹ ds diverges at 0 for support touching 0",
                    ip
                )));
            }
        }
    }
    let mut cuts = f.breakpoints();
    if cuts.first() != Some(&0.0) {
        cuts.insert(0, 0.0);
    }
    let mut pieces = Vec::new();
    let mut acc = 0.0; // ∫₀^{t_j} f s^{1/p-1} ds
    for (j, w) in cuts.windows(2).enumerate() {
        let (lo, hi) = (w[0], w[1]);
        let c = f.eval(0.5 * (lo + hi));
        let _ = j;
        let mut terms = Vec::new();
        if c != 0.0 {
            terms.push(Term::Const(c * p));
        }
        let b = acc - c * p * pow_or_zero(lo, ip);
        if b != 0.0 {
            terms.push(Term::Power {
                coeff: b,
                exponent: -ip,
            });
        }
        pieces.push(PcfPiece { lo, hi, terms });
        acc += c * p * (pow_or_zero(hi, ip) - pow_or_zero(lo, ip));
    }
    // final ray past the support
    let last = *cuts.last().expect("nonempty cuts");
    let mut terms = Vec::new();
    if acc != 0.0 {
        terms.push(Term::Power {
            coeff: acc,
            exponent: -ip,
        });
    }
    pieces.push(PcfPiece {
        lo: last,
        hi: f64::INFINITY,
        terms,
    });
    Ok(PiecewiseClosedForm {
        pieces,
        domain: Domain::RPlus,
    })
}

fn pow_or_zero(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        if e > 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        x.powf(e)
    }
}

/// (Q_q f)(t) = t^{-1/q} ∫ₜ^∞ f(s) s^{1/q - 1} ds, exact piecewise.
pub fn hardy_q(q: f64, f: &StepFunction) -> Result<PiecewiseClosedForm> {
    if q == 0.0 || !q.is_finite() {
        return Err(Error::InvalidArgument("Q_q needs finite q ≠ 0".into()));
    }
    if f.domain() != Domain::RPlus {
        return Err(Error::InvalidArgument("Q_q acts on ℝ₊".into()));
    }
    let iq = 1.0 / q;
    let mut cuts = f.breakpoints();
    if cuts.first() != Some(&0.0) {
        cuts.insert(0, 0.0);
    }
    // tail integrals from the right
    let mut pieces = Vec::new();
    let mut tail = 0.0; // ∫_{t_{j+1}}^∞ f s^{1/q-1} ds
    let mut rev: Vec<PcfPiece> = Vec::new();
    for w in cuts.windows(2).rev() {
        let (lo, hi) = (w[0], w[1]);
        let c = f.eval(0.5 * (lo + hi));
        let mut terms = Vec::new();
        if c != 0.0 {
            terms.push(Term::Const(-c * q));
        }
        let e = tail + c * q * pow_or_zero(hi, iq);
        if e != 0.0 {
            terms.push(Term::Power {
                coeff: e,
                exponent: -iq,
            });
        }
        rev.push(PcfPiece { lo, hi, terms });
        tail += c * q * (pow_or_zero(hi, iq) - pow_or_zero(lo, iq));
    }
    pieces.extend(rev.into_iter().rev());
    let last = *cuts.last().expect("nonempty");
    pieces.push(PcfPiece {
        lo: last,
        hi: f64::INFINITY,
        terms: Vec::new(),
    });
    Ok(PiecewiseClosedForm {
        pieces,
        domain: Domain::RPlus,
    })
}

/// (If)(x) = ∫₀ˣ f, the nondecreasing piecewise-linear primitive.
pub fn integral_i(f: &StepFunction) -> Result<PiecewiseClosedForm> {
    if f.domain() != Domain::RPlus {
        return Err(Error::InvalidArgument("I acts on ℝ₊".into()));
    }
    let mut cuts = f.breakpoints();
    if cuts.first() != Some(&0.0) {
        cuts.insert(0, 0.0);
    }
    let mut pieces = Vec::new();
    let mut acc = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let c = f.eval(0.5 * (lo + hi));
        let mut terms = Vec::new();
        let intercept = acc - c * lo;
        if intercept != 0.0 {
            terms.push(Term::Const(intercept));
        }
        if c != 0.0 {
            terms.push(Term::Power {
                coeff: c,
                exponent: 1.0,
            });
        }
        pieces.push(PcfPiece { lo, hi, terms });
        acc += c * (hi - lo);
    }
    let last = *cuts.last().expect("nonempty");
    let terms = if acc != 0.0 {
        vec![Term::Const(acc)]
    } else {
        Vec::new()
    };
    pieces.push(PcfPiece {
        lo: last,
        hi: f64::INFINITY,
        terms,
    });
    Ok(PiecewiseClosedForm {
        pieces,
        domain: Domain::RPlus,
    })
}

/// Smallest x with (If)(x) > λ, as the ray (x, ∞); `None` when the level
/// set is empty (λ at or above the total mass).
pub fn level_set_ray(f: &StepFunction, lambda: f64) -> Option<f64> {
    if lambda < 0.0 {
        return Some(0.0);
    }
    let total = f.total_mass();
    if lambda >= total {
        return None;
    }
    let mut acc = 0.0;
    for p in f.pieces() {
        let gain = p.c * (p.b - p.a);
        if acc + gain > lambda {
            return Some(p.a + (lambda - acc) / p.c);
        }
        acc += gain;
    }
    None
}

/// Exact pointwise evaluator for the Hardy–Littlewood maximal function of a
/// step function on ℝ.
#[derive(Debug, Clone)]
pub struct MaximalEvaluator {
    cuts: Vec<f64>,
    /// cumulative mass ∫_{-∞}^{cuts[i]} f
    cum: Vec<f64>,
    f: StepFunction,
}

pub fn maximal(f: &StepFunction) -> MaximalEvaluator {
    let cuts = f.breakpoints();
    let mut cum = Vec::with_capacity(cuts.len());
    let mut acc = 0.0;
    for (i, &x) in cuts.iter().enumerate() {
        if i > 0 {
            let (a, b) = (cuts[i - 1], x);
            acc += f.eval(0.5 * (a + b)) * (b - a);
        }
        cum.push(acc);
    }
    MaximalEvaluator {
        cuts,
        cum,
        f: f.clone(),
    }
}

impl MaximalEvaluator {
    /// Cumulative ∫_{-∞}^x f.
    fn mass_to(&self, x: f64) -> f64 {
        if self.cuts.is_empty() {
            return 0.0;
        }
        let i = self.cuts.partition_point(|&c| c <= x);
        if i == 0 {
            return 0.0;
        }
        let base = self.cum[i - 1];
        if i == self.cuts.len() {
            return base;
        }
        base + self.f.eval(0.5 * (self.cuts[i - 1] + self.cuts[i])) * (x - self.cuts[i - 1])
    }

    /// (Mf)(x): the supremum of interval averages over intervals containing
    /// x, attained on endpoints from breakpoints(f) ∪ {x}.
    pub fn eval(&self, x: f64) -> f64 {
        if self.cuts.is_empty() {
            return 0.0;
        }
        let mut ends: Vec<f64> = Vec::with_capacity(self.cuts.len() + 1);
        ends.extend_from_slice(&self.cuts);
        if !ends.contains(&x) {
            ends.push(x);
            ends.sort_by(|a, b| a.partial_cmp(b).expect("non-NaN"));
        }
        let masses: Vec<f64> = ends.iter().map(|&e| self.mass_to(e)).collect();
        let mut best = 0.0f64;
        for (i, &u) in ends.iter().enumerate() {
            if u > x {
                break;
            }
            for (j, &v) in ends.iter().enumerate().skip(i + 1) {
                if v < x {
                    continue;
                }
                let avg = (masses[j] - masses[i]) / (v - u);
                if avg > best {
                    best = avg;
                }
            }
        }
        best
    }
}

/// (Hf)(x) = (1/π) Σᵢ cᵢ ln(|x-aᵢ| / |x-bᵢ|), the exact principal value for
/// step data; logarithmic singularities sit only at the breakpoints.
pub fn hilbert(f: &StepFunction) -> Result<PiecewiseClosedForm> {
    if f.domain() != Domain::R {
        return Err(Error::InvalidArgument(
            "H acts on ℝ (use domain r for the input)".into(),
        ));
    }
    let inv_pi = 1.0 / std::f64::consts::PI;
    let mut centers: Vec<(f64, f64)> = Vec::new(); // (center, coeff)
    for p in f.pieces() {
        for (center, sign) in [(p.a, 1.0), (p.b, -1.0)] {
            match centers.iter_mut().find(|(c, _)| *c == center) {
                Some((_, coeff)) => *coeff += sign * p.c * inv_pi,
                None => centers.push((center, sign * p.c * inv_pi)),
            }
        }
    }
    centers.retain(|(_, c)| c.abs() > 1e-300);
    let terms: Vec<Term> = centers
        .iter()
        .map(|&(center, coeff)| Term::LogAbs { coeff, center })
        .collect();
    let cuts = f.breakpoints();
    let mut pieces = Vec::new();
    let mut lo = f64::NEG_INFINITY;
    for &c in &cuts {
        pieces.push(PcfPiece {
            lo,
            hi: c,
            terms: terms.clone(),
        });
        lo = c;
    }
    pieces.push(PcfPiece {
        lo,
        hi: f64::INFINITY,
        terms,
    });
    Ok(PiecewiseClosedForm {
        pieces,
        domain: Domain::R,
    })
}

/// Operator tags for the CLI and the commutation check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorTag {
    P(f64),
    Q(f64),
    I,
    M,
    H,
}

impl OperatorTag {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "I" => return Ok(OperatorTag::I),
            "M" => return Ok(OperatorTag::M),
            "H" => return Ok(OperatorTag::H),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("P:p=") {
            return rest
                .parse()
                .map(OperatorTag::P)
                .map_err(|_| Error::Parse(format!("bad p in '{s}'")));
        }
        if let Some(rest) = s.strip_prefix("Q:q=") {
            return rest
                .parse()
                .map(OperatorTag::Q)
                .map_err(|_| Error::Parse(format!("bad q in '{s}'")));
        }
        Err(Error::Parse(format!(
            "unknown operator '{s}'; use P:p=<r> | Q:q=<r> | I | M | H"
        )))
    }

    pub fn label(&self) -> String {
        match self {
            OperatorTag::P(p) => format!("P:p={p}"),
            OperatorTag::Q(q) => format!("Q:q={q}"),
            OperatorTag::I => "I".into(),
            OperatorTag::M => "M".into(),
            OperatorTag::H => "H".into(),
        }
    }
}

/// A materialized operator application, uniformly evaluable pointwise.
#[derive(Debug, Clone)]
pub enum Applied {
    Closed(PiecewiseClosedForm),
    Maximal(MaximalEvaluator),
}

impl Applied {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Applied::Closed(p) => p.eval(x),
            Applied::Maximal(m) => m.eval(x),
        }
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Applied::Closed(p) => p.breakpoints(),
            Applied::Maximal(m) => m.cuts.clone(),
        }
    }
}

/// Apply an operator tag to a step function.
pub fn apply(op: OperatorTag, f: &StepFunction) -> Result<Applied> {
    match op {
        OperatorTag::P(p) => Ok(Applied::Closed(hardy_p(p, f)?)),
        OperatorTag::Q(q) => Ok(Applied::Closed(hardy_q(q, f)?)),
        OperatorTag::I => Ok(Applied::Closed(integral_i(f)?)),
        OperatorTag::M => Ok(Applied::Maximal(maximal(f))),
        OperatorTag::H => Ok(Applied::Closed(hilbert(f)?)),
    }
}

/// Max over probes of |(Tf)(λt) − T(f(λ·))(t)|, the dilation-commutation
/// deviation. I is not dilation-commuting and is rejected.
pub fn check_dilation_commute(
    op: OperatorTag,
    f: &StepFunction,
    lambda: f64,
    probes: &[f64],
) -> Result<f64> {
    if op == OperatorTag::I {
        return Err(Error::UnsupportedOperator(
            "I does not commute with dilations".into(),
        ));
    }
    let tf = apply(op, f)?;
    let fd = f.dilate(lambda)?;
    let tfd = apply(op, &fd)?;
    let near_breakpoint = |x: f64, cuts: &[f64]| {
        cuts.iter()
            .any(|&c| (x - c).abs() <= 1e-9 * (1.0 + c.abs()))
    };
    let cuts_a = tf.breakpoints();
    let cuts_b = tfd.breakpoints();
    let mut worst = 0.0f64;
    for &t in probes {
        if near_breakpoint(lambda * t, &cuts_a) || near_breakpoint(t, &cuts_b) {
            continue;
        }
        let a = tf.eval(lambda * t);
        let b = tfd.eval(t);
        if !a.is_finite() || !b.is_finite() {
            continue;
        }
        let d = (a - b).abs();
        if d > worst {
            worst = d;
        }
    }
    Ok(worst)
}

/// Quadrature tolerances for modulars of operator outputs.
pub const MODULAR_ABS_TOL: f64 = 1e-8;
pub const MODULAR_REL_TOL: f64 = 1e-6;

/// ∫ Φ(scale·|g(x)|)·w(x) dx over the output's domain (or a window),
/// +∞ when the tail or a singularity test shows divergence.
pub fn modular_of_output_value(
    y: &YoungFunction,
    g: &PiecewiseClosedForm,
    w: &PowerWeight,
    scale: f64,
    window: Option<(f64, f64)>,
) -> f64 {
    match modular_of_output_impl(y, g, w, scale, window) {
        Ok(v) => v,
        Err(_) => f64::INFINITY,
    }
}

/// ∫ Φ(|g(x)|)·w(x) dx with divergence reported as an error naming the
/// failing region.
pub fn modular_of_output(
    y: &YoungFunction,
    g: &PiecewiseClosedForm,
    w: &PowerWeight,
) -> Result<f64> {
    modular_of_output_impl(y, g, w, 1.0, None)
}

fn modular_of_output_impl(
    y: &YoungFunction,
    g: &PiecewiseClosedForm,
    w: &PowerWeight,
    scale: f64,
    window: Option<(f64, f64)>,
) -> Result<f64> {
    let (dom_lo, dom_hi) = match g.domain() {
        Domain::RPlus => (0.0, f64::INFINITY),
        Domain::R => (f64::NEG_INFINITY, f64::INFINITY),
    };
    let (win_lo, win_hi) = window.unwrap_or((dom_lo, dom_hi));
    let lo = win_lo.max(dom_lo);
    let hi = win_hi.min(dom_hi);

    // 1. tail tests where the window is unbounded
    let r0 = y.order_at_zero();
    if hi.is_infinite() {
        check_tail(g.tail_behaviour(true), w.gamma, scale, r0, "+∞")?;
    }
    if lo == 0.0 && g.domain() == Domain::RPlus {
        check_origin(y, g.origin_behaviour(), w.gamma, scale)?;
    }
    if lo.is_infinite() {
        check_tail(g.tail_behaviour(false), w.gamma, scale, r0, "-∞")?;
    }

    // 2. log-singularity integrability (exponential Φ only)
    if let Some(rate) = exp_rate(y) {
        for p in g.pieces() {
            for t in &p.terms {
                if let Term::LogAbs { coeff, .. } = *t {
                    if rate * scale * coeff.abs() >= 1.0 {
                        return Err(Error::DivergentIntegral(format!(
                            "Φ grows like e^{rate}u against a log singularity of strength {}",
                            scale * coeff.abs()
                        )));
                    }
                }
            }
        }
    }

    // 3. split points: output breakpoints, the origin, window ends
    let mut cuts: Vec<f64> = g.breakpoints();
    cuts.push(0.0);
    cuts.retain(|&c| c > lo && c < hi);
    cuts.sort_by(|a, b| a.partial_cmp(b).expect("non-NaN"));
    cuts.dedup();

    // finite core bounds
    let core_lo = if lo.is_infinite() {
        cuts.first().copied().unwrap_or(-1.0).min(-1.0)
    } else {
        lo
    };
    let core_hi = if hi.is_infinite() {
        cuts.last().copied().unwrap_or(1.0).max(1.0).max(core_lo + 1.0)
    } else {
        hi
    };

    // Near a subinterval endpoint the raw node x loses the digits that the
    // endpoint distance keeps; when 0 itself is the endpoint, rebuild the
    // coordinate from the distance so |x|^γ and x^e stay accurate.
    let integrand = |x: f64, dlo: f64, dhi: f64, a: f64, b: f64| -> f64 {
        let x_eff = if a == 0.0 {
            dlo
        } else if b == 0.0 {
            -dhi
        } else {
            x
        };
        let dists = [(a, dlo), (b, dhi)];
        let v = g.eval_with_dist(x_eff, &dists);
        if !v.is_finite() {
            return 0.0;
        }
        y.big_phi(scale * v.abs()) * w.eval(x_eff)
    };

    let mut total = 0.0;
    let mut edges = vec![core_lo];
    edges.extend(cuts.iter().copied().filter(|&c| c > core_lo && c < core_hi));
    edges.push(core_hi);
    for win in edges.windows(2) {
        let (a, b) = (win[0], win[1]);
        let r = quad::tanh_sinh(
            |x, dlo, dhi| integrand(x, dlo, dhi, a, b),
            a,
            b,
            MODULAR_ABS_TOL,
            MODULAR_REL_TOL,
        );
        total += r.value;
    }
    // tails
    if hi.is_infinite() {
        let r = quad::integrate_tail(
            |x| {
                let v = g.eval(x);
                y.big_phi(scale * v.abs()) * w.eval(x)
            },
            core_hi,
            MODULAR_ABS_TOL,
            MODULAR_REL_TOL,
        );
        total += r.value;
    }
    if lo.is_infinite() {
        let r = quad::integrate_tail(
            |x| {
                let v = g.eval(-x);
                y.big_phi(scale * v.abs()) * w.eval(x)
            },
            -core_lo,
            MODULAR_ABS_TOL,
            MODULAR_REL_TOL,
        );
        total += r.value;
    }
    Ok(total)
}

/// ∫ Φ(scale·(Mf)(x))·w(x) dx for the maximal evaluator. Outside the support
/// hull [a₁, b_n] the maximal function is exactly mass/(x - a₁) on the right
/// and mass/(b_n - x) on the left, so the tails are handled like any other
/// power decay.
fn modular_of_maximal_impl(
    y: &YoungFunction,
    m: &MaximalEvaluator,
    w: &PowerWeight,
    scale: f64,
    window: Option<(f64, f64)>,
) -> Result<f64> {
    if m.cuts.is_empty() {
        return Ok(0.0);
    }
    let (win_lo, win_hi) = window.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
    let r0 = y.order_at_zero();
    if win_hi.is_infinite() || win_lo.is_infinite() {
        // Mf ~ mass/|x|: decay exponent 1
        if !(r0.is_infinite() || r0 - w.gamma > 1.0) {
            return Err(Error::DivergentIntegral(format!(
                "maximal-function tail mass/|x| with Φ order {r0} at 0 and weight γ={}",
                w.gamma
            )));
        }
    }
    let mut cuts: Vec<f64> = m.cuts.clone();
    cuts.push(0.0);
    cuts.retain(|&c| c > win_lo && c < win_hi);
    cuts.sort_by(|a, b| a.partial_cmp(b).expect("non-NaN"));
    cuts.dedup();
    let core_lo = if win_lo.is_infinite() {
        cuts.first().copied().unwrap_or(-1.0).min(-1.0)
    } else {
        win_lo
    };
    let core_hi = if win_hi.is_infinite() {
        cuts.last().copied().unwrap_or(1.0).max(1.0).max(core_lo + 1.0)
    } else {
        win_hi
    };
    let mut total = 0.0;
    let mut edges = vec![core_lo];
    edges.extend(cuts.iter().copied().filter(|&c| c > core_lo && c < core_hi));
    edges.push(core_hi);
    let integrand = |x: f64, dlo: f64, dhi: f64, a: f64, b: f64| -> f64 {
        let x_eff = if a == 0.0 {
            dlo
        } else if b == 0.0 {
            -dhi
        } else {
            x
        };
        y.big_phi(scale * m.eval(x_eff)) * w.eval(x_eff)
    };
    for win in edges.windows(2) {
        let (a, b) = (win[0], win[1]);
        let r = quad::tanh_sinh(
            |x, dlo, dhi| integrand(x, dlo, dhi, a, b),
            a,
            b,
            MODULAR_ABS_TOL,
            MODULAR_REL_TOL,
        );
        total += r.value;
    }
    if win_hi.is_infinite() {
        total += quad::integrate_tail(
            |x| y.big_phi(scale * m.eval(x)) * w.eval(x),
            core_hi,
            MODULAR_ABS_TOL,
            MODULAR_REL_TOL,
        )
        .value;
    }
    if win_lo.is_infinite() {
        total += quad::integrate_tail(
            |x| y.big_phi(scale * m.eval(-x)) * w.eval(x),
            -core_lo,
            MODULAR_ABS_TOL,
            MODULAR_REL_TOL,
        )
        .value;
    }
    Ok(total)
}

/// Modular of any applied operator output, +∞ on divergence.
pub fn modular_of_applied_value(
    y: &YoungFunction,
    g: &Applied,
    w: &PowerWeight,
    scale: f64,
    window: Option<(f64, f64)>,
) -> f64 {
    let r = match g {
        Applied::Closed(p) => modular_of_output_impl(y, p, w, scale, window),
        Applied::Maximal(m) => modular_of_maximal_impl(y, m, w, scale, window),
    };
    r.unwrap_or(f64::INFINITY)
}

/// Modular of any applied operator output with divergence as an error.
pub fn modular_of_applied(
    y: &YoungFunction,
    g: &Applied,
    w: &PowerWeight,
) -> Result<f64> {
    match g {
        Applied::Closed(p) => modular_of_output_impl(y, p, w, 1.0, None),
        Applied::Maximal(m) => modular_of_maximal_impl(y, m, w, 1.0, None),
    }
}

/// Gauge of an applied operator output: inf{λ : ∫Φ(|g|/λ)(ε/λ)w ≤ 1},
/// bracketed and bisected on the strictly decreasing modular map.
pub fn gauge_applied(
    y: &YoungFunction,
    g: &Applied,
    w: &PowerWeight,
    eps: f64,
) -> Result<crate::funcspace::GaugeResult> {
    let is_zero = match g {
        Applied::Closed(p) => p.pieces().iter().all(|pc| pc.terms.is_empty()),
        Applied::Maximal(m) => m.cuts.is_empty(),
    };
    if is_zero {
        return Ok(crate::funcspace::GaugeResult {
            value: 0.0,
            bracket: (0.0, 0.0),
            iterations: 0,
            residual: 0.0,
        });
    }
    // divergence of the modular is scale-invariant for the power-type
    // families; probe once
    if modular_of_applied_value(y, g, w, 1.0, None).is_infinite()
        && modular_of_applied_value(y, g, w, 1e-9, None).is_infinite()
    {
        return Err(Error::NoFiniteGauge(
            "modular of the operator output diverges at every scale".into(),
        ));
    }
    let gfun = |lambda: f64| modular_of_applied_value(y, g, w, 1.0 / lambda, None) * eps / lambda;
    let root = crate::solve::decreasing_root_at_one(gfun, 100)?;
    Ok(crate::funcspace::GaugeResult {
        value: root.value,
        bracket: root.bracket,
        iterations: root.iterations,
        residual: root.residual,
    })
}

fn exp_rate(y: &YoungFunction) -> Option<f64> {
    use crate::youngfn::FamilyView;
    match y.family() {
        FamilyView::Expm1 => Some(1.0),
        FamilyView::Appendix2 { gamma, .. } => Some(gamma),
        _ => None,
    }
}

fn check_tail(
    tail: TailBehaviour,
    gamma: f64,
    scale: f64,
    r0: f64,
    side: &str,
) -> Result<()> {
    match tail {
        TailBehaviour::Zero => Ok(()),
        TailBehaviour::NonDecaying | TailBehaviour::LogGrowth => Err(Error::DivergentIntegral(
            format!("output does not decay at {side}; Φ(|g|)·|x|^{gamma} has a divergent tail"),
        )),
        TailBehaviour::Decay { exponent,  .. } => {
            let _ = scale;
            // ∫^∞ Φ(c x^{-d}) x^γ dx converges iff d·r₀ − γ > 1 (equality
            // diverges; the log factor of plog sits at Φ's large-argument
            // side and does not help at the tail).
            if r0.is_infinite() || exponent * r0 - gamma > 1.0 {
                Ok(())
            } else {
                Err(Error::DivergentIntegral(format!(
                    "tail at {side}: decay x^-{exponent} with Φ order {r0} at 0 and weight γ={gamma}"
                )))
            }
        }
    }
}

fn check_origin(
    y: &YoungFunction,
    origin: OriginBehaviour,
    gamma: f64,
    scale: f64,
) -> Result<()> {
    match origin {
        OriginBehaviour::Bounded(_) => {
            if gamma > -1.0 {
                Ok(())
            } else {
                Err(Error::DivergentIntegral(format!(
                    "weight |x|^{gamma} is not integrable at 0"
                )))
            }
        }
        OriginBehaviour::Grows { exponent, coeff } => {
            let rho = y.order_at_inf();
            let _ = (scale, coeff);
            if rho.is_infinite() {
                return Err(Error::DivergentIntegral(
                    "exponential Φ against a power blow-up at 0".into(),
                ));
            }
            if exponent * rho - gamma < 1.0 {
                Ok(())
            } else {
                Err(Error::DivergentIntegral(format!(
                    "origin: growth x^-{exponent} with Φ order {rho} at ∞ and weight γ={gamma}"
                )))
            }
        }
    }
}

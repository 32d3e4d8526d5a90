//! Double-exponential (tanh-sinh) quadrature on breakpoint-split intervals.
//!
//! Singular behaviour is only ever allowed at subinterval endpoints: callers
//! split at every breakpoint (log singularities of Hilbert outputs, kinks of
//! piecewise forms, the origin for |x|^γ weights) and the tanh-sinh rule then
//! absorbs integrable endpoint singularities. Infinite tails are brought to
//! (0, 1/T] by x = 1/u first.
//!
//! Integrands receive `(x, dist_lo, dist_hi)`: the node and its distances to
//! the two endpoints, computed without cancellation, so that a factor like
//! ln|x - a| can be evaluated as ln(dist_lo) exactly even when x - a is far
//! below the float resolution of x.

/// Result of one integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    /// Estimated absolute error (difference of the last two refinement levels).
    pub abs_err: f64,
    pub evals: usize,
}

/// Truncation point of the tanh-sinh abscissa parameter. At t = 6 the
/// endpoint distance is ~1e-275, far past any integrable singularity the
/// crate's weights (γ > -1) can produce.
const T_MAX: f64 = 6.0;
const MAX_LEVEL: u32 = 11;

fn ts_node(t: f64) -> (f64, f64, f64) {
    // u = tanh((π/2) sinh t); returns (u, 1-u, 1+u) with the complements
    // computed in stable form.
    let s = std::f64::consts::FRAC_PI_2 * t.sinh();
    let e2 = (-2.0 * s.abs()).exp();
    let small = 2.0 * e2 / (1.0 + e2); // 1 - |u|
    let big = 2.0 / (1.0 + e2); // 1 + |u|
    let u = if s >= 0.0 { big - 1.0 } else { 1.0 - big };
    if s >= 0.0 {
        (u, small, big)
    } else {
        (u, big, small)
    }
}

fn ts_weight(t: f64) -> f64 {
    let s = std::f64::consts::FRAC_PI_2 * t.sinh();
    let c = s.cosh();
    std::f64::consts::FRAC_PI_2 * t.cosh() / (c * c)
}

/// Integrate `f` over the finite interval `[a, b]`.
///
/// `f(x, dist_lo, dist_hi)` may be singular (integrably) at either endpoint.
pub fn tanh_sinh<F>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> QuadResult
where
    F: Fn(f64, f64, f64) -> f64,
{
    if a == b {
        return QuadResult {
            value: 0.0,
            abs_err: 0.0,
            evals: 0,
        };
    }
    debug_assert!(b > a);
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);

    let eval = |t: f64| -> f64 {
        let (u, om, op) = ts_node(t);
        let x = c + h * u;
        let dlo = h * op; // x - a
        let dhi = h * om; // b - x
        if dlo <= 0.0 || dhi <= 0.0 {
            return 0.0;
        }
        let v = f(x, dlo, dhi) * ts_weight(t);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };

    let mut evals = 0usize;
    // Level 0: step 1, nodes at integers in [-T_MAX, T_MAX].
    let mut step = 1.0;
    let mut sum = eval(0.0);
    evals += 1;
    let mut k = 1;
    while (k as f64) * step <= T_MAX {
        let t = k as f64 * step;
        sum += eval(t) + eval(-t);
        evals += 2;
        k += 1;
    }
    let mut result = sum * step * h;
    let mut abs_err = f64::INFINITY;

    for _level in 1..=MAX_LEVEL {
        step *= 0.5;
        // add the odd multiples of the new step
        let mut j = 1;
        let mut add = 0.0;
        while (j as f64) * step <= T_MAX {
            let t = j as f64 * step;
            add += eval(t) + eval(-t);
            evals += 2;
            j += 2;
        }
        sum += add;
        let new_result = sum * step * h;
        abs_err = (new_result - result).abs();
        result = new_result;
        if abs_err <= abs_tol.max(rel_tol * result.abs()) {
            break;
        }
    }
    QuadResult {
        value: result,
        abs_err,
        evals,
    }
}

/// Integrate over `[a, b]` splitting at the interior breakpoints in `bp`
/// (unsorted, duplicates and out-of-range values ignored).
pub fn integrate_split<F>(f: &F, a: f64, b: f64, bp: &[f64], abs_tol: f64, rel_tol: f64) -> QuadResult
where
    F: Fn(f64, f64, f64) -> f64,
{
    let mut cuts: Vec<f64> = bp.iter().copied().filter(|x| *x > a && *x < b).collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).expect("non-NaN breakpoints"));
    cuts.dedup();
    let mut lo = a;
    let mut value = 0.0;
    let mut abs_err = 0.0;
    let mut evals = 0;
    let n = cuts.len() + 1;
    let (piece_abs, piece_rel) = (abs_tol / n as f64, rel_tol);
    for hi in cuts.into_iter().chain(std::iter::once(b)) {
        let r = tanh_sinh(f, lo, hi, piece_abs, piece_rel);
        value += r.value;
        abs_err += r.abs_err;
        evals += r.evals;
        lo = hi;
    }
    QuadResult {
        value,
        abs_err,
        evals,
    }
}

/// Integrate `f` over the tail `[t, ∞)` via x = 1/u.
///
/// The caller must have established convergence; the transformed integrand
/// g(u) = f(1/u)/u² is then integrable at u = 0 and tanh-sinh absorbs it.
pub fn integrate_tail<F>(f: F, t: f64, abs_tol: f64, rel_tol: f64) -> QuadResult
where
    F: Fn(f64) -> f64,
{
    debug_assert!(t > 0.0);
    // dist_lo is u computed without cancellation at the singular end
    tanh_sinh(
        |_, dlo, _| {
            let u = dlo;
            f(1.0 / u) / (u * u)
        },
        0.0,
        1.0 / t,
        abs_tol,
        rel_tol,
    )
}

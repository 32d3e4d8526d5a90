//! The decreasing log/factorial profile χ and its exact piecewise calculus.
//!
//! χ(y) = log(e/y) on (0, 1]; past y = 1 it steps down through linear ramps
//! of width one at the factorial breakpoints a_0 = 1, a_k = (k+3)!:
//!
//! ```text
//! χ(y) = 2^{-k} (1 - (y - a_k)/2)   for a_k     < y <= a_k + 1,
//! χ(y) = 2^{-(k+1)}                 for a_k + 1 < y <= a_{k+1}.
//! ```
//!
//! χ is continuous, strictly decreasing on (0, 1] and on each ramp, flat in
//! between, with χ(a_k) = 2^{-k}. Every integral used by the counterexample
//! machinery has a closed form per piece; nothing here is quadrature.
//!
//! Factorials are computed in f64: exact through 18! < 2^53 (k = 15), then
//! correctly rounded. Callers that need exact dyadic arithmetic (the
//! counterexample report) stay within k <= 14.

/// Largest piece index tabulated. χ values below 2^-(KTAB+1) are treated as 0.
const KTAB: usize = 160;

/// Largest k admissible for the exact counterexample report: a_14 = 17! is
/// still an exact f64 integer.
pub const KMAX_EXACT: usize = 14;

#[derive(Debug, Clone)]
pub struct Chi {
    /// a[k] = (k+3)! for k >= 1, a[0] = 1.
    a: Vec<f64>,
    /// s[k] = ∫₀^{a_k} χ.
    s: Vec<f64>,
}

impl Chi {
    pub fn new() -> Self {
        let mut a = Vec::with_capacity(KTAB + 1);
        a.push(1.0);
        let mut fact = 24.0; // 4!
        for k in 1..=KTAB {
            a.push(fact);
            fact *= (k + 4) as f64;
        }
        // S_0 = ∫₀¹ (1 - ln s) ds = 2; each later block adds the ramp (3/4
        // of its height) and the flat stretch.
        let mut s = Vec::with_capacity(KTAB + 1);
        s.push(2.0);
        for k in 0..KTAB {
            let h = 0.5f64.powi(k as i32);
            s.push(s[k] + 0.75 * h + 0.5 * h * (a[k + 1] - a[k] - 1.0));
        }
        Chi { a, s }
    }

    /// Breakpoint a_k = (k+3)! (a_0 = 1).
    pub fn a(&self, k: usize) -> f64 {
        self.a[k]
    }

    /// ∫₀^{a_k} χ.
    pub fn integral_to_a(&self, k: usize) -> f64 {
        self.s[k]
    }

    /// Index k with a_k < y <= a_{k+1}; `None` when y <= 1.
    fn block(&self, y: f64) -> Option<usize> {
        if y <= 1.0 {
            return None;
        }
        // partition_point: first index with a[i] >= y; block is that index - 1
        let i = self.a.partition_point(|&ak| ak < y);
        Some(i - 1)
    }

    /// χ(y); +∞ at y <= 0, 0 past the tabulated range.
    pub fn eval(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return f64::INFINITY;
        }
        if y <= 1.0 {
            return 1.0 - y.ln();
        }
        match self.block(y) {
            Some(k) if k < KTAB => {
                let h = 0.5f64.powi(k as i32);
                if y <= self.a[k] + 1.0 {
                    h * (1.0 - 0.5 * (y - self.a[k]))
                } else {
                    0.5 * h
                }
            }
            _ => 0.0,
        }
    }

    /// Left endpoint of the level set: inf{y > 0 : χ(y) <= v}.
    ///
    /// +∞ when v is 0 or below the tabulated floor (the level set is empty
    /// at double precision).
    pub fn inv(&self, v: f64) -> f64 {
        if v >= 1.0 {
            return (1.0 - v).exp();
        }
        if v <= 0.0 {
            return f64::INFINITY;
        }
        // v in [2^{-k-1}, 2^{-k}) lands on ramp k
        let k = (-v.log2()).ceil() as i64 - 1;
        let k = if (0.5f64).powi(k as i32 + 1) > v { k + 1 } else { k };
        if k < 0 {
            // v in [1/2, 1): ramp 0
            return self.a[0] + 2.0 * (1.0 - v);
        }
        let k = k as usize;
        if k >= KTAB {
            return f64::INFINITY;
        }
        let h = 0.5f64.powi(k as i32);
        self.a[k] + 2.0 * (1.0 - v / h)
    }

    /// ∫₀ᵗ χ(s) ds, exact per piece.
    pub fn integral(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t <= 1.0 {
            return 2.0 * t - t * t.ln();
        }
        match self.block(t) {
            Some(k) if k < KTAB => {
                let h = 0.5f64.powi(k as i32);
                if t <= self.a[k] + 1.0 {
                    let d = t - self.a[k];
                    self.s[k] + h * (d - 0.25 * d * d)
                } else {
                    self.s[k] + 0.75 * h + 0.5 * h * (t - self.a[k] - 1.0)
                }
            }
            _ => self.s[KTAB],
        }
    }

    /// ∫₀ᵗ χ(s^θ) ds for θ ≠ 0, exact per piece.
    ///
    /// θ > 0 composes with an increasing power (used for A_φ integrands with
    /// a foreign weight exponent); θ < 0 with a decreasing one (used for the
    /// complementary function of the counterexample family).
    pub fn comp_power_integral(&self, theta: f64, t: f64) -> f64 {
        assert!(theta != 0.0, "theta must be nonzero");
        if t <= 0.0 {
            return 0.0;
        }
        // s-interval on which s^θ lies in [y_lo, y_hi]
        let s_range = |y_lo: f64, y_hi: f64| -> Option<(f64, f64)> {
            let (p, q) = (y_lo.powf(1.0 / theta), y_hi.powf(1.0 / theta));
            let (mut lo, mut hi) = if theta > 0.0 { (p, q) } else { (q, p) };
            if !lo.is_finite() {
                lo = 0.0;
            }
            lo = lo.max(0.0);
            hi = hi.min(t);
            if hi > lo {
                Some((lo, hi))
            } else {
                None
            }
        };
        let mut total = 0.0;
        // log piece: y = s^θ in (0, 1]
        if let Some((lo, hi)) = s_range(0.0, 1.0) {
            // ∫ (1 - θ ln s) ds = s(1 + θ) - θ s ln s
            let f = |s: f64| {
                if s == 0.0 {
                    0.0
                } else {
                    s * (1.0 + theta) - theta * s * s.ln()
                }
            };
            total += f(hi) - f(lo);
        }
        for k in 0..KTAB {
            let h = 0.5f64.powi(k as i32);
            // ramp: χ(y) = h(1 + a_k/2) - (h/2) y on (a_k, a_k + 1]
            if let Some((lo, hi)) = s_range(self.a[k], self.a[k] + 1.0) {
                let c0 = h * (1.0 + 0.5 * self.a[k]);
                let c1 = 0.5 * h;
                let pint = if theta == -1.0 {
                    (hi / lo).ln()
                } else {
                    (hi.powf(theta + 1.0) - lo.powf(theta + 1.0)) / (theta + 1.0)
                };
                total += c0 * (hi - lo) - c1 * pint;
            }
            // flat: χ = h/2 on (a_k + 1, a_{k+1}]
            if let Some((lo, hi)) = s_range(self.a[k] + 1.0, self.a[k + 1]) {
                total += 0.5 * h * (hi - lo);
            }
            // stop early once pieces fall wholly outside (0, t]
            if theta > 0.0 && self.a[k].powf(1.0 / theta) > t {
                break;
            }
        }
        total
    }
}

impl Default for Chi {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_values_at_landmarks() {
        let chi = Chi::new();
        assert_eq!(chi.eval(1.0), 1.0); // log(e/1)
        assert_eq!(chi.eval(2.0), 0.5); // end of ramp 0
        assert_eq!(chi.eval(24.0), 0.5); // a_1 sits on the flat stretch
        assert_eq!(chi.eval(25.0), 0.25); // end of ramp 1
        assert_eq!(chi.eval(120.0), 0.25); // a_2 = 5!
        assert!((chi.eval(0.5) - (1.0 + 0.5f64.ln().abs())).abs() < 1e-15);
    }

    #[test]
    fn chi_is_nonincreasing() {
        let chi = Chi::new();
        let mut prev = f64::INFINITY;
        let mut y = 1e-8;
        while y < 1e18 {
            let v = chi.eval(y);
            assert!(v <= prev + 1e-15, "chi increased at {y}");
            prev = v;
            y *= 1.07;
        }
    }

    #[test]
    fn first_integrals_exact() {
        let chi = Chi::new();
        // ∫₀¹ log(e/s) ds = 2 exactly
        assert_eq!(chi.integral(1.0), 2.0);
        // ∫₀^24 χ = 2 + 3/4 + 11 = 13.75 exactly
        assert_eq!(chi.integral(24.0), 13.75);
        assert_eq!(chi.integral_to_a(1), 13.75);
        // ∫₀^120 χ = 13.75 + 3/8 + (120-25)/4 = 37.875
        assert_eq!(chi.integral_to_a(2), 37.875);
    }

    #[test]
    fn integral_matches_brute_force() {
        let chi = Chi::new();
        // midpoint Riemann sum on a fine mesh as an independent oracle
        for &t in &[0.7, 3.0, 26.0, 150.0] {
            let n = 4_000_000usize;
            let dt = t / n as f64;
            let mut acc = 0.0;
            for i in 0..n {
                acc += chi.eval((i as f64 + 0.5) * dt);
            }
            acc *= dt;
            let exact = chi.integral(t);
            assert!(
                (acc - exact).abs() <= 1e-6 * exact.abs().max(1.0),
                "t={t}: brute {acc} vs exact {exact}"
            );
        }
    }

    #[test]
    fn inverse_is_left_endpoint_of_level_set() {
        let chi = Chi::new();
        assert!((chi.inv(1.0) - 1.0).abs() < 1e-15);
        assert!((chi.inv(0.5) - 2.0).abs() < 1e-12); // left end of flat [2, 24]
        assert!((chi.inv(0.25) - 25.0).abs() < 1e-10);
        assert!((chi.inv(2.0) - (-1.0f64).exp()).abs() < 1e-15);
        // round trip at continuity points of the ramps
        for &v in &[0.9, 0.6, 0.3, 0.13, 0.06] {
            let y = chi.inv(v);
            assert!((chi.eval(y) - v).abs() < 1e-12, "v={v}");
        }
    }

    #[test]
    fn comp_power_integral_against_quadrature() {
        let chi = Chi::new();
        for &(theta, t) in &[(1.0, 30.0), (2.0, 6.0), (0.5, 400.0), (-1.0, 8.0), (-0.5, 5.0)] {
            let exact = chi.comp_power_integral(theta, t);
            let n = 2_000_000usize;
            let dt = t / n as f64;
            let mut acc = 0.0;
            for i in 0..n {
                let s = (i as f64 + 0.5) * dt;
                acc += chi.eval(s.powf(theta));
            }
            acc *= dt;
            assert!(
                (acc - exact).abs() <= 2e-5 * exact.abs().max(1.0),
                "theta={theta} t={t}: brute {acc} vs exact {exact}"
            );
        }
    }

    #[test]
    fn comp_power_identity_matches_plain_integral() {
        let chi = Chi::new();
        for &t in &[0.3, 2.0, 27.0, 500.0] {
            let a = chi.comp_power_integral(1.0, t);
            let b = chi.integral(t);
            assert!((a - b).abs() <= 1e-12 * b.max(1.0), "t={t}: {a} vs {b}");
        }
    }
}

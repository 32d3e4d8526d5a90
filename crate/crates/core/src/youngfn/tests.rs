use super::*;
use crate::grid::LogGrid;
use proptest::prelude::*;

fn y(spec: &str) -> YoungFunction {
    parse_young_spec(spec).expect("valid spec")
}

/// Independent conjugate oracle: Ψ(t) = sup_x (t·x − Φ(x)) by coarse log
/// scan plus ternary refinement (the objective is concave in x).
pub(crate) fn legendre_psi(yf: &YoungFunction, t: f64) -> f64 {
    let n = 3000;
    let (la, lb) = ((1e-9f64).ln(), (1e9f64).ln());
    let g = |x: f64| t * x - yf.big_phi(x);
    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    let xs: Vec<f64> = (0..n)
        .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
        .collect();
    for (i, &x) in xs.iter().enumerate() {
        let v = g(x);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let mut lo = xs[best_i.saturating_sub(1)];
    let mut hi = xs[(best_i + 1).min(n - 1)];
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if g(m1) < g(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    best.max(g(0.5 * (lo + hi))).max(0.0)
}

#[test]
fn power_family_basics() {
    let p2 = y("power:r=2");
    assert_eq!(p2.kind(), Kind::Young);
    assert_eq!(p2.big_phi(2.0), 2.0); // Φ(t) = t²/2
    assert_eq!(p2.big_phi(0.0), 0.0);
    assert_eq!(p2.phi(3.0), 3.0);

    let p1 = y("power:r=1");
    assert_eq!(p1.kind(), Kind::GeneralNondecreasing); // φ ≡ 1 bounded
    assert_eq!(p1.big_phi(5.0), 5.0);
    assert!(p1.require_young().is_err());
}

#[test]
fn appendix2_basics() {
    let a = y("appendix2:gamma=1");
    assert_eq!(a.kind(), Kind::Young);
    // φ(1) = χ(1) = 1: the density and its inverse agree at the fixed point
    assert!((a.phi(1.0) - 1.0).abs() < 1e-12);
    assert!((a.phi_inv(1.0).unwrap() - 1.0).abs() < 1e-12);
    // the χ-space integral ∫₀¹ log(e/s) ds = 2 exactly
    match a.family() {
        FamilyView::Appendix2 { chi, .. } => assert_eq!(chi.integral(1.0), 2.0),
        _ => panic!("family view"),
    }
    // density vanishes at 0⁺ and is unbounded: Young
    assert!(a.phi(1e-12) < 1e-10);
    assert!(a.phi(50.0) > 1e10);
}

#[test]
fn appendix2_phi_is_consistent_with_inverse() {
    let a = y("appendix2:gamma=1");
    // φ and φ⁻¹ are inverse on strictly monotone stretches
    for &t in &[0.3, 0.9, 2.0, 5.0] {
        let v = a.phi(t);
        let back = a.phi_inv(v).unwrap();
        assert!(
            (back - t).abs() < 1e-9 * t,
            "t={t} v={v} back={back}"
        );
    }
    // Φ by brute-force Riemann sum over the density
    for &t in &[0.5, 1.0, 3.0] {
        let n = 2_000_000;
        let dt = t / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            acc += a.phi((i as f64 + 0.5) * dt);
        }
        acc *= dt;
        let exact = a.big_phi(t);
        assert!(
            (acc - exact).abs() < 2e-6 * exact.max(1e-12),
            "t={t}: brute {acc} vs exact {exact}"
        );
    }
}

#[test]
fn phi_inv_examples() {
    let p3 = y("power:r=3");
    assert!((p3.phi_inv(4.0).unwrap() - 2.0).abs() < 1e-12); // φ(t)=t², inverse √s
    let p2 = y("power:r=2");
    assert_eq!(p2.phi_inv(0.0).unwrap(), 0.0);
    // flat stretch maps to the right endpoint of the level set
    let pwl = y("pwl-density:(0,0);(1,5);(2,5);(3,10)");
    assert_eq!(pwl.phi_inv(5.0).unwrap(), 2.0);
    // past the sup of a bounded density the level set is everything
    assert!(matches!(
        pwl.phi_inv(10.0),
        Err(Error::Unbounded { .. })
    ));
    // non-monotone density has no usable inverse
    let half = y("power:r=0.5");
    assert!(matches!(half.phi_inv(1.0), Err(Error::NotMonotone(_))));
}

#[test]
fn complementary_closed_forms() {
    // power:r=2 is self-conjugate
    let p2 = y("power:r=2");
    let c2 = p2.complementary().unwrap();
    for &t in &[0.1, 1.0, 7.0] {
        assert!((c2.big_phi(t) - t * t / 2.0).abs() < 1e-12 * (t * t).max(1.0));
    }
    // power:r=3 → Ψ(t) = (2/3) t^{3/2}
    let p3 = y("power:r=3");
    let c3 = p3.complementary().unwrap();
    for &t in &[0.5f64, 1.0, 4.0] {
        let want = 2.0 / 3.0 * t.powf(1.5);
        assert!((c3.big_phi(t) - want).abs() < 1e-12 * want.max(1.0));
    }
    // expm1 is not Young (φ(0⁺) = 1)
    assert!(y("expm1").complementary().is_err());
}

#[test]
fn complementary_is_involutive() {
    let grid = LogGrid::new(1e-3, 1e3, 61).unwrap();
    for spec in ["power:r=1.5", "power:r=2", "power:r=3", "plog:r=2,a=1", "appendix2:gamma=1"] {
        let f = y(spec);
        let ff = f.complementary().unwrap().complementary().unwrap();
        for t in grid.values() {
            let a = f.big_phi(t);
            let b = ff.big_phi(t);
            if a.is_infinite() && b.is_infinite() {
                continue; // Φ overflows f64 on both sides (exponential family)
            }
            assert!(
                (a - b).abs() <= 1e-9 * a.abs().max(1e-12),
                "{spec} at t={t}: {a} vs {b}"
            );
        }
    }
}

#[test]
fn conjugate_matches_legendre_oracle() {
    let grid = LogGrid::new(1e-3, 1e3, 41).unwrap();
    for spec in ["power:r=1.5", "power:r=2", "power:r=3", "plog:r=2,a=1"] {
        let f = y(spec);
        let c = f.complementary().unwrap();
        for t in grid.values() {
            let want = legendre_psi(&f, t);
            let got = c.big_phi(t);
            assert!(
                (got - want).abs() <= 1e-6 * want.abs().max(1e-12),
                "{spec} at t={t}: conjugate {got} vs oracle {want}"
            );
        }
    }
}

#[test]
fn psi_sandwich_is_exact_on_grid() {
    // (t/2) φ⁻¹(t/2) ≤ Ψ(t) ≤ t φ⁻¹(t), both sides closed-form
    let grid = LogGrid::new(1e-3, 1e3, 61).unwrap();
    for spec in ["power:r=1.5", "power:r=2", "power:r=3", "plog:r=2,a=1", "appendix2:gamma=1"] {
        let f = y(spec);
        for t in grid.values() {
            let psi = f.psi(t).unwrap();
            let lo = 0.5 * t * f.phi_inv(0.5 * t).unwrap();
            let hi = t * f.phi_inv(t).unwrap();
            assert!(lo <= psi && psi <= hi, "{spec} t={t}: {lo} ≤ {psi} ≤ {hi}");
        }
    }
}

#[test]
fn youngs_inequality_with_equality_at_density() {
    let grid = LogGrid::new(1e-2, 1e2, 33).unwrap();
    for spec in ["power:r=1.5", "power:r=2", "power:r=3"] {
        let f = y(spec);
        for x in grid.values() {
            for yv in grid.values() {
                let lhs = x * yv;
                let rhs = f.big_phi(x) + f.psi(yv).unwrap();
                assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-12, "{spec}: xy > Φ+Ψ at ({x},{yv})");
            }
            // equality at y = φ(x), where φ is continuous
            let yv = f.phi(x);
            let rhs = f.big_phi(x) + f.psi(yv).unwrap();
            assert!(
                (x * yv - rhs).abs() <= 1e-9 * rhs.max(1e-12),
                "{spec}: equality slack at x={x}"
            );
        }
    }
}

#[test]
fn phi_of_psi_over_t_bound() {
    // Φ(Ψ(t)/t) ≤ Ψ(t) for Young functions
    let grid = LogGrid::new(1e-3, 1e3, 61).unwrap();
    for spec in ["power:r=1.5", "power:r=2", "power:r=3", "plog:r=2,a=1", "appendix2:gamma=1"] {
        let f = y(spec);
        for t in grid.values() {
            let psi = f.psi(t).unwrap();
            let lhs = f.big_phi(psi / t);
            assert!(
                lhs <= psi * (1.0 + 1e-12) + 1e-300,
                "{spec} t={t}: Φ(Ψ/t)={lhs} > Ψ={psi}"
            );
        }
    }
}

#[test]
fn delta2_examples() {
    let grid = LogGrid::default();
    let r2 = check_delta2(&y("power:r=2"), &grid);
    assert_eq!(r2.status, Delta2Status::Holds);
    assert!((r2.c_min.unwrap() - 4.0).abs() < 1e-12); // Φ(2t)/Φ(t) = 4 exactly

    let r1 = check_delta2(&y("power:r=1"), &grid);
    assert_eq!(r1.status, Delta2Status::Holds);
    assert!((r1.c_min.unwrap() - 2.0).abs() < 1e-12);

    let e = check_delta2(&y("expm1"), &grid);
    assert_eq!(e.status, Delta2Status::Fails);
    assert!(e.witness_t.is_some());
}

#[test]
fn delta2_appendix2_phi_blows_up() {
    // the counterexample family has exponential Φ: Δ₂ must fail
    let grid = LogGrid::default();
    let r = check_delta2(&y("appendix2:gamma=1"), &grid);
    assert_eq!(r.status, Delta2Status::Fails);
}

#[test]
fn s_convexity_examples() {
    let grid = LogGrid::new(1e-2, 1e2, 33).unwrap();
    let r = check_s_convex(&y("power:r=2"), 1.0, &grid).unwrap();
    assert!(r.holds, "convexity of t²/2: worst slack {}", r.worst_slack);

    // Φ(t) = 2√t is (1/2)-convex
    let r = check_s_convex(&y("power:r=0.5"), 0.5, &grid).unwrap();
    assert!(r.holds, "1/2-convexity of 2√t: worst slack {}", r.worst_slack);

    // equality at x = y, α = β = 2^{-1/s}: slack exactly 0
    let f = y("power:r=2");
    let alpha = 0.5f64;
    let x = 3.0;
    let lhs = f.big_phi(alpha * x + alpha * x);
    let rhs = 0.5 * f.big_phi(x) + 0.5 * f.big_phi(x);
    assert!((lhs - rhs).abs() < 1e-12);
}

#[test]
fn parse_errors() {
    assert!(matches!(parse_young_spec("power:r=-1"), Err(Error::Parse(_))));
    assert!(matches!(parse_young_spec("nope"), Err(Error::Parse(_))));
    assert!(matches!(
        parse_young_spec("pwl-density:(0,5);(1,2)"),
        Err(Error::NotMonotone(_))
    ));
    assert!(matches!(parse_young_spec("plog:r=2"), Err(Error::Parse(_))));
    assert!(matches!(
        parse_young_spec("plog:r=0.5,a=1"),
        Err(Error::NotMonotone(_))
    ));
}

#[test]
fn orders_at_zero_and_infinity() {
    assert_eq!(y("power:r=2").order_at_zero(), 2.0);
    assert_eq!(y("power:r=2").order_at_inf(), 2.0);
    assert_eq!(y("plog:r=2,a=1").order_at_inf(), 2.0);
    assert_eq!(y("expm1").order_at_zero(), 1.0);
    assert!(y("expm1").order_at_inf().is_infinite());
    assert!(y("appendix2:gamma=1").order_at_zero().is_infinite());
    // conjugate flips r to r/(r-1)
    let c = y("power:r=3").complementary().unwrap();
    assert!((c.order_at_inf() - 1.5).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn phi_monotone_and_inverse_monotone(r in 1.1f64..4.0, seed in 0u64..1000) {
        let f = parse_young_spec(&format!("power:r={r}")).unwrap();
        let grid = LogGrid::new(1e-5, 1e5, 81).unwrap();
        let vals = grid.values();
        let offset = (seed % 7) as usize;
        let mut prev_phi = 0.0;
        let mut prev_inv = 0.0;
        for &t in vals.iter().skip(offset) {
            let p = f.big_phi(t);
            let i = f.phi_inv(t).unwrap();
            prop_assert!(p >= prev_phi);
            prop_assert!(i >= prev_inv);
            prev_phi = p;
            prev_inv = i;
        }
    }

    #[test]
    fn youngs_inequality_random_pairs(
        r in 1.2f64..3.5,
        x in 1e-3f64..1e3,
        yv in 1e-3f64..1e3,
    ) {
        let f = parse_young_spec(&format!("power:r={r}")).unwrap();
        let rhs = f.big_phi(x) + f.psi(yv).unwrap();
        prop_assert!(x * yv <= rhs * (1.0 + 1e-10) + 1e-12);
    }
}

//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Every tolerance and threshold is pinned here in code; nothing defers to
//! later calibration. Run with `cargo test --test acceptance -- --nocapture`
//! to see the per-criterion lines.

use orliczkit_core::conditions::{
    self, check_aphi_general, check_aphi_power, check_bk_general, check_bk_pp,
    check_maximal_condition, CondStatus, FourWeights,
};
use orliczkit_core::funcspace::{self, gauge, modular, Domain, PowerWeight, StepFunction};
use orliczkit_core::operators::{
    self, apply, check_dilation_commute, hilbert, maximal, OperatorTag,
};
use orliczkit_core::verify::{
    counterexample_report, no_finite_k_family, verify_condition_predicts, verify_weak_strong,
    Corpus,
};
use orliczkit_core::youngfn::{parse_young_spec, YoungFunction};
use orliczkit_core::LogGrid;
use std::time::Instant;

fn y(spec: &str) -> YoungFunction {
    parse_young_spec(spec).expect("valid spec")
}

fn pass_line(criterion: &str, started: Instant) {
    println!(
        "acceptance {criterion}: PASS ({:.2}s)",
        started.elapsed().as_secs_f64()
    );
}

/// Independent Legendre oracle: Ψ(t) = sup_x (tx − Φ(x)) by a coarse log
/// scan refined with ternary search (the objective is concave in x). Uses
/// only Φ evaluations, never the implementation's φ⁻¹ path.
fn legendre_psi(f: &YoungFunction, t: f64) -> f64 {
    let n = 3000;
    let (la, lb) = ((1e-9f64).ln(), (1e9f64).ln());
    let g = |x: f64| t * x - f.big_phi(x);
    let xs: Vec<f64> = (0..n)
        .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
        .collect();
    let (mut bi, mut bv) = (0usize, f64::NEG_INFINITY);
    for (i, &x) in xs.iter().enumerate() {
        let v = g(x);
        if v > bv {
            bv = v;
            bi = i;
        }
    }
    let mut lo = xs[bi.saturating_sub(1)];
    let mut hi = xs[(bi + 1).min(n - 1)];
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if g(m1) < g(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    bv.max(g(0.5 * (lo + hi))).max(0.0)
}

#[test]
fn criterion_1_conjugacy_suite() {
    let t0 = Instant::now();
    let grid = LogGrid::new(1e-3, 1e3, 61).unwrap();
    for spec in ["power:r=1.5", "power:r=2", "power:r=3", "plog:r=2,a=1"] {
        let f = y(spec);
        let c = f.complementary().unwrap();
        for t in grid.values() {
            let want = legendre_psi(&f, t);
            let got = c.big_phi(t);
            assert!(
                (got - want).abs() <= 1e-6 * want.abs().max(1e-12),
                "{spec} t={t}: Ψ {got} vs oracle {want}"
            );
            // sandwich (t/2)·φ⁻¹(t/2) ≤ Ψ(t) ≤ t·φ⁻¹(t), exact
            let psi = f.psi(t).unwrap();
            let lo = 0.5 * t * f.phi_inv(0.5 * t).unwrap();
            let hi = t * f.phi_inv(t).unwrap();
            assert!(lo <= psi && psi <= hi, "{spec} t={t}: sandwich {lo} {psi} {hi}");
        }
    }
    assert!(t0.elapsed().as_secs_f64() < 5.0, "runtime bound 5 s");
    pass_line("criterion 1 (conjugacy suite)", t0);
}

#[test]
fn criterion_2_gauge_suite() {
    let t0 = Instant::now();
    let p2 = y("power:r=2");
    let p1 = y("power:r=1");

    // pinned value: ρ(χ_(0,1)) for Φ(t) = t, γ = 1 is 2^{-1/2}
    let unit = StepFunction::indicator(Domain::RPlus, 0.0, 1.0);
    let g = gauge(&p1, &unit, &PowerWeight::plain(1.0), 1.0).unwrap();
    assert!((g.value - std::f64::consts::FRAC_1_SQRT_2).abs() <= 1e-9);

    // the five gauge properties on a 200-member corpus
    let corpus = Corpus::new(2024, 200, Domain::RPlus);
    let w = PowerWeight::plain(0.5);
    let members = corpus.members();
    for f in &members {
        let r = gauge(&p2, f, &w, 1.0).unwrap().value;
        assert!(r >= 0.0 && r.is_finite()); // properties 1 and 5
        assert_eq!(r == 0.0, f.is_zero());
        if f.is_zero() {
            continue;
        }
        // property 2: c ↦ ρ(cf) nondecreasing
        let mut prev = 0.0;
        for &c in &[0.25, 1.0, 4.0] {
            let rc = gauge(&p2, &f.scale(c).unwrap(), &w, 1.0).unwrap().value;
            assert!(rc >= prev - 1e-12);
            prev = rc;
        }
        // property 4: monotone convergence along truncations
        let mut prev = 0.0;
        for &n in &[1.0, 100.0, 1e3] {
            let rn = gauge(&p2, &f.truncate(n).unwrap(), &w, 1.0).unwrap().value;
            assert!(rn >= prev - 1e-12 && rn <= r + 1e-12);
            prev = rn;
        }
        assert!((prev - r).abs() <= 1e-12 * (1.0 + r));
    }
    // property 3: subadditivity on consecutive pairs
    for pair in members.windows(2).take(60) {
        let (f, h) = (&pair[0], &pair[1]);
        let rf = gauge(&p2, f, &w, 1.0).unwrap().value;
        let rh = gauge(&p2, h, &w, 1.0).unwrap().value;
        let rs = gauge(&p2, &f.add(h).unwrap(), &w, 1.0).unwrap().value;
        assert!(rs <= rf + rh + 1e-9 * (1.0 + rf + rh));
    }

    // ε-collapse identity to 1e-9 across ε and γ
    let sample = StepFunction::new(
        Domain::RPlus,
        vec![
            funcspace::Piece { a: 0.05, b: 0.8, c: 3.0 },
            funcspace::Piece { a: 2.0, b: 7.5, c: 0.4 },
        ],
    )
    .unwrap();
    for &gamma in &[-0.5, 0.0, 1.0, 2.0] {
        let w = PowerWeight::plain(gamma);
        let delta = 1.0 / (1.0 + gamma);
        for &eps in &[0.125, 0.5, 1.0, 2.0, 8.0] {
            let a = gauge(&p2, &sample, &w, eps).unwrap().value;
            let b = gauge(&p2, &sample.dilate(eps.powf(-delta)).unwrap(), &w, 1.0)
                .unwrap()
                .value;
            assert!(
                (a - b).abs() <= 1e-9 * (1.0 + a),
                "γ={gamma} ε={eps}: {a} vs {b}"
            );
        }
    }
    assert!(t0.elapsed().as_secs_f64() < 30.0, "runtime bound 30 s");
    pass_line("criterion 2 (gauge suite)", t0);
}

#[test]
fn criterion_3_operator_oracles() {
    let t0 = Instant::now();
    let unit_rp = StepFunction::indicator(Domain::RPlus, 0.0, 1.0);
    let unit_r = StepFunction::indicator(Domain::R, 0.0, 1.0);
    let sym = StepFunction::indicator(Domain::R, -1.0, 1.0);
    let probes: Vec<f64> = (1..=50).map(|i| 0.077 * i as f64 + 0.013).collect();

    let p1 = operators::hardy_p(1.0, &unit_rp).unwrap();
    let q1 = operators::hardy_q(1.0, &unit_rp).unwrap();
    let m = maximal(&unit_r);
    let h = hilbert(&sym).unwrap();
    for &t in &probes {
        // P₁χ = min(1, 1/t)
        assert!((p1.eval(t) - (1.0f64).min(1.0 / t)).abs() <= 1e-10, "P at {t}");
        // Q₁χ = (1-t)/t below 1, 0 past it
        let want = if t < 1.0 { (1.0 - t) / t } else { 0.0 };
        assert!((q1.eval(t) - want).abs() <= 1e-10, "Q at {t}");
        // Mχ = 1 inside, 1/x right, 1/(1-x) left
        let want = if t < 1.0 { 1.0 } else { 1.0 / t };
        assert!((m.eval(t) - want).abs() <= 1e-10, "M at {t}");
        assert!((m.eval(-t) - 1.0 / (1.0 + t)).abs() <= 1e-10, "M at {}", -t);
        // Hχ_(-1,1) = (1/π) ln|(x+1)/(x-1)|
        if (t - 1.0).abs() > 1e-3 {
            let want = ((t + 1.0) / (t - 1.0)).abs().ln() / std::f64::consts::PI;
            assert!((h.eval(t) - want).abs() <= 1e-10, "H at {t}");
        }
    }

    // dilation commutation for all four operators
    let f_rp = StepFunction::new(
        Domain::RPlus,
        vec![
            funcspace::Piece { a: 0.2, b: 1.1, c: 2.0 },
            funcspace::Piece { a: 3.0, b: 4.5, c: 0.7 },
        ],
    )
    .unwrap();
    let f_r = StepFunction::new(Domain::R, f_rp.pieces().to_vec()).unwrap();
    for &lam in &[1.0 / 3.0, 2.0, 5.0] {
        for (op, f) in [
            (OperatorTag::P(1.0), &f_rp),
            (OperatorTag::Q(1.0), &f_rp),
            (OperatorTag::M, &f_r),
            (OperatorTag::H, &f_r),
        ] {
            let d = check_dilation_commute(op, f, lam, &probes).unwrap();
            assert!(d <= 1e-10, "{op:?} λ={lam}: deviation {d}");
        }
    }
    pass_line("criterion 3 (operator oracles)", t0);
}

#[test]
fn criterion_4_hardy_regime() {
    let t0 = Instant::now();
    let p2 = y("power:r=2");
    let grid = LogGrid::new(1e-4, 1e4, 61).unwrap();
    let rep = check_bk_pp(&p2, &p2, 1.0, 0.0, &grid).unwrap();
    assert_eq!(rep.status, CondStatus::Holds);
    assert!(rep.c_min.unwrap().is_finite() && rep.c_min.unwrap() > 0.0);

    let corpus = Corpus::new(7, 100, Domain::RPlus);
    let ver =
        verify_condition_predicts(OperatorTag::P(1.0), &p2, &p2, 1.0, 0.0, &corpus, &grid).unwrap();
    assert!(ver.passed, "{:?}", ver.notes);
    assert!((ver.k_empirical.unwrap() - 8.0 * rep.c_min.unwrap()).abs() < 1e-9);

    let p1 = y("power:r=1");
    let rep1 = check_bk_pp(&p1, &p1, 1.0, 0.0, &grid).unwrap();
    assert_eq!(rep1.status, CondStatus::Divergent);
    let ratios = no_finite_k_family(OperatorTag::P(1.0), &p1, &p1, 0.0).unwrap();
    assert_eq!(ratios.len(), 10);
    assert!(
        ratios.windows(2).all(|w| w[1] > w[0]),
        "witness family must grow monotonically: {ratios:?}"
    );
    assert!(t0.elapsed().as_secs_f64() < 60.0, "runtime bound 60 s");
    pass_line("criterion 4 (Hardy regime)", t0);
}

#[test]
fn criterion_5_muckenhoupt_boundary() {
    let t0 = Instant::now();
    let p2 = y("power:r=2");
    let grid = LogGrid::default();
    for &gamma in &[0.0, 0.5, 0.9] {
        let rep = check_maximal_condition(&p2, gamma, &grid).unwrap();
        assert_eq!(rep.status, CondStatus::Holds, "γ={gamma}");
    }
    for &gamma in &[1.0, 1.5] {
        let rep = check_maximal_condition(&p2, gamma, &grid).unwrap();
        assert!(
            matches!(rep.status, CondStatus::Fails | CondStatus::Divergent),
            "γ={gamma}: {:?}",
            rep.status
        );
    }
    pass_line("criterion 5 (Muckenhoupt boundary γ < r-1)", t0);
}

#[test]
fn criterion_6_duality() {
    let t0 = Instant::now();
    let grid = LogGrid::new(1e-3, 1e3, 31).unwrap();
    let families = ["power:r=1.5", "power:r=2", "power:r=3", "plog:r=2,a=1"];
    let params = [(2.0, 0.5), (3.0, 0.0), (4.0, 0.25), (2.0, 1.0), (3.0, 0.75)];
    let mut tuples = 0;
    for (fi, &f1) in families.iter().enumerate() {
        for &(q, gamma) in &params {
            let phi1 = y(f1);
            let phi2 = y(families[(fi + 1) % families.len()]);
            let (direct, dual) =
                conditions::bk_qq_duality_pair(&phi1, &phi2, q, gamma, &grid).unwrap();
            assert_eq!(
                direct.status, dual.status,
                "duality verdict mismatch for ({f1}, {}, q={q}, γ={gamma})",
                phi2.spec_str()
            );
            tuples += 1;
        }
    }
    assert_eq!(tuples, 20);
    pass_line("criterion 6 (Q↔P duality, 20 tuples)", t0);
}

#[test]
fn criterion_7_counterexample() {
    let t0 = Instant::now();
    let rep = counterexample_report(1.0, 8).unwrap();
    assert!(rep.clause_i_pass, "clause (i)");
    assert!(rep.clause_ii_pass, "clause (ii): slack {}", rep.clause_ii_worst_slack);
    assert!(rep.clause_iii_pass, "clause (iii)");
    assert!(rep.clause_iv_pass, "clause (iv): A_φ {}, BK {}", rep.clause_iv_aphi, rep.clause_iv_bk);
    // the mean over (0, a₁] is exactly 13.75/24, strictly above χ(24) = 1/2
    let (a1, mean1, _) = rep.clause_i[0];
    assert_eq!(a1, 24.0);
    assert_eq!(mean1, 13.75 / 24.0);
    assert!(mean1 > 0.5);
    assert_eq!(rep.clause_iv_aphi, "Fails");
    assert_eq!(rep.clause_iv_bk, "Holds");
    assert!(t0.elapsed().as_secs_f64() < 10.0, "runtime bound 10 s");
    pass_line("criterion 7 (counterexample)", t0);
}

#[test]
fn criterion_8_appendix_weak_strong() {
    let t0 = Instant::now();
    let p2 = y("power:r=2");
    let weights = FourWeights {
        t: PowerWeight::plain(0.0),
        u: PowerWeight::plain(0.0),
        v: PowerWeight::plain(0.0),
        w: PowerWeight::plain(-1.0),
    };
    let corpus = Corpus::new(31, 100, Domain::RPlus);
    let lams = conditions::default_scalar_grid(&LogGrid::new(1e-3, 1e3, 17).unwrap(), 17);
    let rep = verify_weak_strong(&p2, &p2, &weights, &corpus, &lams).unwrap();
    assert!(rep.passed, "{:?}", rep.notes);
    assert!(rep.worst_ratio.unwrap() <= 1.0 + 1e-9, "weak ≤ strong");

    // the four-weight checker cross-validates its φ₂⁻¹ form at every grid
    // point: any disagreement would surface as IncompatibleForms
    let lams2 = [0.5, 1.0, 2.0];
    let xs = [0.2, 1.0, 5.0, 20.0];
    let fw = conditions::check_fourweight_condition(&p2, &p2, &weights, &lams2, &xs).unwrap();
    assert_eq!(fw.status, CondStatus::Holds);
    assert!(
        fw.notes.iter().any(|n| n.contains("phi2-inverse-form")),
        "second form evaluated and recorded"
    );
    pass_line("criterion 8 (weak ⇔ strong with dyadic bound)", t0);
}

#[test]
fn criterion_9_aphi_implies_bk() {
    let t0 = Instant::now();
    let grid = LogGrid::new(1e-3, 1e3, 17).unwrap();
    let lambdas = conditions::default_scalar_grid(&LogGrid::new(1e-2, 1e2, 9).unwrap(), 9);
    let eps = [0.5, 1.0, 2.0];
    let mut holds_pairs = 0;
    for spec in [
        "power:r=1.5",
        "power:r=2",
        "power:r=3",
        "plog:r=2,a=1",
        "appendix2:gamma=1",
    ] {
        let phi = y(spec);
        for &gamma in &[0.25, 0.5, 1.0, 2.0] {
            let w = PowerWeight::plain(gamma);
            let intervals = conditions::default_intervals(&phi, &grid);
            let aphi = check_aphi_general(&phi, &w, &intervals, &eps).unwrap();
            if aphi.status == CondStatus::Holds {
                let bk = check_bk_general(&phi, &w, &intervals, &lambdas).unwrap();
                assert_eq!(
                    bk.status,
                    CondStatus::Holds,
                    "A_φ holds but BK does not for {spec}, γ={gamma}"
                );
                holds_pairs += 1;
            }
        }
    }
    assert!(holds_pairs >= 8, "enough holds instances exercised: {holds_pairs}");
    pass_line("criterion 9 (A_φ ⇒ BK, zero violations)", t0);
}

#[test]
fn criterion_10_determinism_core() {
    // byte determinism of the library reports across thread counts; the CLI
    // binary is exercised separately in its own integration tests
    let t0 = Instant::now();
    let p2 = y("power:r=2");
    let grid = LogGrid::default();
    orliczkit_core::parallel::set_thread_count(1);
    let serial = serde_json::to_string(&check_bk_pp(&p2, &p2, 1.0, 0.0, &grid).unwrap()).unwrap();
    let serial_cx = serde_json::to_string(&counterexample_report(1.0, 8).unwrap()).unwrap();
    orliczkit_core::parallel::set_thread_count(4);
    let par = serde_json::to_string(&check_bk_pp(&p2, &p2, 1.0, 0.0, &grid).unwrap()).unwrap();
    let par_cx = serde_json::to_string(&counterexample_report(1.0, 8).unwrap()).unwrap();
    orliczkit_core::parallel::set_thread_count(1);
    assert_eq!(serial, par, "bk-p report must not depend on thread count");
    assert_eq!(serial_cx, par_cx, "counterexample report must not depend on thread count");

    // corpora are seed-reproducible
    let a = Corpus::new(99, 50, Domain::RPlus).members();
    let b = Corpus::new(99, 50, Domain::RPlus).members();
    for (f, g) in a.iter().zip(&b) {
        assert_eq!(f.pieces(), g.pieces());
    }
    pass_line("criterion 10 (determinism)", t0);
}

#[test]
fn modular_example_values() {
    // spot anchors used across the suite
    let p2 = y("power:r=2");
    let unit = StepFunction::indicator(Domain::RPlus, 0.0, 1.0);
    assert_eq!(modular(&p2, &unit, &PowerWeight::plain(0.0), 3.0).unwrap(), 4.5);
    let h = apply(OperatorTag::H, &StepFunction::indicator(Domain::R, -1.0, 1.0)).unwrap();
    assert!((h.eval(2.0) - 3.0f64.ln() / std::f64::consts::PI).abs() < 1e-14);
}

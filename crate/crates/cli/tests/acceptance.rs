//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured quantities (visible with `--nocapture`).  Every tolerance is
//! pinned here; all comparisons are exact rationals or certified enclosures.

use std::time::{Duration, Instant};

use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mspace_core::gauge::Verdict;
use mspace_core::norms::marcinkiewicz_norm;
use mspace_core::step::StepFunction;
use mspace_core::transport::{apply_transport, transport_to_rearrangement};
use mspace_core::value::{rat, rat_int, Enclosure, Rat, Scalar, Value};
use mspace_core::verify::generate::{
    random_a_gauge, random_pl_gauge, random_step, random_step_above_floor, rat_in_unit,
    translate_right, unit_norm_power_fn,
};
use mspace_core::verify::{
    check_psi_integral_bound, check_quasi_uniform_convexity, check_transport_bound, run_family,
    Family, Outcome, SuiteConfig,
};
use mspace_core::{ConcaveGauge, Extent, NormOutcome};

fn gamma1() -> Extent {
    Extent::finite(Rat::one())
}

fn remark_gauge() -> ConcaveGauge {
    ConcaveGauge::capped_linear(rat_int(2), Rat::one(), gamma1()).unwrap()
}

fn exact_norm(f: &StepFunction, gauge: &ConcaveGauge) -> Rat {
    match marcinkiewicz_norm(f, gauge, 128).unwrap() {
        NormOutcome::Finite(nv) => match nv.value {
            Value::Exact(r) => r,
            Value::Enclosure(e) => panic!("expected exact norm, got {e}"),
        },
        NormOutcome::Infinite => panic!("norm unexpectedly infinite"),
    }
}

fn within(elapsed: Duration, budget: Duration, what: &str) {
    assert!(
        elapsed <= budget,
        "{what} took {elapsed:?}, over the {budget:?} budget"
    );
}

/// Criterion 1: the counterexample norms are exactly 1, in under a second.
#[test]
fn acceptance_1_remark_reproduction() {
    let start = Instant::now();
    let psi = remark_gauge();
    let u = StepFunction::indicator(Rat::zero(), rat(1, 2), rat_int(2), gamma1()).unwrap();
    let v = StepFunction::indicator(rat(1, 2), Rat::one(), rat_int(2), gamma1()).unwrap();
    let mid = u.add(&v).unwrap().scale(&rat(1, 2)).unwrap();
    assert_eq!(exact_norm(&u, &psi), Rat::one());
    assert_eq!(exact_norm(&v, &psi), Rat::one());
    assert_eq!(exact_norm(&mid, &psi), Rat::one());
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1), "criterion 1");
    println!("PASS criterion 1: remark norms all exactly 1/1 in {elapsed:?}");
}

/// Criterion 2: `norm(psi') = 1 - psi(0+)/psi(gamma)` exactly, for 200
/// random piecewise-linear gauges with finite gamma, in under 10 s.
#[test]
fn acceptance_2_derivative_norm_formula() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..200 {
        let gamma = Extent::finite(rat_int(rng.gen_range(1..=3)));
        let jump = if i % 2 == 0 { Rat::zero() } else { rat_in_unit(&mut rng) };
        let gauge = random_pl_gauge(&mut rng, &gamma, 4, jump, i % 3 != 0);
        let profile = gauge.pl_profile().unwrap();
        let g = gamma.expect_finite();
        let expected = Rat::one() - profile.jump() / profile.eval(g);
        let norm = exact_norm(&gauge.derivative().unwrap(), &gauge);
        assert_eq!(norm, expected, "gauge #{i}");
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10), "criterion 2");
    println!("PASS criterion 2: 200 derivative norms match 1 - psi(0+)/psi(gamma) in {elapsed:?}");
}

/// Criterion 3: the classification table, exact and symbolic.
#[test]
fn acceptance_3_classification_table() {
    for (p, expected_exp) in [(rat(3, 2), rat(1, 3)), (rat_int(2), rat(1, 2)), (rat_int(3), rat(2, 3))]
    {
        let gauge = ConcaveGauge::power(p.clone(), Rat::one(), Extent::Infinite).unwrap();
        let report = gauge.classify();
        assert_eq!(report.verdict, Verdict::A, "p = {p}");
        assert_eq!(report.beta, Some(Scalar::PowTwo(expected_exp)));
        assert!(report.grothendieck);
    }
    let report = remark_gauge().classify();
    assert_eq!(report.verdict, Verdict::B);
    assert!(report.grothendieck);

    let flat = ConcaveGauge::capped_linear(Rat::one(), Rat::one(), Extent::Infinite).unwrap();
    let report = flat.classify();
    assert_eq!(report.verdict, Verdict::Neither);
    assert!(!report.grothendieck);

    let jumpy = ConcaveGauge::piecewise_linear(
        mspace_core::PiecewiseLinearConcave::linear(rat(1, 2), Rat::one(), gamma1()).unwrap(),
    )
    .unwrap();
    let report = jumpy.classify();
    assert_eq!(report.verdict, Verdict::Neither);
    assert!(!report.grothendieck);
    println!("PASS criterion 3: classification table matches (A with 2^(1-1/p), B, NEITHER x2)");
}

/// Criterion 4: the head integral equals the supremum of the mass over
/// unions of refinement sub-intervals, on 500 random atomless instances
/// with at most 6 pieces, exactly, in under 30 s.
#[test]
fn acceptance_4_head_integral_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for case in 0..500 {
        // All cuts and the query point live on a 1/d grid, so the optimal
        // set is a union of grid atoms and the oracle is a sorted sum.
        let d = rng.gen_range(8..=40i64);
        let cut_count = rng.gen_range(0..6usize);
        let mut nums: Vec<i64> = Vec::new();
        while nums.len() < cut_count {
            let n = rng.gen_range(1..d);
            if !nums.contains(&n) {
                nums.push(n);
            }
        }
        nums.sort_unstable();
        let cuts: Vec<Rat> = nums.iter().map(|&n| rat(n, d)).collect();
        let values: Vec<Rat> = (0..=cut_count)
            .map(|_| rat(rng.gen_range(0..=9), rng.gen_range(1..=6)))
            .collect();
        let f = StepFunction::new(cuts, values, gamma1()).unwrap();
        let k = rng.gen_range(0..=d);
        let t = rat(k, d);
        let mut atoms: Vec<Rat> =
            (0..d).map(|i| f.value_at(&rat(i, d)) / rat_int(d)).collect();
        atoms.sort();
        atoms.reverse();
        let oracle: Rat = atoms.into_iter().take(k as usize).sum();
        assert_eq!(f.head_integral(&t).unwrap(), oracle, "case {case}");
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(30), "criterion 4");
    println!("PASS criterion 4: 500 head integrals equal the interval-union oracle in {elapsed:?}");
}

/// Criterion 5: five inequality suites at seed 0 with 10^4 cases each,
/// zero violations, total under 2 minutes.
#[test]
fn acceptance_5_inequality_suites() {
    let start = Instant::now();
    let config = SuiteConfig { seed: 0, cases: 10_000, ..SuiteConfig::default() };
    for family in [
        Family::Superadditivity,
        Family::DisjointDilation,
        Family::PointwiseBound,
        Family::NaturalSandwich,
        Family::HolderPairing,
    ] {
        let results = run_family(&config, family);
        let violations = results.iter().filter(|r| r.outcome == Outcome::Violated).count();
        let inconclusive = results.iter().filter(|r| r.outcome == Outcome::Inconclusive).count();
        assert_eq!(violations, 0, "{} violations in {}", violations, family.name());
        assert_eq!(inconclusive, 0, "inconclusive results in {}", family.name());
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(120), "criterion 5");
    println!("PASS criterion 5: 5 x 10000 checks, zero violations, in {elapsed:?}");
}

/// Criterion 6: the ratio-integral bound.  Fixed power case certified by
/// enclosures at 128 bits, fixed piecewise-linear case with exact equality,
/// and 1000 random condition-(A) spot checks with no inconclusive outcome.
#[test]
fn acceptance_6_ratio_integral_bound() {
    // Power p = 2 at t = 1: integral is exactly 2; the bound is
    // (sqrt2 - 1)^-1.  Certify via enclosures.
    let power = ConcaveGauge::power(rat_int(2), Rat::one(), Extent::Infinite).unwrap();
    let lhs = power.big_psi_head_integral(&Rat::one(), 128).unwrap();
    assert_eq!(lhs, Enclosure::point(rat_int(2)));
    let beta = power.classify().beta.unwrap();
    let beta_enc = beta.enclosure(128);
    let rhs = beta_enc.sub(&Enclosure::point(Rat::one())).recip();
    assert!(lhs.definitely_le(&rhs), "2 <= (sqrt2 - 1)^-1 must certify");

    // min(2t, 1) at t = 1/4: exact equality 1/2 = 1/2.
    let cap = remark_gauge();
    let report = cap.classify();
    let r = check_psi_integral_bound(&cap, &report, &rat(1, 4), 128).unwrap();
    assert_eq!(r.outcome, Outcome::Holds);
    assert_eq!(r.margin, Value::Exact(Rat::zero()));

    // 1000 random condition-(A) gauges at default precision: no
    // inconclusive verdicts.
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for case in 0..1000 {
        let gauge = random_a_gauge(&mut rng, 3);
        let report = gauge.classify();
        let t = rat_int(rng.gen_range(0..=2)) + rat_in_unit(&mut rng);
        let r = check_psi_integral_bound(&gauge, &report, &t, 128).unwrap();
        assert_eq!(r.outcome, Outcome::Holds, "case {case}: {}", r.instance);
    }
    println!("PASS criterion 6: closed forms certified; 1000 (A)-gauge spot checks conclusive");
}

/// Criterion 7: quasi-uniform convexity.  1000 random disjoint norm-one
/// pairs under p = 2 satisfy the 2^(-1/2) bound (decided exactly, margins
/// reported as certified enclosures), and the truncated-mode counterexample
/// pair achieves the bound 1/2 with equality.
#[test]
fn acceptance_7_quasi_uniform_convexity() {
    let p = rat_int(2);
    let gauge = ConcaveGauge::power(p.clone(), Rat::one(), Extent::Infinite).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..1000 {
        let u = unit_norm_power_fn(&mut rng, &p);
        let span = match u.support_upper() {
            Extent::Finite(s) => s,
            Extent::Infinite => unreachable!(),
        };
        let v = translate_right(&unit_norm_power_fn(&mut rng, &p), &span);
        let r = check_quasi_uniform_convexity(&u, &v, &gauge, 128).unwrap();
        assert_eq!(r.outcome, Outcome::Holds, "case {case}: {}", r.instance);
        // The reported margin must never certify a violation.
        if let Value::Enclosure(m) = &r.margin {
            assert!(m.hi() >= &Rat::zero());
        }
    }

    // Truncated mode at delta = 1/4: the counterexample pair sits exactly
    // on the bound 1/2.
    let cap = remark_gauge();
    assert_eq!(cap.classify().delta, Some(rat(1, 4)));
    let u = StepFunction::indicator(Rat::zero(), rat(1, 2), rat_int(2), gamma1()).unwrap();
    let v = StepFunction::indicator(rat(1, 2), Rat::one(), rat_int(2), gamma1()).unwrap();
    let r = check_quasi_uniform_convexity(&u, &v, &cap, 128).unwrap();
    assert_eq!(r.outcome, Outcome::Holds);
    assert_eq!(r.margin, Value::Exact(Rat::zero()), "equality witness expected");
    println!("PASS criterion 7: 1000 power pairs within 2^(-1/2); truncated bound met with equality");
}

/// Criterion 8: exact transport and the 4/5 envelope bounds on both kinds
/// of domain, 1000 random functions.
#[test]
fn acceptance_8_transport() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cap = remark_gauge();
    let mut s0_cases = 0;
    let mut general_cases = 0;
    for case in 0..1000 {
        if case % 2 == 0 {
            let f = random_step(&mut rng, &gamma1(), 6);
            let sigma = transport_to_rearrangement(&f).unwrap();
            assert_eq!(apply_transport(&sigma, &f.rearrange()).unwrap(), f);
            let r = check_transport_bound(&f, &cap, 128).unwrap();
            assert_eq!(r.outcome, Outcome::Holds, "case {case}");
            assert!(r.instance.contains("branch=s0"));
            s0_cases += 1;
        } else {
            let f = random_step_above_floor(&mut rng, 6);
            let sigma = transport_to_rearrangement(&f).unwrap();
            assert_eq!(apply_transport(&sigma, &f.rearrange()).unwrap(), f);
            let gauge = random_pl_gauge(&mut rng, &Extent::Infinite, 3, Rat::zero(), true);
            let r = check_transport_bound(&f, &gauge, 128).unwrap();
            assert_eq!(r.outcome, Outcome::Holds, "case {case}");
            assert!(r.instance.contains("branch=general"));
            general_cases += 1;
        }
    }
    println!(
        "PASS criterion 8: exact transport on 1000 functions ({s0_cases} s0 / {general_cases} general), bounds 4 and 5 hold"
    );
}

/// Criterion 9: `verify --seed 0 --cases 1000` is byte-identical across runs.
#[test]
fn acceptance_9_determinism() {
    let run = || {
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_mspace"))
            .args(["verify", "--seed", "0", "--cases", "1000"])
            .output()
            .expect("run mspace verify");
        assert!(out.status.success(), "verify reported violations");
        out.stdout
    };
    let first = run();
    let second = run();
    assert_eq!(first, second, "reports must be byte-identical");
    let text = String::from_utf8(first).unwrap();
    assert!(text.ends_with("violations=0 cases=8004 seed=0\n"), "unexpected summary");
    println!("PASS criterion 9: two verify runs byte-identical ({} bytes)", text.len());
}

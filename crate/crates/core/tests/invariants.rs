//! Property tests for the exact calculus: equimeasurability, rearrangement
//! laws, head-integral identities, submajorization order, transport
//! invariance, norm axioms, and serialization round trips.

use std::cmp::Ordering;

use num::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mspace_core::gauge::Verdict;
use mspace_core::norms::{marcinkiewicz_norm, unit_ball_member};
use mspace_core::profile::submajorizes;
use mspace_core::step::StepFunction;
use mspace_core::textio::{parse_function, parse_gauge, render_function, render_gauge};
use mspace_core::transport::{apply_transport, transport_to_rearrangement};
use mspace_core::value::{rat, rat_int, Rat, Scalar, Value};
use mspace_core::verify::generate::{random_pl_gauge, translate_right};
use mspace_core::{ConcaveGauge, Extent, NormOutcome};

const GRID: i64 = 24;

fn gamma1() -> Extent {
    Extent::finite(Rat::one())
}

fn grid_rat(n: i64) -> Rat {
    rat(n, GRID)
}

/// Step functions on (0, 1) with cuts on the 1/24 grid and small values.
fn arb_step_unit() -> impl Strategy<Value = StepFunction> {
    (
        prop::collection::btree_set(1..GRID, 0..5usize),
        prop::collection::vec((0..6i64, 1..6i64), 6),
    )
        .prop_map(|(cut_nums, raw_values)| {
            let cuts: Vec<Rat> = cut_nums.into_iter().map(grid_rat).collect();
            let values: Vec<Rat> = raw_values
                .into_iter()
                .take(cuts.len() + 1)
                .map(|(p, q)| rat(p, q))
                .collect();
            StepFunction::new(cuts, values, gamma1()).expect("grid step function")
        })
}

/// Step functions on (0, inf) with compact support inside (0, 1).
fn arb_step_inf() -> impl Strategy<Value = StepFunction> {
    arb_step_unit().prop_map(|f| {
        let mut cuts = f.cut_points().to_vec();
        let mut values = f.segment_values().to_vec();
        cuts.push(Rat::one());
        values.push(Rat::zero());
        StepFunction::new(cuts, values, Extent::Infinite).expect("embedded step function")
    })
}

/// Concave piecewise-linear gauges on (0, 1), derived from a seed.
fn arb_pl_gauge_unit() -> impl Strategy<Value = ConcaveGauge> {
    (any::<u64>(), any::<bool>()).prop_map(|(seed, jumpy)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let jump = if jumpy { rat(1, 3) } else { Rat::zero() };
        random_pl_gauge(&mut rng, &gamma1(), 3, jump, true)
    })
}

fn exact_norm(f: &StepFunction, gauge: &ConcaveGauge) -> Rat {
    match marcinkiewicz_norm(f, gauge, 64).unwrap() {
        NormOutcome::Finite(nv) => match nv.value {
            Value::Exact(r) => r,
            Value::Enclosure(_) => panic!("piecewise-linear norms are exact"),
        },
        NormOutcome::Infinite => panic!("finite-domain norms are finite"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rearrangement_is_equimeasurable(f in arb_step_unit()) {
        let star = f.rearrange();
        let mut thresholds: Vec<Rat> = f.segment_values().to_vec();
        thresholds.extend(star.segment_values().iter().cloned());
        thresholds.push(Rat::zero());
        for s in thresholds {
            prop_assert_eq!(f.distribution(&s), star.distribution(&s));
        }
    }

    #[test]
    fn rearrangement_is_idempotent_and_decreasing(f in arb_step_unit()) {
        let star = f.rearrange();
        prop_assert!(star.is_decreasing() || star.segment_values().len() == 1);
        prop_assert_eq!(star.rearrange(), star);
    }

    #[test]
    fn head_profile_slopes_are_the_rearrangement(f in arb_step_unit()) {
        let star = f.rearrange();
        let head = f.head_profile();
        prop_assert!(head.jump().is_zero());
        prop_assert_eq!(&head.derivative_step(), &star);
        // H is increasing and concave by construction; check a few values.
        let mut prev = Rat::zero();
        for k in [6, 12, 18, 24] {
            let h = head.eval(&grid_rat(k));
            prop_assert!(h >= prev);
            prev = h;
        }
    }

    #[test]
    fn head_integral_superadditivity(
        f1 in arb_step_unit(),
        f2 in arb_step_unit(),
        a in 0..GRID,
        b in 0..GRID,
    ) {
        let (t1, t2) = (grid_rat(a / 2), grid_rat(b / 2));
        let lhs = f1.head_integral(&t1).unwrap() + f2.head_integral(&t2).unwrap();
        let rhs = f1.add(&f2).unwrap().head_integral(&(&t1 + &t2)).unwrap();
        prop_assert!(lhs <= rhs);
    }

    #[test]
    fn head_integral_matches_sorted_atom_oracle(f in arb_step_unit(), k in 0..=GRID) {
        // The best mass on sets of measure k/24 is the sum of the k largest
        // grid atoms (all cuts lie on the 1/24 grid).
        let t = grid_rat(k);
        let mut atom_masses: Vec<Rat> = (0..GRID)
            .map(|i| f.value_at(&grid_rat(i)) / rat_int(GRID))
            .collect();
        atom_masses.sort();
        atom_masses.reverse();
        let oracle: Rat = atom_masses.into_iter().take(k as usize).sum();
        prop_assert_eq!(f.head_integral(&t).unwrap(), oracle);
    }

    #[test]
    fn submajorization_is_reflexive_and_transitive(
        a in arb_step_unit(),
        b in arb_step_unit(),
        c in arb_step_unit(),
    ) {
        let inf = Extent::Infinite;
        prop_assert!(submajorizes(&a, &a, &inf).unwrap());
        if submajorizes(&b, &a, &inf).unwrap() && submajorizes(&c, &b, &inf).unwrap() {
            prop_assert!(submajorizes(&c, &a, &inf).unwrap());
        }
        // Mutual submajorization pins the head profiles.
        if submajorizes(&b, &a, &inf).unwrap() && submajorizes(&a, &b, &inf).unwrap() {
            prop_assert_eq!(a.head_profile(), b.head_profile());
        }
    }

    #[test]
    fn dilation_doubles_head_integrals(f in arb_step_inf(), k in 0..(2 * GRID)) {
        let d = f.dilate(&rat_int(2)).unwrap();
        let t = grid_rat(k);
        prop_assert_eq!(
            d.head_integral(&t).unwrap(),
            rat_int(2) * f.head_integral(&(&t / rat_int(2))).unwrap()
        );
    }

    #[test]
    fn disjoint_copies_rearrange_to_the_dilation(f in arb_step_inf()) {
        // f1 and f2 disjoint with equal rearrangements: (f1+f2)* = D_2 f*.
        let f2 = translate_right(&f, &Rat::one());
        prop_assert!(f.disjoint(&f2).unwrap());
        let sum = f.add(&f2).unwrap();
        prop_assert_eq!(sum.rearrange(), f.rearrange().dilate(&rat_int(2)).unwrap());
    }

    #[test]
    fn transport_reaches_the_rearrangement_exactly(f in arb_step_unit()) {
        let sigma = transport_to_rearrangement(&f).unwrap();
        let star = f.rearrange();
        prop_assert_eq!(apply_transport(&sigma, &star).unwrap(), f.clone());
        // The inverse caries f back onto its rearrangement.
        prop_assert_eq!(apply_transport(&sigma.inverse(), &f).unwrap(), star);
    }

    #[test]
    fn transport_preserves_rearrangements(f in arb_step_unit(), g in arb_step_unit()) {
        // Any automorphism built from g permutes f without changing f*.
        let sigma = transport_to_rearrangement(&g).unwrap();
        let moved = apply_transport(&sigma, &f).unwrap();
        prop_assert_eq!(moved.rearrange(), f.rearrange());
    }

    #[test]
    fn norm_axioms_hold_exactly(
        f in arb_step_unit(),
        g in arb_step_unit(),
        gauge in arb_pl_gauge_unit(),
        c in 0..5i64,
    ) {
        let nf = exact_norm(&f, &gauge);
        let ng = exact_norm(&g, &gauge);
        // Homogeneity.
        let scaled = f.scale(&rat_int(c)).unwrap();
        prop_assert_eq!(exact_norm(&scaled, &gauge), rat_int(c) * &nf);
        // Triangle inequality.
        let sum = f.add(&g).unwrap();
        prop_assert!(exact_norm(&sum, &gauge) <= &nf + &ng);
        // Pointwise monotonicity.
        let dominated = f.min(&g).unwrap();
        prop_assert!(exact_norm(&dominated, &gauge) <= nf.clone());
        prop_assert!(exact_norm(&dominated, &gauge) <= ng);
        // Rearrangement and transport invariance.
        prop_assert_eq!(exact_norm(&f.rearrange(), &gauge), nf.clone());
        let sigma = transport_to_rearrangement(&g).unwrap();
        prop_assert_eq!(exact_norm(&apply_transport(&sigma, &f).unwrap(), &gauge), nf.clone());
        // Full symmetry.
        if submajorizes(&g, &f, &Extent::Infinite).unwrap() {
            prop_assert!(nf <= exact_norm(&g, &gauge));
        }
    }

    #[test]
    fn unit_ball_is_the_submajorization_ball(
        f in arb_step_unit(),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gauge = random_pl_gauge(&mut rng, &gamma1(), 3, Rat::zero(), true);
        let member = unit_ball_member(&f, &gauge).unwrap();
        let norm = exact_norm(&f, &gauge);
        prop_assert_eq!(member, norm <= Rat::one());
    }

    #[test]
    fn big_psi_is_decreasing_on_gauges(gauge in arb_pl_gauge_unit(), a in 1..GRID, b in 1..GRID) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let at = |k: i64| match gauge.big_psi(&grid_rat(k), 64).unwrap() {
            Value::Exact(r) => r,
            Value::Enclosure(_) => unreachable!(),
        };
        prop_assert!(at(lo) >= at(hi));
    }

    #[test]
    fn gauge_derivative_integrates_back(gauge in arb_pl_gauge_unit(), k in 1..=GRID) {
        let prime = gauge.derivative().unwrap();
        let t = grid_rat(k);
        let profile = gauge.pl_profile().unwrap();
        prop_assert_eq!(
            prime.head_integral(&t).unwrap(),
            profile.eval(&t) - profile.jump()
        );
    }

    #[test]
    fn doubling_ratio_stays_at_least_one(gauge in arb_pl_gauge_unit(), k in 1..(GRID / 2)) {
        let profile = gauge.doubling_profile();
        let v = profile.eval_rational(&grid_rat(k)).unwrap();
        prop_assert!(v >= Rat::one());
    }

    #[test]
    fn serialization_round_trips(f in arb_step_unit(), gauge in arb_pl_gauge_unit()) {
        prop_assert_eq!(parse_function(&render_function(&f)).unwrap(), f);
        prop_assert_eq!(parse_gauge(&render_gauge(&gauge)).unwrap(), gauge);
    }
}

/// Condition (A) certificate check: `psi(2t) >= beta * psi(t)` on a large
/// deterministic sample of rational points, exact in both backends.
#[test]
fn verdict_a_beta_certificate_on_thousand_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let linear_kink = random_pl_gauge(&mut rng, &Extent::Infinite, 3, Rat::zero(), true);
    let power = ConcaveGauge::power(rat(3, 2), Rat::one(), Extent::Infinite).unwrap();
    for gauge in [linear_kink, power] {
        let report = gauge.classify();
        assert_eq!(report.verdict, Verdict::A);
        let beta = report.beta.unwrap();
        for k in 1..=1000i64 {
            let t = rat(k, 160); // covers (0, 6.25]
            match (&beta, gauge.pl_profile()) {
                (Scalar::Rational(b), Some(profile)) => {
                    assert!(profile.eval(&(&t * rat_int(2))) >= b * profile.eval(&t));
                }
                (Scalar::PowTwo(e), None) => {
                    // psi(2t) >= 2^e * psi(t), decided by exact monomials.
                    let two_t = gauge.eval_monomial(&(&t * rat_int(2))).unwrap();
                    let bound = gauge.eval_monomial(&t).unwrap().mul(
                        &mspace_core::value::PowMonomial::from_rat(Rat::one())
                            .with_factor(rat_int(2), e.clone()),
                    );
                    assert_ne!(two_t.cmp(&bound), Ordering::Less);
                }
                _ => unreachable!("backend/certificate mismatch"),
            }
        }
    }
}

/// The flagged corner case: an eventually constant gauge on an infinite
/// domain is NEITHER via the liminf at infinity, with the flag set.
#[test]
fn eventually_constant_gauges_are_flagged() {
    let flat = ConcaveGauge::capped_linear(rat_int(2), Rat::one(), Extent::Infinite).unwrap();
    let report = flat.classify();
    assert_eq!(report.verdict, Verdict::Neither);
    assert!(report.eventually_constant);
    assert_eq!(report.liminf_at_infinity, Some(Scalar::Rational(Rat::one())));
    assert!(!report.grothendieck);
}

//! The individual inequality checks.
//!
//! Premises are re-audited on entry (`Error::PremiseViolated` otherwise).
//! Piecewise-linear instances are decided by exact rational comparison;
//! power-gauge instances by exact monomial comparison, with enclosures
//! attached for the reported margins.

use std::cmp::Ordering;

use num::{One, Signed, Zero};

use crate::error::Error;
use crate::extent::Extent;
use crate::gauge::{ConcaveGauge, ConditionReport, GaugeBackend, Verdict};
use crate::norms::{
    lorentz_norm, marc_norm_symbolic, natural_norm_symbolic, pairing_integral, sandwich_constant,
    NormOutcome, SymbolicNorm,
};
use crate::profile::profile_dominates;
use crate::step::StepFunction;
use crate::transport::transport_to_rearrangement;
use crate::value::{rat, rat_int, Enclosure, PowMonomial, Rat, Scalar, Value};
use crate::textio::{fmt_extent, fmt_rat, function_inline, gauge_inline};
use crate::Result;

use super::{CheckResult, Outcome};

fn premise(why: &str) -> Error {
    Error::premise(why.to_string())
}

/// `H_{f1}(t1) + H_{f2}(t2) <= H_{f1+f2}(t1+t2)`, exact.
pub fn check_superadditivity(
    f1: &StepFunction,
    f2: &StepFunction,
    t1: &Rat,
    t2: &Rat,
) -> Result<CheckResult> {
    if t1.is_negative() || t2.is_negative() {
        return Err(premise("offsets must be nonnegative"));
    }
    let sum = f1.add(f2)?;
    let lhs = f1.head_integral(t1)? + f2.head_integral(t2)?;
    let total = t1 + t2;
    let rhs = sum.head_integral(&total)?;
    let margin = rhs - lhs;
    Ok(CheckResult {
        name: "superadditivity",
        instance: format!(
            "f1={};f2={};t1={};t2={}",
            function_inline(f1),
            function_inline(f2),
            fmt_rat(t1),
            fmt_rat(t2)
        ),
        outcome: if margin.is_negative() { Outcome::Violated } else { Outcome::Holds },
        margin: Value::Exact(margin),
        witness: Some(total),
    })
}

/// Under `u ^ v = 0` and head domination of both `u` and `v` by a decreasing
/// `f` up to `alpha`: the head profile of `u + v` is dominated by that of the
/// 2-dilation of `f` up to `alpha`.  Exact profile comparison.
pub fn check_disjoint_dilation(
    u: &StepFunction,
    v: &StepFunction,
    f: &StepFunction,
    alpha: &Extent,
) -> Result<CheckResult> {
    if !u.disjoint(v)? {
        return Err(premise("u and v must be disjoint"));
    }
    let f_head = f.head_profile();
    if !profile_dominates(&f_head, &u.head_profile(), alpha).holds
        || !profile_dominates(&f_head, &v.head_profile(), alpha).holds
    {
        return Err(premise("f must dominate the head profiles of u and v"));
    }
    let sum = u.add(v)?;
    let report = profile_dominates(&f_head.stretch(&rat_int(2)), &sum.head_profile(), alpha);
    Ok(CheckResult {
        name: "disjoint_dilation",
        instance: format!(
            "u={};v={};f={};alpha={}",
            function_inline(u),
            function_inline(v),
            function_inline(f),
            fmt_extent(alpha)
        ),
        outcome: if report.holds { Outcome::Holds } else { Outcome::Violated },
        margin: Value::Exact(report.margin.unwrap_or_else(Rat::zero)),
        witness: report.witness,
    })
}

/// `Psi` of the gauge at the right end of a slab `[lower, upper)`: the
/// decreasing ratio `psi(t)/t` is smallest there.
fn big_psi_at_slab_end(gauge: &ConcaveGauge, upper: &Extent) -> PowMonomial {
    match upper {
        Extent::Infinite => gauge.big_psi_at_end(),
        Extent::Finite(x) => {
            if gauge.gamma().cmp_rat(x) == Ordering::Greater {
                gauge.big_psi_monomial_unchecked(x)
            } else {
                gauge.big_psi_at_end()
            }
        }
    }
}

/// `f*(t) <= norm(f) * Psi(t)` on every rearrangement slab (both sides are
/// monotone there, so the right end of each slab is the tight spot).
pub fn check_pointwise_bound(
    f: &StepFunction,
    gauge: &ConcaveGauge,
    bits: u32,
) -> Result<CheckResult> {
    let norm = match marc_norm_symbolic(f, gauge)? {
        SymbolicNorm::Infinite => return Err(premise("f must have finite norm")),
        SymbolicNorm::Finite(m, _) => m,
    };
    let star = f.rearrange();
    let mut outcome = Outcome::Holds;
    let mut worst: Option<(Enclosure, Rat)> = None; // (margin enclosure, witness)
    for slab in star.segments() {
        let rhs = norm.mul(&big_psi_at_slab_end(gauge, &slab.upper));
        if rhs.cmp_rat(&slab.value) == Ordering::Less {
            outcome = Outcome::Violated;
        }
        let diff = rhs.to_enclosure(bits).sub(&Enclosure::point(slab.value.clone()));
        let witness = match &slab.upper {
            Extent::Finite(x) => x.clone(),
            Extent::Infinite => slab.lower.clone(),
        };
        let replace = match &worst {
            None => true,
            Some((m, _)) => diff.midpoint() < m.midpoint(),
        };
        if replace {
            worst = Some((diff, witness));
        }
    }
    let (margin_enc, witness) = worst.expect("at least one slab");
    let margin = if margin_enc.is_point() {
        Value::Exact(margin_enc.lo().clone())
    } else {
        Value::Enclosure(margin_enc)
    };
    Ok(CheckResult {
        name: "pointwise_bound",
        instance: format!("f={};gauge={}", function_inline(f), gauge_inline(gauge)),
        outcome,
        margin,
        witness: Some(witness),
    })
}

/// `integral of Psi on [0, t] <= (beta - 1)^-1 * psi(t)` given a
/// classification certificate (for verdict B only on `(0, delta]`).
pub fn check_psi_integral_bound(
    gauge: &ConcaveGauge,
    report: &ConditionReport,
    t: &Rat,
    bits: u32,
) -> Result<CheckResult> {
    let beta = match (&report.verdict, &report.beta) {
        (Verdict::Neither, _) | (_, None) => {
            return Err(premise("gauge must satisfy condition (A) or (B)"))
        }
        (_, Some(b)) => b,
    };
    if report.verdict == Verdict::B {
        let delta = report.delta.as_ref().expect("verdict B carries delta");
        if t > delta {
            return Err(premise("t must stay within the certified range (0, delta]"));
        }
    }
    let lhs = gauge.big_psi_head_integral(t, bits)?;
    let instance = format!("gauge={};t={}", gauge_inline(gauge), fmt_rat(t));

    let (outcome, margin) = match beta {
        Scalar::Rational(b) => {
            let psi_t = match gauge.eval(t, bits)? {
                Value::Exact(r) => r,
                Value::Enclosure(_) => unreachable!("rational beta only for exact gauges"),
            };
            let rhs = psi_t / (b - Rat::one());
            let outcome = if lhs.hi() <= &rhs {
                Outcome::Holds
            } else if lhs.lo() > &rhs {
                Outcome::Violated
            } else {
                Outcome::Inconclusive
            };
            let margin_enc = Enclosure::point(rhs).sub(&lhs);
            (outcome, margin_enc)
        }
        Scalar::PowTwo(_) => {
            // Power gauge: both sides share the factor psi(t) > 0, so the
            // comparison reduces to p/(p-1) <= (beta - 1)^-1, i.e.
            // beta <= 2 - 1/p, decided exactly.
            let p = match gauge.backend() {
                GaugeBackend::Power { p, .. } => p.clone(),
                GaugeBackend::PiecewiseLinear(_) => {
                    unreachable!("symbolic beta only for power gauges")
                }
            };
            let bound = rat_int(2) - p.clone().recip();
            let outcome = match beta.cmp_rat(&bound) {
                Ordering::Greater => Outcome::Violated,
                _ => Outcome::Holds,
            };
            let beta_enc = beta.enclosure(bits);
            let margin_enc = if beta_enc.lo() > &Rat::one() {
                let gap = beta_enc.sub(&Enclosure::point(Rat::one()));
                let rhs = gauge.eval_monomial_unchecked(t).to_enclosure(bits).mul_nonneg(&gap.recip());
                rhs.sub(&lhs)
            } else {
                Enclosure::point(Rat::zero())
            };
            (outcome, margin_enc)
        }
    };
    let margin = if margin.is_point() {
        Value::Exact(margin.lo().clone())
    } else {
        Value::Enclosure(margin)
    };
    Ok(CheckResult {
        name: "ratio_integral_bound",
        instance,
        outcome,
        margin,
        witness: Some(t.clone()),
    })
}

/// Transport envelope: builds an automorphism carrying the rearrangement
/// back onto `f` and checks `f <= C * norm(f) * Psi(sigma(.))` cell by cell,
/// with `C = 4` when the rearrangement vanishes at infinity and `C = 5`
/// otherwise (the split through `(f - tail)^+` covers the general case).
/// The reported margin is the best (largest) ratio actually achieved.
pub fn check_transport_bound(
    f: &StepFunction,
    gauge: &ConcaveGauge,
    bits: u32,
) -> Result<CheckResult> {
    let report = gauge.classify();
    if report.verdict == Verdict::Neither {
        return Err(premise("gauge must satisfy condition (A) or (B)"));
    }
    let norm = match marc_norm_symbolic(f, gauge)? {
        SymbolicNorm::Infinite => return Err(premise("f must have finite norm")),
        SymbolicNorm::Finite(m, _) => m,
    };
    let (branch, constant, sigma) = if f.is_in_s0() {
        ("s0", rat_int(4), transport_to_rearrangement(f)?)
    } else {
        let tail = StepFunction::constant(f.final_value().clone(), f.gamma().clone())?;
        let reduced = f.minus_plus(&tail)?;
        ("general", rat_int(5), transport_to_rearrangement(&reduced)?)
    };

    let bound_base = norm.scale(&constant);
    let mut outcome = Outcome::Holds;
    let mut best_ratio: Option<(Enclosure, Rat)> = None;
    for seg in sigma.segments() {
        for cell in f.segments() {
            let lo = if cell.lower > seg.lower { cell.lower.clone() } else { seg.lower.clone() };
            let hi = cell.upper.clone().min(seg.upper.clone());
            if hi.cmp_rat(&lo) != Ordering::Greater {
                continue;
            }
            let image_end = hi.add_rat(&seg.offset);
            let psi_end = big_psi_at_slab_end(gauge, &image_end);
            let rhs = bound_base.mul(&psi_end);
            if rhs.cmp_rat(&cell.value) == Ordering::Less {
                outcome = Outcome::Violated;
            }
            if cell.value.is_positive() {
                let denom = norm.mul(&psi_end).to_enclosure(bits);
                if denom.lo().is_positive() {
                    let ratio = Enclosure::point(cell.value.clone()).mul_nonneg(&denom.recip());
                    let witness = match &image_end {
                        Extent::Finite(x) => x.clone(),
                        Extent::Infinite => &lo + &seg.offset,
                    };
                    let replace = match &best_ratio {
                        None => true,
                        Some((r, _)) => ratio.midpoint() > r.midpoint(),
                    };
                    if replace {
                        best_ratio = Some((ratio, witness));
                    }
                }
            }
        }
    }
    let (margin, witness) = match best_ratio {
        Some((r, w)) => {
            let v = if r.is_point() { Value::Exact(r.lo().clone()) } else { Value::Enclosure(r) };
            (v, Some(w))
        }
        None => (Value::Exact(Rat::zero()), None),
    };
    Ok(CheckResult {
        name: "transport_bound",
        instance: format!(
            "f={};gauge={};branch={}",
            function_inline(f),
            gauge_inline(gauge),
            branch
        ),
        outcome,
        margin,
        witness,
    })
}

/// Quasi-uniform convexity certificate: disjoint norm-one `u, v` satisfy
/// `norm((u+v)/2) <= 1/beta` (the plain norm under condition (A), the
/// truncated norm under condition (B)).  Also verifies the intermediate
/// bound `norm(D_2 psi') <= 2/beta` for piecewise-linear gauges.
pub fn check_quasi_uniform_convexity(
    u: &StepFunction,
    v: &StepFunction,
    gauge: &ConcaveGauge,
    bits: u32,
) -> Result<CheckResult> {
    if !u.disjoint(v)? {
        return Err(premise("u and v must be disjoint"));
    }
    let report = gauge.classify();
    let norm_of = |f: &StepFunction| -> Result<PowMonomial> {
        let sym = match report.verdict {
            Verdict::A => marc_norm_symbolic(f, gauge)?,
            Verdict::B => {
                natural_norm_symbolic(f, gauge, report.delta.as_ref().expect("B carries delta"))?
            }
            Verdict::Neither => return Err(premise("gauge must satisfy condition (A) or (B)")),
        };
        match sym {
            SymbolicNorm::Infinite => Err(premise("inputs must have finite norm")),
            SymbolicNorm::Finite(m, _) => Ok(m),
        }
    };
    if norm_of(u)?.cmp_rat(&Rat::one()) != Ordering::Equal
        || norm_of(v)?.cmp_rat(&Rat::one()) != Ordering::Equal
    {
        return Err(premise("u and v must be normalized to norm one"));
    }
    let beta = report.beta.as_ref().expect("A/B carries beta");
    let bound = match beta {
        Scalar::Rational(b) => PowMonomial::from_rat(b.clone().recip()),
        Scalar::PowTwo(e) => PowMonomial::from_rat(Rat::one()).with_factor(rat_int(2), -e.clone()),
    };
    let midpoint = u.add(v)?.scale(&rat(1, 2))?;
    let lhs = norm_of(&midpoint)?;
    let mut outcome = if lhs.cmp(&bound) == Ordering::Greater {
        Outcome::Violated
    } else {
        Outcome::Holds
    };

    // Intermediate dilation bound, available when psi' is a step function.
    if gauge.is_piecewise_linear() {
        let prime = gauge.derivative()?;
        let two = rat_int(2);
        let dilated = prime.dilate_clipped(&two);
        let dil_norm = match report.verdict {
            Verdict::A => marc_norm_symbolic(&dilated, gauge)?,
            _ => natural_norm_symbolic(&dilated, gauge, report.delta.as_ref().unwrap())?,
        };
        let dil_bound = bound.scale(&two);
        match dil_norm {
            SymbolicNorm::Infinite => outcome = Outcome::Violated,
            SymbolicNorm::Finite(m, _) => {
                if m.cmp(&dil_bound) == Ordering::Greater {
                    outcome = Outcome::Violated;
                }
            }
        }
    }

    let margin_enc = bound.to_enclosure(bits).sub(&lhs.to_enclosure(bits));
    let margin = if margin_enc.is_point() {
        Value::Exact(margin_enc.lo().clone())
    } else {
        Value::Enclosure(margin_enc)
    };
    Ok(CheckResult {
        name: "quasi_uniform_convexity",
        instance: format!(
            "u={};v={};gauge={};mode={}",
            function_inline(u),
            function_inline(v),
            gauge_inline(gauge),
            report.verdict
        ),
        outcome,
        margin,
        witness: None,
    })
}

/// Pairing inequality `integral of f*g <= norm_M(f) * norm_Lambda(g)`
/// (piecewise-linear gauges, exact).
pub fn check_holder(f: &StepFunction, g: &StepFunction, gauge: &ConcaveGauge) -> Result<CheckResult> {
    let lhs = pairing_integral(f, g)?;
    let marc = marc_norm_symbolic(f, gauge)?;
    let lorentz = lorentz_norm(g, gauge)?;
    let instance = format!(
        "f={};g={};gauge={}",
        function_inline(f),
        function_inline(g),
        gauge_inline(gauge)
    );
    let (outcome, margin) = match (&lhs, &marc, &lorentz) {
        (Extent::Finite(l), SymbolicNorm::Finite(nf, _), NormOutcome::Finite(ng)) => {
            let nf = nf.as_rational().expect("piecewise-linear norm is rational").clone();
            let ng = match &ng.value {
                Value::Exact(r) => r.clone(),
                Value::Enclosure(_) => unreachable!("Lorentz norms are exact"),
            };
            let margin = nf * ng - l;
            (
                if margin.is_negative() { Outcome::Violated } else { Outcome::Holds },
                Value::Exact(margin),
            )
        }
        // An infinite right-hand side dominates everything.
        (_, SymbolicNorm::Infinite, _) | (_, _, NormOutcome::Infinite) => {
            (Outcome::Holds, Value::Exact(Rat::zero()))
        }
        // Finite norms but infinite pairing: a genuine violation.
        (Extent::Infinite, _, _) => (Outcome::Violated, Value::Exact(Rat::zero())),
    };
    Ok(CheckResult { name: "holder_pairing", instance, outcome, margin, witness: None })
}

/// Sandwich between the truncated and the full norm:
/// `natural <= full <= (1 + (gamma/psi(gamma)) (psi(delta)/delta)) * natural`.
pub fn check_natural_sandwich(
    f: &StepFunction,
    gauge: &ConcaveGauge,
    delta: &Rat,
) -> Result<CheckResult> {
    let constant = sandwich_constant(gauge, delta)?;
    let full = match marc_norm_symbolic(f, gauge)? {
        SymbolicNorm::Infinite => return Err(premise("f must have finite norm")),
        SymbolicNorm::Finite(m, _) => {
            m.as_rational().expect("piecewise-linear norm is rational").clone()
        }
    };
    let natural = match natural_norm_symbolic(f, gauge, delta)? {
        SymbolicNorm::Infinite => unreachable!("truncated supremum of finitely many values"),
        SymbolicNorm::Finite(m, _) => m.as_rational().expect("rational").clone(),
    };
    let lower_slack = &full - &natural;
    let upper_slack = constant * &natural - &full;
    let margin = if lower_slack <= upper_slack { lower_slack.clone() } else { upper_slack.clone() };
    Ok(CheckResult {
        name: "natural_sandwich",
        instance: format!(
            "f={};gauge={};delta={}",
            function_inline(f),
            gauge_inline(gauge),
            fmt_rat(delta)
        ),
        outcome: if lower_slack.is_negative() || upper_slack.is_negative() {
            Outcome::Violated
        } else {
            Outcome::Holds
        },
        margin: Value::Exact(margin),
        witness: None,
    })
}

fn remark_instance() -> (ConcaveGauge, StepFunction, StepFunction) {
    let gamma = Extent::finite(Rat::one());
    let gauge = ConcaveGauge::capped_linear(rat_int(2), Rat::one(), gamma.clone())
        .expect("remark gauge");
    let u = StepFunction::indicator(Rat::zero(), rat(1, 2), rat_int(2), gamma.clone())
        .expect("remark u");
    let v = StepFunction::indicator(rat(1, 2), Rat::one(), rat_int(2), gamma).expect("remark v");
    (gauge, u, v)
}

fn equality_record(
    name: &'static str,
    instance: String,
    computed: &SymbolicNorm,
    expected: &Rat,
) -> CheckResult {
    let (outcome, margin) = match computed {
        SymbolicNorm::Infinite => (Outcome::Violated, Value::Exact(Rat::zero())),
        SymbolicNorm::Finite(m, _) => {
            let value = m.as_rational().expect("rational norm").clone();
            let diff = &value - expected;
            (
                if diff.is_zero() { Outcome::Holds } else { Outcome::Violated },
                Value::Exact(diff),
            )
        }
    };
    CheckResult { name, instance, outcome, margin, witness: None }
}

/// The fixed counterexample bundle: under `psi(t) = min(2t, 1)` on `(0, 1)`
/// the disjoint pair `u = 2 chi[0,1/2)`, `v = 2 chi[1/2,1)` has
/// `norm(u) = norm(v) = norm((u+v)/2) = 1` (so the plain norm is not
/// quasi-uniformly convex), while the classification still yields (B).
pub fn remark_counterexample() -> Vec<CheckResult> {
    let (gauge, u, v) = remark_instance();
    let instance = format!(
        "gauge={};u={};v={}",
        gauge_inline(&gauge),
        function_inline(&u),
        function_inline(&v)
    );
    let one = Rat::one();
    let mid = u.add(&v).unwrap().scale(&rat(1, 2)).unwrap();
    let mut out = vec![
        equality_record(
            "counterexample_norm_u",
            instance.clone(),
            &marc_norm_symbolic(&u, &gauge).unwrap(),
            &one,
        ),
        equality_record(
            "counterexample_norm_v",
            instance.clone(),
            &marc_norm_symbolic(&v, &gauge).unwrap(),
            &one,
        ),
        equality_record(
            "counterexample_norm_midpoint",
            instance.clone(),
            &marc_norm_symbolic(&mid, &gauge).unwrap(),
            &one,
        ),
    ];
    let report = gauge.classify();
    out.push(CheckResult {
        name: "counterexample_classification",
        instance,
        outcome: if report.verdict == Verdict::B && report.grothendieck {
            Outcome::Holds
        } else {
            Outcome::Violated
        },
        margin: Value::Exact(Rat::zero()),
        witness: report.delta,
    });
    out
}

/// The counterexample pair re-evaluated under an arbitrary gauge: reports
/// the recomputed norms and classification without asserting the reference
/// values.
pub fn remark_with_gauge(gauge: &ConcaveGauge) -> Result<Vec<CheckResult>> {
    let gamma = gauge.gamma().clone();
    let half = match &gamma {
        Extent::Finite(g) => g / rat_int(2),
        Extent::Infinite => rat(1, 2),
    };
    let top = match &gamma {
        Extent::Finite(g) => g.clone(),
        Extent::Infinite => Rat::one(),
    };
    let u = StepFunction::indicator(Rat::zero(), half.clone(), rat_int(2), gamma.clone())?;
    let v = StepFunction::indicator(half, top, rat_int(2), gamma)?;
    let mid = u.add(&v)?.scale(&rat(1, 2))?;
    let instance = format!(
        "gauge={};u={};v={}",
        gauge_inline(gauge),
        function_inline(&u),
        function_inline(&v)
    );
    let report_norm = |name: &'static str, f: &StepFunction| -> Result<CheckResult> {
        let margin = match marc_norm_symbolic(f, gauge)? {
            SymbolicNorm::Infinite => Value::Exact(Rat::zero()),
            SymbolicNorm::Finite(m, _) => {
                let enc = m.to_enclosure(crate::value::DEFAULT_PRECISION);
                if enc.is_point() {
                    Value::Exact(enc.lo().clone())
                } else {
                    Value::Enclosure(enc)
                }
            }
        };
        Ok(CheckResult { name, instance: instance.clone(), outcome: Outcome::Holds, margin, witness: None })
    };
    let classification = gauge.classify();
    let mut out = vec![
        report_norm("counterexample_report_norm_u", &u)?,
        report_norm("counterexample_report_norm_v", &v)?,
        report_norm("counterexample_report_norm_midpoint", &mid)?,
    ];
    out.push(CheckResult {
        name: "counterexample_report_classification",
        instance: format!("{};verdict={}", instance, classification.verdict),
        outcome: Outcome::Holds,
        margin: Value::Exact(Rat::zero()),
        witness: classification.delta,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma1() -> Extent {
        Extent::finite(Rat::one())
    }

    #[test]
    fn superadditivity_equality_case() {
        // Disjoint unit blocks: both sides equal 1 at t1 = t2 = 1/2.
        let two = Extent::finite(rat_int(2));
        let f1 = StepFunction::indicator(Rat::zero(), Rat::one(), Rat::one(), two.clone()).unwrap();
        let f2 = StepFunction::indicator(Rat::one(), rat_int(2), Rat::one(), two.clone()).unwrap();
        let r = check_superadditivity(&f1, &f2, &rat(1, 2), &rat(1, 2)).unwrap();
        assert_eq!(r.outcome, Outcome::Holds);
        assert_eq!(r.margin, Value::Exact(Rat::zero()));
        // Identical (non-disjoint) copies hold with slack.
        let f = StepFunction::constant(Rat::one(), gamma1()).unwrap();
        let r = check_superadditivity(&f, &f, &rat(1, 2), &rat(1, 2)).unwrap();
        assert_eq!(r.outcome, Outcome::Holds);
        assert_eq!(r.margin, Value::Exact(Rat::one()));
        // f2 = 0 reduces to monotonicity of the head integral.
        let z = StepFunction::zero(gamma1());
        let r = check_superadditivity(&f, &z, &rat(1, 4), &rat(1, 4)).unwrap();
        assert_eq!(r.outcome, Outcome::Holds);
    }

    #[test]
    fn disjoint_dilation_boundary_case() {
        let u = StepFunction::indicator(Rat::zero(), rat(1, 2), rat_int(2), gamma1()).unwrap();
        let v = StepFunction::indicator(rat(1, 2), Rat::one(), rat_int(2), gamma1()).unwrap();
        let r = check_disjoint_dilation(&u, &v, &u, &Extent::finite(Rat::one())).unwrap();
        assert_eq!(r.outcome, Outcome::Holds);
        assert_eq!(r.margin, Value::Exact(Rat::zero()));
        // v = 0 reduces to dilation dominance.
        let z = StepFunction::zero(gamma1());
        let r = check_disjoint_dilation(&u, &z, &u, &Extent::finite(Rat::one())).unwrap();
        assert_eq!(r.outcome, Outcome::Holds);
        // Premise audit.
        assert!(check_disjoint_dilation(&u, &u, &u, &Extent::Infinite).is_err());
    }

    #[test]
    fn pointwise_bound_equality_for_the_derivative() {
        let gauge =
            ConcaveGauge::capped_linear(rat_int(2), Rat::one(), gamma1()).unwrap();
        let prime = gauge.derivative().unwrap();
        let r = check_pointwise_bound(&prime, &gauge, 64).unwrap();
        assert_eq!(r.outcome, Outcome::Holds);
        assert_eq!(r.margin, Value::Exact(Rat::zero()));
        let z = StepFunction::zero(gamma1());
        assert_eq!(check_pointwise_bound(&z, &gauge, 64).unwrap().outcome, Outcome::Holds);
    }

    #[test]
    fn psi_integral_bound_closed_forms() {
        // Power p = 2 at t = 1: 2 <= 1/(sqrt2 - 1).
        let power = ConcaveGauge::power(rat_int(2), Rat::one(), Extent::Infinite).unwrap();
        let report = power.classify();
        let r = check_psi_integral_bound(&power, &report, &Rat::one(), 128).unwrap();
        assert_eq!(r.outcome, Outcome::Holds);
        // min(2t,1) at t = 1/4: exact equality 1/2 = 1/2.
        let cap = ConcaveGauge::capped_linear(rat_int(2), Rat::one(), gamma1()).unwrap();
        let report = cap.classify();
        let r = check_psi_integral_bound(&cap, &report, &rat(1, 4), 128).unwrap();
        assert_eq!(r.outcome, Outcome::Holds);
        assert_eq!(r.margin, Value::Exact(Rat::zero()));
        // Out-of-range t is a premise violation for (B).
        assert!(check_psi_integral_bound(&cap, &report, &rat(1, 2), 128).is_err());
    }

    #[test]
    fn transport_bound_on_decreasing_input() {
        let gauge = ConcaveGauge::capped_linear(rat_int(2), Rat::one(), gamma1()).unwrap();
        let f = gauge.derivative().unwrap();
        let r = check_transport_bound(&f, &gauge, 64).unwrap();
        assert_eq!(r.outcome, Outcome::Holds);
        assert!(r.instance.contains("branch=s0"));
    }

    #[test]
    fn transport_bound_general_branch() {
        // Infinite domain, nonzero tail, values at or above the tail.
        let f = StepFunction::from_pieces(
            &[(Rat::zero(), Rat::one(), rat_int(3))],
            Rat::one(),
            Extent::Infinite,
        )
        .unwrap();
        let gauge = ConcaveGauge::piecewise_linear(
            crate::profile::PiecewiseLinearConcave::linear(Rat::zero(), Rat::one(), Extent::Infinite)
                .unwrap(),
        )
        .unwrap();
        let r = check_transport_bound(&f, &gauge, 64).unwrap();
        assert_eq!(r.outcome, Outcome::Holds);
        assert!(r.instance.contains("branch=general"));
    }

    #[test]
    fn quasi_uniform_convexity_on_the_remark_pair() {
        // In truncated mode the bound 1/beta = 1/2 holds with equality.
        let (gauge, u, v) = remark_instance();
        let r = check_quasi_uniform_convexity(&u, &v, &gauge, 64).unwrap();
        assert_eq!(r.outcome, Outcome::Holds);
        assert_eq!(r.margin, Value::Exact(Rat::zero()));
    }

    #[test]
    fn quasi_uniform_convexity_power_translates() {
        let gauge = ConcaveGauge::power(rat_int(2), Rat::one(), Extent::Infinite).unwrap();
        let u = StepFunction::indicator(Rat::zero(), Rat::one(), Rat::one(), Extent::Infinite)
            .unwrap();
        let v = StepFunction::indicator(Rat::one(), rat_int(2), Rat::one(), Extent::Infinite)
            .unwrap();
        let r = check_quasi_uniform_convexity(&u, &v, &gauge, 128).unwrap();
        // Exact equality at the bound 2^(-1/2).
        assert_eq!(r.outcome, Outcome::Holds);
    }

    #[test]
    fn holder_pairing_remark_instance() {
        let (gauge, u, _) = remark_instance();
        let g = StepFunction::constant(Rat::one(), gamma1()).unwrap();
        let r = check_holder(&u, &g, &gauge).unwrap();
        assert_eq!(r.outcome, Outcome::Holds);
        assert_eq!(r.margin, Value::Exact(Rat::zero()));
        let z = StepFunction::zero(gamma1());
        let r = check_holder(&u, &z, &gauge).unwrap();
        assert_eq!(r.outcome, Outcome::Holds);
    }

    #[test]
    fn natural_sandwich_on_indicator() {
        let (gauge, _, _) = remark_instance();
        let f = StepFunction::constant(Rat::one(), gamma1()).unwrap();
        let r = check_natural_sandwich(&f, &gauge, &rat(1, 4)).unwrap();
        assert_eq!(r.outcome, Outcome::Holds);
    }

    #[test]
    fn counterexample_bundle_holds_exactly() {
        let results = remark_counterexample();
        assert_eq!(results.len(), 4);
        for r in &results {
            assert_eq!(r.outcome, Outcome::Holds, "{} failed", r.name);
        }
        // Deterministic serialization.
        let again = remark_counterexample();
        for (a, b) in results.iter().zip(again.iter()) {
            assert_eq!(a.render_line(), b.render_line());
        }
    }

    #[test]
    fn perturbed_counterexample_reports_without_asserting() {
        let gauge =
            ConcaveGauge::capped_linear(rat_int(3), Rat::one(), gamma1()).unwrap();
        let results = remark_with_gauge(&gauge).unwrap();
        assert_eq!(results.len(), 4);
        assert!(results.iter().all(|r| r.outcome == Outcome::Holds));
        assert_eq!(results[2].margin, Value::Exact(Rat::one()));
    }
}

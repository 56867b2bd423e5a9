//! Greedy violation minimization: fewer pieces first, then smaller
//! denominators, while the violation persists.

use num::{One, Signed, Zero};

use crate::step::StepFunction;
use crate::value::Rat;

use super::generate::Instance;
use super::{CheckResult, Outcome};

/// Shrinks a violating instance and returns the result of re-running the
/// check on the minimal witness found.
pub(crate) fn minimize(instance: &Instance, bits: u32) -> CheckResult {
    minimize_with(instance, |cand| match cand.run(bits) {
        Ok(res) if res.outcome == Outcome::Violated => Some(res),
        _ => None,
    })
    .expect("the original instance violates")
}

/// Generic greedy loop; `eval` returns `Some(result)` iff the candidate
/// still violates.
pub(crate) fn minimize_with(
    instance: &Instance,
    eval: impl Fn(&Instance) -> Option<CheckResult>,
) -> Option<CheckResult> {
    let mut current = instance.clone();
    let mut best = eval(&current)?;
    let mut budget = 400usize;
    loop {
        let mut improved = false;
        'outer: for idx in 0..current.functions().len() {
            let candidates = simplify_step(current.functions()[idx]);
            for cand_fn in candidates {
                if budget == 0 {
                    return Some(best);
                }
                budget -= 1;
                let cand = current.with_function(idx, cand_fn);
                if let Some(res) = eval(&cand) {
                    current = cand;
                    best = res;
                    improved = true;
                    break 'outer;
                }
            }
        }
        if !improved {
            return Some(best);
        }
    }
}

/// Structurally simpler variants of a step function, most aggressive first:
/// dropped cuts (merging into either neighbor), zeroed values, and rationals
/// rounded onto coarser grids.
pub(crate) fn simplify_step(f: &StepFunction) -> Vec<StepFunction> {
    let cuts = f.cut_points();
    let values = f.segment_values();
    let gamma = f.gamma();
    let mut out = Vec::new();
    for i in 0..cuts.len() {
        for absorb_left in [true, false] {
            let mut c = cuts.to_vec();
            c.remove(i);
            let mut v = values.to_vec();
            v.remove(if absorb_left { i + 1 } else { i });
            if let Ok(g) = StepFunction::new(c, v, gamma.clone()) {
                out.push(g);
            }
        }
    }
    for i in 0..values.len() {
        if !values[i].is_zero() {
            let mut v = values.to_vec();
            v[i] = Rat::zero();
            if let Ok(g) = StepFunction::new(cuts.to_vec(), v, gamma.clone()) {
                out.push(g);
            }
        }
        if let Some(s) = coarser(&values[i]) {
            let mut v = values.to_vec();
            v[i] = s;
            if let Ok(g) = StepFunction::new(cuts.to_vec(), v, gamma.clone()) {
                out.push(g);
            }
        }
    }
    for i in 0..cuts.len() {
        if let Some(s) = coarser(&cuts[i]) {
            let mut c = cuts.to_vec();
            c[i] = s;
            if let Ok(g) = StepFunction::new(c, values.to_vec(), gamma.clone()) {
                out.push(g);
            }
        }
    }
    out
}

/// The nearest value on the half-denominator grid, when different.
fn coarser(r: &Rat) -> Option<Rat> {
    if r.denom() <= &num::BigInt::one() {
        return None;
    }
    let half = Rat::new((r.denom() + num::BigInt::one()) / num::BigInt::from(2), num::BigInt::one());
    let rounded = (r * &half).round() / half;
    if &rounded != r && !rounded.is_negative() {
        Some(rounded)
    } else {
        None
    }
}

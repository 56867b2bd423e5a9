//! Increasing concave piecewise-linear functions on `[0, gamma)`.
//!
//! These carry both head-integral profiles `H_f(t) = integral of f* on [0,t]`
//! and piecewise-linear gauges.  A profile is a jump at `0+`, interior knots
//! `(t, value)`, and a final slope; segments between knots are linear and the
//! slopes are nonnegative and non-increasing.

use num::{Signed, Zero};

use crate::error::Error;
use crate::extent::Extent;
use crate::step::StepFunction;
use crate::value::Rat;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseLinearConcave {
    jump: Rat,
    knots: Vec<(Rat, Rat)>,
    final_slope: Rat,
    gamma: Extent,
}

/// One linear segment `value(t) = intercept + slope * t` on `[lower, upper)`.
#[derive(Debug, Clone)]
pub struct LinearSegment {
    pub lower: Rat,
    pub upper: Extent,
    pub intercept: Rat,
    pub slope: Rat,
}

impl PiecewiseLinearConcave {
    pub fn new(jump: Rat, knots: Vec<(Rat, Rat)>, final_slope: Rat, gamma: Extent) -> Result<Self> {
        if jump.is_negative() {
            return Err(Error::invalid("profile", "value at 0+ must be nonnegative"));
        }
        if final_slope.is_negative() {
            return Err(Error::invalid("profile", "final slope must be nonnegative"));
        }
        let mut prev_t: Option<&Rat> = None;
        for (t, _) in &knots {
            if !t.is_positive() {
                return Err(Error::invalid("profile", "knots must have positive abscissae"));
            }
            if let Some(p) = prev_t {
                if p >= t {
                    return Err(Error::invalid("profile", "knots must be strictly increasing"));
                }
            }
            if gamma.cmp_rat(t) != std::cmp::Ordering::Greater {
                return Err(Error::invalid("profile", "knots must lie inside (0, gamma)"));
            }
            prev_t = Some(t);
        }
        let mut profile = PiecewiseLinearConcave { jump, knots, final_slope, gamma };
        let slopes = profile.slopes();
        for w in slopes.windows(2) {
            if w[1] > w[0] {
                return Err(Error::invalid("profile", "slopes must be non-increasing (concavity)"));
            }
        }
        if slopes.iter().any(|s| s.is_negative()) {
            return Err(Error::invalid("profile", "slopes must be nonnegative (increasing)"));
        }
        profile.drop_collinear_knots();
        Ok(profile)
    }

    /// Linear function `jump + slope * t` (no interior knots).
    pub fn linear(jump: Rat, slope: Rat, gamma: Extent) -> Result<Self> {
        PiecewiseLinearConcave::new(jump, Vec::new(), slope, gamma)
    }

    fn drop_collinear_knots(&mut self) {
        loop {
            let slopes = self.slopes();
            let redundant = (0..self.knots.len()).find(|&i| slopes[i] == slopes[i + 1]);
            match redundant {
                Some(i) => {
                    self.knots.remove(i);
                }
                None => break,
            }
        }
    }

    pub fn jump(&self) -> &Rat {
        &self.jump
    }

    pub fn knots(&self) -> &[(Rat, Rat)] {
        &self.knots
    }

    pub fn final_slope(&self) -> &Rat {
        &self.final_slope
    }

    pub fn gamma(&self) -> &Extent {
        &self.gamma
    }

    /// Segment slopes, one per segment (`knots.len() + 1` entries).
    pub fn slopes(&self) -> Vec<Rat> {
        let mut slopes = Vec::with_capacity(self.knots.len() + 1);
        let mut prev_t = Rat::zero();
        let mut prev_v = self.jump.clone();
        for (t, v) in &self.knots {
            slopes.push((v - &prev_v) / (t - &prev_t));
            prev_t = t.clone();
            prev_v = v.clone();
        }
        slopes.push(self.final_slope.clone());
        slopes
    }

    pub fn segments(&self) -> Vec<LinearSegment> {
        let slopes = self.slopes();
        let mut out = Vec::with_capacity(slopes.len());
        let mut lower = Rat::zero();
        let mut value_at_lower = self.jump.clone();
        for (i, slope) in slopes.iter().enumerate() {
            let upper = if i < self.knots.len() {
                Extent::Finite(self.knots[i].0.clone())
            } else {
                self.gamma.clone()
            };
            let intercept = &value_at_lower - slope * &lower;
            out.push(LinearSegment {
                lower: lower.clone(),
                upper: upper.clone(),
                intercept,
                slope: slope.clone(),
            });
            if let Extent::Finite(u) = upper {
                value_at_lower = &value_at_lower + slope * (&u - &lower);
                lower = u;
            }
        }
        out
    }

    /// Exact value at `t in [0, gamma]` (finite `gamma` included as the
    /// continuous extension; `t = 0` returns the `0+` limit).
    pub fn eval(&self, t: &Rat) -> Rat {
        assert!(!t.is_negative(), "profile argument below 0");
        assert!(
            self.gamma.cmp_rat(t) != std::cmp::Ordering::Less,
            "profile argument beyond gamma"
        );
        let mut prev_t = Rat::zero();
        let mut prev_v = self.jump.clone();
        for (kt, kv) in &self.knots {
            if t <= kt {
                let slope = (kv - &prev_v) / (kt - &prev_t);
                return prev_v + slope * (t - prev_t);
            }
            prev_t = kt.clone();
            prev_v = kv.clone();
        }
        prev_v + &self.final_slope * (t - prev_t)
    }

    /// Intercept/slope of the segment containing `t > 0`.  Segments are
    /// half-open `[lower, upper)`; at or beyond the last knot the final
    /// segment applies.
    pub fn linear_params_at(&self, t: &Rat) -> (Rat, Rat) {
        assert!(t.is_positive());
        let mut segments = self.segments();
        let last = segments.pop().unwrap();
        for seg in segments {
            if seg.upper.cmp_rat(t) == std::cmp::Ordering::Greater {
                return (seg.intercept, seg.slope);
            }
        }
        (last.intercept, last.slope)
    }

    /// Limit at the right end of the domain: `eval(gamma)` when finite,
    /// otherwise infinite iff the final slope is positive.
    pub fn limit_at_end(&self) -> Extent {
        match &self.gamma {
            Extent::Finite(g) => Extent::Finite(self.eval(g)),
            Extent::Infinite => {
                if self.final_slope.is_positive() {
                    Extent::Infinite
                } else {
                    let v = self
                        .knots
                        .last()
                        .map(|(_, v)| v.clone())
                        .unwrap_or_else(|| self.jump.clone());
                    Extent::Finite(v)
                }
            }
        }
    }

    pub fn is_identically_zero(&self) -> bool {
        self.jump.is_zero() && self.knots.is_empty() && self.final_slope.is_zero()
    }

    /// The derivative as a (decreasing) step function of the slopes.
    pub fn derivative_step(&self) -> StepFunction {
        let cuts: Vec<Rat> = self.knots.iter().map(|(t, _)| t.clone()).collect();
        StepFunction::new(cuts, self.slopes(), self.gamma.clone())
            .expect("slopes of a concave profile form a step function")
    }

    /// `t -> c * value(t / c)`: the head profile of the `c`-dilated function.
    /// Knots pushed past a finite `gamma` are clipped (the result is only
    /// used on `[0, gamma)`).
    pub fn stretch(&self, c: &Rat) -> PiecewiseLinearConcave {
        assert!(c.is_positive());
        let slopes = self.slopes();
        let mut knots: Vec<(Rat, Rat)> = Vec::new();
        let mut final_slope = self.final_slope.clone();
        for (i, (t, v)) in self.knots.iter().enumerate() {
            let nt = t * c;
            if self.gamma.cmp_rat(&nt) != std::cmp::Ordering::Greater {
                // This and all later knots fall past gamma; the clipped
                // profile ends inside segment i.
                final_slope = slopes[i].clone();
                break;
            }
            knots.push((nt, v * c));
        }
        PiecewiseLinearConcave::new(&self.jump * c, knots, final_slope, self.gamma.clone())
            .expect("stretched profile stays concave")
    }
}

/// Outcome of a pointwise dominance comparison of two concave profiles on
/// `[0, end)`.
#[derive(Debug, Clone)]
pub struct DominanceReport {
    pub holds: bool,
    /// Point realizing the extremal margin (most negative on violation,
    /// smallest nonnegative otherwise).
    pub witness: Option<Rat>,
    /// `upper - lower` at the witness.
    pub margin: Option<Rat>,
}

/// Decides `lower(t) <= upper(t)` for all `t in [0, end)`, exactly.  The
/// difference is piecewise linear, so it suffices to test the union of the
/// knots, the endpoint (as a limit), and the final slopes when the range is
/// unbounded.
pub fn profile_dominates(
    upper: &PiecewiseLinearConcave,
    lower: &PiecewiseLinearConcave,
    end: &Extent,
) -> DominanceReport {
    assert_eq!(upper.gamma(), lower.gamma(), "profiles live on different domains");
    let effective = end.min(upper.gamma()).clone();
    let mut checkpoints: Vec<Rat> = vec![Rat::zero()];
    for (t, _) in upper.knots().iter().chain(lower.knots().iter()) {
        if effective.cmp_rat(t) == std::cmp::Ordering::Greater {
            checkpoints.push(t.clone());
        }
    }
    if let Extent::Finite(e) = &effective {
        checkpoints.push(e.clone());
    }
    checkpoints.sort();
    checkpoints.dedup();

    let mut best: Option<(Rat, Rat)> = None; // (margin, witness), minimal margin
    for t in &checkpoints {
        let diff = upper.eval(t) - lower.eval(t);
        if best.as_ref().map(|(m, _)| &diff < m).unwrap_or(true) {
            best = Some((diff, t.clone()));
        }
    }
    let (mut margin, mut witness) = best.expect("at least one checkpoint");

    if effective.is_infinite() {
        let slope_gap = upper.final_slope() - lower.final_slope();
        if slope_gap.is_negative() {
            // The difference decreases without bound; exhibit a concrete
            // violation point past the last knots.
            let start = checkpoints.last().unwrap().clone();
            let diff_there = upper.eval(&start) - lower.eval(&start);
            let reach = if diff_there.is_positive() {
                &diff_there / (-&slope_gap)
            } else {
                Rat::zero()
            };
            let t_viol = &start + reach + Rat::from_integer(1.into());
            let diff = upper.eval(&t_viol) - lower.eval(&t_viol);
            if diff < margin {
                margin = diff;
                witness = t_viol;
            }
        }
    }

    DominanceReport { holds: !margin.is_negative(), witness: Some(witness), margin: Some(margin) }
}

/// Hardy-Littlewood submajorization: true iff the head integrals satisfy
/// `integral of f* <= integral of g*` on `[0, up_to)`.
pub fn submajorizes(g: &StepFunction, f: &StepFunction, up_to: &Extent) -> Result<bool> {
    if f.gamma() != g.gamma() {
        return Err(Error::DomainMismatch(f.gamma().to_string(), g.gamma().to_string()));
    }
    Ok(profile_dominates(&g.head_profile(), &f.head_profile(), up_to).holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::rat;

    fn gamma1() -> Extent {
        Extent::finite(rat(1, 1))
    }

    /// min(2t, 1) on (0, 1).
    fn cap_profile() -> PiecewiseLinearConcave {
        PiecewiseLinearConcave::new(
            rat(0, 1),
            vec![(rat(1, 2), rat(1, 1))],
            rat(0, 1),
            gamma1(),
        )
        .unwrap()
    }

    #[test]
    fn eval_interpolates() {
        let p = cap_profile();
        assert_eq!(p.eval(&rat(1, 4)), rat(1, 2));
        assert_eq!(p.eval(&rat(3, 4)), rat(1, 1));
        assert_eq!(p.eval(&rat(0, 1)), rat(0, 1));
        assert_eq!(p.eval(&rat(1, 1)), rat(1, 1));
    }

    #[test]
    fn convex_data_is_rejected() {
        let bad = PiecewiseLinearConcave::new(
            rat(0, 1),
            vec![(rat(1, 2), rat(1, 4))],
            rat(2, 1),
            gamma1(),
        );
        assert!(bad.is_err());
    }

    #[test]
    fn collinear_knots_are_dropped() {
        let p = PiecewiseLinearConcave::new(
            rat(0, 1),
            vec![(rat(1, 4), rat(1, 2)), (rat(1, 2), rat(1, 1))],
            rat(2, 1),
            gamma1(),
        )
        .unwrap();
        assert!(p.knots().is_empty());
        assert_eq!(p.final_slope(), &rat(2, 1));
    }

    #[test]
    fn derivative_of_cap_is_a_rectangle() {
        let d = cap_profile().derivative_step();
        assert_eq!(
            d,
            StepFunction::indicator(rat(0, 1), rat(1, 2), rat(2, 1), gamma1()).unwrap()
        );
        // Exact integral identity at the knot and the end.
        assert_eq!(d.head_integral(&rat(1, 2)).unwrap(), rat(1, 1));
        assert_eq!(d.head_integral(&rat(1, 1)).unwrap(), rat(1, 1));
    }

    #[test]
    fn submajorization_is_reflexive_and_scalar_monotone() {
        let g1 = gamma1();
        let f = StepFunction::indicator(rat(0, 1), rat(1, 1), rat(1, 1), g1.clone()).unwrap();
        let two_f = f.scale(&rat(2, 1)).unwrap();
        assert!(submajorizes(&f, &f, &Extent::Infinite).unwrap());
        assert!(submajorizes(&two_f, &f, &Extent::Infinite).unwrap());
        assert!(!submajorizes(&f, &two_f, &Extent::Infinite).unwrap());
    }

    #[test]
    fn submajorization_equality_case() {
        let g1 = gamma1();
        let u = StepFunction::indicator(rat(0, 1), rat(1, 2), rat(2, 1), g1.clone()).unwrap();
        let psi_prime = cap_profile().derivative_step();
        assert!(submajorizes(&psi_prime, &u, &Extent::finite(rat(1, 1))).unwrap());
        assert!(submajorizes(&u, &psi_prime, &Extent::finite(rat(1, 1))).unwrap());
    }

    #[test]
    fn final_slope_decides_unbounded_comparisons() {
        let inf = Extent::Infinite;
        let slow = StepFunction::constant(rat(1, 1), inf.clone()).unwrap();
        let fast = StepFunction::constant(rat(2, 1), inf.clone()).unwrap();
        assert!(submajorizes(&fast, &slow, &Extent::Infinite).unwrap());
        assert!(!submajorizes(&slow, &fast, &Extent::Infinite).unwrap());
        // Bounded range: up to 1 the comparison also fails for (slow, fast).
        assert!(!submajorizes(&slow, &fast, &Extent::finite(rat(1, 1))).unwrap());
    }

    #[test]
    fn dominance_report_carries_a_violation_witness() {
        let inf = Extent::Infinite;
        let slow = StepFunction::constant(rat(1, 1), inf.clone()).unwrap();
        let fast = StepFunction::constant(rat(2, 1), inf).unwrap();
        let report = profile_dominates(&slow.head_profile(), &fast.head_profile(), &Extent::Infinite);
        assert!(!report.holds);
        let w = report.witness.unwrap();
        assert!(slow.head_profile().eval(&w) < fast.head_profile().eval(&w));
    }

    #[test]
    fn stretch_doubles_head_integrals() {
        let g = Extent::Infinite;
        let f = StepFunction::indicator(rat(0, 1), rat(1, 2), rat(2, 1), g).unwrap();
        let h = f.head_profile();
        let stretched = h.stretch(&rat(2, 1));
        // H_{D_2 f}(t) = 2 H_f(t/2)
        for t in [rat(1, 4), rat(1, 2), rat(1, 1), rat(2, 1), rat(4, 1)] {
            assert_eq!(stretched.eval(&t), rat(2, 1) * h.eval(&(&t / rat(2, 1))));
        }
    }
}

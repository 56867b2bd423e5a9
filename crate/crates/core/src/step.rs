//! Nonnegative simple functions on `(0, gamma)` with rational data.
//!
//! A [`StepFunction`] is stored as a full partition of `(0, gamma)`: strictly
//! increasing interior cut points and one value per resulting half-open
//! segment `[c_i, c_{i+1})`.  The final segment reaches `gamma` (possibly
//! infinity).  Canonical form merges adjacent segments with equal values, so
//! structural equality is semantic equality almost everywhere.

use std::collections::BTreeMap;

use num::{Signed, Zero};

use crate::error::Error;
use crate::extent::Extent;
use crate::profile::PiecewiseLinearConcave;
use crate::value::{rat_int, Rat};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFunction {
    cuts: Vec<Rat>,
    values: Vec<Rat>,
    gamma: Extent,
}

/// One maximal constant segment `[lower, upper)` of a step function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub lower: Rat,
    pub upper: Extent,
    pub value: Rat,
}

impl Segment {
    pub fn length(&self) -> Extent {
        self.upper.sub_rat(&self.lower)
    }
}

impl StepFunction {
    /// Builds a step function from a full partition: `values[i]` on the
    /// segment between consecutive cuts (`values.len() == cuts.len() + 1`).
    pub fn new(cuts: Vec<Rat>, values: Vec<Rat>, gamma: Extent) -> Result<Self> {
        if gamma.cmp_rat(&Rat::zero()) != std::cmp::Ordering::Greater {
            return Err(Error::invalid("step function", "gamma must be positive"));
        }
        if values.len() != cuts.len() + 1 {
            return Err(Error::invalid(
                "step function",
                "need exactly one value per partition segment",
            ));
        }
        for v in &values {
            if v.is_negative() {
                return Err(Error::invalid("step function", "values must be nonnegative"));
            }
        }
        let mut prev: Option<&Rat> = None;
        for c in &cuts {
            if !c.is_positive() {
                return Err(Error::invalid("step function", "cuts must be positive"));
            }
            if let Some(p) = prev {
                if p >= c {
                    return Err(Error::invalid("step function", "cuts must be strictly increasing"));
                }
            }
            if gamma.cmp_rat(c) != std::cmp::Ordering::Greater {
                return Err(Error::invalid("step function", "cuts must lie inside (0, gamma)"));
            }
            prev = Some(c);
        }
        let mut f = StepFunction { cuts, values, gamma };
        f.merge_equal_neighbors();
        Ok(f)
    }

    pub fn constant(value: Rat, gamma: Extent) -> Result<Self> {
        StepFunction::new(Vec::new(), vec![value], gamma)
    }

    pub fn zero(gamma: Extent) -> Self {
        StepFunction::constant(Rat::zero(), gamma).expect("zero function")
    }

    /// `value * indicator([left, right))` on `(0, gamma)`.
    pub fn indicator(left: Rat, right: Rat, value: Rat, gamma: Extent) -> Result<Self> {
        StepFunction::from_pieces(&[(left, right, value)], Rat::zero(), gamma)
    }

    /// Builds from the piece representation used by the textual format:
    /// explicit `[left, right) -> value` pieces, value 0 on gaps, and
    /// `tail` on `[last right, gamma)`.  With no pieces the function is the
    /// constant `tail`.
    pub fn from_pieces(pieces: &[(Rat, Rat, Rat)], tail: Rat, gamma: Extent) -> Result<Self> {
        if tail.is_negative() {
            return Err(Error::invalid("step function", "tail value must be nonnegative"));
        }
        let mut sorted: Vec<&(Rat, Rat, Rat)> = pieces.iter().collect();
        sorted.sort_by(|a, b| a.0.cmp(&b.0));
        let mut boundaries: Vec<Rat> = Vec::new();
        let mut prev_right: Option<&Rat> = None;
        for (l, r, v) in sorted.iter().copied() {
            if l.is_negative() || l >= r {
                return Err(Error::invalid("step function", "piece must satisfy 0 <= left < right"));
            }
            if v.is_negative() {
                return Err(Error::invalid("step function", "piece values must be nonnegative"));
            }
            if gamma.cmp_rat(r) == std::cmp::Ordering::Less {
                return Err(Error::invalid("step function", "piece exceeds gamma"));
            }
            if let Some(p) = prev_right {
                if p > l {
                    return Err(Error::invalid("step function", "pieces overlap"));
                }
            }
            prev_right = Some(r);
            boundaries.push(l.clone());
            boundaries.push(r.clone());
        }
        boundaries.retain(|b| b.is_positive() && gamma.cmp_rat(b) == std::cmp::Ordering::Greater);
        boundaries.dedup();
        let tail_from = sorted.last().map(|(_, r, _)| r.clone()).unwrap_or_else(Rat::zero);
        let mut values = Vec::with_capacity(boundaries.len() + 1);
        let mut start = Rat::zero();
        for i in 0..=boundaries.len() {
            let value = if start >= tail_from {
                tail.clone()
            } else {
                sorted
                    .iter()
                    .find(|(l, r, _)| l <= &start && &start < r)
                    .map(|(_, _, v)| v.clone())
                    .unwrap_or_else(Rat::zero)
            };
            values.push(value);
            if i < boundaries.len() {
                start = boundaries[i].clone();
            }
        }
        StepFunction::new(boundaries, values, gamma)
    }

    /// Inverse of [`from_pieces`]: pieces for every segment but the last
    /// (zero-valued interior pieces are omitted as gaps; the segment just
    /// before the tail is always emitted so the tail anchor round-trips).
    pub fn to_pieces(&self) -> (Vec<(Rat, Rat, Rat)>, Rat) {
        let k = self.cuts.len();
        if k == 0 {
            return (Vec::new(), self.values[0].clone());
        }
        let mut pieces = Vec::new();
        for i in 0..k {
            let lower = if i == 0 { Rat::zero() } else { self.cuts[i - 1].clone() };
            let upper = self.cuts[i].clone();
            if !self.values[i].is_zero() || i == k - 1 {
                pieces.push((lower, upper, self.values[i].clone()));
            }
        }
        (pieces, self.values[k].clone())
    }

    fn merge_equal_neighbors(&mut self) {
        let mut cuts = Vec::with_capacity(self.cuts.len());
        let mut values = Vec::with_capacity(self.values.len());
        values.push(self.values[0].clone());
        for (c, v) in self.cuts.iter().zip(self.values.iter().skip(1)) {
            if values.last() == Some(v) {
                continue;
            }
            cuts.push(c.clone());
            values.push(v.clone());
        }
        self.cuts = cuts;
        self.values = values;
    }

    pub fn gamma(&self) -> &Extent {
        &self.gamma
    }

    pub fn cut_points(&self) -> &[Rat] {
        &self.cuts
    }

    pub fn segment_values(&self) -> &[Rat] {
        &self.values
    }

    pub fn segments(&self) -> Vec<Segment> {
        let mut out = Vec::with_capacity(self.values.len());
        for (i, v) in self.values.iter().enumerate() {
            let lower = if i == 0 { Rat::zero() } else { self.cuts[i - 1].clone() };
            let upper = if i == self.cuts.len() {
                self.gamma.clone()
            } else {
                Extent::Finite(self.cuts[i].clone())
            };
            out.push(Segment { lower, upper, value: v.clone() });
        }
        out
    }

    /// Value at `t`; requires `0 <= t < gamma`.
    pub fn value_at(&self, t: &Rat) -> Rat {
        assert!(!t.is_negative(), "point below the domain");
        assert!(
            self.gamma.cmp_rat(t) == std::cmp::Ordering::Greater,
            "point beyond the domain"
        );
        let idx = self.cuts.partition_point(|c| c <= t);
        self.values[idx].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Essential supremum (the largest value; every segment has positive
    /// measure).  Equals the rearrangement's value at `0+`.
    pub fn sup_value(&self) -> Rat {
        self.values.iter().max().cloned().unwrap()
    }

    /// Value on the final segment.  For `gamma = inf` this is the value the
    /// rearrangement approaches at infinity.
    pub fn final_value(&self) -> &Rat {
        self.values.last().unwrap()
    }

    /// True iff the rearrangement vanishes at infinity (always true on a
    /// finite interval).
    pub fn is_in_s0(&self) -> bool {
        !self.gamma.is_infinite() || self.final_value().is_zero()
    }

    /// Upper end of the support (`0` for the zero function).
    pub fn support_upper(&self) -> Extent {
        if !self.final_value().is_zero() {
            return self.gamma.clone();
        }
        for i in (0..self.values.len()).rev() {
            if !self.values[i].is_zero() {
                return Extent::Finite(self.cuts[i].clone());
            }
        }
        Extent::zero()
    }

    /// Measure of `{ f > s }`.
    pub fn distribution(&self, s: &Rat) -> Extent {
        let mut total = Rat::zero();
        for seg in self.segments() {
            if &seg.value > s {
                match seg.length() {
                    Extent::Finite(len) => total += len,
                    Extent::Infinite => return Extent::Infinite,
                }
            }
        }
        Extent::Finite(total)
    }

    /// The full decreasing right-continuous step map `s -> m{f > s}`.
    pub fn distribution_function(&self) -> DistributionFunction {
        let mut thresholds: Vec<Rat> = vec![Rat::zero()];
        thresholds.extend(self.values.iter().filter(|v| v.is_positive()).cloned());
        thresholds.sort();
        thresholds.dedup();
        let mut points = Vec::with_capacity(thresholds.len());
        for s in thresholds {
            let m = self.distribution(&s);
            if points.last().map(|(_, prev)| prev == &m) != Some(true) {
                points.push((s, m));
            }
        }
        DistributionFunction { points }
    }

    /// The decreasing rearrangement: a decreasing, right-continuous step
    /// function equimeasurable with `self`.  On an infinite domain, values
    /// carried by the infinite final segment absorb all smaller values.
    pub fn rearrange(&self) -> StepFunction {
        let infinite_tail = self.gamma.is_infinite();
        let floor = if infinite_tail { Some(self.final_value().clone()) } else { None };
        let mut slabs: BTreeMap<Rat, Rat> = BTreeMap::new();
        let segs = self.segments();
        let finite_count = if infinite_tail { segs.len() - 1 } else { segs.len() };
        for seg in &segs[..finite_count] {
            let keep = match &floor {
                Some(b) => &seg.value > b,
                None => true,
            };
            if keep {
                let len = seg.length().expect_finite().clone();
                *slabs.entry(seg.value.clone()).or_insert_with(Rat::zero) += len;
            }
        }
        let mut cuts = Vec::new();
        let mut values = Vec::new();
        let mut running = Rat::zero();
        for (v, len) in slabs.into_iter().rev() {
            values.push(v);
            running += len;
            cuts.push(running.clone());
        }
        if infinite_tail {
            values.push(floor.unwrap());
        } else {
            // The last slab reaches gamma; its cut is implicit.
            cuts.pop();
            if values.is_empty() {
                values.push(Rat::zero());
            }
        }
        StepFunction::new(cuts, values, self.gamma.clone()).expect("rearrangement is well-formed")
    }

    pub fn is_decreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] > w[1])
    }

    /// `integral of f* over [0, t]`, exact.  Requires `0 <= t <= gamma`.
    pub fn head_integral(&self, t: &Rat) -> Result<Rat> {
        if t.is_negative() || self.gamma.cmp_rat(t) == std::cmp::Ordering::Less {
            return Err(Error::OutOfDomain(format!("{}/{}", t.numer(), t.denom())));
        }
        let star = self.rearrange();
        let mut acc = Rat::zero();
        for seg in star.segments() {
            if &seg.lower >= t {
                break;
            }
            let upper = match &seg.upper {
                Extent::Finite(u) => u.min(t).clone(),
                Extent::Infinite => t.clone(),
            };
            acc += &seg.value * (upper - &seg.lower);
        }
        Ok(acc)
    }

    /// The head-integral profile `t -> integral of f* over [0, t]` as a
    /// piecewise-linear concave function (slopes are the rearrangement's
    /// values).
    pub fn head_profile(&self) -> PiecewiseLinearConcave {
        let star = self.rearrange();
        let mut knots = Vec::with_capacity(star.cuts.len());
        let mut acc = Rat::zero();
        let mut prev = Rat::zero();
        for (i, c) in star.cuts.iter().enumerate() {
            acc += &star.values[i] * (c - &prev);
            prev = c.clone();
            knots.push((c.clone(), acc.clone()));
        }
        let final_slope = star.values.last().unwrap().clone();
        PiecewiseLinearConcave::new(Rat::zero(), knots, final_slope, self.gamma.clone())
            .expect("head profile is concave")
    }

    /// Total integral over `(0, gamma)`.
    pub fn integral(&self) -> Extent {
        let mut total = Rat::zero();
        for seg in self.segments() {
            if seg.value.is_zero() {
                continue;
            }
            match seg.length() {
                Extent::Finite(len) => total += &seg.value * len,
                Extent::Infinite => return Extent::Infinite,
            }
        }
        Extent::Finite(total)
    }

    fn require_same_gamma(&self, other: &StepFunction) -> Result<()> {
        if self.gamma != other.gamma {
            return Err(Error::DomainMismatch(
                self.gamma.to_string(),
                other.gamma.to_string(),
            ));
        }
        Ok(())
    }

    /// Common-refinement zip: merged cuts plus the pair of values on each
    /// refined segment.
    fn zip(&self, other: &StepFunction) -> Result<(Vec<Rat>, Vec<(Rat, Rat)>)> {
        self.require_same_gamma(other)?;
        let mut cuts: Vec<Rat> = Vec::with_capacity(self.cuts.len() + other.cuts.len());
        let (mut i, mut j) = (0, 0);
        while i < self.cuts.len() || j < other.cuts.len() {
            let next = match (self.cuts.get(i), other.cuts.get(j)) {
                (Some(a), Some(b)) => {
                    if a <= b {
                        if a == b {
                            j += 1;
                        }
                        i += 1;
                        a.clone()
                    } else {
                        j += 1;
                        b.clone()
                    }
                }
                (Some(a), None) => {
                    i += 1;
                    a.clone()
                }
                (None, Some(b)) => {
                    j += 1;
                    b.clone()
                }
                (None, None) => unreachable!(),
            };
            cuts.push(next);
        }
        let mut pairs = Vec::with_capacity(cuts.len() + 1);
        let mut start = Rat::zero();
        for idx in 0..=cuts.len() {
            let fi = self.cuts.partition_point(|c| c <= &start);
            let gi = other.cuts.partition_point(|c| c <= &start);
            pairs.push((self.values[fi].clone(), other.values[gi].clone()));
            if idx < cuts.len() {
                start = cuts[idx].clone();
            }
        }
        Ok((cuts, pairs))
    }

    fn pointwise(&self, other: &StepFunction, op: impl Fn(&Rat, &Rat) -> Rat) -> Result<StepFunction> {
        let (cuts, pairs) = self.zip(other)?;
        let values = pairs.iter().map(|(a, b)| op(a, b)).collect();
        StepFunction::new(cuts, values, self.gamma.clone())
    }

    pub fn add(&self, other: &StepFunction) -> Result<StepFunction> {
        self.pointwise(other, |a, b| a + b)
    }

    pub fn max(&self, other: &StepFunction) -> Result<StepFunction> {
        self.pointwise(other, |a, b| if a >= b { a.clone() } else { b.clone() })
    }

    pub fn min(&self, other: &StepFunction) -> Result<StepFunction> {
        self.pointwise(other, |a, b| if a <= b { a.clone() } else { b.clone() })
    }

    /// Positive part of the difference, `(f - g)^+`.
    pub fn minus_plus(&self, other: &StepFunction) -> Result<StepFunction> {
        self.pointwise(other, |a, b| if a > b { a - b } else { Rat::zero() })
    }

    /// Pointwise product.
    pub fn mul(&self, other: &StepFunction) -> Result<StepFunction> {
        self.pointwise(other, |a, b| a * b)
    }

    /// True iff `min(f, g) = 0`, i.e. the supports are disjoint.
    pub fn disjoint(&self, other: &StepFunction) -> Result<bool> {
        let (_, pairs) = self.zip(other)?;
        Ok(pairs.iter().all(|(a, b)| a.is_zero() || b.is_zero()))
    }

    pub fn scale(&self, c: &Rat) -> Result<StepFunction> {
        if c.is_negative() {
            return Err(Error::invalid("scale", "factor must be nonnegative"));
        }
        let values = self.values.iter().map(|v| v * c).collect();
        StepFunction::new(self.cuts.clone(), values, self.gamma.clone())
    }

    /// Dilation `t -> f(t / factor)`.  On a finite domain a factor above 1
    /// is rejected when it would push nonzero mass beyond `gamma`.
    pub fn dilate(&self, factor: &Rat) -> Result<StepFunction> {
        if !factor.is_positive() {
            return Err(Error::invalid("dilate", "factor must be positive"));
        }
        if !self.gamma.is_infinite() && factor > &Rat::from_integer(1.into()) {
            let stretched = self.support_upper().scale(factor);
            if stretched > self.gamma {
                return Err(Error::DomainOverflow);
            }
        }
        Ok(self.dilate_clipped(factor))
    }

    /// Dilation with sampling semantics: `t -> f(t / factor)` on `(0, gamma)`
    /// with `f` extended by 0 beyond a finite `gamma`.  Mass pushed outside
    /// the domain is silently dropped.
    pub fn dilate_clipped(&self, factor: &Rat) -> StepFunction {
        assert!(factor.is_positive());
        let mut cuts: Vec<Rat> = self.cuts.iter().map(|c| c * factor).collect();
        let mut values = self.values.clone();
        if let Extent::Finite(g) = &self.gamma {
            // Clip segments pushed past gamma.
            let keep = cuts.partition_point(|c| c < g);
            cuts.truncate(keep);
            values.truncate(keep + 1);
            // A compressed function ends at factor * gamma; beyond it is 0.
            if factor < &Rat::from_integer(1.into()) {
                let end = g * factor;
                cuts.push(end);
                values.push(Rat::zero());
            }
        }
        StepFunction::new(cuts, values, self.gamma.clone()).expect("dilation is well-formed")
    }
}

/// The distribution function `s -> m{f > s}` as explicit breakpoints:
/// `points[j] = (s_j, measure)` means the measure holds on `[s_j, s_{j+1})`,
/// with `s_0 = 0` and the last entry extending to infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributionFunction {
    points: Vec<(Rat, Extent)>,
}

impl DistributionFunction {
    pub fn breakpoints(&self) -> &[(Rat, Extent)] {
        &self.points
    }

    pub fn eval(&self, s: &Rat) -> Extent {
        assert!(!s.is_negative(), "distribution argument must be nonnegative");
        let idx = self.points.partition_point(|(b, _)| b <= s);
        self.points[idx - 1].1.clone()
    }

    /// Decreasing and right-continuous by construction; kept as a structural
    /// self-check for tests.
    pub fn is_decreasing(&self) -> bool {
        self.points.windows(2).all(|w| w[0].1 > w[1].1)
    }
}

/// Convenience: `chi_[0, len)` scaled by `value`, on `(0, gamma)`.
pub fn block(value: i64, len: Rat, gamma: Extent) -> StepFunction {
    StepFunction::indicator(Rat::zero(), len, rat_int(value), gamma).expect("block")
}

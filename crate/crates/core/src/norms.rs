//! Marcinkiewicz, Lorentz and weak-Lp norm computation.
//!
//! The Marcinkiewicz norm is `sup over 0 < t < gamma of H_f(t) / psi(t)`
//! with `H_f` the head-integral profile.  On each common-refinement segment
//! the ratio of the two piecewise-linear functions is a monotone quotient
//! (for power gauges the per-segment ratio is quasi-convex), so the supremum
//! is attained at a segment endpoint or as the limit at `0+` or `gamma`.
//! The computation therefore evaluates finitely many exact candidates and
//! records where the supremum lives.

use std::cmp::Ordering;

use num::{One, Signed, Zero};

use crate::error::Error;
use crate::extent::Extent;
use crate::gauge::{ConcaveGauge, GaugeBackend};
use crate::profile::submajorizes;
use crate::step::StepFunction;
use crate::value::{PowMonomial, Rat, Value};
use crate::Result;

/// Where a supremum is achieved or approached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttainedAt {
    LimitAtZero,
    Breakpoint(Rat),
    LimitAtGamma,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormValue {
    pub value: Value,
    /// Absent for norms that are integrals rather than suprema, and for the
    /// zero function.
    pub attained_at: Option<AttainedAt>,
}

/// A norm computation either yields a finite value or certifies that the
/// supremum is unbounded (`f` lies outside the space).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormOutcome {
    Finite(NormValue),
    Infinite,
}

impl NormOutcome {
    pub fn is_finite(&self) -> bool {
        matches!(self, NormOutcome::Finite(_))
    }

    pub fn value(&self) -> Option<&NormValue> {
        match self {
            NormOutcome::Finite(v) => Some(v),
            NormOutcome::Infinite => None,
        }
    }

    /// Finite value or panic; for tests and callers that checked premises.
    pub fn expect_finite(&self) -> &NormValue {
        self.value().expect("norm is infinite")
    }
}

/// Exact symbolic norm used internally by the verification suites: a plain
/// rational (piecewise-linear gauges) or a power monomial (power gauges).
#[derive(Debug, Clone)]
pub(crate) enum SymbolicNorm {
    Finite(PowMonomial, Option<AttainedAt>),
    Infinite,
}

impl SymbolicNorm {
    #[cfg(test)]
    pub(crate) fn monomial(&self) -> Option<&PowMonomial> {
        match self {
            SymbolicNorm::Finite(m, _) => Some(m),
            SymbolicNorm::Infinite => None,
        }
    }
}

fn require_same_gamma(f: &StepFunction, gauge: &ConcaveGauge) -> Result<()> {
    if f.gamma() != gauge.gamma() {
        return Err(Error::DomainMismatch(f.gamma().to_string(), gauge.gamma().to_string()));
    }
    Ok(())
}

/// Candidate points for the supremum of `H_f / psi` over `(0, end]` (or the
/// full domain when `restrict` is `None`).
fn candidate_points(f: &StepFunction, gauge: &ConcaveGauge, restrict: Option<&Rat>) -> Vec<Rat> {
    let mut points: Vec<Rat> = f
        .head_profile()
        .knots()
        .iter()
        .map(|(t, _)| t.clone())
        .collect();
    if let Some(profile) = gauge.pl_profile() {
        points.extend(profile.knots().iter().map(|(t, _)| t.clone()));
    }
    match restrict {
        Some(delta) => {
            points.retain(|t| t < delta);
            points.push(delta.clone());
        }
        None => {
            if let Extent::Finite(g) = gauge.gamma() {
                points.retain(|t| t < g);
            }
        }
    }
    points.sort();
    points.dedup();
    points
}

/// Shared supremum engine.  `restrict = Some(delta)` restricts to `(0, delta]`
/// (no limit at `gamma`); otherwise the full open interval is used.
fn sup_ratio(
    f: &StepFunction,
    gauge: &ConcaveGauge,
    restrict: Option<&Rat>,
) -> Result<SymbolicNorm> {
    require_same_gamma(f, gauge)?;
    if f.is_zero() {
        return Ok(SymbolicNorm::Finite(PowMonomial::from_rat(Rat::zero()), None));
    }
    let head = f.head_profile();
    let mut candidates: Vec<(PowMonomial, AttainedAt)> = Vec::new();

    // Limit at 0+: 0 when psi(0+) > 0 (or for power gauges); otherwise the
    // ratio of the initial slopes.
    let limit0 = match gauge.backend() {
        GaugeBackend::PiecewiseLinear(profile) => {
            if profile.jump().is_positive() {
                PowMonomial::from_rat(Rat::zero())
            } else {
                let psi_slope0 = profile.slopes()[0].clone();
                PowMonomial::from_rat(f.sup_value() / psi_slope0)
            }
        }
        GaugeBackend::Power { .. } => PowMonomial::from_rat(Rat::zero()),
    };
    candidates.push((limit0, AttainedAt::LimitAtZero));

    for t in candidate_points(f, gauge, restrict) {
        let h = head.eval(&t);
        let cand = match gauge.backend() {
            GaugeBackend::PiecewiseLinear(profile) => PowMonomial::from_rat(h / profile.eval(&t)),
            GaugeBackend::Power { p: _, coefficient } => {
                let e = gauge.power_exponent().unwrap();
                PowMonomial::from_rat(h / coefficient).with_factor(t.clone(), -e)
            }
        };
        candidates.push((cand, AttainedAt::Breakpoint(t)));
    }

    if restrict.is_none() {
        match gauge.gamma() {
            Extent::Finite(g) => {
                let h = head.eval(g);
                let cand = match gauge.backend() {
                    GaugeBackend::PiecewiseLinear(profile) => {
                        PowMonomial::from_rat(h / profile.eval(g))
                    }
                    GaugeBackend::Power { p: _, coefficient } => {
                        let e = gauge.power_exponent().unwrap();
                        PowMonomial::from_rat(h / coefficient).with_factor(g.clone(), -e)
                    }
                };
                candidates.push((cand, AttainedAt::LimitAtGamma));
            }
            Extent::Infinite => {
                let tail_slope = head.final_slope();
                if tail_slope.is_positive() {
                    match gauge.backend() {
                        GaugeBackend::PiecewiseLinear(profile) => {
                            if profile.final_slope().is_zero() {
                                return Ok(SymbolicNorm::Infinite);
                            }
                            candidates.push((
                                PowMonomial::from_rat(tail_slope / profile.final_slope()),
                                AttainedAt::LimitAtGamma,
                            ));
                        }
                        // Sublinear growth cannot dominate a linear head.
                        GaugeBackend::Power { .. } => return Ok(SymbolicNorm::Infinite),
                    }
                }
            }
        }
    }

    let mut best: Option<(PowMonomial, AttainedAt)> = None;
    for (cand, at) in candidates {
        let replace = match &best {
            None => true,
            Some((b, _)) => cand.cmp(b) == Ordering::Greater,
        };
        if replace {
            best = Some((cand, at));
        }
    }
    let (value, at) = best.expect("at least the limit candidate exists");
    Ok(SymbolicNorm::Finite(value, Some(at)))
}

fn present(norm: SymbolicNorm, bits: u32) -> NormOutcome {
    match norm {
        SymbolicNorm::Infinite => NormOutcome::Infinite,
        SymbolicNorm::Finite(m, at) => {
            let enc = m.to_enclosure(bits);
            let value = if enc.is_point() {
                Value::Exact(enc.lo().clone())
            } else {
                Value::Enclosure(enc)
            };
            NormOutcome::Finite(NormValue { value, attained_at: at })
        }
    }
}

pub(crate) fn marc_norm_symbolic(f: &StepFunction, gauge: &ConcaveGauge) -> Result<SymbolicNorm> {
    sup_ratio(f, gauge, None)
}

/// `sup over 0 < t < gamma of (1/psi(t)) * integral of f* on [0, t]`.
pub fn marcinkiewicz_norm(f: &StepFunction, gauge: &ConcaveGauge, bits: u32) -> Result<NormOutcome> {
    Ok(present(sup_ratio(f, gauge, None)?, bits))
}

pub(crate) fn natural_norm_symbolic(
    f: &StepFunction,
    gauge: &ConcaveGauge,
    delta: &Rat,
) -> Result<SymbolicNorm> {
    match gauge.gamma() {
        Extent::Infinite => {
            return Err(Error::invalid("natural norm", "gamma must be finite"));
        }
        Extent::Finite(g) => {
            if !delta.is_positive() || delta >= g {
                return Err(Error::invalid("natural norm", "need 0 < delta < gamma"));
            }
        }
    }
    sup_ratio(f, gauge, Some(delta))
}

/// The truncated norm `sup over 0 < t <= delta`; equivalent to the full norm
/// with constant `1 + (gamma/psi(gamma)) * (psi(delta)/delta)`.
pub fn natural_norm(
    f: &StepFunction,
    gauge: &ConcaveGauge,
    delta: &Rat,
    bits: u32,
) -> Result<NormOutcome> {
    Ok(present(natural_norm_symbolic(f, gauge, delta)?, bits))
}

/// The equivalence constant `1 + (gamma/psi(gamma)) * (psi(delta)/delta)`
/// bounding the full norm by the truncated one (piecewise-linear gauges).
pub fn sandwich_constant(gauge: &ConcaveGauge, delta: &Rat) -> Result<Rat> {
    let profile = gauge.pl_profile().ok_or(Error::UnsupportedBackend)?;
    let g = match gauge.gamma() {
        Extent::Finite(g) => g.clone(),
        Extent::Infinite => return Err(Error::invalid("sandwich constant", "gamma must be finite")),
    };
    if !delta.is_positive() || delta >= &g {
        return Err(Error::invalid("sandwich constant", "need 0 < delta < gamma"));
    }
    let psi_gamma = profile.eval(&g);
    let psi_delta = profile.eval(delta);
    Ok(Rat::one() + (&g / psi_gamma) * (psi_delta / delta))
}

/// Unit-ball membership via submajorization by `psi'`: requires a
/// piecewise-linear gauge with `psi(0+) = 0`, and agrees exactly with
/// `marcinkiewicz_norm(f) <= 1`.
pub fn unit_ball_member(f: &StepFunction, gauge: &ConcaveGauge) -> Result<bool> {
    let profile = gauge.pl_profile().ok_or(Error::UnsupportedBackend)?;
    if profile.jump().is_positive() {
        return Err(Error::HypothesisViolated);
    }
    require_same_gamma(f, gauge)?;
    submajorizes(&gauge.derivative()?, f, gauge.gamma())
}

/// The Lorentz norm `psi(0+) * sup f + integral of f* d(psi)`, computed as
/// `psi(0+) * f*(0+) + integral of f* * psi'` (piecewise-linear gauges).
pub fn lorentz_norm(f: &StepFunction, gauge: &ConcaveGauge) -> Result<NormOutcome> {
    let profile = gauge.pl_profile().ok_or(Error::UnsupportedBackend)?;
    require_same_gamma(f, gauge)?;
    let star = f.rearrange();
    let tail = star.mul(&gauge.derivative()?)?.integral();
    Ok(match tail {
        Extent::Infinite => NormOutcome::Infinite,
        Extent::Finite(integral) => {
            let atom = profile.jump() * f.sup_value();
            NormOutcome::Finite(NormValue { value: Value::Exact(atom + integral), attained_at: None })
        }
    })
}

/// Marcinkiewicz norm against the power gauge `t^(1-1/p)`.
pub fn weak_lp_norm(f: &StepFunction, p: &Rat, bits: u32) -> Result<NormOutcome> {
    let gauge = ConcaveGauge::power(p.clone(), Rat::one(), f.gamma().clone())?;
    marcinkiewicz_norm(f, &gauge, bits)
}

pub(crate) fn weak_lp_quasinorm_symbolic(f: &StepFunction, p: &Rat) -> Result<SymbolicNorm> {
    if p <= &Rat::one() {
        return Err(Error::invalid("weak-Lp", "need p > 1"));
    }
    if f.is_zero() {
        return Ok(SymbolicNorm::Finite(PowMonomial::from_rat(Rat::zero()), None));
    }
    let inv_p = p.clone().recip();
    let star = f.rearrange();
    let mut candidates: Vec<(PowMonomial, AttainedAt)> = Vec::new();
    for (i, cut) in star.cut_points().iter().enumerate() {
        let cand = PowMonomial::from_rat(star.segment_values()[i].clone())
            .with_factor(cut.clone(), inv_p.clone());
        candidates.push((cand, AttainedAt::Breakpoint(cut.clone())));
    }
    let tail = star.final_value();
    if !tail.is_zero() {
        match f.gamma() {
            Extent::Infinite => return Ok(SymbolicNorm::Infinite),
            Extent::Finite(g) => {
                let cand =
                    PowMonomial::from_rat(tail.clone()).with_factor(g.clone(), inv_p.clone());
                candidates.push((cand, AttainedAt::LimitAtGamma));
            }
        }
    }
    let mut best: Option<(PowMonomial, AttainedAt)> = None;
    for (cand, at) in candidates {
        let replace = match &best {
            None => true,
            Some((b, _)) => cand.cmp(b) == Ordering::Greater,
        };
        if replace {
            best = Some((cand, at));
        }
    }
    Ok(match best {
        Some((m, at)) => SymbolicNorm::Finite(m, Some(at)),
        None => SymbolicNorm::Finite(PowMonomial::from_rat(Rat::zero()), None),
    })
}

/// `sup over t of t^(1/p) * f*(t)`, evaluated at rearrangement breakpoints.
/// Always dominated by the weak-Lp norm.
pub fn weak_lp_quasinorm(f: &StepFunction, p: &Rat, bits: u32) -> Result<NormOutcome> {
    Ok(present(weak_lp_quasinorm_symbolic(f, p)?, bits))
}

/// `integral of f * g` over `(0, gamma)`, exact (possibly infinite).
pub fn pairing_integral(f: &StepFunction, g: &StepFunction) -> Result<Extent> {
    Ok(f.mul(g)?.integral())
}

/// A function on a finite discrete measure: weighted atoms plus optional
/// zero-mass extension up to `total_weight`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteFunction {
    atoms: Vec<(Rat, Rat)>, // (weight, value)
    total_weight: Extent,
}

impl DiscreteFunction {
    pub fn new(atoms: Vec<(Rat, Rat)>, total_weight: Extent) -> Result<Self> {
        let mut sum = Rat::zero();
        for (w, v) in &atoms {
            if !w.is_positive() {
                return Err(Error::invalid("discrete function", "weights must be positive"));
            }
            if v.is_negative() {
                return Err(Error::invalid("discrete function", "values must be nonnegative"));
            }
            sum += w;
        }
        if total_weight.cmp_rat(&sum) == Ordering::Less {
            return Err(Error::invalid(
                "discrete function",
                "total weight smaller than the atoms it carries",
            ));
        }
        Ok(DiscreteFunction { atoms, total_weight })
    }

    pub fn atoms(&self) -> &[(Rat, Rat)] {
        &self.atoms
    }

    pub fn total_weight(&self) -> &Extent {
        &self.total_weight
    }

    /// The decreasing rearrangement as a step function on `(0, gamma)`:
    /// slabs of the atom weights with values sorted decreasingly, extended
    /// by zero.  Requires `total_weight <= gamma`.
    pub fn rearrangement_on(&self, gamma: &Extent) -> Result<StepFunction> {
        if &self.total_weight > gamma {
            return Err(Error::DomainMismatch(
                self.total_weight.to_string(),
                gamma.to_string(),
            ));
        }
        let mut sorted = self.atoms.clone();
        sorted.sort_by(|a, b| b.1.cmp(&a.1));
        let mut cuts = Vec::new();
        let mut values = Vec::new();
        let mut pos = Rat::zero();
        for (w, v) in sorted {
            values.push(v);
            pos += w;
            cuts.push(pos.clone());
        }
        match gamma.cmp_rat(&pos) {
            Ordering::Greater => values.push(Rat::zero()),
            _ => {
                cuts.pop();
            }
        }
        if values.is_empty() {
            values.push(Rat::zero());
        }
        StepFunction::new(cuts, values, gamma.clone())
    }
}

/// Norm transfer to a discrete measure: rearrange onto `(0, gamma)` and
/// evaluate there.  Invariant under permutations of the atoms.
pub fn norm_on_measure(
    f: &DiscreteFunction,
    gauge: &ConcaveGauge,
    bits: u32,
) -> Result<NormOutcome> {
    let step = f.rearrangement_on(gauge.gamma())?;
    marcinkiewicz_norm(&step, gauge, bits)
}

//! Concave gauges and their doubling behaviour.
//!
//! A gauge is a non-zero increasing concave function `psi` on `[0, gamma)`,
//! continuous on `(0, gamma)` with `psi(0) = 0` (a jump at `0+` is allowed).
//! Two backends are supported: exact piecewise-linear profiles and power laws
//! `coefficient * t^(1-1/p)` with `p > 1`.
//!
//! The classifier decides the doubling conditions
//!   (A) `gamma = inf` and `liminf psi(2t)/psi(t) > 1` at both `0` and `inf`,
//!   (B) `gamma < inf` and `liminf psi(2t)/psi(t) > 1` at `0`,
//! and produces explicit certificates: a uniform bound `beta > 1` (global for
//! (A), on `(0, delta]` for (B)).  The `grothendieck` verdict is exactly
//! `verdict != NEITHER`.

use std::cmp::Ordering;

use num::{One, Signed, Zero};

use crate::error::Error;
use crate::extent::Extent;
use crate::profile::PiecewiseLinearConcave;
use crate::step::StepFunction;
use crate::value::{ln_enclosure, rat_int, Enclosure, PowMonomial, Rat, Scalar, Value};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GaugeBackend {
    PiecewiseLinear(PiecewiseLinearConcave),
    Power { p: Rat, coefficient: Rat },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcaveGauge {
    backend: GaugeBackend,
    gamma: Extent,
}

impl ConcaveGauge {
    pub fn piecewise_linear(profile: PiecewiseLinearConcave) -> Result<Self> {
        if profile.is_identically_zero() {
            return Err(Error::invalid("gauge", "must not be identically zero"));
        }
        let gamma = profile.gamma().clone();
        Ok(ConcaveGauge { backend: GaugeBackend::PiecewiseLinear(profile), gamma })
    }

    /// `coefficient * t^(1-1/p)` on `(0, gamma)`, `p > 1`.
    pub fn power(p: Rat, coefficient: Rat, gamma: Extent) -> Result<Self> {
        if p <= Rat::one() {
            return Err(Error::invalid("gauge", "power gauges need p > 1"));
        }
        if !coefficient.is_positive() {
            return Err(Error::invalid("gauge", "power coefficient must be positive"));
        }
        if gamma.cmp_rat(&Rat::zero()) != Ordering::Greater {
            return Err(Error::invalid("gauge", "gamma must be positive"));
        }
        Ok(ConcaveGauge { backend: GaugeBackend::Power { p, coefficient }, gamma })
    }

    /// The gauge `min(slope * t, cap)` on `(0, gamma)`.
    pub fn capped_linear(slope: Rat, cap: Rat, gamma: Extent) -> Result<Self> {
        if !slope.is_positive() || !cap.is_positive() {
            return Err(Error::invalid("gauge", "slope and cap must be positive"));
        }
        let bend = &cap / &slope;
        let profile = if gamma.cmp_rat(&bend) == Ordering::Greater {
            PiecewiseLinearConcave::new(Rat::zero(), vec![(bend, cap)], Rat::zero(), gamma)?
        } else {
            PiecewiseLinearConcave::linear(Rat::zero(), slope, gamma)?
        };
        ConcaveGauge::piecewise_linear(profile)
    }

    pub fn gamma(&self) -> &Extent {
        &self.gamma
    }

    pub fn backend(&self) -> &GaugeBackend {
        &self.backend
    }

    pub fn is_piecewise_linear(&self) -> bool {
        matches!(self.backend, GaugeBackend::PiecewiseLinear(_))
    }

    pub fn pl_profile(&self) -> Option<&PiecewiseLinearConcave> {
        match &self.backend {
            GaugeBackend::PiecewiseLinear(p) => Some(p),
            GaugeBackend::Power { .. } => None,
        }
    }

    /// Exponent `1 - 1/p` for the power backend.
    pub fn power_exponent(&self) -> Option<Rat> {
        match &self.backend {
            GaugeBackend::Power { p, .. } => Some(Rat::one() - p.clone().recip()),
            GaugeBackend::PiecewiseLinear(_) => None,
        }
    }

    pub fn value_at_zero_plus(&self) -> Rat {
        match &self.backend {
            GaugeBackend::PiecewiseLinear(p) => p.jump().clone(),
            GaugeBackend::Power { .. } => Rat::zero(),
        }
    }

    fn check_interior(&self, t: &Rat) -> Result<()> {
        if !t.is_positive() || self.gamma.cmp_rat(t) != Ordering::Greater {
            return Err(Error::OutOfDomain(format!("{}/{}", t.numer(), t.denom())));
        }
        Ok(())
    }

    /// `psi(t)` as an exact symbolic monomial (plain rational for the
    /// piecewise-linear backend).
    pub fn eval_monomial(&self, t: &Rat) -> Result<PowMonomial> {
        self.check_interior(t)?;
        Ok(self.eval_monomial_unchecked(t))
    }

    pub(crate) fn eval_monomial_unchecked(&self, t: &Rat) -> PowMonomial {
        match &self.backend {
            GaugeBackend::PiecewiseLinear(p) => PowMonomial::from_rat(p.eval(t)),
            GaugeBackend::Power { coefficient, .. } => {
                let e = self.power_exponent().unwrap();
                PowMonomial::from_rat(coefficient.clone()).with_factor(t.clone(), e)
            }
        }
    }

    /// `psi(t)` for `0 < t < gamma`: exact for the piecewise-linear backend,
    /// a certified enclosure of width `<= 2^-bits` otherwise.
    pub fn eval(&self, t: &Rat, bits: u32) -> Result<Value> {
        self.check_interior(t)?;
        match &self.backend {
            GaugeBackend::PiecewiseLinear(p) => Ok(Value::Exact(p.eval(t))),
            GaugeBackend::Power { .. } => {
                let enc = self.eval_monomial_unchecked(t).to_enclosure(bits);
                Ok(collapse(enc))
            }
        }
    }

    /// `psi(gamma-)` as an extent (`inf` when the gauge is unbounded); exact
    /// only for the piecewise-linear backend, which is where it is needed.
    pub fn pl_value_at_end(&self) -> Option<Extent> {
        self.pl_profile().map(|p| p.limit_at_end())
    }

    /// The derivative `psi'` as a decreasing step function (piecewise-linear
    /// backend only); satisfies `integral of psi' on [0,t] = psi(t) - psi(0+)`.
    pub fn derivative(&self) -> Result<StepFunction> {
        match &self.backend {
            GaugeBackend::PiecewiseLinear(p) => Ok(p.derivative_step()),
            GaugeBackend::Power { .. } => Err(Error::UnsupportedBackend),
        }
    }

    /// The decreasing ratio `Psi(t) = psi(t) / t` as a symbolic monomial.
    pub fn big_psi_monomial(&self, t: &Rat) -> Result<PowMonomial> {
        self.check_interior(t)?;
        Ok(self.big_psi_monomial_unchecked(t))
    }

    pub(crate) fn big_psi_monomial_unchecked(&self, t: &Rat) -> PowMonomial {
        match &self.backend {
            GaugeBackend::PiecewiseLinear(p) => PowMonomial::from_rat(p.eval(t) / t),
            GaugeBackend::Power { coefficient, .. } => {
                let e = self.power_exponent().unwrap();
                PowMonomial::from_rat(coefficient.clone())
                    .with_factor(t.clone(), e - Rat::one())
            }
        }
    }

    /// `Psi(t) = psi(t)/t` for `0 < t < gamma`.
    pub fn big_psi(&self, t: &Rat, bits: u32) -> Result<Value> {
        self.check_interior(t)?;
        match &self.backend {
            GaugeBackend::PiecewiseLinear(p) => Ok(Value::Exact(p.eval(t) / t)),
            GaugeBackend::Power { .. } => {
                Ok(collapse(self.big_psi_monomial_unchecked(t).to_enclosure(bits)))
            }
        }
    }

    /// Limit of `Psi` at the right end of the domain.
    pub fn big_psi_at_end(&self) -> PowMonomial {
        match (&self.backend, &self.gamma) {
            (GaugeBackend::PiecewiseLinear(p), Extent::Finite(g)) => {
                PowMonomial::from_rat(p.eval(g) / g)
            }
            (GaugeBackend::PiecewiseLinear(p), Extent::Infinite) => {
                PowMonomial::from_rat(p.final_slope().clone())
            }
            (GaugeBackend::Power { .. }, Extent::Finite(g)) => self.big_psi_monomial_unchecked(g),
            (GaugeBackend::Power { .. }, Extent::Infinite) => PowMonomial::from_rat(Rat::zero()),
        }
    }

    /// Certified enclosure of `integral of Psi(s) ds on [0, t]`.
    ///
    /// Piecewise-linear backend: each linear segment `a + b s` contributes
    /// `a ln(s2/s1) + b (s2 - s1)`; the result is exact (a point enclosure)
    /// when every intercept on `(0, t]` vanishes.  Power backend: the closed
    /// form `psi(t) * p/(p-1)`, exact up to the power enclosure.  Diverges
    /// iff `psi(0+) > 0`.
    pub fn big_psi_head_integral(&self, t: &Rat, bits: u32) -> Result<Enclosure> {
        if !t.is_positive() || self.gamma.cmp_rat(t) == Ordering::Less {
            return Err(Error::OutOfDomain(format!("{}/{}", t.numer(), t.denom())));
        }
        match &self.backend {
            GaugeBackend::Power { p, .. } => {
                let scale = p / (p - Rat::one());
                Ok(self.eval_monomial_unchecked(t).scale(&scale).to_enclosure(bits))
            }
            GaugeBackend::PiecewiseLinear(profile) => {
                if profile.jump().is_positive() {
                    return Err(Error::DivergentIntegral);
                }
                let mut rational = Rat::zero();
                let mut logs: Vec<(Rat, Rat)> = Vec::new();
                for seg in profile.segments() {
                    if &seg.lower >= t {
                        break;
                    }
                    let upper = match &seg.upper {
                        Extent::Finite(u) => u.min(t).clone(),
                        Extent::Infinite => t.clone(),
                    };
                    rational += &seg.slope * (&upper - &seg.lower);
                    if !seg.intercept.is_zero() {
                        // First segment has intercept 0 (jump = 0), so lower > 0 here.
                        logs.push((seg.intercept.clone(), upper / &seg.lower));
                    }
                }
                let mut total = Enclosure::point(rational);
                let guard = bits + 8;
                for (coeff, ratio) in logs {
                    total = total.add(&ln_enclosure(&ratio, guard).scale(&coeff));
                }
                Ok(if total.is_point() { total } else { total.round_out(bits) })
            }
        }
    }

    /// The exact piecewise description of `t -> psi(2t)/psi(t)` on
    /// `(0, gamma/2)` (finite `gamma`) or `(0, inf)`.
    pub fn doubling_profile(&self) -> RatioProfile {
        match &self.backend {
            GaugeBackend::Power { .. } => {
                RatioProfile::Constant(Scalar::PowTwo(self.power_exponent().unwrap()))
            }
            GaugeBackend::PiecewiseLinear(profile) => {
                let end = match &self.gamma {
                    Extent::Finite(g) => Extent::Finite(g / rat_int(2)),
                    Extent::Infinite => Extent::Infinite,
                };
                let mut points: Vec<Rat> = Vec::new();
                for (t, _) in profile.knots() {
                    for candidate in [t.clone(), t / rat_int(2)] {
                        if candidate.is_positive()
                            && end.cmp_rat(&candidate) == Ordering::Greater
                        {
                            points.push(candidate);
                        }
                    }
                }
                points.sort();
                points.dedup();

                let limit_at_zero = if profile.jump().is_positive() {
                    Rat::one()
                } else {
                    rat_int(2)
                };
                let limit_at_end = match &end {
                    Extent::Finite(l) => {
                        let two_l = l * rat_int(2);
                        profile.eval(&two_l) / profile.eval(l)
                    }
                    Extent::Infinite => {
                        if profile.final_slope().is_positive() {
                            rat_int(2)
                        } else {
                            Rat::one()
                        }
                    }
                };

                let mut segments = Vec::new();
                let mut lower = Rat::zero();
                let bounds = points
                    .iter()
                    .cloned()
                    .map(Extent::Finite)
                    .chain(std::iter::once(end.clone()));
                for upper in bounds {
                    // A representative interior point fixes the linear pieces.
                    let mid = match &upper {
                        Extent::Finite(u) => (&lower + u) / rat_int(2),
                        Extent::Infinite => &lower + Rat::one(),
                    };
                    if mid.is_zero() {
                        continue;
                    }
                    let (da, db) = profile.linear_params_at(&mid);
                    let (na2, nb2) = profile.linear_params_at(&(&mid * rat_int(2)));
                    let num = (na2, nb2 * rat_int(2));
                    let den = (da, db);
                    let det = &num.1 * &den.0 - &num.0 * &den.1;
                    let monotonicity = match det.cmp(&Rat::zero()) {
                        Ordering::Greater => Monotonicity::Increasing,
                        Ordering::Less => Monotonicity::Decreasing,
                        Ordering::Equal => Monotonicity::Constant,
                    };
                    let eval_at = |t: &Rat| (&num.0 + &num.1 * t) / (&den.0 + &den.1 * t);
                    let value_at_lower = if lower.is_zero() {
                        limit_at_zero.clone()
                    } else {
                        eval_at(&lower)
                    };
                    let value_at_upper = match &upper {
                        Extent::Finite(u) => eval_at(u),
                        Extent::Infinite => limit_at_end.clone(),
                    };
                    segments.push(RatioSegment {
                        lower: lower.clone(),
                        upper: upper.clone(),
                        num,
                        den,
                        monotonicity,
                        value_at_lower,
                        value_at_upper,
                    });
                    if let Extent::Finite(u) = upper {
                        lower = u;
                    }
                }
                RatioProfile::PiecewiseMoebius { segments, limit_at_zero, limit_at_end, end }
            }
        }
    }

    /// Decides the doubling conditions and assembles the certificates.
    pub fn classify(&self) -> ConditionReport {
        let ratio = self.doubling_profile();
        let liminf_at_zero = ratio.limit_at_zero();
        let liminf_at_infinity = if self.gamma.is_infinite() {
            Some(ratio.limit_at_end())
        } else {
            None
        };
        let eventually_constant = self.gamma.is_infinite()
            && match &self.backend {
                GaugeBackend::PiecewiseLinear(p) => p.final_slope().is_zero(),
                GaugeBackend::Power { .. } => false,
            };

        let verdict = if self.gamma.is_infinite() {
            let both = liminf_at_zero.gt_one()
                && liminf_at_infinity.as_ref().map(Scalar::gt_one).unwrap_or(false);
            if both {
                Verdict::A
            } else {
                Verdict::Neither
            }
        } else if liminf_at_zero.gt_one() {
            Verdict::B
        } else {
            Verdict::Neither
        };

        let (beta, delta) = match verdict {
            Verdict::A => (Some(ratio.infimum()), None),
            Verdict::B => {
                let quarter = self.gamma.expect_finite() / rat_int(4);
                let delta = ratio.largest_initial_point_above_one(&quarter);
                let beta = ratio.infimum_on_initial(&delta);
                (Some(beta), Some(delta))
            }
            Verdict::Neither => (None, None),
        };
        if let Some(b) = &beta {
            debug_assert!(b.gt_one(), "certificate must exceed 1");
        }

        ConditionReport {
            verdict,
            beta,
            delta,
            liminf_at_zero,
            liminf_at_infinity,
            eventually_constant,
            grothendieck: verdict != Verdict::Neither,
        }
    }
}

fn collapse(enc: Enclosure) -> Value {
    if enc.is_point() {
        Value::Exact(enc.lo().clone())
    } else {
        Value::Enclosure(enc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Constant,
}

/// One maximal interval on which `psi(2t)/psi(t)` is a quotient of fixed
/// linear maps (hence monotone).
#[derive(Debug, Clone)]
pub struct RatioSegment {
    pub lower: Rat,
    pub upper: Extent,
    /// `psi(2t) = num.0 + num.1 * t` on this segment.
    pub num: (Rat, Rat),
    /// `psi(t) = den.0 + den.1 * t` on this segment.
    pub den: (Rat, Rat),
    pub monotonicity: Monotonicity,
    pub value_at_lower: Rat,
    pub value_at_upper: Rat,
}

/// The doubling ratio `t -> psi(2t)/psi(t)` over the profile domain.
#[derive(Debug, Clone)]
pub enum RatioProfile {
    PiecewiseMoebius {
        segments: Vec<RatioSegment>,
        limit_at_zero: Rat,
        limit_at_end: Rat,
        end: Extent,
    },
    /// Power gauges have the constant ratio `2^(1-1/p)`.
    Constant(Scalar),
}

impl RatioProfile {
    pub fn limit_at_zero(&self) -> Scalar {
        match self {
            RatioProfile::PiecewiseMoebius { limit_at_zero, .. } => {
                Scalar::Rational(limit_at_zero.clone())
            }
            RatioProfile::Constant(s) => s.clone(),
        }
    }

    pub fn limit_at_end(&self) -> Scalar {
        match self {
            RatioProfile::PiecewiseMoebius { limit_at_end, .. } => {
                Scalar::Rational(limit_at_end.clone())
            }
            RatioProfile::Constant(s) => s.clone(),
        }
    }

    /// Interior breakpoints of the piecewise description.
    pub fn breakpoints(&self) -> Vec<Rat> {
        match self {
            RatioProfile::PiecewiseMoebius { segments, .. } => segments
                .iter()
                .skip(1)
                .map(|s| s.lower.clone())
                .collect(),
            RatioProfile::Constant(_) => Vec::new(),
        }
    }

    pub fn end(&self) -> Option<&Extent> {
        match self {
            RatioProfile::PiecewiseMoebius { end, .. } => Some(end),
            RatioProfile::Constant(_) => None,
        }
    }

    /// Exact value at an interior point of the profile domain
    /// (piecewise-linear backend; the constant profile has no rational value).
    pub fn eval_rational(&self, t: &Rat) -> Option<Rat> {
        match self {
            RatioProfile::Constant(_) => None,
            RatioProfile::PiecewiseMoebius { segments, .. } => {
                assert!(t.is_positive());
                for seg in segments {
                    if seg.upper.cmp_rat(t) == Ordering::Greater {
                        return Some((&seg.num.0 + &seg.num.1 * t) / (&seg.den.0 + &seg.den.1 * t));
                    }
                }
                None
            }
        }
    }

    /// Global infimum over the whole profile domain (segment ratios are
    /// monotone, so endpoint values and the two limits suffice).
    pub fn infimum(&self) -> Scalar {
        match self {
            RatioProfile::Constant(s) => s.clone(),
            RatioProfile::PiecewiseMoebius { segments, limit_at_zero, limit_at_end, .. } => {
                let mut best = limit_at_zero.clone().min(limit_at_end.clone());
                for seg in segments {
                    best = best.min(seg.value_at_lower.clone());
                    best = best.min(seg.value_at_upper.clone());
                }
                Scalar::Rational(best)
            }
        }
    }

    /// Infimum over `(0, delta]`.
    pub fn infimum_on_initial(&self, delta: &Rat) -> Scalar {
        match self {
            RatioProfile::Constant(s) => s.clone(),
            RatioProfile::PiecewiseMoebius { segments, limit_at_zero, .. } => {
                let mut best = limit_at_zero.clone();
                for seg in segments {
                    if &seg.lower >= delta {
                        break;
                    }
                    best = best.min(seg.value_at_lower.clone());
                    let upper_val = if seg.upper.cmp_rat(delta) == Ordering::Greater {
                        self.eval_rational(delta).expect("delta inside the domain")
                    } else {
                        seg.value_at_upper.clone()
                    };
                    best = best.min(upper_val);
                }
                Scalar::Rational(best)
            }
        }
    }

    /// Largest admissible certificate point `<= bound`: `bound` itself when
    /// the ratio still exceeds 1 there, otherwise the largest breakpoint
    /// `<= bound` where it does.  (The set where the ratio exceeds 1 is an
    /// initial interval, and the first segment has constant ratio 2, so this
    /// always exists for gauges passing condition (B).)
    pub fn largest_initial_point_above_one(&self, bound: &Rat) -> Rat {
        match self {
            RatioProfile::Constant(_) => bound.clone(),
            RatioProfile::PiecewiseMoebius { .. } => {
                if self.eval_rational(bound).map(|v| v > Rat::one()).unwrap_or(false) {
                    return bound.clone();
                }
                let mut best: Option<Rat> = None;
                for bp in self.breakpoints() {
                    if &bp <= bound
                        && self.eval_rational(&bp).map(|v| v > Rat::one()).unwrap_or(false)
                    {
                        best = Some(bp);
                    }
                }
                best.expect("doubling ratio exceeds 1 near 0")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    A,
    B,
    Neither,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::A => write!(f, "A"),
            Verdict::B => write!(f, "B"),
            Verdict::Neither => write!(f, "NEITHER"),
        }
    }
}

/// Classification output with certificates.
#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub verdict: Verdict,
    /// Uniform lower bound for the doubling ratio (global for (A), on
    /// `(0, delta]` for (B)); absent for NEITHER.
    pub beta: Option<Scalar>,
    /// Witness interval end for (B).
    pub delta: Option<Rat>,
    pub liminf_at_zero: Scalar,
    /// Present only on an infinite domain.
    pub liminf_at_infinity: Option<Scalar>,
    /// `gamma = inf` but `psi` is eventually constant (bounded): the ratio
    /// tends to 1 at infinity and the verdict is NEITHER.
    pub eventually_constant: bool,
    pub grothendieck: bool,
}

//! Seeded random instance generation for the check suite.
//!
//! Generators only emit instances satisfying the premises of the check they
//! feed (the checks re-audit on entry).  Rational data is drawn with small
//! bounded denominators so that exact arithmetic stays fast and violations
//! would shrink to readable witnesses.

use num::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::extent::Extent;
use crate::gauge::{ConcaveGauge, Verdict};
use crate::norms::{marc_norm_symbolic, natural_norm_symbolic, SymbolicNorm};
use crate::profile::PiecewiseLinearConcave;
use crate::step::StepFunction;
use crate::value::{pow_int, rat, rat_int, Rat};
use crate::Result;

use super::checks;
use super::{CheckResult, Family, SuiteConfig};

/// A typed check instance; kept so violations can be re-run and shrunk.
#[derive(Debug, Clone)]
pub(crate) enum Instance {
    Superadditivity { f1: StepFunction, f2: StepFunction, t1: Rat, t2: Rat },
    DisjointDilation { u: StepFunction, v: StepFunction, f: StepFunction, alpha: Extent },
    PointwiseBound { f: StepFunction, gauge: ConcaveGauge },
    RatioIntegral { gauge: ConcaveGauge, t: Rat },
    TransportBound { f: StepFunction, gauge: ConcaveGauge },
    Quasi { u: StepFunction, v: StepFunction, gauge: ConcaveGauge },
    Holder { f: StepFunction, g: StepFunction, gauge: ConcaveGauge },
    Sandwich { f: StepFunction, gauge: ConcaveGauge, delta: Rat },
}

impl Instance {
    pub(crate) fn run(&self, bits: u32) -> Result<CheckResult> {
        match self {
            Instance::Superadditivity { f1, f2, t1, t2 } => {
                checks::check_superadditivity(f1, f2, t1, t2)
            }
            Instance::DisjointDilation { u, v, f, alpha } => {
                checks::check_disjoint_dilation(u, v, f, alpha)
            }
            Instance::PointwiseBound { f, gauge } => checks::check_pointwise_bound(f, gauge, bits),
            Instance::RatioIntegral { gauge, t } => {
                checks::check_psi_integral_bound(gauge, &gauge.classify(), t, bits)
            }
            Instance::TransportBound { f, gauge } => checks::check_transport_bound(f, gauge, bits),
            Instance::Quasi { u, v, gauge } => {
                checks::check_quasi_uniform_convexity(u, v, gauge, bits)
            }
            Instance::Holder { f, g, gauge } => checks::check_holder(f, g, gauge),
            Instance::Sandwich { f, gauge, delta } => {
                checks::check_natural_sandwich(f, gauge, delta)
            }
        }
    }

    pub(crate) fn functions(&self) -> Vec<&StepFunction> {
        match self {
            Instance::Superadditivity { f1, f2, .. } => vec![f1, f2],
            Instance::DisjointDilation { u, v, f, .. } => vec![u, v, f],
            Instance::PointwiseBound { f, .. } => vec![f],
            Instance::RatioIntegral { .. } => Vec::new(),
            Instance::TransportBound { f, .. } => vec![f],
            Instance::Quasi { u, v, .. } => vec![u, v],
            Instance::Holder { f, g, .. } => vec![f, g],
            Instance::Sandwich { f, .. } => vec![f],
        }
    }

    pub(crate) fn with_function(&self, idx: usize, replacement: StepFunction) -> Instance {
        let mut out = self.clone();
        match &mut out {
            Instance::Superadditivity { f1, f2, .. } => match idx {
                0 => *f1 = replacement,
                _ => *f2 = replacement,
            },
            Instance::DisjointDilation { u, v, f, .. } => match idx {
                0 => *u = replacement,
                1 => *v = replacement,
                _ => *f = replacement,
            },
            Instance::PointwiseBound { f, .. } => *f = replacement,
            Instance::RatioIntegral { .. } => {}
            Instance::TransportBound { f, .. } => *f = replacement,
            Instance::Quasi { u, v, .. } => match idx {
                0 => *u = replacement,
                _ => *v = replacement,
            },
            Instance::Holder { f, g, .. } => match idx {
                0 => *f = replacement,
                _ => *g = replacement,
            },
            Instance::Sandwich { f, .. } => *f = replacement,
        }
        out
    }
}

/// A rational in `(0, 1]` with denominator at most 12.
pub fn rat_in_unit(rng: &mut ChaCha8Rng) -> Rat {
    let q = rng.gen_range(2..=12i64);
    let p = rng.gen_range(1..=q);
    rat(p, q)
}

/// A rational strictly inside `(0, 1)`.
pub fn rat_in_open_unit(rng: &mut ChaCha8Rng) -> Rat {
    let q = rng.gen_range(2..=12i64);
    let p = rng.gen_range(1..q);
    rat(p, q)
}

/// A nonnegative value `<= max_whole + 1`, zero with probability 1/5.
pub fn small_value(rng: &mut ChaCha8Rng, max_whole: i64) -> Rat {
    if rng.gen_range(0..5i32) == 0 {
        return Rat::zero();
    }
    rat_int(rng.gen_range(0..max_whole)) + rat_in_unit(rng)
}

/// `count` distinct cut points inside `(0, span)`, on a common grid.
fn cuts_in(rng: &mut ChaCha8Rng, span: &Rat, count: usize) -> Vec<Rat> {
    if count == 0 {
        return Vec::new();
    }
    let d = rng.gen_range(count as i64 + 2..=count as i64 + 14);
    let mut nums: Vec<i64> = Vec::new();
    while nums.len() < count {
        let n = rng.gen_range(1..d);
        if !nums.contains(&n) {
            nums.push(n);
        }
    }
    nums.sort_unstable();
    nums.into_iter().map(|n| span * rat(n, d)).collect()
}

fn span_for(rng: &mut ChaCha8Rng, gamma: &Extent) -> Rat {
    match gamma {
        Extent::Finite(g) => g.clone(),
        Extent::Infinite => rat_int(rng.gen_range(1..=4)),
    }
}

/// Random step function; on infinite domains the tail value is zero.
pub fn random_step(rng: &mut ChaCha8Rng, gamma: &Extent, max_pieces: u32) -> StepFunction {
    let span = span_for(rng, gamma);
    let cut_count = rng.gen_range(0..max_pieces.max(1)) as usize;
    let cuts = cuts_in(rng, &span, cut_count);
    let mut values: Vec<Rat> = (0..=cut_count).map(|_| small_value(rng, 5)).collect();
    if gamma.is_infinite() {
        *values.last_mut().unwrap() = Rat::zero();
    }
    StepFunction::new(cuts, values, gamma.clone()).expect("generated step function")
}

/// Random nonzero step function.
pub fn random_nonzero_step(rng: &mut ChaCha8Rng, gamma: &Extent, max_pieces: u32) -> StepFunction {
    loop {
        let f = random_step(rng, gamma, max_pieces);
        if !f.is_zero() {
            return f;
        }
    }
}

/// Random decreasing step function (a rearrangement is always decreasing).
pub fn random_decreasing_step(
    rng: &mut ChaCha8Rng,
    gamma: &Extent,
    max_pieces: u32,
) -> StepFunction {
    random_step(rng, gamma, max_pieces).rearrange()
}

/// Infinite-domain function with positive tail value and every value at or
/// above it (the regime where exact transport onto the rearrangement exists).
pub fn random_step_above_floor(rng: &mut ChaCha8Rng, max_pieces: u32) -> StepFunction {
    let floor = rat_in_unit(rng);
    let span = rat_int(rng.gen_range(1..=4));
    let cut_count = rng.gen_range(0..max_pieces.max(1)) as usize;
    let cuts = cuts_in(rng, &span, cut_count);
    let mut values: Vec<Rat> =
        (0..=cut_count).map(|_| &floor + small_value(rng, 4)).collect();
    *values.last_mut().unwrap() = floor;
    StepFunction::new(cuts, values, Extent::Infinite).expect("floored step function")
}

/// Random concave piecewise-linear gauge.  `jump` fixes `psi(0+)`;
/// `positive_final` forces a positive final slope.
pub fn random_pl_gauge(
    rng: &mut ChaCha8Rng,
    gamma: &Extent,
    max_knots: u32,
    jump: Rat,
    positive_final: bool,
) -> ConcaveGauge {
    let span = span_for(rng, gamma);
    let knot_count = rng.gen_range(0..=max_knots) as usize;
    let cuts = cuts_in(rng, &span, knot_count);
    let mut slope = rat_int(rng.gen_range(1..=3)) + rat_in_unit(rng);
    let mut value = jump.clone();
    let mut prev = Rat::zero();
    let mut knots = Vec::with_capacity(knot_count);
    for cut in cuts {
        value = &value + &slope * (&cut - &prev);
        prev = cut.clone();
        knots.push((cut, value.clone()));
        slope = &slope * rat_in_open_unit(rng);
    }
    // A zero final slope on a knotless jump-free profile would make the
    // gauge identically zero.
    let keep_slope = positive_final
        || (knots.is_empty() && jump.is_zero())
        || rng.gen_bool(0.5);
    let final_slope = if keep_slope { slope } else { Rat::zero() };
    let profile = PiecewiseLinearConcave::new(jump, knots, final_slope, gamma.clone())
        .expect("generated profile is concave");
    ConcaveGauge::piecewise_linear(profile).expect("generated gauge is nonzero")
}

/// Exponents drawn from a small pool of `p > 1`.
pub fn random_power_p(rng: &mut ChaCha8Rng) -> Rat {
    let pool = [rat(3, 2), rat_int(2), rat_int(3), rat(4, 3), rat(5, 2)];
    pool[rng.gen_range(0..pool.len())].clone()
}

/// Gauge satisfying condition (A) (infinite domain).
pub fn random_a_gauge(rng: &mut ChaCha8Rng, max_knots: u32) -> ConcaveGauge {
    let gauge = if rng.gen_bool(0.5) {
        ConcaveGauge::power(
            random_power_p(rng),
            rat_int(rng.gen_range(1..=2)),
            Extent::Infinite,
        )
        .expect("power gauge")
    } else {
        random_pl_gauge(rng, &Extent::Infinite, max_knots, Rat::zero(), true)
    };
    debug_assert_eq!(gauge.classify().verdict, Verdict::A);
    gauge
}

/// Gauge satisfying condition (B) (finite domain).
pub fn random_b_gauge(rng: &mut ChaCha8Rng, max_knots: u32) -> ConcaveGauge {
    let gamma = Extent::finite(rat_int(rng.gen_range(1..=2)));
    let gauge = if rng.gen_bool(0.25) {
        ConcaveGauge::power(random_power_p(rng), Rat::one(), gamma).expect("power gauge")
    } else {
        let positive_final = rng.gen_bool(0.5);
        random_pl_gauge(rng, &gamma, max_knots, Rat::zero(), positive_final)
    };
    debug_assert_eq!(gauge.classify().verdict, Verdict::B);
    gauge
}

/// Piecewise-linear gauge satisfying (B), for checks needing `psi'`.
pub fn random_b_pl_gauge(rng: &mut ChaCha8Rng, max_knots: u32) -> ConcaveGauge {
    let gamma = Extent::finite(rat_int(rng.gen_range(1..=2)));
    let positive_final = rng.gen_bool(0.5);
    random_pl_gauge(rng, &gamma, max_knots, Rat::zero(), positive_final)
}

/// Decreasing function on `(0, inf)` with exact unit norm against the power
/// gauge `t^(1-1/p)`: the rearrangement breakpoints are perfect `a`-th powers
/// (`p = a/b`), making every norm candidate rational.
pub fn unit_norm_power_fn(rng: &mut ChaCha8Rng, p: &Rat) -> StepFunction {
    let a: i64 = p.numer().try_into().expect("small p");
    let b: i64 = p.denom().try_into().expect("small p");
    let slabs = rng.gen_range(1..=3usize);
    let mut base = rat_in_unit(rng);
    let mut cuts = Vec::with_capacity(slabs);
    let mut bases = Vec::with_capacity(slabs);
    for _ in 0..slabs {
        bases.push(base.clone());
        cuts.push(pow_int(&base, a));
        base = &base + rat_in_unit(rng);
    }
    let mut value = rat_int(rng.gen_range(1..=2)) + rat_in_unit(rng);
    let mut values = Vec::with_capacity(slabs + 1);
    for _ in 0..slabs {
        values.push(value.clone());
        value = &value * rat_in_open_unit(rng);
    }
    values.push(Rat::zero());
    let f = StepFunction::new(cuts.clone(), values, Extent::Infinite).expect("unit norm shape");
    // Exact norm: max over breakpoints of H(W_i) / W_i^(1-1/p), and
    // W_i^(1-1/p) = base_i^(a-b) is rational by construction.
    let star = f.rearrange();
    let head = star.head_profile();
    let mut norm = Rat::zero();
    for (i, cut) in star.cut_points().iter().enumerate() {
        let base = &bases[i.min(bases.len() - 1)];
        debug_assert_eq!(&pow_int(base, a), cut);
        let cand = head.eval(cut) / pow_int(base, a - b);
        if cand > norm {
            norm = cand;
        }
    }
    let unit = f.scale(&norm.recip()).expect("normalization");
    debug_assert!(matches!(
        marc_norm_symbolic(&unit, &ConcaveGauge::power(p.clone(), Rat::one(), Extent::Infinite).unwrap()),
        Ok(SymbolicNorm::Finite(ref m, _)) if m.cmp_rat(&Rat::one()) == std::cmp::Ordering::Equal
    ));
    unit
}

/// Translate a compactly supported function on `(0, inf)` to the right.
pub fn translate_right(f: &StepFunction, offset: &Rat) -> StepFunction {
    assert!(f.gamma().is_infinite() && offset.is_positive());
    let mut cuts = vec![offset.clone()];
    cuts.extend(f.cut_points().iter().map(|c| c + offset));
    let mut values = vec![Rat::zero()];
    values.extend_from_slice(f.segment_values());
    StepFunction::new(cuts, values, Extent::Infinite).expect("translated function")
}

/// The standing gauge pool: both verdicts, both backends, and NEITHER cases.
pub fn default_gauge_pool() -> Vec<ConcaveGauge> {
    let one = Rat::one();
    let g1 = Extent::finite(one.clone());
    vec![
        ConcaveGauge::capped_linear(rat_int(2), one.clone(), g1.clone()).unwrap(),
        ConcaveGauge::capped_linear(rat_int(3), one.clone(), g1.clone()).unwrap(),
        ConcaveGauge::piecewise_linear(
            PiecewiseLinearConcave::linear(Rat::zero(), one.clone(), g1.clone()).unwrap(),
        )
        .unwrap(),
        ConcaveGauge::piecewise_linear(
            PiecewiseLinearConcave::linear(rat(1, 2), one.clone(), g1.clone()).unwrap(),
        )
        .unwrap(),
        ConcaveGauge::piecewise_linear(
            PiecewiseLinearConcave::linear(Rat::zero(), one.clone(), Extent::Infinite).unwrap(),
        )
        .unwrap(),
        ConcaveGauge::piecewise_linear(
            PiecewiseLinearConcave::new(
                Rat::zero(),
                vec![(one.clone(), rat_int(3))],
                one.clone(),
                Extent::Infinite,
            )
            .unwrap(),
        )
        .unwrap(),
        ConcaveGauge::capped_linear(one.clone(), one.clone(), Extent::Infinite).unwrap(),
        ConcaveGauge::power(rat_int(2), one.clone(), Extent::Infinite).unwrap(),
        ConcaveGauge::power(rat(3, 2), one.clone(), Extent::Infinite).unwrap(),
        ConcaveGauge::power(rat_int(3), one, g1).unwrap(),
    ]
}

fn random_extent(rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Extent {
    config.extent_pool[rng.gen_range(0..config.extent_pool.len())].clone()
}

/// Two disjoint pieces of a decreasing `f`, scaled down, plus `f` itself:
/// the premises of the dilation check hold by construction.
fn split_pair(
    rng: &mut ChaCha8Rng,
    f: &StepFunction,
) -> (StepFunction, StepFunction) {
    let scale_u = rat_in_unit(rng);
    let scale_v = rat_in_unit(rng);
    let mut cuts: Vec<Rat> = Vec::new();
    let mut u_values: Vec<Rat> = Vec::new();
    let mut v_values: Vec<Rat> = Vec::new();
    let segments = f.segments();
    for (i, seg) in segments.iter().enumerate() {
        let mut bounds = vec![seg.lower.clone()];
        // Occasionally split a cell so u and v interleave below cell level.
        if rng.gen_bool(0.4) {
            let mid = match &seg.upper {
                Extent::Finite(u) => (&seg.lower + u) / rat_int(2),
                Extent::Infinite => &seg.lower + Rat::one(),
            };
            if mid > seg.lower {
                bounds.push(mid);
            }
        }
        for (j, b) in bounds.iter().enumerate() {
            if !(i == 0 && j == 0) {
                cuts.push(b.clone());
            }
            if rng.gen_bool(0.5) {
                u_values.push(&seg.value * &scale_u);
                v_values.push(Rat::zero());
            } else {
                u_values.push(Rat::zero());
                v_values.push(&seg.value * &scale_v);
            }
        }
    }
    let u = StepFunction::new(cuts.clone(), u_values, f.gamma().clone()).expect("split u");
    let v = StepFunction::new(cuts, v_values, f.gamma().clone()).expect("split v");
    (u, v)
}

/// Gauge drawn from the pool or generated fresh; any verdict.
fn mixed_gauge(rng: &mut ChaCha8Rng, config: &SuiteConfig, gamma: &Extent) -> ConcaveGauge {
    let from_pool: Vec<&ConcaveGauge> =
        config.gauge_pool.iter().filter(|g| g.gamma() == gamma).collect();
    if !from_pool.is_empty() && rng.gen_bool(0.5) {
        return from_pool[rng.gen_range(0..from_pool.len())].clone();
    }
    if gamma.is_infinite() && rng.gen_bool(0.3) {
        return ConcaveGauge::power(random_power_p(rng), Rat::one(), Extent::Infinite).unwrap();
    }
    let jump = if rng.gen_bool(0.25) { rat_in_unit(rng) } else { Rat::zero() };
    let positive_final = rng.gen_bool(0.5);
    random_pl_gauge(rng, gamma, 3, jump, positive_final)
}

pub(crate) fn generate(rng: &mut ChaCha8Rng, config: &SuiteConfig, family: Family) -> Instance {
    let pieces = config.max_pieces;
    match family {
        Family::Superadditivity => {
            let gamma = random_extent(rng, config);
            let f1 = random_step(rng, &gamma, pieces);
            let f2 = random_step(rng, &gamma, pieces);
            let (t1, t2) = match &gamma {
                Extent::Finite(g) => {
                    let half = g / rat_int(2);
                    (&half * rat_in_unit(rng), &half * rat_in_unit(rng))
                }
                Extent::Infinite => (
                    rat_int(rng.gen_range(0..=2)) + rat_in_unit(rng),
                    rat_int(rng.gen_range(0..=2)) + rat_in_unit(rng),
                ),
            };
            Instance::Superadditivity { f1, f2, t1, t2 }
        }
        Family::DisjointDilation => {
            let gamma = random_extent(rng, config);
            let f = random_decreasing_step(rng, &gamma, pieces);
            let (u, v) = split_pair(rng, &f);
            let alpha = match &gamma {
                Extent::Finite(g) => {
                    if rng.gen_bool(0.5) {
                        Extent::Finite(g.clone())
                    } else {
                        Extent::Finite(g * rat_in_unit(rng))
                    }
                }
                Extent::Infinite => {
                    if rng.gen_bool(0.5) {
                        Extent::Infinite
                    } else {
                        Extent::finite(rat_int(rng.gen_range(1..=4)))
                    }
                }
            };
            Instance::DisjointDilation { u, v, f, alpha }
        }
        Family::PointwiseBound => loop {
            let gamma = random_extent(rng, config);
            let gauge = mixed_gauge(rng, config, &gamma);
            let f = random_step(rng, &gamma, pieces);
            if matches!(marc_norm_symbolic(&f, &gauge), Ok(SymbolicNorm::Finite(_, _))) {
                return Instance::PointwiseBound { f, gauge };
            }
        },
        Family::RatioIntegralBound => {
            if rng.gen_bool(0.5) {
                let gauge = random_a_gauge(rng, 3);
                let t = rat_int(rng.gen_range(0..=2)) + rat_in_unit(rng);
                Instance::RatioIntegral { gauge, t }
            } else {
                let gauge = random_b_gauge(rng, 3);
                let delta = gauge.classify().delta.expect("verdict B");
                let t = delta * rat_in_unit(rng);
                Instance::RatioIntegral { gauge, t }
            }
        }
        Family::TransportBound => {
            if rng.gen_bool(0.5) {
                let gauge = random_b_gauge(rng, 3);
                let f = random_step(rng, &gauge.gamma().clone(), pieces);
                Instance::TransportBound { f, gauge }
            } else {
                // Infinite domain: power gauges need vanishing tails, while
                // piecewise-linear (A)-gauges admit positive tails.
                let gauge = random_a_gauge(rng, 3);
                let f = if gauge.is_piecewise_linear() && rng.gen_bool(0.5) {
                    random_step_above_floor(rng, pieces)
                } else {
                    random_step(rng, &Extent::Infinite, pieces)
                };
                Instance::TransportBound { f, gauge }
            }
        }
        Family::QuasiUniformConvexity => {
            if rng.gen_bool(0.5) {
                // Condition (A), power gauge, exactly norm-one translates.
                let p = random_power_p(rng);
                let gauge = ConcaveGauge::power(p.clone(), Rat::one(), Extent::Infinite).unwrap();
                let u = unit_norm_power_fn(rng, &p);
                let span = match u.support_upper() {
                    Extent::Finite(s) => s,
                    Extent::Infinite => unreachable!("compact support"),
                };
                let v = translate_right(&unit_norm_power_fn(rng, &p), &span);
                Instance::Quasi { u, v, gauge }
            } else {
                // Condition (B), piecewise-linear gauge, truncated norm.
                let gauge = random_b_pl_gauge(rng, 3);
                let delta = gauge.classify().delta.expect("verdict B");
                let g = gauge.gamma().expect_finite().clone();
                let split = &g * rat_in_open_unit(rng);
                let (u, v) = disjoint_halves(rng, &gauge, &delta, &g, &split, pieces);
                Instance::Quasi { u, v, gauge }
            }
        }
        Family::HolderPairing => {
            let gamma = random_extent(rng, config);
            let jump = if rng.gen_bool(0.25) { rat_in_unit(rng) } else { Rat::zero() };
            let gauge = random_pl_gauge(rng, &gamma, 3, jump, true);
            let f = random_step(rng, &gamma, pieces);
            let g = random_step(rng, &gamma, pieces);
            Instance::Holder { f, g, gauge }
        }
        Family::NaturalSandwich => {
            let gauge = random_b_pl_gauge(rng, 3);
            let delta = gauge.classify().delta.expect("verdict B");
            let f = random_step(rng, &gauge.gamma().clone(), pieces);
            Instance::Sandwich { f, gauge, delta }
        }
    }
}

/// Two nonzero functions supported on `(0, split)` and `[split, gamma)`,
/// each scaled to truncated norm exactly one.
fn disjoint_halves(
    rng: &mut ChaCha8Rng,
    gauge: &ConcaveGauge,
    delta: &Rat,
    gamma: &Rat,
    split: &Rat,
    pieces: u32,
) -> (StepFunction, StepFunction) {
    let extent = Extent::Finite(gamma.clone());
    let left = loop {
        let count = rng.gen_range(0..pieces.max(2) - 1) as usize;
        let inner = cuts_in(rng, split, count);
        let mut cuts = inner;
        cuts.push(split.clone());
        let mut values: Vec<Rat> = (0..cuts.len()).map(|_| small_value(rng, 4)).collect();
        values.push(Rat::zero());
        let f = StepFunction::new(cuts, values, extent.clone()).expect("left half");
        if !f.is_zero() {
            break f;
        }
    };
    let right = loop {
        let width = gamma - split;
        let count = rng.gen_range(0..pieces.max(2) - 1) as usize;
        let inner: Vec<Rat> =
            cuts_in(rng, &width, count).into_iter().map(|c| split + c).collect();
        let mut cuts = vec![split.clone()];
        cuts.extend(inner);
        let mut values = vec![Rat::zero()];
        values.extend((1..cuts.len() + 1).map(|_| small_value(rng, 4)));
        let f = StepFunction::new(cuts, values, extent.clone()).expect("right half");
        if !f.is_zero() {
            break f;
        }
    };
    let normalize = |f: StepFunction| -> StepFunction {
        match natural_norm_symbolic(&f, gauge, delta).expect("truncated norm") {
            SymbolicNorm::Finite(m, _) => {
                let n = m.as_rational().expect("rational norm").clone();
                f.scale(&n.recip()).expect("normalization")
            }
            SymbolicNorm::Infinite => unreachable!("finite domain"),
        }
    };
    (normalize(left), normalize(right))
}

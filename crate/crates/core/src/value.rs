//! Exact and certified numeric values.
//!
//! Everything in this crate is either an exact `Rat` (arbitrary-precision
//! rational) or a certified [`Enclosure`]: a rational interval that is
//! guaranteed to contain the true real value, produced by directed rounding.
//! Irrational quantities arising from power-law gauges (`t^(1-1/p)`,
//! `2^(1-1/p)`, `ln`) never pass through floating point.

use std::cmp::Ordering;
use std::fmt;

use num::bigint::BigInt;
use num::{One, Signed, Zero};

/// Arbitrary-precision rational, the scalar type of the whole crate.
pub type Rat = num::BigRational;

/// Default enclosure precision in bits (enclosure width `<= 2^-128`).
pub const DEFAULT_PRECISION: u32 = 128;

/// `p/q` as a `Rat`; panics on `q = 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Integer as a `Rat`.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `r^k` for any integer `k` (inverts for negative `k`; panics on `0^-k`).
pub fn pow_int(r: &Rat, k: i64) -> Rat {
    if k == 0 {
        return Rat::one();
    }
    let mag = k.unsigned_abs() as u32;
    let powed = Rat::new(r.numer().pow(mag), r.denom().pow(mag));
    if k > 0 {
        powed
    } else {
        assert!(!powed.is_zero(), "zero has no negative powers");
        powed.recip()
    }
}

fn two_pow(bits: u32) -> BigInt {
    BigInt::one() << bits
}

/// Floor of a nonnegative rational as a `BigInt`.
fn floor_big(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

/// A closed rational interval `[lo, hi]` certified to contain a real value.
/// A point enclosure (`lo == hi`) represents an exactly known value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    lo: Rat,
    hi: Rat,
}

impl Enclosure {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "enclosure endpoints out of order");
        Enclosure { lo, hi }
    }

    pub fn point(v: Rat) -> Self {
        Enclosure { lo: v.clone(), hi: v }
    }

    pub fn zero() -> Self {
        Enclosure::point(Rat::zero())
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / rat_int(2)
    }

    pub fn contains(&self, v: &Rat) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        Enclosure::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &Enclosure) -> Enclosure {
        Enclosure::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    /// Product of enclosures of nonnegative values.
    pub fn mul_nonneg(&self, other: &Enclosure) -> Enclosure {
        debug_assert!(!self.lo.is_negative() && !other.lo.is_negative());
        Enclosure::new(&self.lo * &other.lo, &self.hi * &other.hi)
    }

    /// Scale by an exact rational of either sign.
    pub fn scale(&self, c: &Rat) -> Enclosure {
        if c.is_negative() {
            Enclosure::new(&self.hi * c, &self.lo * c)
        } else {
            Enclosure::new(&self.lo * c, &self.hi * c)
        }
    }

    /// Reciprocal; requires a strictly positive enclosure.
    pub fn recip(&self) -> Enclosure {
        assert!(self.lo.is_positive(), "reciprocal of a non-positive enclosure");
        Enclosure::new(self.hi.clone().recip(), self.lo.clone().recip())
    }

    /// Widen the endpoints outward onto the dyadic grid `2^-bits`, keeping
    /// exactly known values exact.
    pub fn round_out(&self, bits: u32) -> Enclosure {
        if self.is_point() {
            return self.clone();
        }
        self.quantize(bits)
    }

    /// Force both endpoints onto the dyadic grid `2^-bits` (outward).  Used
    /// inside iterative series to keep denominators bounded.
    pub fn quantize(&self, bits: u32) -> Enclosure {
        let scale = two_pow(bits);
        let lo = floor_big(&(&self.lo * Rat::from_integer(scale.clone())));
        let hi = -floor_big(&(-&self.hi * Rat::from_integer(scale.clone())));
        Enclosure::new(Rat::new(lo, scale.clone()), Rat::new(hi, scale))
    }

    /// True iff every value of `self` is `<=` every value of `other`.
    pub fn definitely_le(&self, other: &Enclosure) -> bool {
        self.hi <= other.lo
    }

    /// True iff some value of `self` exceeds every value of `other`, i.e.
    /// the inequality `self <= other` is certified to fail.
    pub fn definitely_gt(&self, other: &Enclosure) -> bool {
        self.lo > other.hi
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}/{}, {}/{}]",
            self.lo.numer(),
            self.lo.denom(),
            self.hi.numer(),
            self.hi.denom()
        )
    }
}

/// An exactly representable scalar: a rational or a symbolic power of two.
/// Comparisons against rationals are decided exactly by clearing the
/// fractional exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Rational(Rat),
    /// `PowTwo(e)` denotes `2^e` with rational exponent `e`.
    PowTwo(Rat),
}

impl Scalar {
    pub fn one() -> Self {
        Scalar::Rational(Rat::one())
    }

    pub fn gt_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => *r > Rat::one(),
            Scalar::PowTwo(e) => e.is_positive(),
        }
    }

    pub fn cmp_rat(&self, r: &Rat) -> Ordering {
        match self {
            Scalar::Rational(s) => s.cmp(r),
            Scalar::PowTwo(e) => {
                if !r.is_positive() {
                    return Ordering::Greater;
                }
                // 2^(a/b) vs r  <=>  2^a vs r^b  (b > 0)
                let a = e.numer();
                let b: i64 = e
                    .denom()
                    .try_into()
                    .expect("power-of-two exponent denominator too large");
                let lhs = pow_big(&rat_int(2), a);
                let rhs = pow_int(r, b);
                lhs.cmp(&rhs)
            }
        }
    }

    pub fn cmp(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), _) => other.cmp_rat(a).reverse(),
            (_, Scalar::Rational(b)) => self.cmp_rat(b),
            (Scalar::PowTwo(a), Scalar::PowTwo(b)) => a.cmp(b),
        }
    }

    pub fn enclosure(&self, bits: u32) -> Enclosure {
        match self {
            Scalar::Rational(r) => Enclosure::point(r.clone()),
            Scalar::PowTwo(e) => pow_enclosure(&rat_int(2), e, bits),
        }
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::PowTwo(_) => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::PowTwo(e) => write!(f, "2^({}/{})", e.numer(), e.denom()),
        }
    }
}

/// `r^k` for a `BigInt` exponent (used for exponent numerators).
fn pow_big(r: &Rat, k: &BigInt) -> Rat {
    let k64: i64 = k.try_into().expect("exponent too large for exact power");
    pow_int(r, k64)
}

/// A product `coeff * prod(base_i ^ exp_i)` of positive rationals raised to
/// rational exponents.  Values of this shape cover every irrational quantity
/// produced by power-law gauges, and any two of them compare exactly: raising
/// both sides to the lcm of the exponent denominators clears all roots.
#[derive(Debug, Clone)]
pub struct PowMonomial {
    coeff: Rat,
    factors: Vec<(Rat, Rat)>, // (base, exponent); base > 0
}

impl PowMonomial {
    pub fn from_rat(coeff: Rat) -> Self {
        assert!(!coeff.is_negative(), "monomial coefficient must be nonnegative");
        PowMonomial { coeff, factors: Vec::new() }
    }

    pub fn with_factor(mut self, base: Rat, exp: Rat) -> Self {
        assert!(base.is_positive(), "monomial base must be positive");
        if !exp.is_zero() && !base.is_one() {
            self.factors.push((base, exp));
        }
        self
    }

    pub fn scale(&self, c: &Rat) -> Self {
        assert!(!c.is_negative());
        PowMonomial { coeff: &self.coeff * c, factors: self.factors.clone() }
    }

    pub fn mul(&self, other: &PowMonomial) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        PowMonomial { coeff: &self.coeff * &other.coeff, factors }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// The exact rational value when no power factors are present.
    pub fn as_rational(&self) -> Option<&Rat> {
        if self.factors.is_empty() {
            Some(&self.coeff)
        } else {
            None
        }
    }

    /// Exact comparison.  Both sides are raised to the lcm `L` of all
    /// exponent denominators, turning them into plain rationals.
    pub fn cmp(&self, other: &PowMonomial) -> Ordering {
        // A zero coefficient annihilates the factors.
        if self.is_zero() || other.is_zero() {
            return self.coeff.cmp(&other.coeff);
        }
        let mut l = BigInt::one();
        for (_, e) in self.factors.iter().chain(other.factors.iter()) {
            l = num::integer::lcm(l, e.denom().clone());
        }
        let l64: i64 = (&l).try_into().expect("exponent lcm too large");
        let raise = |m: &PowMonomial| -> Rat {
            let mut acc = pow_int(&m.coeff, l64);
            for (base, exp) in &m.factors {
                let k = exp * Rat::from_integer(l.clone());
                debug_assert!(k.is_integer());
                acc *= pow_big(base, &k.to_integer());
            }
            acc
        };
        raise(self).cmp(&raise(other))
    }

    pub fn cmp_rat(&self, r: &Rat) -> Ordering {
        self.cmp(&PowMonomial::from_rat(r.clone()))
    }

    pub fn to_enclosure(&self, bits: u32) -> Enclosure {
        if self.is_zero() {
            return Enclosure::zero();
        }
        let guard = bits + 8 + 4 * self.factors.len() as u32;
        let mut acc = Enclosure::point(self.coeff.clone());
        for (base, exp) in &self.factors {
            acc = acc.mul_nonneg(&pow_enclosure(base, exp, guard));
        }
        acc.round_out(bits)
    }
}

/// An exactly known rational or a certified enclosure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Exact(Rat),
    Enclosure(Enclosure),
}

impl Value {
    pub fn as_enclosure(&self) -> Enclosure {
        match self {
            Value::Exact(r) => Enclosure::point(r.clone()),
            Value::Enclosure(e) => e.clone(),
        }
    }

    pub fn exact(&self) -> Option<&Rat> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Enclosure(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Value::Enclosure(e) => write!(f, "{}", e),
        }
    }
}

/// Certified enclosure of `x^(1/n)` for `x >= 0`, width `<= 2^-bits`.
/// Exact when `x` is a perfect `n`-th power of a rational.
pub fn nth_root_enclosure(x: &Rat, n: u32, bits: u32) -> Enclosure {
    assert!(!x.is_negative(), "even roots of negatives are not real");
    assert!(n >= 1);
    if x.is_zero() || x.is_one() || n == 1 {
        return Enclosure::point(x.clone());
    }
    // Perfect-power shortcut keeps algebraic identities exact.
    let rn = x.numer().nth_root(n);
    if &rn.pow(n) == x.numer() {
        let rd = x.denom().nth_root(n);
        if &rd.pow(n) == x.denom() {
            return Enclosure::point(Rat::new(rn, rd));
        }
    }
    // floor((x * 2^(n*bits))^(1/n)) / 2^bits brackets the root from below,
    // and the next grid point brackets it from above.
    let shifted: BigInt = (x.numer() << (bits as usize * n as usize)) / x.denom();
    let root = shifted.nth_root(n);
    let scale = two_pow(bits);
    Enclosure::new(
        Rat::new(root.clone(), scale.clone()),
        Rat::new(root + BigInt::one(), scale),
    )
}

/// Certified enclosure of `ln x` for rational `x > 0`, width `<= 2^-bits`.
pub fn ln_enclosure(x: &Rat, bits: u32) -> Enclosure {
    assert!(x.is_positive(), "ln needs a positive argument");
    if x.is_one() {
        return Enclosure::zero();
    }
    if x < &Rat::one() {
        return ln_enclosure(&x.clone().recip(), bits).scale(&rat_int(-1));
    }
    let wp = bits + 32;
    // Range-reduce to y = x / 2^m in [1, 2).
    let mut m: i64 = (x.numer().bits() as i64 - x.denom().bits() as i64).max(0);
    let mut y = x / Rat::from_integer(two_pow(m as u32));
    while y >= rat_int(2) {
        y /= rat_int(2);
        m += 1;
    }
    while y < Rat::one() {
        y *= rat_int(2);
        m -= 1;
    }
    let mut total = atanh_series(&y, wp).scale(&rat_int(2));
    if m != 0 {
        let ln2 = atanh_series(&rat_int(2), wp).scale(&rat_int(2));
        total = total.add(&ln2.scale(&rat_int(m)));
    }
    let out = total.round_out(bits);
    debug_assert!(out.width() <= Rat::new(BigInt::one(), two_pow(bits)));
    out
}

/// Enclosure of `atanh((y-1)/(y+1)) = ln(y)/2` for `y in [1, 2]`, via the
/// odd series in `z = (y-1)/(y+1) <= 1/3`.  All partial results are rounded
/// outward onto the `2^-wp` grid so denominators stay bounded.
fn atanh_series(y: &Rat, wp: u32) -> Enclosure {
    let z_exact = (y - Rat::one()) / (y + Rat::one());
    if z_exact.is_zero() {
        return Enclosure::zero();
    }
    let terms = (wp as usize * 100) / 317 + 3;
    let z = Enclosure::point(z_exact).quantize(wp);
    let z2 = z.mul_nonneg(&z).quantize(wp);
    let mut zpow = z.clone();
    let mut sum = Enclosure::zero();
    for k in 0..terms {
        let coeff = rat_int(1) / rat_int(2 * k as i64 + 1);
        sum = sum.add(&zpow.scale(&coeff)).quantize(wp);
        zpow = zpow.mul_nonneg(&z2).quantize(wp);
    }
    // Geometric tail bound: sum_{j>=K} z^(2j+1)/(2j+1) <= z^(2K+1) / (1 - z^2)
    // and 1/(1 - z^2) <= 9/8 for z <= 1/3.
    let tail = zpow.hi().clone() * rat(9, 8);
    Enclosure::new(sum.lo().clone(), sum.hi() + tail)
}

/// Certified enclosure of `x^e` for rational `x > 0` and rational exponent
/// `e`, width `<= 2^-bits`.  Exact whenever the power is rational.
pub fn pow_enclosure(x: &Rat, e: &Rat, bits: u32) -> Enclosure {
    assert!(x.is_positive(), "powers need a positive base");
    if e.is_zero() || x.is_one() {
        return Enclosure::point(Rat::one());
    }
    if e.is_negative() {
        let mut extra = 0u32;
        loop {
            let pos = pow_enclosure(x, &-e, bits + 8 + extra);
            if pos.lo().is_positive() {
                return pos.recip().round_out(bits);
            }
            extra += 32;
        }
    }
    let floor = e.floor();
    let int_part: i64 = floor
        .to_integer()
        .try_into()
        .expect("exponent too large for exact power");
    let frac = e - floor;
    let mut result = Enclosure::point(pow_int(x, int_part));
    if !frac.is_zero() {
        let a: i64 = frac
            .numer()
            .try_into()
            .expect("exponent numerator too large");
        let b: u32 = frac
            .denom()
            .try_into()
            .expect("exponent denominator too large");
        let inner = pow_int(x, a);
        result = result.mul_nonneg(&nth_root_enclosure(&inner, b, bits + 8));
    }
    result.round_out(bits)
}

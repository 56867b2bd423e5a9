//! Lengths of subsets of `(0, gamma)`: nonnegative rationals extended with
//! a single point at infinity.

use std::cmp::Ordering;
use std::fmt;

use crate::value::Rat;

/// A measure value: a finite nonnegative rational or infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extent {
    Finite(Rat),
    Infinite,
}

impl Extent {
    pub fn zero() -> Self {
        Extent::Finite(Rat::from_integer(0.into()))
    }

    pub fn finite(r: impl Into<Rat>) -> Self {
        Extent::Finite(r.into())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extent::Infinite)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Extent::Finite(r) if r.numer().sign() == num::bigint::Sign::NoSign)
    }

    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            Extent::Finite(r) => Some(r),
            Extent::Infinite => None,
        }
    }

    /// Finite value, panicking on infinity.  Used where finiteness was
    /// already established by construction.
    pub fn expect_finite(&self) -> &Rat {
        self.as_finite().expect("extent is infinite")
    }

    pub fn add(&self, other: &Extent) -> Extent {
        match (self, other) {
            (Extent::Finite(a), Extent::Finite(b)) => Extent::Finite(a + b),
            _ => Extent::Infinite,
        }
    }

    pub fn add_rat(&self, r: &Rat) -> Extent {
        match self {
            Extent::Finite(a) => Extent::Finite(a + r),
            Extent::Infinite => Extent::Infinite,
        }
    }

    /// `self - r` for finite `r`; infinity absorbs.
    pub fn sub_rat(&self, r: &Rat) -> Extent {
        match self {
            Extent::Finite(a) => Extent::Finite(a - r),
            Extent::Infinite => Extent::Infinite,
        }
    }

    pub fn scale(&self, c: &Rat) -> Extent {
        match self {
            Extent::Finite(a) => Extent::Finite(a * c),
            Extent::Infinite => Extent::Infinite,
        }
    }

    pub fn cmp_rat(&self, r: &Rat) -> Ordering {
        match self {
            Extent::Finite(a) => a.cmp(r),
            Extent::Infinite => Ordering::Greater,
        }
    }
}

impl PartialOrd for Extent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Extent {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Extent::Finite(a), Extent::Finite(b)) => a.cmp(b),
            (Extent::Finite(_), Extent::Infinite) => Ordering::Less,
            (Extent::Infinite, Extent::Finite(_)) => Ordering::Greater,
            (Extent::Infinite, Extent::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Extent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extent::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Extent::Infinite => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::rat;

    #[test]
    fn ordering_places_infinity_last() {
        let one = Extent::finite(rat(1, 1));
        let two = Extent::finite(rat(2, 1));
        assert!(one < two);
        assert!(two < Extent::Infinite);
        assert_eq!(Extent::Infinite.cmp(&Extent::Infinite), Ordering::Equal);
    }

    #[test]
    fn arithmetic_absorbs_infinity() {
        let one = Extent::finite(rat(1, 1));
        assert_eq!(one.add(&Extent::Infinite), Extent::Infinite);
        assert_eq!(one.add(&one), Extent::finite(rat(2, 1)));
        assert!(Extent::zero().is_zero());
    }
}

//! Measure-preserving piecewise-translation automorphisms of `(0, gamma)`.
//!
//! A [`TransportMap`] cuts the interval into finitely many pieces and rigidly
//! translates each; composing a function with such a map permutes its level
//! sets without changing any distribution function.

use num::{Signed, Zero};

use crate::error::Error;
use crate::extent::Extent;
use crate::step::StepFunction;
use crate::value::Rat;
use crate::Result;

/// Source interval `[lower, upper)` translated by `offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportSegment {
    pub lower: Rat,
    pub upper: Extent,
    pub offset: Rat,
}

impl TransportSegment {
    fn image_lower(&self) -> Rat {
        &self.lower + &self.offset
    }

    fn image_upper(&self) -> Extent {
        self.upper.add_rat(&self.offset)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportMap {
    segments: Vec<TransportSegment>,
    gamma: Extent,
}

impl TransportMap {
    /// Validates that the source intervals tile `(0, gamma)` exactly and the
    /// images tile it as well (translations preserve lengths, so this makes
    /// the map a measure-preserving bijection mod null sets).
    pub fn new(mut segments: Vec<TransportSegment>, gamma: Extent) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::invalid("transport", "needs at least one segment"));
        }
        segments.sort_by(|a, b| a.lower.cmp(&b.lower));
        let mut cursor = Rat::zero();
        for (i, seg) in segments.iter().enumerate() {
            if seg.lower != cursor {
                return Err(Error::invalid("transport", "source intervals must tile (0, gamma)"));
            }
            match &seg.upper {
                Extent::Finite(u) => {
                    if u <= &seg.lower {
                        return Err(Error::invalid("transport", "empty source interval"));
                    }
                    cursor = u.clone();
                }
                Extent::Infinite => {
                    if i + 1 != segments.len() {
                        return Err(Error::invalid(
                            "transport",
                            "only the last source interval may be unbounded",
                        ));
                    }
                }
            }
            if seg.upper > gamma {
                return Err(Error::invalid("transport", "source interval exceeds gamma"));
            }
            if seg.image_lower().is_negative() {
                return Err(Error::invalid("transport", "image starts below 0"));
            }
            if seg.image_upper() > gamma {
                return Err(Error::invalid("transport", "image exceeds gamma"));
            }
        }
        let last_upper = &segments.last().unwrap().upper;
        if last_upper != &gamma {
            return Err(Error::invalid("transport", "source intervals must reach gamma"));
        }
        // Images must tile (0, gamma) too.
        let mut images: Vec<(Rat, Extent)> =
            segments.iter().map(|s| (s.image_lower(), s.image_upper())).collect();
        images.sort_by(|a, b| a.0.cmp(&b.0));
        let mut cursor = Rat::zero();
        for (i, (lo, hi)) in images.iter().enumerate() {
            if lo != &cursor {
                return Err(Error::invalid("transport", "images must tile (0, gamma)"));
            }
            match hi {
                Extent::Finite(h) => cursor = h.clone(),
                Extent::Infinite => {
                    if i + 1 != images.len() {
                        return Err(Error::invalid("transport", "only one image may be unbounded"));
                    }
                }
            }
        }
        let final_image = &images.last().unwrap().1;
        if final_image != &gamma {
            return Err(Error::invalid("transport", "images must reach gamma"));
        }
        Ok(TransportMap { segments, gamma })
    }

    pub fn identity(gamma: Extent) -> Self {
        TransportMap {
            segments: vec![TransportSegment {
                lower: Rat::zero(),
                upper: gamma.clone(),
                offset: Rat::zero(),
            }],
            gamma,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.segments.iter().all(|s| s.offset.is_zero())
    }

    pub fn gamma(&self) -> &Extent {
        &self.gamma
    }

    pub fn segments(&self) -> &[TransportSegment] {
        &self.segments
    }

    /// The inverse automorphism (images become sources).
    pub fn inverse(&self) -> TransportMap {
        let segments = self
            .segments
            .iter()
            .map(|s| TransportSegment {
                lower: s.image_lower(),
                upper: s.image_upper(),
                offset: -s.offset.clone(),
            })
            .collect();
        TransportMap::new(segments, self.gamma.clone()).expect("inverse of a valid transport")
    }

    /// `sigma(t)` for `0 <= t < gamma`.
    pub fn apply_point(&self, t: &Rat) -> Rat {
        assert!(!t.is_negative() && self.gamma.cmp_rat(t) == std::cmp::Ordering::Greater);
        for seg in &self.segments {
            if &seg.lower <= t && seg.upper.cmp_rat(t) == std::cmp::Ordering::Greater {
                return t + &seg.offset;
            }
        }
        unreachable!("segments tile the domain")
    }
}

/// `T_sigma f = f o sigma`.  The rearrangement is invariant:
/// `(f o sigma)* = f*`.
pub fn apply_transport(sigma: &TransportMap, f: &StepFunction) -> Result<StepFunction> {
    if sigma.gamma() != f.gamma() {
        return Err(Error::DomainMismatch(sigma.gamma().to_string(), f.gamma().to_string()));
    }
    // Pull back f's constant regions through each translated piece.
    let mut starts: Vec<(Rat, Rat)> = Vec::new(); // (source start, value)
    for seg in sigma.segments() {
        let img_lo = seg.image_lower();
        let img_hi = seg.image_upper();
        for fseg in f.segments() {
            let lo = if fseg.lower > img_lo { fseg.lower.clone() } else { img_lo.clone() };
            let hi = fseg.upper.clone().min(img_hi.clone());
            if hi.cmp_rat(&lo) == std::cmp::Ordering::Greater {
                starts.push((lo - &seg.offset, fseg.value));
            }
        }
    }
    starts.sort_by(|a, b| a.0.cmp(&b.0));
    let values: Vec<Rat> = starts.iter().map(|(_, v)| v.clone()).collect();
    let cuts: Vec<Rat> = starts.iter().skip(1).map(|(c, _)| c.clone()).collect();
    StepFunction::new(cuts, values, f.gamma().clone())
}

/// Builds the automorphism carrying `g` onto its decreasing rearrangement:
/// `g* o sigma = g` exactly.  Each level set of `g`, split at piece
/// boundaries, is mapped onto the matching slab of `g*` in source order.
///
/// On an infinite domain this is possible precisely when no value below the
/// final (tail) value occupies positive measure; otherwise those values do
/// not occur in `g*` at all and the construction fails.
pub fn transport_to_rearrangement(g: &StepFunction) -> Result<TransportMap> {
    let star = g.rearrange();
    if g.gamma().is_infinite() {
        let floor = g.final_value();
        let cells = g.segments();
        if cells[..cells.len() - 1].iter().any(|c| &c.value < floor) {
            return Err(Error::TransportInfeasible);
        }
    }
    let mut segments: Vec<TransportSegment> = Vec::new();
    for slab in star.segments() {
        let mut pos = slab.lower.clone();
        for cell in g.segments() {
            if cell.value != slab.value {
                continue;
            }
            let offset = &pos - &cell.lower;
            match cell.length() {
                Extent::Finite(len) => pos += len,
                Extent::Infinite => {}
            }
            segments.push(TransportSegment { lower: cell.lower, upper: cell.upper, offset });
        }
        debug_assert!(
            slab.upper.cmp_rat(&pos) != std::cmp::Ordering::Less,
            "slab overfilled"
        );
    }
    TransportMap::new(segments, g.gamma().clone())
}

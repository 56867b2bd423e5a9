//! Exact calculus for nonnegative step functions on an interval `(0, gamma)`
//! with `0 < gamma <= inf`: distribution functions, decreasing rearrangements,
//! head integrals and submajorization, measure-preserving transport, concave
//! gauges with doubling-condition classification, and Marcinkiewicz / Lorentz
//! norm computation.  All quantities are exact rationals where possible;
//! power-law gauges produce certified rational enclosures instead of floats.
//!
//! The `verify` module turns every quantitative inequality the library is
//! built around into an executable, seedable check suite.

pub mod error;
pub mod extent;
pub mod gauge;
pub mod norms;
pub mod profile;
pub mod step;
pub mod textio;
pub mod transport;
pub mod value;
pub mod verify;

pub use error::Error;
pub use extent::Extent;
pub use gauge::{ConcaveGauge, ConditionReport, RatioProfile, Verdict};
pub use norms::{AttainedAt, DiscreteFunction, NormOutcome, NormValue};
pub use profile::PiecewiseLinearConcave;
pub use step::{DistributionFunction, StepFunction};
pub use transport::TransportMap;
pub use value::{Enclosure, Rat, Scalar, Value, DEFAULT_PRECISION};

/// Convenience result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

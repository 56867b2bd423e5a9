//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two operands live on intervals of different total measure.
    #[error("domain extents differ: {0} vs {1}")]
    DomainMismatch(String, String),

    /// Dilation would push nonzero mass beyond a finite domain.
    #[error("dilated support exceeds the finite domain")]
    DomainOverflow,

    /// An evaluation point lies outside the function's domain.
    #[error("point {0} lies outside the domain")]
    OutOfDomain(String),

    /// The operation needs a piecewise-linear gauge (power gauges have no
    /// step-function derivative).
    #[error("operation requires a piecewise-linear gauge")]
    UnsupportedBackend,

    /// `integral of psi(s)/s` diverges at 0 because `psi(0+) > 0`.
    #[error("integral of psi(s)/s diverges at 0 (psi(0+) > 0)")]
    DivergentIntegral,

    /// The unit-ball characterization needs `psi(0+) = 0`.
    #[error("hypothesis violated: psi(0+) must be 0")]
    HypothesisViolated,

    /// A check was invoked on inputs that fail its stated premises.
    #[error("check premises not satisfied: {0}")]
    PremiseViolated(String),

    /// Exact measure transport onto the rearrangement is impossible: the
    /// function takes values below its tail value on a set of positive
    /// (finite) measure, and those values do not occur in the rearrangement.
    #[error("exact transport impossible: values below the tail value have positive measure")]
    TransportInfeasible,

    /// A constructor was handed data violating a structural invariant.
    #[error("invalid {0}: {1}")]
    Invalid(&'static str, String),
}

impl Error {
    pub fn invalid(what: &'static str, why: impl Into<String>) -> Self {
        Error::Invalid(what, why.into())
    }

    pub fn premise(why: impl Into<String>) -> Self {
        Error::PremiseViolated(why.into())
    }
}

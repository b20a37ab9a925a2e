//! Error types shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A requested limit exceeds what the implementation can hold in memory
    /// (or is zero).
    #[error("capacity: {what} requested {requested}, supported bound is {bound}")]
    Capacity {
        what: &'static str,
        requested: u64,
        bound: u64,
    },

    /// An argument violates a precondition that is not covered by a more
    /// specific variant.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The integer is not a fundamental discriminant.
    #[error("{d} is not a fundamental discriminant: {reason}")]
    NotFundamental { d: i64, reason: String },

    /// A supplied character table fails one of the quadratic-character
    /// axioms. The reason names the failed axiom and a witness when one
    /// exists (e.g. the pair (a, b) breaking multiplicativity).
    #[error("character table mod {q} rejected: {reason}")]
    CharacterInvariant { q: u64, reason: String },

    /// Two coefficient sequences were combined but are defined up to
    /// different limits.
    #[error("sequence limits differ: {left} vs {right}")]
    MismatchedLimits { left: u64, right: u64 },

    /// An evaluation point lies outside the region the analytic engine
    /// declares as supported. We refuse rather than silently degrade.
    #[error("outside supported region: {0}")]
    Region(String),

    /// An evaluation point is within the guard distance of a pole.
    #[error("too close to a pole: {0}")]
    PoleProximity(String),

    /// The quadrature step does not resolve the integrand's oscillation.
    #[error("quadrature step {step} exceeds the oscillation bound {max_step}; use a smaller step")]
    StepTooLarge { step: f64, max_step: f64 },

    /// A regression or fit was requested over too few usable points.
    #[error("need at least {needed} usable points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
}

/// Coarse classification used by callers that map errors to exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// Bad configuration or arguments; the computation never started.
    Validation,
    /// The computation itself could not proceed (capacity, region, pole).
    Computation,
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::InvalidArgument(_)
            | Error::NotFundamental { .. }
            | Error::CharacterInvariant { .. }
            | Error::MismatchedLimits { .. }
            | Error::TooFewPoints { .. } => ErrorCategory::Validation,
            Error::Capacity { .. }
            | Error::Region(_)
            | Error::PoleProximity(_)
            | Error::StepTooLarge { .. } => ErrorCategory::Computation,
        }
    }
}

//! Crate-wide error type. Variant names follow the per-operation error
//! contracts of the public API.

use thiserror::Error;

/// Errors raised by validation and guard checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("atom mass at index {index} is not strictly positive")]
    NonPositiveMass { index: usize },
    #[error("atom masses sum to {sum:?}, expected 1 within 1e-12")]
    MassNotOne { sum: f64 },
    #[error("{n} atoms exceeds the guard of {max} for this operation")]
    TooManyAtoms { n: usize, max: usize },
    #[error("operands live on different probability spaces")]
    SpaceMismatch,
    #[error("exponent {p:?} is outside the supported range of this operation")]
    BadExponent { p: f64 },
    #[error("coordinate count {got} does not match dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("weight vector is invalid: {reason}")]
    BadWeights { reason: &'static str },
    #[error("the vector family is empty")]
    EmptyFamily,
    #[error("the vector family contains only zero vectors")]
    ZeroFamily,
    #[error("sign-vector enumeration in dimension {dim} exceeds the guard of {max}")]
    TooManyVertices { dim: usize, max: usize },
    #[error("operation requires the Hilbert/p=2 regime: {detail}")]
    UnsupportedRegime { detail: &'static str },
    #[error("atom index {index} out of range for {len} atoms")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("functional has dual norm {norm:?}, violating the unit-ball requirement")]
    DualNormViolation { norm: f64 },
    #[error("domination linear program is infeasible: a test vector is invisible to the sphere")]
    InfeasibleLp,
    #[error("operand descriptors are incompatible")]
    DescriptorMismatch,
    #[error("certificate test family does not cover the required scaled family")]
    FamilyNotCovered,
    #[error("{levels} levels exceeds the guard of {max}")]
    TooManyLevels { levels: usize, max: usize },
    #[error("at least {min} atoms required, got {n}")]
    TooFewAtoms { n: usize, min: usize },
    #[error("dimension {dim} exceeds the certification guard of {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("instance carries no increasing decomposition chain")]
    MissingChain,
    #[error("the functional set is not norming: certified radius lower bound is zero")]
    NotNorming,
    #[error("grid resolution must be strictly positive")]
    BadGrid,
    #[error("linear program solver failed: {detail}")]
    LpFailure { detail: &'static str },
}

impl Error {
    /// Stable machine-readable tag for reports and exit-code mapping.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonPositiveMass { .. } => "non-positive-mass",
            Error::MassNotOne { .. } => "mass-not-one",
            Error::TooManyAtoms { .. } => "too-many-atoms",
            Error::SpaceMismatch => "space-mismatch",
            Error::BadExponent { .. } => "bad-exponent",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::BadWeights { .. } => "bad-weights",
            Error::EmptyFamily => "empty-family",
            Error::ZeroFamily => "zero-family",
            Error::TooManyVertices { .. } => "too-many-vertices",
            Error::UnsupportedRegime { .. } => "unsupported-regime",
            Error::IndexOutOfRange { .. } => "index-out-of-range",
            Error::DualNormViolation { .. } => "dual-norm-violation",
            Error::InfeasibleLp => "infeasible-lp",
            Error::DescriptorMismatch => "descriptor-mismatch",
            Error::FamilyNotCovered => "family-not-covered",
            Error::TooManyLevels { .. } => "too-many-levels",
            Error::TooFewAtoms { .. } => "too-few-atoms",
            Error::DimensionTooLarge { .. } => "dimension-too-large",
            Error::MissingChain => "missing-chain",
            Error::NotNorming => "not-norming",
            Error::BadGrid => "bad-grid",
            Error::LpFailure { .. } => "lp-failure",
        }
    }
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

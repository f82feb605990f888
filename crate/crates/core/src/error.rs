//! Error type shared by every module of the crate.
//!
//! Contract violations that a caller can trigger with bad *data* surface as
//! `Error` values; violations of internal invariants panic instead.

use thiserror::Error;

/// Errors surfaced by the library's fallible operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Series inversion requires a unit constant term.
    #[error("non-unit series: constant term is zero")]
    NonUnitSeries,

    /// Binary operations on the truncated bivariate ring require equal (m, n).
    #[error("ring mismatch: ({0},{1}) vs ({2},{3})")]
    RingMismatch(usize, usize, usize, usize),

    /// A coefficient index lies outside the ring's truncation range.
    #[error("index error: {0}")]
    IndexError(String),

    /// A numeric argument violates the operation's stated range.
    #[error("range error: {0}")]
    RangeError(String),

    /// Descriptor construction needs ambient dimension at least 3.
    #[error("dimension too small: d={0} (need d >= 3)")]
    DimensionTooSmall(usize),

    /// A rank-one module index outside {P^(m),…,P^(1), B, Q^(1),…,Q^(n)}.
    #[error("not in the MCM list: {0}")]
    NotInMcmList(String),

    /// The ℓ search hit its cap without achieving sign coverage.
    #[error("no ell <= {0} achieves coverage")]
    SearchExhausted(u64),

    /// Functional combination cannot make a target slot nonzero.
    #[error("target not reachable: {0}")]
    TargetNotReachable(String),

    /// The correction target must be homogeneous and nonzero.
    #[error("inhomogeneous target: {0}")]
    InhomogeneousTarget(String),

    /// The functional vanishes at a dimension whose sign is prescribed nonzero.
    #[error("functional cannot realize pattern: lambda_{0} = 0 but eps_{0} != 0")]
    FunctionalCannotRealize(usize),

    /// A sign pattern violating the admissibility constraints.
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    /// Polynomial fitting was handed fewer points than it needs.
    #[error("insufficient data: need at least {need} points, got {got}")]
    InsufficientData { need: usize, got: usize },

    /// The colength traversal exceeded its frontier cap.
    #[error("complement not finite within cap {0}")]
    ComplementCapExceeded(usize),

    /// Interior membership is undefined for degenerate generator sets.
    #[error("interior undefined: generators do not span the ambient space")]
    InteriorUndefined,
}

pub type Result<T> = std::result::Result<T, Error>;

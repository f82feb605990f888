//! Exact Riemann-Roch and Hilbert-Kunz calculus for Segre products of
//! projective spaces.
//!
//! Everything is computed over Q with arbitrary-precision rationals; no
//! floating point appears anywhere in the library. The main entry points:
//!
//! - [`todd`]: truncated Todd series, twisted Todd classes on products of
//!   projective spaces, and integer-shift polynomials with sign diagnostics.
//! - [`chow`]: graded classes indexed by dimension, the hyperplane
//!   substitution map onto a Segre product, and Frobenius-style rescaling.
//! - [`segre`]: Segre-product descriptors, maximal Cohen-Macaulay window
//!   checks, Todd data of rank-one modules, sign-coverage search, and the
//!   exact test-module weight solver.
//! - [`planner`]: symbolic construction of Hilbert-Kunz multiplicity
//!   certificates realizing a prescribed sign pattern.
//! - [`hkcount`]: brute-force Frobenius colength counts for monoid rings and
//!   polynomial fitting of the resulting tables.
//! - [`cone`]: a small numerical-class cone model for the quadric with exact
//!   membership, nef checks, and Frobenius stability.
//! - [`verify`]: the library's self-check battery, one result per criterion.

pub mod chow;
pub mod cone;
pub mod error;
pub mod exactalg;
pub mod hkcount;
pub(crate) mod linalg;
pub mod planner;
pub mod segre;
pub mod todd;
pub mod verify;

pub use error::{Error, Result};
pub use exactalg::{Rat, TruncatedSeries};

//! Exact-arithmetic classification of prime-order torsion in `GL_3` and
//! `PGL_3` over rings of quadratic integers, and the mod-ℓ Farrell–Tate
//! cohomology it determines.
//!
//! The crate is organised around the number-theoretic pipeline:
//!
//! * [`quadring`] — arithmetic in quadratic orders `O_{Q(√d)}`, residue rings
//!   mod 3, and fundamental units of real quadratic orders by continued
//!   fractions.
//! * [`classnum`] — class numbers of quadratic fields via reduced binary
//!   quadratic forms, and of the biquadratic fields `Q(√-m, √-3)` via the
//!   unit-index relation.
//! * [`cycloring`] — the relative cyclotomic extensions `O_K[ζ_ℓ]`, their
//!   Galois action, relative norms, and reduction mod `(ζ_ℓ - 1)`.
//! * [`units`] — unit groups of the quartic orders `O_K[ζ_3]`, the Hasse unit
//!   index, and unit-orbit decompositions of `O_K/(3)`.
//! * [`ideals`] — ideals of the quartic order as integer lattices in Hermite
//!   normal form, prime splitting, principality tests, and class groups with
//!   their Galois action.
//! * [`reiner`] — invariants classifying order-ℓ matrices up to conjugacy,
//!   explicit matrix constructions, brute-force conjugacy oracles, and the
//!   conjugacy-class counts λ and μ.
//! * [`cohomology`] — graded monomial models of the normalizer cohomology,
//!   invariant subalgebras, Hilbert–Poincaré series, and per-ring reports.
//!
//! All arithmetic is exact: arbitrary-precision integers and rationals
//! throughout, no floating point.

pub mod classnum;
pub mod cohomology;
pub mod cycloring;
pub mod ideals;
pub(crate) mod lattice;
pub mod quadring;
pub mod reiner;
pub mod units;

#[cfg(doctest)]
mod book;

/// Errors shared by all modules.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed input: non-squarefree `d`, zero ideal, bad matrix file, …
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The request falls outside the supported hypotheses (for instance
    /// `3 | m`, a non-PID base order, or an unsupported `(K, ℓ)` pair).
    #[error("unsupported case: {0}")]
    Unsupported(String),
    /// A configured resource cap (Minkowski bound, search height) was hit.
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    /// Text that should have been in the matrix exchange format was not.
    #[error("parse error: {0}")]
    Parse(String),
    /// An internal cross-check failed; indicates a bug, not bad input.
    #[error("internal consistency check failed: {0}")]
    Inconsistency(String),
}

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

pub use cohomology::{assemble_report, CohomologyReport, RationalSeries, ReportTarget};
pub use quadring::{QuadInt, QuadOrder};
pub use reiner::Mat3;

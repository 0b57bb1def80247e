//! Exact-arithmetic computations on toric varieties given by fans:
//! positivity of invariant divisors (nef, ample, globally generated, big),
//! intersection numbers with invariant curves, and sheaf cohomology of
//! equivariant reflexive sheaves, all over arbitrary-precision integers
//! and rationals.
//!
//! The crate is organized around the fan ([`fan::Fan`]): divisors live on a
//! fan, intersection numbers come from walls, positivity predicates from
//! wall degrees and support-function convexity, and cohomology from
//! degreewise Čech complexes.
//!
//! Linear algebra is generic over the scalar type (see [`scalar`]); the
//! domain layer instantiates it with the exact types [`Int`] and [`Rat`].

pub mod cohomology;
pub mod divisor;
pub mod fan;
pub mod geometry;
pub mod intersect;
pub mod linalg;
pub mod positivity;
pub mod scalar;

/// Exact integer used throughout the domain layer.
pub type Int = num_bigint::BigInt;
/// Exact rational used throughout the domain layer.
pub type Rat = num_rational::Ratio<Int>;

/// Shorthand for an integer lattice point (a vector in N or M).
pub type LatticeVector = Vec<Int>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed or inconsistent input data (bad lengths, out-of-range
    /// indices, unparseable values).
    #[error("input error: {0}")]
    Input(String),
    /// The candidate fan failed validation; one message per violation.
    #[error("invalid fan: {0:?}")]
    InvalidFan(Vec<String>),
    /// Rays do not span the ambient space. Quotient by the span first.
    #[error("degenerate fan: rays span a proper subspace of Q^{rank}; quotient by the span first")]
    DegenerateFan { rank: usize },
    #[error("fan is not complete: {0}")]
    NotComplete(String),
    #[error("fan is not smooth: {0}")]
    NotSmooth(String),
    #[error("divisor is not Cartier: no integral linear functional on cone {0:?}")]
    NotCartier(Vec<usize>),
    #[error("divisor is not Q-Cartier: inconsistent linear system on cone {0:?}")]
    NotQCartier(Vec<usize>),
    #[error("divisor is not nef: wall {0:?} has degree {1}")]
    NotNef(Vec<usize>, String),
    #[error("polytope is unbounded")]
    UnboundedPolytope,
    /// A mechanically checked theorem failed on concrete data. This is a
    /// bug canary: either the input violates a precondition that was not
    /// caught, or the engine is wrong.
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    /// An internal cross-check failed (e.g. a contribution outside the
    /// enumerated degree region).
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Convenience constructor for integer lattice vectors in tests and
/// examples.
pub fn ivec(coords: &[i64]) -> LatticeVector {
    coords.iter().map(|&c| Int::from(c)).collect()
}

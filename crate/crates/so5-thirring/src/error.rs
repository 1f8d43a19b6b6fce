//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by operator construction and verification routines.
#[derive(Debug, Error)]
pub enum So5Error {
    /// Two operators that must act on the same space have different dimensions.
    #[error("dimension mismatch: {left} vs {right} in {context}")]
    DimensionMismatch {
        left: usize,
        right: usize,
        context: String,
    },

    /// A flavor or site index fell outside the valid range.
    #[error("index out of range: {what} = {value}, valid range {lo}..={hi}")]
    IndexOutOfRange {
        what: &'static str,
        value: usize,
        lo: usize,
        hi: usize,
    },

    /// The requested full Fock space exceeds the configured dimension cap.
    #[error(
        "Fock space dimension {dim} exceeds the cap {cap}; \
         use sector-resolved bases for larger systems"
    )]
    SpaceTooLarge { dim: usize, cap: usize },

    /// A coupling or angle configuration violates one of its invariants.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A statistics-angle matrix fails the potential-difference constraint
    /// required for the gauge-phase closed forms.
    #[error(
        "theta matrix is not admissible: constraint \
         theta[{i}][{m}] - theta[{j}][{m}] = theta[{i}][{n}] - theta[{j}][{n}] (mod 2 pi) \
         violated by {deviation:.3e}"
    )]
    InadmissibleTheta {
        i: usize,
        j: usize,
        m: usize,
        n: usize,
        deviation: f64,
    },

    /// A wavefunction evaluation hit coincident positions of different
    /// flavors, where the exchange sign is undefined.
    #[error(
        "ambiguous exchange sign: flavors {flavor_a} and {flavor_b} share position {position}"
    )]
    AmbiguousSign {
        flavor_a: usize,
        flavor_b: usize,
        position: f64,
    },

    /// An operation that requires a Hermitian matrix received one that is not.
    #[error("matrix is not Hermitian: max |H - H^dagger| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, So5Error>;

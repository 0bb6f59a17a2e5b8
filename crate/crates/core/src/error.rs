use thiserror::Error;

/// Errors produced by the core algorithms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty matrix")]
    EmptyMatrix,
    #[error("invalid circulant support")]
    InvalidSupport,
    #[error("circulant is singular over GF(2)")]
    SingularCirculant,
    #[error("matrix is singular")]
    Singular,
    #[error("vector has no integer preimage")]
    NotInLattice,
    #[error("integer result does not fit in 64 bits")]
    Overflow,
    #[error("companion polynomial must have a nonzero constant term")]
    InvalidPolynomial,
    #[error("RDF search exhausted after {restarts} restarts")]
    SearchExhausted { restarts: usize },
    #[error("last circulant block is singular over GF(2)")]
    SingularBlock,
    #[error("coordinate {index} violates the shaping precondition")]
    ShapingOverflow { index: usize },
    #[error("vector is not a point of the lattice")]
    NotLatticePoint,
    #[error("decoding failed after {iterations} iterations")]
    DecodeFailure { iterations: usize },
    #[error("input too large for exhaustive evaluation")]
    TooLarge,
    #[error("permutation seed slice {index} is all-zero")]
    ZeroSeedSlice { index: usize },
    #[error("coordinate {index} is outside the constellation")]
    ConstellationViolation { index: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(&'static str),
    #[error("ciphertext was produced under different parameters")]
    DigestMismatch,
    #[error("no primitive polynomial of degree {0} in the table")]
    UnsupportedDegree(usize),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

//! Quantum-state machinery.
//!
//! The sparse path ([`TwoBranchState`], [`PurifiedJointState`]) has no size
//! limit and is what the schemes and experiments run on. The dense path
//! ([`DenseState`], [`DensityMatrix`]) is capped at a small number of qubits
//! and serves as an oracle for the sparse samplers, as the carrier for
//! one-way state generator outputs, and for the numeric lemma checks.

mod bits;
mod dense;
mod density;
mod joint;
pub mod random;
mod two_branch;

pub use bits::BitString;
pub use dense::{Circuit, DenseState, Gate, DEFAULT_DENSE_CAP};
pub use density::{
    check_distinguish_implies_map, check_gentle_measurement, trace_distance, DensityMatrix,
    DistinguishReport, GentleReport, Projector, DIM_SLACK, GENTLE_SLACK, VALIDITY_TOL,
};
pub use joint::{ABranch, BranchProb, CBranch, ExactProb, PurifiedJointState};
pub use two_branch::{decrypt_bit, TwoBranchState};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Measurement basis for a register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Computational,
    Hadamard,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QStateError {
    #[error("bit strings must have at least one bit")]
    EmptyBitString,
    #[error("bit-string length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid bit character {0:?}")]
    InvalidBitChar(char),
    #[error("value {value} does not fit in {len} bits")]
    IndexOutOfRange { value: u64, len: usize },
    #[error("expected {expected} bytes, got {got}")]
    ByteLength { expected: usize, got: usize },
    #[error("non-zero padding bits")]
    NonZeroPadding,
    #[error("two-branch state requires x0 != x1")]
    IdenticalBranches,
    #[error("{qubits} qubits exceeds the dense simulation cap of {cap}")]
    DenseCapExceeded { qubits: usize, cap: usize },
    #[error("amplitude vector length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("state norm {0} differs from 1")]
    NotNormalized(f64),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("not a valid density operator: {0}")]
    InvalidDensity(String),
    #[error("not a projector: {0}")]
    InvalidProjector(String),
    #[error("post-selection undefined: Tr(Pi rho) = {0}")]
    ZeroAcceptance(f64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("gate acts on qubit {qubit} of a {qubits}-qubit circuit")]
    GateOutOfRange { qubit: usize, qubits: usize },
    #[error("exact enumeration of 2^{bits} outcomes exceeds the limit of 2^{limit}")]
    EnumerationTooLarge { bits: usize, limit: usize },
    #[error("operation requires the sparse representation")]
    NotSparse,
}

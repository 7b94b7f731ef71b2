//! Pluggable primitives: one-way functions, public-key encryption,
//! commitments, one-way state generators and the semantic wrappers that hide
//! `x0 ^ x1` from the adversary.
//!
//! Each primitive has a cryptographic-strength instantiation and a toy one
//! small enough to brute-force.

mod commit;
pub mod encoding;
mod group;
mod owf;
mod owsg;
mod params;
mod pke;
mod wrapper;

pub use commit::{Commitment, HashCommitment, Opening};
pub use group::GroupParams;
pub use owf::{OwfParams, OwfSpec, ENUMERABLE_BITS, TOY_MAX_BITS};
pub use owsg::{OwsgParams, OwsgSpec, DEFAULT_OWSG_LAYERS};
pub use params::ParameterFile;
pub use pke::{ClassicalCiphertext, KeyPair, PkeSpec, PublicKey, SecretKey};
pub use wrapper::{AdversaryInput, QuantumPart, SemanticWrapper, Wrapped, WrappedSecret};

use thiserror::Error;

use crate::qstate::QStateError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PrimitiveError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("input has {got} bits, expected {expected}")]
    InputLength { expected: usize, got: usize },
    #[error("one-way function with n = {0} is not enumerable")]
    NotEnumerable(usize),
    #[error("key does not match scheme {0}")]
    KeyMismatch(&'static str),
    #[error("malformed encoding: {0}")]
    Encoding(String),
    #[error(transparent)]
    State(#[from] QStateError),
}

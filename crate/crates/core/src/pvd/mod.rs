//! Encryption with publicly-verifiable deletion.
//!
//! [`PvdScheme`] is the one-way-function variant: the verification key is the
//! pair of images `(F(x0), F(x1))`. [`OwsgPvdScheme`] replaces the images by
//! `t` copies each of the states `phi_{x0}`, `phi_{x1}`. Both share the
//! ciphertext format, decryption and deletion. [`compile`] runs the same
//! construction with an arbitrary [`SemanticWrapper`] in place of the
//! public-key encryption of `x0 ^ x1`.

mod scheme;
mod types;

pub(crate) use scheme::sample_pair;
pub use scheme::{compile, Compiled, OwsgPvdScheme, PvdScheme, Source};
pub use types::{DeletionCertificate, PvdCiphertext, PvdKeyPair, VerificationKey};

use thiserror::Error;

use crate::primitives::PrimitiveError;
use crate::qstate::QStateError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PvdError {
    #[error(transparent)]
    Primitive(#[from] PrimitiveError),
    #[error(transparent)]
    State(#[from] QStateError),
    #[error("verification key has no copies of phi_{0} left")]
    NoCopiesLeft(usize),
    #[error("verification key variant does not match the scheme")]
    VariantMismatch,
    #[error("quantum data cannot be serialized")]
    QuantumNotSerializable,
}

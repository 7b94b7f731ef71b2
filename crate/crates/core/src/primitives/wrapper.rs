use rand::Rng;

use super::{
    ClassicalCiphertext, Commitment, HashCommitment, Opening, PkeSpec, PrimitiveError, PublicKey,
};
use crate::qstate::{BitString, PurifiedJointState, TwoBranchState};

/// Anything that can stand in for the n-qubit quantum part handed to the adversary.
pub trait QuantumPart {
    fn num_qubits(&self) -> usize;
}

impl QuantumPart for TwoBranchState {
    fn num_qubits(&self) -> usize {
        TwoBranchState::num_qubits(self)
    }
}

impl QuantumPart for PurifiedJointState {
    fn num_qubits(&self) -> usize {
        self.num_a_qubits()
    }
}

/// The operation applied to `(z, aux0, aux1, quantum)` before the adversary
/// sees it. It must hide `z`; the auxiliary values and the quantum part are
/// passed through unchanged.
#[derive(Debug, Clone, PartialEq)]
pub enum SemanticWrapper {
    Pke {
        pke: PkeSpec,
        pk: PublicKey,
    },
    Commitment,
    /// Passes `z` in the clear. For tests where hiding is irrelevant.
    Identity,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WrappedSecret {
    Ciphertext(ClassicalCiphertext),
    Commitment(Commitment),
    Clear(BitString),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdversaryInput<V, Q> {
    pub secret: WrappedSecret,
    pub aux0: V,
    pub aux1: V,
    pub quantum: Q,
}

/// Output of [`SemanticWrapper::wrap`]: the adversary's view plus, for
/// commitments, the opening kept by the committer.
#[derive(Debug, Clone, PartialEq)]
pub struct Wrapped<V, Q> {
    pub input: AdversaryInput<V, Q>,
    pub opening: Option<Opening>,
}

impl SemanticWrapper {
    pub fn name(&self) -> &'static str {
        match self {
            SemanticWrapper::Pke { .. } => "pke",
            SemanticWrapper::Commitment => "commitment",
            SemanticWrapper::Identity => "identity",
        }
    }

    pub fn wrap<V, Q: QuantumPart, R: Rng + ?Sized>(
        &self,
        z: &BitString,
        aux0: V,
        aux1: V,
        quantum: Q,
        rng: &mut R,
    ) -> Result<Wrapped<V, Q>, PrimitiveError> {
        if z.len() != quantum.num_qubits() {
            return Err(PrimitiveError::InputLength {
                expected: quantum.num_qubits(),
                got: z.len(),
            });
        }
        let (secret, opening) = match self {
            SemanticWrapper::Pke { pke, pk } => {
                (WrappedSecret::Ciphertext(pke.encrypt(pk, z, rng)?), None)
            }
            SemanticWrapper::Commitment => {
                let (c, o) = HashCommitment.commit(z, rng);
                (WrappedSecret::Commitment(c), Some(o))
            }
            SemanticWrapper::Identity => (WrappedSecret::Clear(z.clone()), None),
        };
        Ok(Wrapped {
            input: AdversaryInput {
                secret,
                aux0,
                aux1,
                quantum,
            },
            opening,
        })
    }
}

use crate::primitives::encoding::{put_bits, put_blob, Reader};
use crate::primitives::{ClassicalCiphertext, PublicKey, SecretKey};
use crate::qstate::{BitString, DenseState, TwoBranchState};

use super::PvdError;

const TAG_VK_CLASSICAL: u8 = 0x10;
const TAG_CERT: u8 = 0x20;
const TAG_CT: u8 = 0x30;
#[cfg(feature = "introspection")]
const TAG_QUANTUM: u8 = 0x31;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PvdKeyPair {
    pub pk: PublicKey,
    pub sk: SecretKey,
}

impl PvdKeyPair {
    /// `blob(pk) || blob(sk)`
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        put_blob(&mut out, &self.pk.to_bytes());
        put_blob(&mut out, &self.sk.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, PvdError> {
        let mut r = Reader::new(bytes);
        let pk = PublicKey::from_bytes(r.blob()?)?;
        let sk = SecretKey::from_bytes(r.blob()?)?;
        r.finish()?;
        Ok(Self { pk, sk })
    }
}

/// Public verification key.
#[derive(Debug, Clone, PartialEq)]
pub enum VerificationKey {
    Classical {
        y0: BitString,
        y1: BitString,
    },
    /// Remaining copies of `phi_{x0}` and `phi_{x1}`. Each verification
    /// sub-check consumes one copy.
    Quantum {
        copies0: Vec<DenseState>,
        copies1: Vec<DenseState>,
    },
}

impl VerificationKey {
    pub fn copies_left(&self) -> Option<(usize, usize)> {
        match self {
            VerificationKey::Classical { .. } => None,
            VerificationKey::Quantum { copies0, copies1 } => Some((copies0.len(), copies1.len())),
        }
    }

    pub(crate) fn take_copy(&mut self, i: usize) -> Result<DenseState, PvdError> {
        match self {
            VerificationKey::Classical { .. } => Err(PvdError::VariantMismatch),
            VerificationKey::Quantum { copies0, copies1 } => {
                let copies = if i == 0 { copies0 } else { copies1 };
                copies.pop().ok_or(PvdError::NoCopiesLeft(i))
            }
        }
    }

    /// `0x10 || bits(y0) || bits(y1)`. Quantum keys are refused.
    pub fn to_bytes(&self) -> Result<Vec<u8>, PvdError> {
        match self {
            VerificationKey::Classical { y0, y1 } => {
                let mut out = vec![TAG_VK_CLASSICAL];
                put_bits(&mut out, y0);
                put_bits(&mut out, y1);
                Ok(out)
            }
            VerificationKey::Quantum { .. } => Err(PvdError::QuantumNotSerializable),
        }
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, PvdError> {
        let mut r = Reader::new(bytes);
        r.tag(&[TAG_VK_CLASSICAL])?;
        let (y0, y1) = (r.bits()?, r.bits()?);
        r.finish()?;
        Ok(VerificationKey::Classical { y0, y1 })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeletionCertificate {
    pub pi: BitString,
}

impl DeletionCertificate {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![TAG_CERT];
        put_bits(&mut out, &self.pi);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, PvdError> {
        let mut r = Reader::new(bytes);
        r.tag(&[TAG_CERT])?;
        let pi = r.bits()?;
        r.finish()?;
        Ok(Self { pi })
    }
}

/// A ciphertext: the classical encryption of `x0 ^ x1` and the two-branch
/// state carrying the plaintext bit in its phase.
///
/// Decryption and deletion take the ciphertext by value, so the quantum part
/// is measured at most once.
#[derive(Debug, PartialEq)]
pub struct PvdCiphertext {
    classical: ClassicalCiphertext,
    quantum: TwoBranchState,
}

impl PvdCiphertext {
    pub(crate) fn new(classical: ClassicalCiphertext, quantum: TwoBranchState) -> Self {
        Self { classical, quantum }
    }

    pub(crate) fn into_parts(self) -> (ClassicalCiphertext, TwoBranchState) {
        (self.classical, self.quantum)
    }

    pub fn classical_part(&self) -> &ClassicalCiphertext {
        &self.classical
    }

    pub fn num_qubits(&self) -> usize {
        self.quantum.num_qubits()
    }

    /// `0x30 || blob(classical part)`.
    pub fn classical_bytes(&self) -> Vec<u8> {
        let mut out = vec![TAG_CT];
        put_blob(&mut out, &self.classical.to_bytes());
        out
    }

    /// Serializes the quantum part as `(n, x0, x1, b)`. Only available with
    /// the `introspection` feature.
    pub fn quantum_bytes(&self) -> Result<Vec<u8>, PvdError> {
        #[cfg(feature = "introspection")]
        {
            let mut out = vec![TAG_QUANTUM];
            out.extend((self.quantum.num_qubits() as u32).to_be_bytes());
            put_bits(&mut out, self.quantum.x0());
            put_bits(&mut out, self.quantum.x1());
            out.push(self.quantum.phase() as u8);
            Ok(out)
        }
        #[cfg(not(feature = "introspection"))]
        Err(PvdError::QuantumNotSerializable)
    }

    #[cfg(feature = "introspection")]
    pub fn quantum_part(&self) -> &TwoBranchState {
        &self.quantum
    }

    /// Replaces the classical part, e.g. to model a corrupted ciphertext.
    #[cfg(feature = "introspection")]
    pub fn with_classical(self, classical: ClassicalCiphertext) -> Self {
        Self { classical, ..self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn classical_vk_round_trips() {
        let vk = VerificationKey::Classical {
            y0: bs("0101"),
            y1: bs("111000111"),
        };
        let bytes = vk.to_bytes().unwrap();
        assert_eq!(bytes[0], TAG_VK_CLASSICAL);
        assert_eq!(VerificationKey::from_bytes(&bytes).unwrap(), vk);
        assert!(VerificationKey::from_bytes(&bytes[..bytes.len() - 1]).is_err());
    }

    #[test]
    fn quantum_vk_refuses_serialization_and_runs_out() {
        let phi = DenseState::basis(1, 0).unwrap();
        let mut vk = VerificationKey::Quantum {
            copies0: vec![phi.clone()],
            copies1: vec![phi],
        };
        assert_eq!(vk.to_bytes(), Err(PvdError::QuantumNotSerializable));
        vk.take_copy(0).unwrap();
        assert_eq!(vk.take_copy(0), Err(PvdError::NoCopiesLeft(0)));
        assert_eq!(vk.copies_left(), Some((0, 1)));
    }

    #[test]
    fn certificate_round_trips() {
        let c = DeletionCertificate { pi: bs("10011") };
        assert_eq!(DeletionCertificate::from_bytes(&c.to_bytes()).unwrap(), c);
    }

    #[test]
    fn quantum_part_serializes_only_with_introspection() {
        let ct = PvdCiphertext::new(
            ClassicalCiphertext::Transparent { message: bs("11") },
            TwoBranchState::new(bs("10"), bs("01"), true).unwrap(),
        );
        let r = ct.quantum_bytes();
        if cfg!(feature = "introspection") {
            assert_eq!(
                r.unwrap(),
                vec![0x31, 0, 0, 0, 2, 0, 0, 0, 2, 0x40, 0, 0, 0, 2, 0x80, 1]
            );
        } else {
            assert_eq!(r, Err(PvdError::QuantumNotSerializable));
        }
    }
}

use rand::Rng;
use sha2::{Digest, Sha256};

use crate::qstate::BitString;

/// Hash commitment `SHA-256(domain || nonce || len || bits)` with a 256-bit
/// nonce. Hiding in the random-oracle sense and only computationally binding.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HashCommitment;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Commitment(pub [u8; 32]);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Opening {
    pub value: BitString,
    pub nonce: [u8; 32],
}

impl HashCommitment {
    fn digest(value: &BitString, nonce: &[u8; 32]) -> Commitment {
        let mut h = Sha256::new();
        h.update(b"pvd-sim/commit/v1");
        h.update(nonce);
        h.update((value.len() as u32).to_be_bytes());
        h.update(value.to_bytes());
        Commitment(h.finalize().into())
    }

    pub fn commit<R: Rng + ?Sized>(&self, value: &BitString, rng: &mut R) -> (Commitment, Opening) {
        let mut nonce = [0u8; 32];
        rng.fill(&mut nonce);
        (
            Self::digest(value, &nonce),
            Opening {
                value: value.clone(),
                nonce,
            },
        )
    }

    pub fn verify(&self, commitment: &Commitment, opening: &Opening) -> bool {
        Self::digest(&opening.value, &opening.nonce) == *commitment
    }
}

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::encoding::{put_bits, put_u64, Reader};
use super::owf::expand;
use super::{GroupParams, PrimitiveError};
use crate::qstate::BitString;

const TAG_TRANSPARENT: u8 = 0x00;
const TAG_GROUP: u8 = 0x01;

/// Underlying public-key encryption scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PkeSpec {
    /// Hashed ElGamal over a safe-prime subgroup.
    Group { params: GroupParams },
    /// Correctness-only stub: the ciphertext carries the message in the clear.
    Transparent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PublicKey {
    Group(u64),
    Transparent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecretKey {
    Group(u64),
    Transparent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeyPair {
    pub pk: PublicKey,
    pub sk: SecretKey,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassicalCiphertext {
    /// `(g^r, m XOR H(pk^r))`
    Group {
        ephemeral: u64,
        masked: BitString,
    },
    Transparent {
        message: BitString,
    },
}

fn mask(params: &GroupParams, shared: u64, bits: usize) -> BitString {
    expand(
        b"pvd-sim/hashed-elgamal/v1",
        &[&params.p.to_be_bytes(), &shared.to_be_bytes()],
        bits,
    )
}

impl PkeSpec {
    pub fn group(params: GroupParams) -> Result<Self, PrimitiveError> {
        params.validate()?;
        Ok(Self::Group { params })
    }

    pub fn name(&self) -> &'static str {
        match self {
            PkeSpec::Group { .. } => "group",
            PkeSpec::Transparent => "transparent",
        }
    }

    pub fn keygen<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<KeyPair, PrimitiveError> {
        match self {
            PkeSpec::Group { params } => {
                params.validate()?;
                let sk = rng.random_range(1..params.order());
                Ok(KeyPair {
                    pk: PublicKey::Group(params.pow(params.g, sk)),
                    sk: SecretKey::Group(sk),
                })
            }
            PkeSpec::Transparent => Ok(KeyPair {
                pk: PublicKey::Transparent,
                sk: SecretKey::Transparent,
            }),
        }
    }

    pub fn encrypt<R: Rng + ?Sized>(
        &self,
        pk: &PublicKey,
        message: &BitString,
        rng: &mut R,
    ) -> Result<ClassicalCiphertext, PrimitiveError> {
        match (self, pk) {
            (PkeSpec::Group { params }, PublicKey::Group(h)) => {
                let r = rng.random_range(1..params.order());
                let shared = params.pow(*h, r);
                let masked = message.xor(&mask(params, shared, message.len()))?;
                Ok(ClassicalCiphertext::Group {
                    ephemeral: params.pow(params.g, r),
                    masked,
                })
            }
            (PkeSpec::Transparent, PublicKey::Transparent) => {
                Ok(ClassicalCiphertext::Transparent {
                    message: message.clone(),
                })
            }
            _ => Err(PrimitiveError::KeyMismatch(self.name())),
        }
    }

    pub fn decrypt(
        &self,
        sk: &SecretKey,
        ct: &ClassicalCiphertext,
    ) -> Result<BitString, PrimitiveError> {
        match (self, sk, ct) {
            (
                PkeSpec::Group { params },
                SecretKey::Group(x),
                ClassicalCiphertext::Group { ephemeral, masked },
            ) => {
                let shared = params.pow(*ephemeral, *x);
                Ok(masked.xor(&mask(params, shared, masked.len()))?)
            }
            (
                PkeSpec::Transparent,
                SecretKey::Transparent,
                ClassicalCiphertext::Transparent { message },
            ) => Ok(message.clone()),
            _ => Err(PrimitiveError::KeyMismatch(self.name())),
        }
    }
}

impl PublicKey {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        match self {
            PublicKey::Group(h) => {
                out.push(TAG_GROUP);
                put_u64(&mut out, *h);
            }
            PublicKey::Transparent => out.push(TAG_TRANSPARENT),
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, PrimitiveError> {
        let mut r = Reader::new(bytes);
        let key = match r.tag(&[TAG_GROUP, TAG_TRANSPARENT])? {
            TAG_GROUP => PublicKey::Group(r.u64()?),
            _ => PublicKey::Transparent,
        };
        r.finish()?;
        Ok(key)
    }
}

impl SecretKey {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        match self {
            SecretKey::Group(x) => {
                out.push(TAG_GROUP);
                put_u64(&mut out, *x);
            }
            SecretKey::Transparent => out.push(TAG_TRANSPARENT),
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, PrimitiveError> {
        let mut r = Reader::new(bytes);
        let key = match r.tag(&[TAG_GROUP, TAG_TRANSPARENT])? {
            TAG_GROUP => SecretKey::Group(r.u64()?),
            _ => SecretKey::Transparent,
        };
        r.finish()?;
        Ok(key)
    }
}

impl ClassicalCiphertext {
    /// Group layout: `0x01 | u64 ephemeral | bits masked`.
    /// Transparent layout: `0x00 | bits message`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        match self {
            ClassicalCiphertext::Group { ephemeral, masked } => {
                out.push(TAG_GROUP);
                put_u64(&mut out, *ephemeral);
                put_bits(&mut out, masked);
            }
            ClassicalCiphertext::Transparent { message } => {
                out.push(TAG_TRANSPARENT);
                put_bits(&mut out, message);
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, PrimitiveError> {
        let mut r = Reader::new(bytes);
        let ct = match r.tag(&[TAG_GROUP, TAG_TRANSPARENT])? {
            TAG_GROUP => ClassicalCiphertext::Group {
                ephemeral: r.u64()?,
                masked: r.bits()?,
            },
            _ => ClassicalCiphertext::Transparent { message: r.bits()? },
        };
        r.finish()?;
        Ok(ct)
    }

    /// Format tag: `"group"` or `"transparent"`.
    pub fn format(&self) -> &'static str {
        match self {
            ClassicalCiphertext::Group { .. } => "group",
            ClassicalCiphertext::Transparent { .. } => "transparent",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn group() -> PkeSpec {
        PkeSpec::group(GroupParams::default()).unwrap()
    }

    #[test]
    fn group_correctness() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let pke = group();
        let keys = pke.keygen(&mut rng).unwrap();
        for i in 0..1000 {
            let m = BitString::random(1 + i % 97, &mut rng).unwrap();
            let ct = pke.encrypt(&keys.pk, &m, &mut rng).unwrap();
            assert_eq!(pke.decrypt(&keys.sk, &ct).unwrap(), m);
            assert_eq!(ClassicalCiphertext::from_bytes(&ct.to_bytes()).unwrap(), ct);
        }
    }

    #[test]
    fn group_encryption_is_randomized() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let pke = group();
        let keys = pke.keygen(&mut rng).unwrap();
        let m = BitString::random(64, &mut rng).unwrap();
        let a = pke.encrypt(&keys.pk, &m, &mut rng).unwrap();
        let b = pke.encrypt(&keys.pk, &m, &mut rng).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn ciphertext_length_follows_layout() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let pke = group();
        let keys = pke.keygen(&mut rng).unwrap();
        for len in [1usize, 7, 8, 9, 64, 100] {
            let m = BitString::random(len, &mut rng).unwrap();
            let ct = pke.encrypt(&keys.pk, &m, &mut rng).unwrap();
            // tag + 8-byte element + 4-byte length + packed bits
            assert_eq!(ct.to_bytes().len() * 8, 8 * (1 + 8 + 4 + len.div_ceil(8)));
        }
    }

    #[test]
    fn transparent_round_trip_and_tag() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let pke = PkeSpec::Transparent;
        let keys = pke.keygen(&mut rng).unwrap();
        let m: BitString = "1011".parse().unwrap();
        let ct = pke.encrypt(&keys.pk, &m, &mut rng).unwrap();
        assert_eq!(pke.decrypt(&keys.sk, &ct).unwrap(), m);
        assert_eq!(ct.to_bytes()[0], TAG_TRANSPARENT);
        assert_eq!(ct.format(), "transparent");
        let g = group();
        let gk = g.keygen(&mut rng).unwrap();
        assert_eq!(
            g.encrypt(&gk.pk, &m, &mut rng).unwrap().to_bytes()[0],
            TAG_GROUP
        );
    }

    #[test]
    fn mismatched_keys_are_rejected() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let m: BitString = "1".parse().unwrap();
        assert!(group()
            .encrypt(&PublicKey::Transparent, &m, &mut rng)
            .is_err());
        let ct = ClassicalCiphertext::Transparent { message: m };
        assert!(group().decrypt(&SecretKey::Group(3), &ct).is_err());
    }

    #[test]
    fn keys_round_trip() {
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let keys = group().keygen(&mut rng).unwrap();
        assert_eq!(PublicKey::from_bytes(&keys.pk.to_bytes()).unwrap(), keys.pk);
        assert_eq!(SecretKey::from_bytes(&keys.sk.to_bytes()).unwrap(), keys.sk);
        assert!(PublicKey::from_bytes(&[TAG_GROUP, 1, 2]).is_err());
    }
}

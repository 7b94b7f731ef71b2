use rand::Rng;

use super::{DeletionCertificate, PvdCiphertext, PvdError, PvdKeyPair, VerificationKey};
use crate::primitives::{
    Opening, OwfSpec, OwsgSpec, PkeSpec, PublicKey, SecretKey, SemanticWrapper, WrappedSecret,
};
use crate::qstate::{decrypt_bit, BitString, TwoBranchState};

/// Samples `x0 != x1` uniformly, redrawing `x1` on a collision.
pub(crate) fn sample_pair<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
) -> Result<(BitString, BitString), PvdError> {
    let x0 = BitString::random(n, rng)?;
    loop {
        let x1 = BitString::random(n, rng)?;
        if x1 != x0 {
            return Ok((x0, x1));
        }
    }
}

fn decrypt<R: Rng + ?Sized>(
    pke: &PkeSpec,
    sk: &SecretKey,
    ct: PvdCiphertext,
    rng: &mut R,
) -> Result<bool, PvdError> {
    let (classical, quantum) = ct.into_parts();
    let z = pke.decrypt(sk, &classical)?;
    let w = quantum.hadamard_measure(rng);
    Ok(decrypt_bit(&z, &w)?)
}

fn delete<R: Rng + ?Sized>(ct: PvdCiphertext, rng: &mut R) -> DeletionCertificate {
    let (_, quantum) = ct.into_parts();
    DeletionCertificate {
        pi: quantum.computational_measure(rng),
    }
}

/// Where the verification key comes from.
#[derive(Debug, Clone, Copy)]
pub enum Source<'a> {
    Owf(&'a OwfSpec),
    Owsg { owsg: &'a OwsgSpec, t: usize },
}

impl Source<'_> {
    fn input_bits(&self) -> usize {
        match self {
            Source::Owf(f) => f.input_bits(),
            Source::Owsg { owsg, .. } => owsg.key_bits(),
        }
    }

    fn verification_key(
        &self,
        x0: &BitString,
        x1: &BitString,
    ) -> Result<VerificationKey, PvdError> {
        Ok(match self {
            Source::Owf(f) => VerificationKey::Classical {
                y0: f.eval(x0)?,
                y1: f.eval(x1)?,
            },
            Source::Owsg { owsg, t } => {
                let (phi0, phi1) = (owsg.stategen(x0)?, owsg.stategen(x1)?);
                VerificationKey::Quantum {
                    copies0: vec![phi0; *t],
                    copies1: vec![phi1; *t],
                }
            }
        })
    }
}

/// Output of [`compile`] besides the verification key.
#[derive(Debug, PartialEq)]
pub struct Compiled {
    pub secret: WrappedSecret,
    /// Kept by the sender when the wrapper is a commitment.
    pub opening: Option<Opening>,
    pub quantum: TwoBranchState,
}

/// The generic construction: `vk` plus `wrapper(x0 ^ x1)` and the two-branch
/// state with phase `b`.
pub fn compile<R: Rng + ?Sized>(
    wrapper: &SemanticWrapper,
    source: Source<'_>,
    b: bool,
    rng: &mut R,
) -> Result<(VerificationKey, Compiled), PvdError> {
    let (x0, x1) = sample_pair(source.input_bits(), rng)?;
    let vk = source.verification_key(&x0, &x1)?;
    let z = x0.xor(&x1)?;
    let quantum = TwoBranchState::new(x0, x1, b)?;
    let wrapped = wrapper.wrap(&z, (), (), quantum, rng)?;
    let compiled = Compiled {
        secret: wrapped.input.secret,
        opening: wrapped.opening,
        quantum: wrapped.input.quantum,
    };
    Ok((vk, compiled))
}

fn encrypt_with<R: Rng + ?Sized>(
    pke: &PkeSpec,
    pk: &PublicKey,
    source: Source<'_>,
    b: bool,
    rng: &mut R,
) -> Result<(VerificationKey, PvdCiphertext), PvdError> {
    let wrapper = SemanticWrapper::Pke { pke: *pke, pk: *pk };
    let (vk, compiled) = compile(&wrapper, source, b, rng)?;
    let WrappedSecret::Ciphertext(ct) = compiled.secret else {
        unreachable!("the PKE wrapper yields ciphertexts");
    };
    Ok((vk, PvdCiphertext::new(ct, compiled.quantum)))
}

/// Public-key encryption with publicly-verifiable deletion from a one-way function.
#[derive(Debug, Clone)]
pub struct PvdScheme {
    pke: PkeSpec,
    owf: OwfSpec,
}

impl PvdScheme {
    pub fn new(pke: PkeSpec, owf: OwfSpec) -> Self {
        Self { pke, owf }
    }

    pub fn pke(&self) -> &PkeSpec {
        &self.pke
    }

    pub fn owf(&self) -> &OwfSpec {
        &self.owf
    }

    pub fn keygen<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<PvdKeyPair, PvdError> {
        let kp = self.pke.keygen(rng)?;
        Ok(PvdKeyPair {
            pk: kp.pk,
            sk: kp.sk,
        })
    }

    pub fn encrypt<R: Rng + ?Sized>(
        &self,
        pk: &PublicKey,
        b: bool,
        rng: &mut R,
    ) -> Result<(VerificationKey, PvdCiphertext), PvdError> {
        encrypt_with(&self.pke, pk, Source::Owf(&self.owf), b, rng)
    }

    /// One independent ciphertext per bit.
    pub fn encrypt_bits<R: Rng + ?Sized>(
        &self,
        pk: &PublicKey,
        bits: &[bool],
        rng: &mut R,
    ) -> Result<Vec<(VerificationKey, PvdCiphertext)>, PvdError> {
        bits.iter().map(|&b| self.encrypt(pk, b, rng)).collect()
    }

    pub fn decrypt<R: Rng + ?Sized>(
        &self,
        sk: &SecretKey,
        ct: PvdCiphertext,
        rng: &mut R,
    ) -> Result<bool, PvdError> {
        decrypt(&self.pke, sk, ct, rng)
    }

    pub fn delete<R: Rng + ?Sized>(&self, ct: PvdCiphertext, rng: &mut R) -> DeletionCertificate {
        delete(ct, rng)
    }

    /// Accepts iff `F(pi)` is one of the two published images.
    pub fn verify(
        &self,
        vk: &VerificationKey,
        cert: &DeletionCertificate,
    ) -> Result<bool, PvdError> {
        let VerificationKey::Classical { y0, y1 } = vk else {
            return Err(PvdError::VariantMismatch);
        };
        let y = self.owf.eval(&cert.pi)?;
        Ok(&y == y0 || &y == y1)
    }
}

/// Public-key encryption with publicly-verifiable deletion from a one-way
/// state generator; the verification key holds `t` copies of each state.
#[derive(Debug, Clone)]
pub struct OwsgPvdScheme {
    pke: PkeSpec,
    owsg: OwsgSpec,
    t: usize,
}

impl OwsgPvdScheme {
    pub fn new(pke: PkeSpec, owsg: OwsgSpec, t: usize) -> Result<Self, PvdError> {
        if t == 0 {
            return Err(crate::primitives::PrimitiveError::InvalidParameters(
                "copy count t must be >= 1".into(),
            )
            .into());
        }
        Ok(Self { pke, owsg, t })
    }

    pub fn pke(&self) -> &PkeSpec {
        &self.pke
    }

    pub fn owsg(&self) -> &OwsgSpec {
        &self.owsg
    }

    pub fn copies(&self) -> usize {
        self.t
    }

    pub fn keygen<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<PvdKeyPair, PvdError> {
        let kp = self.pke.keygen(rng)?;
        Ok(PvdKeyPair {
            pk: kp.pk,
            sk: kp.sk,
        })
    }

    pub fn encrypt<R: Rng + ?Sized>(
        &self,
        pk: &PublicKey,
        b: bool,
        rng: &mut R,
    ) -> Result<(VerificationKey, PvdCiphertext), PvdError> {
        encrypt_with(
            &self.pke,
            pk,
            Source::Owsg {
                owsg: &self.owsg,
                t: self.t,
            },
            b,
            rng,
        )
    }

    pub fn decrypt<R: Rng + ?Sized>(
        &self,
        sk: &SecretKey,
        ct: PvdCiphertext,
        rng: &mut R,
    ) -> Result<bool, PvdError> {
        decrypt(&self.pke, sk, ct, rng)
    }

    pub fn delete<R: Rng + ?Sized>(&self, ct: PvdCiphertext, rng: &mut R) -> DeletionCertificate {
        delete(ct, rng)
    }

    /// Runs `Ver(pi, phi_{x0})`, then `Ver(pi, phi_{x1})` if the first rejects.
    /// Each check consumes one copy from the key.
    pub fn verify<R: Rng + ?Sized>(
        &self,
        vk: &mut VerificationKey,
        cert: &DeletionCertificate,
        rng: &mut R,
    ) -> Result<bool, PvdError> {
        for i in 0..2 {
            let phi = vk.take_copy(i)?;
            if self.owsg.ver(&cert.pi, phi, rng)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

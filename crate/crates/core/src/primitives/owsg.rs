use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{PrimitiveError, TOY_MAX_BITS};
use crate::qstate::{BitString, Circuit, DenseState, DEFAULT_DENSE_CAP};

pub const DEFAULT_OWSG_LAYERS: usize = 3;

/// Acceptance probabilities this close to 0 or 1 are treated as exact.
const CERTAINTY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OwsgParams {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    #[serde(default = "default_layers")]
    pub layers: usize,
}

fn default_layers() -> usize {
    DEFAULT_OWSG_LAYERS
}

/// Toy one-way state generator.
///
/// `phi_k = U_{k'} |k_last 0...0>` where `U_{k'}` is a pseudorandom rotation
/// circuit keyed by the seed and all key bits but the last. Keys differing
/// only in their last bit therefore map to orthogonal states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OwsgSpec {
    params: OwsgParams,
}

impl OwsgSpec {
    pub fn toy(n: usize, m: usize, seed: u64) -> Result<Self, PrimitiveError> {
        Self::new(OwsgParams {
            n,
            m,
            seed,
            layers: DEFAULT_OWSG_LAYERS,
        })
    }

    pub fn new(params: OwsgParams) -> Result<Self, PrimitiveError> {
        if params.n == 0 || params.m == 0 || params.m > DEFAULT_DENSE_CAP || params.layers == 0 {
            return Err(PrimitiveError::InvalidParameters(format!(
                "OWSG needs n >= 1, 1 <= m <= {DEFAULT_DENSE_CAP}, layers >= 1 (got n={}, m={}, layers={})",
                params.n, params.m, params.layers
            )));
        }
        Ok(Self { params })
    }

    pub fn params(&self) -> OwsgParams {
        self.params
    }

    pub fn key_bits(&self) -> usize {
        self.params.n
    }

    pub fn state_qubits(&self) -> usize {
        self.params.m
    }

    pub fn is_enumerable(&self) -> bool {
        self.params.n <= TOY_MAX_BITS
    }

    pub fn keygen<R: Rng + ?Sized>(&self, rng: &mut R) -> BitString {
        BitString::random(self.params.n, rng).expect("n >= 1")
    }

    /// The key whose state is orthogonal to `phi_k` by construction.
    pub fn sibling(&self, key: &BitString) -> BitString {
        let mut s = key.clone();
        s.flip(key.len() - 1);
        s
    }

    fn circuit_for(&self, prefix: &[bool]) -> Circuit {
        let p = &self.params;
        let mut h = Sha256::new();
        h.update(b"pvd-sim/owsg/v1");
        for v in [
            p.seed,
            p.n as u64,
            p.m as u64,
            p.layers as u64,
            prefix.len() as u64,
        ] {
            h.update(v.to_be_bytes());
        }
        h.update(prefix.iter().map(|&b| b as u8).collect::<Vec<_>>());
        let mut rng = ChaCha20Rng::from_seed(h.finalize().into());
        Circuit::random(p.m, p.layers, &mut rng)
    }

    pub fn stategen(&self, key: &BitString) -> Result<DenseState, PrimitiveError> {
        if key.len() != self.params.n {
            return Err(PrimitiveError::InputLength {
                expected: self.params.n,
                got: key.len(),
            });
        }
        let bits = key.to_bits();
        let (prefix, last) = bits.split_at(bits.len() - 1);
        let m = self.params.m;
        let mut state = DenseState::basis(m, (last[0] as usize) << (m - 1))?;
        state.apply(&self.circuit_for(prefix))?;
        Ok(state)
    }

    /// Probability that `Ver(key, phi)` accepts: `|<phi_key|phi>|^2`.
    pub fn acceptance_probability(
        &self,
        key: &BitString,
        phi: &DenseState,
    ) -> Result<f64, PrimitiveError> {
        let p = self.stategen(key)?.fidelity(phi)?;
        Ok(if p > 1.0 - CERTAINTY_TOL {
            1.0
        } else if p < CERTAINTY_TOL {
            0.0
        } else {
            p
        })
    }

    /// Projective test `{|phi_key><phi_key|, I - |phi_key><phi_key|}`; consumes the copy.
    pub fn ver<R: Rng + ?Sized>(
        &self,
        key: &BitString,
        phi: DenseState,
        rng: &mut R,
    ) -> Result<bool, PrimitiveError> {
        let p = self.acceptance_probability(key, &phi)?;
        Ok(rng.random::<f64>() < p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn correct_key_always_accepts() {
        let g = OwsgSpec::toy(8, 3, 1).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for _ in 0..200 {
            let k = g.keygen(&mut rng);
            let phi = g.stategen(&k).unwrap();
            assert_eq!(g.acceptance_probability(&k, &phi).unwrap(), 1.0);
            assert!(g.ver(&k, phi, &mut rng).unwrap());
        }
    }

    #[test]
    fn sibling_key_always_rejects() {
        let g = OwsgSpec::toy(6, 4, 5).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..100 {
            let k = g.keygen(&mut rng);
            let phi = g.stategen(&k).unwrap();
            assert_eq!(g.acceptance_probability(&g.sibling(&k), &phi).unwrap(), 0.0);
            assert!(!g.ver(&g.sibling(&k), phi, &mut rng).unwrap());
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let k: BitString = "1011".parse().unwrap();
        let a = OwsgSpec::toy(4, 3, 9).unwrap().stategen(&k).unwrap();
        let b = OwsgSpec::toy(4, 3, 9).unwrap().stategen(&k).unwrap();
        let c = OwsgSpec::toy(4, 3, 10).unwrap().stategen(&k).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(OwsgSpec::toy(0, 3, 0).is_err());
        assert!(OwsgSpec::toy(4, 13, 0).is_err());
        let g = OwsgSpec::toy(4, 2, 0).unwrap();
        assert!(g.stategen(&"101".parse().unwrap()).is_err());
    }

    #[test]
    fn mismatched_acceptance_tracks_fidelity() {
        let g = OwsgSpec::toy(6, 2, 11).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let (k, k2) = (g.keygen(&mut rng), g.keygen(&mut rng));
        let phi = g.stategen(&k).unwrap();
        let expected = g.stategen(&k2).unwrap().fidelity(&phi).unwrap();
        let trials = 10_000;
        let hits = (0..trials)
            .filter(|_| g.ver(&k2, phi.clone(), &mut rng).unwrap())
            .count();
        assert!((hits as f64 / trials as f64 - expected).abs() < 0.02);
    }
}

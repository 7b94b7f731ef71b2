use num_complex::Complex64;
use rand::Rng;

use super::{BitString, DenseState, QStateError};

/// The state `(|x0> + (-1)^phase |x1>) / sqrt(2)` over two distinct n-bit strings.
///
/// Stored canonically with `x0 < x1`. Exchanging the branches only multiplies
/// the state by the global phase `(-1)^phase`, which is not stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwoBranchState {
    x0: BitString,
    x1: BitString,
    phase: bool,
}

impl TwoBranchState {
    pub fn new(x0: BitString, x1: BitString, phase: bool) -> Result<Self, QStateError> {
        if x0.len() != x1.len() {
            return Err(QStateError::LengthMismatch {
                left: x0.len(),
                right: x1.len(),
            });
        }
        if x0 == x1 {
            return Err(QStateError::IdenticalBranches);
        }
        let (x0, x1) = if x0 < x1 { (x0, x1) } else { (x1, x0) };
        Ok(Self { x0, x1, phase })
    }

    pub fn x0(&self) -> &BitString {
        &self.x0
    }

    pub fn x1(&self) -> &BitString {
        &self.x1
    }

    pub fn phase(&self) -> bool {
        self.phase
    }

    pub fn num_qubits(&self) -> usize {
        self.x0.len()
    }

    /// `x0 XOR x1`, never zero.
    pub fn difference(&self) -> BitString {
        self.x0.xor(&self.x1).expect("equal lengths")
    }

    /// Samples a Hadamard-basis outcome.
    ///
    /// The outcome distribution is uniform on `{w : (x0 ^ x1) . w = phase}`.
    /// A uniform proposal is mapped onto that coset by flipping one bit where
    /// the difference is set, which is a bijection between the two cosets.
    pub fn hadamard_measure<R: Rng + ?Sized>(&self, rng: &mut R) -> BitString {
        let delta = self.difference();
        let mut w = BitString::random(self.num_qubits(), rng).expect("n >= 1");
        if delta.dot_unchecked(&w) != self.phase {
            w.flip(delta.first_one().expect("x0 != x1"));
        }
        w
    }

    /// Samples a computational-basis outcome: `x0` or `x1` with probability 1/2 each.
    pub fn computational_measure<R: Rng + ?Sized>(&self, rng: &mut R) -> BitString {
        if rng.random::<bool>() {
            self.x1.clone()
        } else {
            self.x0.clone()
        }
    }

    /// Whether `w` has non-zero probability under a Hadamard-basis measurement.
    pub fn in_hadamard_support(&self, w: &BitString) -> Result<bool, QStateError> {
        Ok(self.difference().dot(w)? == self.phase)
    }

    /// Dense amplitude vector, subject to the given qubit cap.
    pub fn to_dense(&self, cap: usize) -> Result<DenseState, QStateError> {
        let n = self.num_qubits();
        if n > cap {
            return Err(QStateError::DenseCapExceeded { qubits: n, cap });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        let h = std::f64::consts::FRAC_1_SQRT_2;
        amps[self.x0.to_index().expect("n <= cap") as usize] = Complex64::new(h, 0.0);
        let sign = if self.phase { -h } else { h };
        amps[self.x1.to_index().expect("n <= cap") as usize] = Complex64::new(sign, 0.0);
        DenseState::new_with_cap(amps, cap)
    }
}

/// Recovers the plaintext bit as the GF(2) inner product `z . w`.
pub fn decrypt_bit(z: &BitString, w: &BitString) -> Result<bool, QStateError> {
    z.dot(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::DEFAULT_DENSE_CAP;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;
    use std::collections::BTreeMap;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    /// Hadamard-basis Born probabilities by direct summation over the dense vector.
    fn dense_hadamard_oracle(state: &DenseState) -> Vec<f64> {
        let n = state.num_qubits();
        let amps = state.amplitudes();
        let scale = (1u64 << n) as f64;
        (0..1usize << n)
            .map(|w| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (x, a) in amps.iter().enumerate() {
                    let sign = if (x & w).count_ones() % 2 == 1 {
                        -1.0
                    } else {
                        1.0
                    };
                    acc += a * sign;
                }
                acc.norm_sqr() / scale
            })
            .collect()
    }

    #[test]
    fn rejects_equal_branches_and_canonicalizes() {
        assert_eq!(
            TwoBranchState::new(bs("01"), bs("01"), false),
            Err(QStateError::IdenticalBranches)
        );
        let a = TwoBranchState::new(bs("110"), bs("001"), true).unwrap();
        let b = TwoBranchState::new(bs("001"), bs("110"), true).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.x0(), &bs("001"));
    }

    #[test]
    fn single_qubit_outcomes_are_deterministic() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let plus = TwoBranchState::new(bs("0"), bs("1"), false).unwrap();
        let minus = TwoBranchState::new(bs("0"), bs("1"), true).unwrap();
        for _ in 0..100 {
            assert_eq!(plus.hadamard_measure(&mut rng), bs("0"));
            assert_eq!(minus.hadamard_measure(&mut rng), bs("1"));
        }
    }

    #[test]
    fn three_qubit_support_matches_dense_oracle() {
        let state = TwoBranchState::new(bs("001"), bs("110"), true).unwrap();
        let probs = dense_hadamard_oracle(&state.to_dense(DEFAULT_DENSE_CAP).unwrap());
        let oracle_support: Vec<usize> = probs
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 1e-12)
            .map(|(w, _)| w)
            .collect();
        // odd-parity strings 001, 010, 100, 111, each with probability 1/4
        assert_eq!(oracle_support, vec![1, 2, 4, 7]);
        for &w in &oracle_support {
            assert!((probs[w] - 0.25).abs() < 1e-12);
        }

        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let mut counts = BTreeMap::new();
        for _ in 0..40_000 {
            let w = state.hadamard_measure(&mut rng).to_index().unwrap() as usize;
            *counts.entry(w).or_insert(0u32) += 1;
        }
        assert_eq!(counts.keys().copied().collect::<Vec<_>>(), oracle_support);
        for c in counts.values() {
            assert!((*c as f64 / 40_000.0 - 0.25).abs() < 0.02);
        }
    }

    #[test]
    fn decrypt_recovers_phase() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for phase in [false, true] {
            let state = TwoBranchState::new(bs("10110"), bs("00011"), phase).unwrap();
            let z = state.difference();
            for _ in 0..1000 {
                let w = state.hadamard_measure(&mut rng);
                assert_eq!(decrypt_bit(&z, &w).unwrap(), phase);
            }
        }
        assert!(decrypt_bit(&bs("01"), &bs("011")).is_err());
    }

    #[test]
    fn computational_measure_is_fair() {
        let state = TwoBranchState::new(bs("00"), bs("11"), false).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let trials = 100_000;
        let mut hits = 0;
        for _ in 0..trials {
            let x = state.computational_measure(&mut rng);
            assert!(x == bs("00") || x == bs("11"));
            if x == bs("00") {
                hits += 1;
            }
        }
        assert!((hits as f64 / trials as f64 - 0.5).abs() < 0.02);
    }

    #[test]
    fn identical_seeds_give_identical_transcripts() {
        let state = TwoBranchState::new(bs("0110"), bs("1011"), true).unwrap();
        let run = |seed| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            (0..50)
                .map(|_| {
                    (
                        state.hadamard_measure(&mut rng),
                        state.computational_measure(&mut rng),
                    )
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(run(5), run(5));
    }
}

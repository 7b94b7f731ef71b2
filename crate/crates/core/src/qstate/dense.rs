use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::QStateError;

/// Default qubit cap for dense simulation.
pub const DEFAULT_DENSE_CAP: usize = 12;

const NORM_TOL: f64 = 1e-12;

/// A pure state as a full amplitude vector. Qubit 0 is the most significant
/// bit of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl DenseState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, QStateError> {
        Self::new_with_cap(amplitudes, DEFAULT_DENSE_CAP)
    }

    pub fn new_with_cap(amplitudes: Vec<Complex64>, cap: usize) -> Result<Self, QStateError> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(QStateError::NotPowerOfTwo(len));
        }
        let qubits = len.trailing_zeros() as usize;
        if qubits > cap {
            return Err(QStateError::DenseCapExceeded { qubits, cap });
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(QStateError::NotNormalized(norm));
        }
        Ok(Self { qubits, amplitudes })
    }

    /// Normalizes `amplitudes` first; fails on the zero vector.
    pub fn normalized(mut amplitudes: Vec<Complex64>, cap: usize) -> Result<Self, QStateError> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(QStateError::NotNormalized(0.0));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::new_with_cap(amplitudes, cap)
    }

    pub fn basis(qubits: usize, index: usize) -> Result<Self, QStateError> {
        if qubits > DEFAULT_DENSE_CAP {
            return Err(QStateError::DenseCapExceeded {
                qubits,
                cap: DEFAULT_DENSE_CAP,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << qubits];
        if index >= amps.len() {
            return Err(QStateError::IndexOutOfRange {
                value: index as u64,
                len: qubits,
            });
        }
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            qubits,
            amplitudes: amps,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Self) -> Result<Complex64, QStateError> {
        if self.dim() != other.dim() {
            return Err(QStateError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Squared overlap `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Self) -> Result<f64, QStateError> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn sample_computational<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        sample_index(&self.probabilities(), rng)
    }

    pub fn apply(&mut self, circuit: &Circuit) -> Result<(), QStateError> {
        if circuit.qubits != self.qubits {
            return Err(QStateError::DimensionMismatch {
                left: circuit.qubits,
                right: self.qubits,
            });
        }
        circuit.apply_to(&mut self.amplitudes);
        Ok(())
    }

    /// `H^{(x)q} |self>`
    pub fn hadamard_all(&self) -> Self {
        let mut out = self.clone();
        let circuit = Circuit::hadamard_layer(self.qubits);
        circuit.apply_to(&mut out.amplitudes);
        out
    }
}

/// Samples an index from a probability vector that sums to (approximately) one.
pub(crate) fn sample_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let total: f64 = probs.iter().sum();
    let mut u = rng.random::<f64>() * total;
    let mut last = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        last = i;
        if u < p {
            return i;
        }
        u -= p;
    }
    last
}

/// Elementary gates for small dense circuits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "lowercase")]
pub enum Gate {
    H { q: usize },
    X { q: usize },
    Z { q: usize },
    Ry { q: usize, theta: f64 },
    Rz { q: usize, theta: f64 },
    Cnot { control: usize, target: usize },
    Cz { a: usize, b: usize },
}

impl Gate {
    fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H { q } | Gate::X { q } | Gate::Z { q } => vec![q],
            Gate::Ry { q, .. } | Gate::Rz { q, .. } => vec![q],
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Cz { a, b } => vec![a, b],
        }
    }

    fn single_qubit_matrix(&self) -> Option<(usize, [[Complex64; 2]; 2])> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match *self {
            Gate::H { q } => Some((q, [[c(h, 0.), c(h, 0.)], [c(h, 0.), c(-h, 0.)]])),
            Gate::X { q } => Some((q, [[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]])),
            Gate::Z { q } => Some((q, [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]])),
            Gate::Ry { q, theta } => {
                let (s, co) = (theta / 2.0).sin_cos();
                Some((q, [[c(co, 0.), c(-s, 0.)], [c(s, 0.), c(co, 0.)]]))
            }
            Gate::Rz { q, theta } => {
                let e = Complex64::from_polar(1.0, theta / 2.0);
                Some((q, [[e.conj(), c(0., 0.)], [c(0., 0.), e]]))
            }
            _ => None,
        }
    }
}

/// A gate sequence on a fixed number of qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(qubits: usize) -> Self {
        Self {
            qubits,
            gates: Vec::new(),
        }
    }

    pub fn hadamard_layer(qubits: usize) -> Self {
        Self {
            qubits,
            gates: (0..qubits).map(|q| Gate::H { q }).collect(),
        }
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self, QStateError> {
        let qs = gate.qubits();
        if let Some(&qubit) = qs.iter().find(|&&q| q >= self.qubits) {
            return Err(QStateError::GateOutOfRange {
                qubit,
                qubits: self.qubits,
            });
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(QStateError::Precondition(
                "two-qubit gate on a single qubit".into(),
            ));
        }
        self.gates.push(gate);
        Ok(self)
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Layers of random `Ry`/`Rz` rotations followed by a CNOT ladder.
    pub fn random<R: Rng + ?Sized>(qubits: usize, layers: usize, rng: &mut R) -> Self {
        let mut c = Self::new(qubits);
        let tau = std::f64::consts::TAU;
        for _ in 0..layers {
            for q in 0..qubits {
                c.gates.push(Gate::Ry {
                    q,
                    theta: rng.random::<f64>() * tau,
                });
                c.gates.push(Gate::Rz {
                    q,
                    theta: rng.random::<f64>() * tau,
                });
            }
            for q in 1..qubits {
                c.gates.push(Gate::Cnot {
                    control: q - 1,
                    target: q,
                });
            }
        }
        c
    }

    pub(crate) fn apply_to(&self, amps: &mut [Complex64]) {
        debug_assert_eq!(amps.len(), 1 << self.qubits);
        for gate in &self.gates {
            if let Some((q, m)) = gate.single_qubit_matrix() {
                let mask = 1usize << (self.qubits - 1 - q);
                for i in 0..amps.len() {
                    if i & mask == 0 {
                        let (a0, a1) = (amps[i], amps[i | mask]);
                        amps[i] = m[0][0] * a0 + m[0][1] * a1;
                        amps[i | mask] = m[1][0] * a0 + m[1][1] * a1;
                    }
                }
                continue;
            }
            match *gate {
                Gate::Cnot { control, target } => {
                    let cm = 1usize << (self.qubits - 1 - control);
                    let tm = 1usize << (self.qubits - 1 - target);
                    for i in 0..amps.len() {
                        if i & cm != 0 && i & tm == 0 {
                            amps.swap(i, i | tm);
                        }
                    }
                }
                Gate::Cz { a, b } => {
                    let am = 1usize << (self.qubits - 1 - a);
                    let bm = 1usize << (self.qubits - 1 - b);
                    for (i, amp) in amps.iter_mut().enumerate() {
                        if i & am != 0 && i & bm != 0 {
                            *amp = -*amp;
                        }
                    }
                }
                _ => unreachable!("single-qubit gates handled above"),
            }
        }
    }
}

//! The challenger/adversary state with the purifying register C.
//!
//! The joint state is kept as `|+>_C (x) a_plus + |->_C (x) a_minus`, i.e. in
//! the Hadamard basis of C. Freshly purified, `a_plus = |x0>` and
//! `a_minus = |x1>` (up to normalization). Every operation the experiments
//! need (measuring C in either basis, measuring A in either basis, running a
//! dense circuit on A plus workspace) maps this form to itself.
//!
//! While no circuit has acted, amplitudes are integers sharing one implicit
//! positive normalization, so every branch probability is an exact rational.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use super::dense::sample_index;
use super::{Basis, BitString, Circuit, DenseState, DensityMatrix, QStateError};

pub type ExactProb = Ratio<i128>;

/// Probability of a measurement branch: exact for the integer representation,
/// floating point once a dense circuit has acted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BranchProb {
    Exact(ExactProb),
    Approx(f64),
}

impl BranchProb {
    pub fn to_f64(&self) -> f64 {
        match self {
            BranchProb::Exact(r) => r.to_f64().expect("finite"),
            BranchProb::Approx(p) => *p,
        }
    }

    pub fn exact(&self) -> Option<ExactProb> {
        match self {
            BranchProb::Exact(r) => Some(*r),
            BranchProb::Approx(_) => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CBranch {
    pub outcome: bool,
    pub prob: BranchProb,
    pub state: PurifiedJointState,
}

#[derive(Debug, Clone)]
pub struct ABranch {
    pub outcome: BitString,
    pub prob: BranchProb,
    pub state: PurifiedJointState,
}

type SparseVec = BTreeMap<BitString, i64>;

#[derive(Debug, Clone, PartialEq)]
enum Register {
    Sparse {
        plus: SparseVec,
        minus: SparseVec,
    },
    Dense {
        plus: Vec<Complex64>,
        minus: Vec<Complex64>,
        a_qubits: usize,
        workspace: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PurifiedJointState {
    x0: BitString,
    x1: BitString,
    register: Register,
}

fn norm_sq(v: &SparseVec) -> i128 {
    v.values().map(|&a| (a as i128) * (a as i128)).sum()
}

fn dense_norm_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

fn combine(plus: &SparseVec, minus: &SparseVec, sign: i64) -> SparseVec {
    let mut out = plus.clone();
    for (k, &v) in minus {
        *out.entry(k.clone()).or_insert(0) += sign * v;
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Divides both branches by the gcd of all amplitudes.
fn reduce(plus: &mut SparseVec, minus: &mut SparseVec) {
    let g = plus
        .values()
        .chain(minus.values())
        .fold(0i64, |g, &v| g.gcd(&v));
    if g > 1 {
        plus.values_mut()
            .chain(minus.values_mut())
            .for_each(|v| *v /= g);
    }
}

fn sparse_state(
    x0: &BitString,
    x1: &BitString,
    mut plus: SparseVec,
    mut minus: SparseVec,
) -> PurifiedJointState {
    reduce(&mut plus, &mut minus);
    PurifiedJointState {
        x0: x0.clone(),
        x1: x1.clone(),
        register: Register::Sparse { plus, minus },
    }
}

fn hadamard_sum(v: &SparseVec, w: &BitString) -> i64 {
    v.iter()
        .map(|(x, &a)| if x.dot_unchecked(w) { -a } else { a })
        .sum()
}

impl PurifiedJointState {
    /// `(|+>_C |x0>_A + |->_C |x1>_A) / sqrt(2)`.
    pub fn purify(x0: BitString, x1: BitString) -> Result<Self, QStateError> {
        if x0.len() != x1.len() {
            return Err(QStateError::LengthMismatch {
                left: x0.len(),
                right: x1.len(),
            });
        }
        if x0 == x1 {
            return Err(QStateError::IdenticalBranches);
        }
        let plus = SparseVec::from([(x0.clone(), 1)]);
        let minus = SparseVec::from([(x1.clone(), 1)]);
        Ok(Self {
            x0,
            x1,
            register: Register::Sparse { plus, minus },
        })
    }

    /// The purified state after C has been measured computationally with
    /// result `phase`: `|phase>_C (x) (|x0> + (-1)^phase |x1>) / sqrt(2)`.
    pub fn with_phase(x0: BitString, x1: BitString, phase: bool) -> Result<Self, QStateError> {
        let fresh = Self::purify(x0, x1)?;
        let branch = fresh
            .c_branches(Basis::Computational)
            .into_iter()
            .find(|b| b.outcome == phase)
            .expect("both outcomes have probability 1/2");
        Ok(branch.state)
    }

    pub fn x0(&self) -> &BitString {
        &self.x0
    }

    pub fn x1(&self) -> &BitString {
        &self.x1
    }

    pub fn num_a_qubits(&self) -> usize {
        self.x0.len()
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.register, Register::Dense { .. })
    }

    /// Qubits of the A register plus any workspace attached by a circuit.
    pub fn num_adversary_qubits(&self) -> usize {
        match &self.register {
            Register::Sparse { .. } => self.x0.len(),
            Register::Dense {
                a_qubits,
                workspace,
                ..
            } => a_qubits + workspace,
        }
    }

    /// All branches of a measurement of C, omitting zero-probability outcomes.
    /// Outcome `false` is `|0>` (computational) or `|+>` (Hadamard).
    pub fn c_branches(&self, basis: Basis) -> Vec<CBranch> {
        let mut out = Vec::with_capacity(2);
        match (&self.register, basis) {
            (Register::Sparse { plus, minus }, Basis::Hadamard) => {
                let total = norm_sq(plus) + norm_sq(minus);
                for (outcome, v) in [(false, plus), (true, minus)] {
                    let w = norm_sq(v);
                    if w == 0 {
                        continue;
                    }
                    let (p, m) = if outcome {
                        (SparseVec::new(), v.clone())
                    } else {
                        (v.clone(), SparseVec::new())
                    };
                    out.push(CBranch {
                        outcome,
                        prob: BranchProb::Exact(Ratio::new(w, total)),
                        state: sparse_state(&self.x0, &self.x1, p, m),
                    });
                }
            }
            (Register::Sparse { plus, minus }, Basis::Computational) => {
                let total = norm_sq(plus) + norm_sq(minus);
                for outcome in [false, true] {
                    let sign = if outcome { -1 } else { 1 };
                    let beta = combine(plus, minus, sign);
                    let w = norm_sq(&beta);
                    if w == 0 {
                        continue;
                    }
                    let signed: SparseVec =
                        beta.iter().map(|(k, &v)| (k.clone(), sign * v)).collect();
                    out.push(CBranch {
                        outcome,
                        prob: BranchProb::Exact(Ratio::new(w, 2 * total)),
                        state: sparse_state(&self.x0, &self.x1, beta, signed),
                    });
                }
            }
            (
                Register::Dense {
                    plus,
                    minus,
                    a_qubits,
                    workspace,
                },
                _,
            ) => {
                let zero = Complex64::new(0.0, 0.0);
                for outcome in [false, true] {
                    let (p, m): (Vec<Complex64>, Vec<Complex64>) = match basis {
                        Basis::Hadamard if !outcome => (plus.clone(), vec![zero; minus.len()]),
                        Basis::Hadamard => (vec![zero; plus.len()], minus.clone()),
                        Basis::Computational => {
                            let sign = if outcome { -1.0 } else { 1.0 };
                            let beta: Vec<Complex64> = plus
                                .iter()
                                .zip(minus)
                                .map(|(a, b)| (a + b * sign) * 0.5)
                                .collect();
                            let signed = beta.iter().map(|a| a * sign).collect();
                            (beta, signed)
                        }
                    };
                    let w = dense_norm_sq(&p) + dense_norm_sq(&m);
                    if w <= 0.0 {
                        continue;
                    }
                    let s = w.sqrt();
                    out.push(CBranch {
                        outcome,
                        prob: BranchProb::Approx(w),
                        state: Self {
                            x0: self.x0.clone(),
                            x1: self.x1.clone(),
                            register: Register::Dense {
                                plus: p.into_iter().map(|a| a / s).collect(),
                                minus: m.into_iter().map(|a| a / s).collect(),
                                a_qubits: *a_qubits,
                                workspace: *workspace,
                            },
                        },
                    });
                }
            }
        }
        out
    }

    /// Outcome probabilities of measuring C (index 0 is `|0>` or `|+>`).
    pub fn c_probabilities(&self, basis: Basis) -> [f64; 2] {
        let mut p = [0.0; 2];
        for b in self.c_branches(basis) {
            p[b.outcome as usize] = b.prob.to_f64();
        }
        p
    }

    pub fn c_measure<R: Rng + ?Sized>(&self, basis: Basis, rng: &mut R) -> (bool, Self) {
        let mut branches = self.c_branches(basis);
        let probs: Vec<f64> = branches.iter().map(|b| b.prob.to_f64()).collect();
        let b = branches.swap_remove(sample_index(&probs, rng));
        (b.outcome, b.state)
    }

    /// All branches of measuring the adversary's registers.
    ///
    /// In the sparse representation this measures A; a Hadamard-basis
    /// measurement enumerates all `2^n` outcomes and is refused beyond
    /// `2^enum_limit`. In the dense representation it measures A and the
    /// workspace together, so outcomes have `a_qubits + workspace` bits.
    pub fn a_branches(&self, basis: Basis, enum_limit: usize) -> Result<Vec<ABranch>, QStateError> {
        match &self.register {
            Register::Sparse { plus, minus } => {
                let total = norm_sq(plus) + norm_sq(minus);
                let mut out = Vec::new();
                match basis {
                    Basis::Computational => {
                        let keys: std::collections::BTreeSet<&BitString> =
                            plus.keys().chain(minus.keys()).collect();
                        for a in keys {
                            let (p, m) = (
                                plus.get(a).copied().unwrap_or(0),
                                minus.get(a).copied().unwrap_or(0),
                            );
                            let w = (p as i128).pow(2) + (m as i128).pow(2);
                            out.push(self.sparse_a_branch(a.clone(), p, m, Ratio::new(w, total)));
                        }
                    }
                    Basis::Hadamard => {
                        let n = self.x0.len();
                        if n > enum_limit {
                            return Err(QStateError::EnumerationTooLarge {
                                bits: n,
                                limit: enum_limit,
                            });
                        }
                        let scale = (1i128 << n) * total;
                        for idx in 0..1u64 << n {
                            let w = BitString::from_index(idx, n)?;
                            let (p, m) = (hadamard_sum(plus, &w), hadamard_sum(minus, &w));
                            let weight = (p as i128).pow(2) + (m as i128).pow(2);
                            if weight != 0 {
                                out.push(self.sparse_a_branch(w, p, m, Ratio::new(weight, scale)));
                            }
                        }
                    }
                }
                Ok(out)
            }
            Register::Dense {
                a_qubits,
                workspace,
                ..
            } => {
                let (plus, minus) = self.dense_in_basis(basis);
                let total_qubits = a_qubits + workspace;
                if total_qubits > enum_limit {
                    return Err(QStateError::EnumerationTooLarge {
                        bits: total_qubits,
                        limit: enum_limit,
                    });
                }
                let mut out = Vec::new();
                for i in 0..plus.len() {
                    let w = plus[i].norm_sqr() + minus[i].norm_sqr();
                    if w > 0.0 {
                        out.push(self.dense_a_branch(i, &plus, &minus, w)?);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Samples a measurement of the adversary's registers (see [`Self::a_branches`]).
    /// The sparse Hadamard case uses rejection sampling and needs no enumeration.
    pub fn a_measure<R: Rng + ?Sized>(
        &self,
        basis: Basis,
        rng: &mut R,
    ) -> Result<(BitString, Self), QStateError> {
        match (&self.register, basis) {
            (Register::Sparse { plus, minus }, Basis::Hadamard) => {
                let n = self.x0.len();
                let l1 = |v: &SparseVec| v.values().map(|a| a.unsigned_abs() as f64).sum::<f64>();
                let bound = l1(plus).powi(2) + l1(minus).powi(2);
                loop {
                    let w = BitString::random(n, rng)?;
                    let (p, m) = (hadamard_sum(plus, &w), hadamard_sum(minus, &w));
                    let weight = (p as f64).powi(2) + (m as f64).powi(2);
                    if rng.random::<f64>() * bound < weight {
                        let state = self.sparse_a_branch(w.clone(), p, m, Ratio::zero()).state;
                        return Ok((w, state));
                    }
                }
            }
            (Register::Sparse { .. }, Basis::Computational) => {
                let mut branches = self.a_branches(basis, 0)?;
                let probs: Vec<f64> = branches.iter().map(|b| b.prob.to_f64()).collect();
                let b = branches.swap_remove(sample_index(&probs, rng));
                Ok((b.outcome, b.state))
            }
            (Register::Dense { .. }, _) => {
                let (plus, minus) = self.dense_in_basis(basis);
                let probs: Vec<f64> = plus
                    .iter()
                    .zip(&minus)
                    .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
                    .collect();
                let i = sample_index(&probs, rng);
                let b = self.dense_a_branch(i, &plus, &minus, probs[i])?;
                Ok((b.outcome, b.state))
            }
        }
    }

    fn sparse_a_branch(&self, outcome: BitString, p: i64, m: i64, prob: ExactProb) -> ABranch {
        let mut plus = SparseVec::new();
        let mut minus = SparseVec::new();
        if p != 0 {
            plus.insert(outcome.clone(), p);
        }
        if m != 0 {
            minus.insert(outcome.clone(), m);
        }
        ABranch {
            outcome,
            prob: BranchProb::Exact(prob),
            state: sparse_state(&self.x0, &self.x1, plus, minus),
        }
    }

    fn dense_in_basis(&self, basis: Basis) -> (Vec<Complex64>, Vec<Complex64>) {
        let Register::Dense {
            plus,
            minus,
            a_qubits,
            workspace,
        } = &self.register
        else {
            unreachable!("dense register");
        };
        let (mut p, mut m) = (plus.clone(), minus.clone());
        if basis == Basis::Hadamard {
            let layer = Circuit::hadamard_layer(a_qubits + workspace);
            layer.apply_to(&mut p);
            layer.apply_to(&mut m);
        }
        (p, m)
    }

    fn dense_a_branch(
        &self,
        i: usize,
        plus: &[Complex64],
        minus: &[Complex64],
        w: f64,
    ) -> Result<ABranch, QStateError> {
        let Register::Dense {
            a_qubits,
            workspace,
            ..
        } = &self.register
        else {
            unreachable!("dense register");
        };
        let zero = Complex64::new(0.0, 0.0);
        let s = w.sqrt();
        let mut p = vec![zero; plus.len()];
        let mut m = vec![zero; minus.len()];
        p[i] = plus[i] / s;
        m[i] = minus[i] / s;
        Ok(ABranch {
            outcome: BitString::from_index(i as u64, a_qubits + workspace)?,
            prob: BranchProb::Approx(w),
            state: Self {
                x0: self.x0.clone(),
                x1: self.x1.clone(),
                register: Register::Dense {
                    plus: p,
                    minus: m,
                    a_qubits: *a_qubits,
                    workspace: *workspace,
                },
            },
        })
    }

    /// Runs `circuit` on A (x) W, with `workspace` fresh qubits in `|0>`
    /// appended after A. Subsequent circuits reuse the existing workspace.
    pub fn apply_circuit(
        &self,
        circuit: &Circuit,
        workspace: usize,
        cap: usize,
    ) -> Result<Self, QStateError> {
        let (mut plus, mut minus, a_qubits, workspace) = match &self.register {
            Register::Dense {
                plus,
                minus,
                a_qubits,
                workspace,
            } => (plus.clone(), minus.clone(), *a_qubits, *workspace),
            Register::Sparse { plus, minus } => {
                let a = self.x0.len();
                if a + workspace > cap {
                    return Err(QStateError::DenseCapExceeded {
                        qubits: a + workspace,
                        cap,
                    });
                }
                let total = (norm_sq(plus) + norm_sq(minus)) as f64;
                let s = total.sqrt();
                let embed = |v: &SparseVec| {
                    let mut out = vec![Complex64::new(0.0, 0.0); 1 << (a + workspace)];
                    for (x, &amp) in v {
                        let idx = (x.to_index().expect("n <= cap") as usize) << workspace;
                        out[idx] = Complex64::new(amp as f64 / s, 0.0);
                    }
                    out
                };
                (embed(plus), embed(minus), a, workspace)
            }
        };
        if circuit.num_qubits() != a_qubits + workspace {
            return Err(QStateError::DimensionMismatch {
                left: circuit.num_qubits(),
                right: a_qubits + workspace,
            });
        }
        circuit.apply_to(&mut plus);
        circuit.apply_to(&mut minus);
        Ok(Self {
            x0: self.x0.clone(),
            x1: self.x1.clone(),
            register: Register::Dense {
                plus,
                minus,
                a_qubits,
                workspace,
            },
        })
    }

    fn dense_branches(
        &self,
        cap: usize,
    ) -> Result<(Vec<Complex64>, Vec<Complex64>, usize), QStateError> {
        match &self.register {
            Register::Dense {
                plus,
                minus,
                a_qubits,
                workspace,
            } => Ok((plus.clone(), minus.clone(), a_qubits + workspace)),
            Register::Sparse { .. } => {
                let as_dense = self.apply_circuit(&Circuit::new(self.x0.len()), 0, cap)?;
                as_dense.dense_branches(cap)
            }
        }
    }

    /// The full state on C (x) A (x) W with C as the most significant qubit.
    pub fn to_dense(&self, cap: usize) -> Result<DenseState, QStateError> {
        let (plus, minus, q) = self.dense_branches(cap)?;
        if q + 1 > cap {
            return Err(QStateError::DenseCapExceeded { qubits: q + 1, cap });
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps: Vec<Complex64> = plus.iter().zip(&minus).map(|(a, b)| (a + b) * h).collect();
        amps.extend(plus.iter().zip(&minus).map(|(a, b)| (a - b) * h));
        DenseState::new_with_cap(amps, cap)
    }

    /// Reduced state of C in the computational basis.
    pub fn c_reduced_density(&self, cap: usize) -> Result<DensityMatrix, QStateError> {
        let (plus, minus, _) = self.dense_branches(cap)?;
        let ip = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
            a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
        };
        // rho in the (|+>, |->) basis: rho[h][h'] = <a_h'|a_h>
        let pm = DMatrix::from_row_slice(
            2,
            2,
            &[
                ip(&plus, &plus),
                ip(&minus, &plus),
                ip(&plus, &minus),
                ip(&minus, &minus),
            ],
        );
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let had = DMatrix::from_row_slice(2, 2, &[h, h, h, -h]).map(|x| Complex64::new(x, 0.0));
        let mut rho = &had * pm * &had;
        rho = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
        DensityMatrix::new(rho)
    }

    /// Reduced state of A (x) W: `|a_plus><a_plus| + |a_minus><a_minus|`.
    pub fn a_reduced_density(&self, cap: usize) -> Result<DensityMatrix, QStateError> {
        let (plus, minus, q) = self.dense_branches(cap)?;
        let dim = 1 << q;
        let vp = nalgebra::DVector::from_vec(plus);
        let vm = nalgebra::DVector::from_vec(minus);
        let mut rho = &vp * vp.adjoint() + &vm * vm.adjoint();
        rho = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
        debug_assert_eq!(rho.nrows(), dim);
        DensityMatrix::new(rho)
    }
}

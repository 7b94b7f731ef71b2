use rand::Rng;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Mode, Primitive, SchemeConfig};
use super::engine::{Chooser, Images};
use super::outcome::Transcript;
use super::HarnessError;
use crate::qstate::{Basis, BitString, Circuit, ExactProb, PurifiedJointState, DEFAULT_DENSE_CAP};
use crate::rng::{stream, Lane};

/// Final measurement the classical inverter applies to the untouched register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Retained {
    Computational,
    Hadamard,
    /// Keep nothing; the residual is empty.
    Discard,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CertificatePolicy {
    /// The smallest `x` whose image is neither `y0` nor `y1`.
    KnownInvalid,
    Fixed {
        value: BitString,
    },
    /// A uniformly random string.
    Guess,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CircuitSpec {
    /// `Circuit::random(n + workspace, layers)` drawn from `seed`.
    Random {
        layers: usize,
        seed: u64,
    },
    Gates {
        circuit: Circuit,
    },
}

/// A simulatable attack on the ciphertext's quantum part.
///
/// Every strategy outputs a certificate and a classical residual whose
/// length is fixed in advance by [`AdversaryStrategy::residual_bits`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AdversaryStrategy {
    /// Measures A computationally and outputs the result as both the
    /// certificate and the residual.
    HonestDeleter,
    /// Brute-forces a preimage of `y_target` without touching A, then measures
    /// A as declared.
    ClassicalInverter { target: u8, retained: Retained },
    /// Measures A in the Hadamard basis, keeps `w` and outputs a certificate
    /// chosen by `certificate`.
    HadamardRetainer { certificate: CertificatePolicy },
    /// Runs a circuit on A plus `workspace` fresh qubits and measures
    /// everything computationally: the first `n` bits are the certificate, the
    /// workspace bits are the residual.
    Circuit {
        circuit: CircuitSpec,
        workspace: usize,
    },
}

pub(crate) struct AdvOutput {
    pub cert: BitString,
    pub residual: Transcript,
    pub joint: PurifiedJointState,
}

impl AdversaryStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            AdversaryStrategy::HonestDeleter => "honest",
            AdversaryStrategy::ClassicalInverter { .. } => "inverter",
            AdversaryStrategy::HadamardRetainer { .. } => "retainer",
            AdversaryStrategy::Circuit { .. } => "circuit",
        }
    }

    /// Length of the residual transcript for `n`-bit ciphertexts.
    pub fn residual_bits(&self, n: usize) -> usize {
        match self {
            AdversaryStrategy::HonestDeleter | AdversaryStrategy::HadamardRetainer { .. } => n,
            AdversaryStrategy::ClassicalInverter {
                retained: Retained::Discard,
                ..
            } => 0,
            AdversaryStrategy::ClassicalInverter { .. } => n,
            AdversaryStrategy::Circuit { workspace, .. } => *workspace,
        }
    }

    pub(crate) fn validate(&self, cfg: &ExperimentConfig) -> Result<(), HarnessError> {
        let n = cfg.scheme.input_bits();
        match self {
            AdversaryStrategy::ClassicalInverter { target, .. } => {
                if *target > 1 {
                    return Err(HarnessError::InvalidConfig(
                        "inverter target must be 0 or 1".into(),
                    ));
                }
                if !matches!(cfg.scheme, SchemeConfig::Owf { .. }) {
                    return Err(HarnessError::Infeasible(
                        "the classical inverter needs a one-way function".into(),
                    ));
                }
            }
            AdversaryStrategy::HadamardRetainer {
                certificate: CertificatePolicy::Fixed { value },
            } => {
                if value.len() != n {
                    return Err(HarnessError::InvalidConfig(format!(
                        "fixed certificate has {} bits, expected {n}",
                        value.len()
                    )));
                }
            }
            AdversaryStrategy::HadamardRetainer {
                certificate: CertificatePolicy::KnownInvalid,
            } => {
                if !matches!(cfg.scheme, SchemeConfig::Owf { .. }) {
                    return Err(HarnessError::Infeasible(
                        "no certificate is known to be invalid for a state generator".into(),
                    ));
                }
            }
            AdversaryStrategy::Circuit { circuit, workspace } => {
                if cfg.mode == Mode::Exact {
                    return Err(HarnessError::Infeasible(
                        "circuit adversaries have floating-point branch weights; use empirical mode".into(),
                    ));
                }
                if n + workspace > DEFAULT_DENSE_CAP {
                    return Err(HarnessError::Infeasible(format!(
                        "{n} + {workspace} qubits exceeds the dense cap of {DEFAULT_DENSE_CAP}"
                    )));
                }
                if let CircuitSpec::Gates { circuit } = circuit {
                    if circuit.num_qubits() != n + workspace {
                        return Err(HarnessError::InvalidConfig(format!(
                            "circuit acts on {} qubits, expected {}",
                            circuit.num_qubits(),
                            n + workspace
                        )));
                    }
                }
            }
            _ => {}
        }
        if cfg.mode == Mode::Exact && self.measures_hadamard() && n > cfg.enum_limit {
            return Err(HarnessError::Infeasible(format!(
                "exact Hadamard enumeration over {n} qubits exceeds the limit of {}",
                cfg.enum_limit
            )));
        }
        Ok(())
    }

    fn measures_hadamard(&self) -> bool {
        matches!(
            self,
            AdversaryStrategy::HadamardRetainer { .. }
                | AdversaryStrategy::ClassicalInverter {
                    retained: Retained::Hadamard,
                    ..
                }
        )
    }

    /// The adversary's circuit, fixed for the whole experiment.
    pub(crate) fn prepare_circuit(&self, n: usize) -> Option<Circuit> {
        match self {
            AdversaryStrategy::Circuit {
                circuit: CircuitSpec::Random { layers, seed },
                workspace,
            } => Some(Circuit::random(
                n + workspace,
                *layers,
                &mut stream(*seed, Lane::Setup, 1),
            )),
            AdversaryStrategy::Circuit {
                circuit: CircuitSpec::Gates { circuit },
                ..
            } => Some(circuit.clone()),
            _ => None,
        }
    }

    pub(crate) fn act<R: Rng + ?Sized>(
        &self,
        primitive: &Primitive,
        images: &Images,
        circuit: Option<&Circuit>,
        joint: PurifiedJointState,
        chooser: &mut Chooser,
        coins: &mut R,
    ) -> Result<Vec<(ExactProb, AdvOutput)>, HarnessError> {
        let n = joint.num_a_qubits();
        match self {
            AdversaryStrategy::HonestDeleter => Ok(chooser
                .measure_a(&joint, Basis::Computational)?
                .into_iter()
                .map(|(p, x, joint)| {
                    (
                        p,
                        AdvOutput {
                            residual: Transcript::from(&x),
                            cert: x,
                            joint,
                        },
                    )
                })
                .collect()),
            AdversaryStrategy::ClassicalInverter { target, retained } => {
                let (Primitive::Owf(owf), Images::Classical { y0, y1 }) = (primitive, images)
                else {
                    return Err(HarnessError::Infeasible(
                        "the classical inverter needs a one-way function".into(),
                    ));
                };
                let y = if *target == 0 { y0 } else { y1 };
                let cert = owf.first_preimage(y)?.expect("y is an image");
                let basis = match retained {
                    Retained::Discard => {
                        return Ok(vec![(
                            ExactProb::from_integer(1),
                            AdvOutput {
                                cert,
                                residual: Transcript::empty(),
                                joint,
                            },
                        )])
                    }
                    Retained::Computational => Basis::Computational,
                    Retained::Hadamard => Basis::Hadamard,
                };
                Ok(chooser
                    .measure_a(&joint, basis)?
                    .into_iter()
                    .map(|(p, r, joint)| {
                        (
                            p,
                            AdvOutput {
                                cert: cert.clone(),
                                residual: Transcript::from(&r),
                                joint,
                            },
                        )
                    })
                    .collect())
            }
            AdversaryStrategy::HadamardRetainer { certificate } => {
                let cert = match certificate {
                    CertificatePolicy::Fixed { value } => value.clone(),
                    CertificatePolicy::Guess => BitString::random(n, coins)?,
                    CertificatePolicy::KnownInvalid => known_invalid(primitive, images, n)?,
                };
                Ok(chooser
                    .measure_a(&joint, Basis::Hadamard)?
                    .into_iter()
                    .map(|(p, w, joint)| {
                        (
                            p,
                            AdvOutput {
                                cert: cert.clone(),
                                residual: Transcript::from(&w),
                                joint,
                            },
                        )
                    })
                    .collect())
            }
            AdversaryStrategy::Circuit { workspace, .. } => {
                let circuit = circuit.expect("prepared circuit");
                let evolved = joint.apply_circuit(circuit, *workspace, DEFAULT_DENSE_CAP)?;
                let mut out = Vec::new();
                for (p, bits, joint) in chooser.measure_a(&evolved, Basis::Computational)? {
                    let cert = bits.slice(0, n)?;
                    let residual = if *workspace == 0 {
                        Transcript::empty()
                    } else {
                        Transcript::from(&bits.slice(n, n + workspace)?)
                    };
                    out.push((
                        p,
                        AdvOutput {
                            cert,
                            residual,
                            joint,
                        },
                    ));
                }
                Ok(out)
            }
        }
    }
}

fn known_invalid(
    primitive: &Primitive,
    images: &Images,
    n: usize,
) -> Result<BitString, HarnessError> {
    let (Primitive::Owf(owf), Images::Classical { y0, y1 }) = (primitive, images) else {
        return Err(HarnessError::Infeasible(
            "no certificate is known to be invalid for a state generator".into(),
        ));
    };
    let limit = if n >= 63 { u64::MAX } else { 1u64 << n };
    for idx in 0..limit {
        let x = BitString::from_index(idx, n)?;
        let y = owf.eval(&x)?;
        if &y != y0 && &y != y1 {
            return Ok(x);
        }
    }
    Err(HarnessError::Infeasible(
        "every input maps to a published image".into(),
    ))
}

use serde::{Deserialize, Serialize};

use super::adversary::AdversaryStrategy;
use super::HarnessError;
use crate::primitives::{GroupParams, OwfParams, OwfSpec, OwsgParams, OwsgSpec, PkeSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Enumerate every quantum measurement branch with exact rational weights.
    Exact,
    /// Sample one branch per trial.
    Empirical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SchemeConfig {
    Owf { owf: OwfParams },
    Owsg { owsg: OwsgParams, t: usize },
}

impl SchemeConfig {
    pub fn input_bits(&self) -> usize {
        match self {
            SchemeConfig::Owf { owf } => owf.n(),
            SchemeConfig::Owsg { owsg, .. } => owsg.n,
        }
    }
}

/// How the hybrids hide `x0 ^ x1` from the adversary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WrapperKind {
    Pke,
    Commitment,
    Identity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scheme: SchemeConfig,
    pub pke: PkeSpec,
    pub wrapper: WrapperKind,
    /// Wrap `0^n` instead of `x0 ^ x1` in the hybrids.
    pub zero_secret: bool,
    pub adversary: AdversaryStrategy,
    pub trials: u64,
    pub seed: u64,
    pub mode: Mode,
    /// Confidence level of reported intervals and bounds.
    pub confidence: f64,
    /// Largest number of qubits whose Hadamard-basis outcomes exact mode
    /// will enumerate.
    pub enum_limit: usize,
}

impl ExperimentConfig {
    pub fn new(scheme: SchemeConfig, adversary: AdversaryStrategy) -> Self {
        Self {
            scheme,
            pke: PkeSpec::Group {
                params: GroupParams::default(),
            },
            wrapper: WrapperKind::Pke,
            zero_secret: false,
            adversary,
            trials: 1000,
            seed: 0,
            mode: Mode::Exact,
            confidence: 0.99,
            enum_limit: 16,
        }
    }

    pub fn toy_owf(n: usize, m: usize, seed: u64, adversary: AdversaryStrategy) -> Self {
        Self::new(
            SchemeConfig::Owf {
                owf: OwfParams::Toy { n, m, seed },
            },
            adversary,
        )
    }

    pub fn hash_owf(n: usize, m: usize, adversary: AdversaryStrategy) -> Self {
        Self::new(
            SchemeConfig::Owf {
                owf: OwfParams::Hash { n, m },
            },
            adversary,
        )
    }

    pub fn with_trials(mut self, trials: u64) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_pke(mut self, pke: PkeSpec) -> Self {
        self.pke = pke;
        self
    }

    pub fn with_wrapper(mut self, wrapper: WrapperKind) -> Self {
        self.wrapper = wrapper;
        self
    }

    pub fn with_zero_secret(mut self, zero: bool) -> Self {
        self.zero_secret = zero;
        self
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.trials == 0 {
            return Err(HarnessError::InvalidConfig(
                "trials must be positive".into(),
            ));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(HarnessError::InvalidConfig(
                "confidence must lie in (0, 1)".into(),
            ));
        }
        if let PkeSpec::Group { params } = &self.pke {
            params.validate()?;
        }
        match &self.scheme {
            SchemeConfig::Owf { owf } => {
                owf.build()?;
            }
            SchemeConfig::Owsg { owsg, t } => {
                OwsgSpec::new(*owsg)?;
                if *t == 0 {
                    return Err(HarnessError::InvalidConfig(
                        "copy count t must be >= 1".into(),
                    ));
                }
            }
        }
        self.adversary.validate(self)
    }
}

/// Built primitives for one experiment.
#[derive(Debug, Clone)]
pub(crate) enum Primitive {
    Owf(OwfSpec),
    Owsg { owsg: OwsgSpec, t: usize },
}

impl Primitive {
    pub(crate) fn build(scheme: &SchemeConfig) -> Result<Self, HarnessError> {
        Ok(match scheme {
            SchemeConfig::Owf { owf } => Primitive::Owf(owf.build()?),
            SchemeConfig::Owsg { owsg, t } => Primitive::Owsg {
                owsg: OwsgSpec::new(*owsg)?,
                t: *t,
            },
        })
    }
}

use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use pvd_core::harness::{
    AdversaryStrategy, CertificatePolicy, CheckSuite, CircuitSpec, ExperimentConfig, Mode,
    PreimageAdversary, PreimageConfig, Retained, SchemeConfig, WrapperKind,
};
use pvd_core::primitives::{GroupParams, OwfParams, OwsgParams, PkeSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    Owf,
    Owsg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OwfKind {
    Hash,
    Toy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PkeKind {
    Group,
    Transparent,
}

/// How the hybrids hide `x0 ^ x1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum WrapperArg {
    Pke,
    Commitment,
    Identity,
}

impl From<WrapperArg> for WrapperKind {
    fn from(w: WrapperArg) -> Self {
        match w {
            WrapperArg::Pke => WrapperKind::Pke,
            WrapperArg::Commitment => WrapperKind::Commitment,
            WrapperArg::Identity => WrapperKind::Identity,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum AdversaryName {
    Honest,
    /// Inverts `y_target` and leaves the register alone.
    Inverter,
    InverterHadamard,
    InverterComputational,
    /// Keeps the Hadamard outcome and hands in a certificate known to fail.
    Retainer,
    RetainerGuess,
    Circuit,
    // other-preimage game only
    Echo,
    Brute,
    Guess,
    Xor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum GameKind {
    Evpke,
    Hybrid,
    Chain,
    OtherPreimage,
    Abort,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Exact,
    Empirical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Gentle,
    Dim,
    Measurement,
}

impl From<SuiteArg> for CheckSuite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Gentle => CheckSuite::Gentle,
            SuiteArg::Dim => CheckSuite::Dim,
            SuiteArg::Measurement => CheckSuite::Measurement,
        }
    }
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Empirical => Mode::Empirical,
        }
    }
}

/// Everything a run needs. Each field has a command-line flag of the same
/// name; flags override values read from `--config`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub scheme: SchemeKind,
    /// Input bits of the one-way function, or key bits of the state generator.
    pub n: usize,
    /// Output bits, or qubits per state. Defaults to `2n` (OWF) or 3 (OWSG).
    pub m: Option<usize>,
    pub owf: OwfKind,
    /// Table seed of the toy function.
    pub owf_seed: u64,
    /// Circuit seed of the state generator.
    pub owsg_seed: u64,
    pub pke: PkeKind,
    pub wrapper: WrapperArg,
    pub zero_secret: bool,
    pub adversary: AdversaryName,
    /// Which image the inverter attacks.
    pub target: u8,
    /// Circuit adversary: workspace qubits, random layers and circuit seed.
    pub workspace: usize,
    pub layers: usize,
    pub circuit_seed: u64,
    pub trials: u64,
    pub seed: u64,
    pub mode: ModeArg,
    pub confidence: f64,
    pub t: usize,
    pub game: GameKind,
    pub hybrid: u8,
    /// Plaintext bit for `demo`.
    pub b: u8,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scheme: SchemeKind::Owf,
            n: 8,
            m: None,
            owf: OwfKind::Hash,
            owf_seed: 0,
            owsg_seed: 0,
            pke: PkeKind::Group,
            wrapper: WrapperArg::Pke,
            zero_secret: false,
            adversary: AdversaryName::Honest,
            target: 0,
            workspace: 1,
            layers: 3,
            circuit_seed: 0,
            trials: 1000,
            seed: 0,
            mode: ModeArg::Exact,
            confidence: 0.99,
            t: 1,
            game: GameKind::Chain,
            hybrid: 2,
            b: 1,
        }
    }
}

impl RunConfig {
    /// Parses a JSON config; errors name the offending field.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            if path == "." {
                anyhow::anyhow!("{}", e.inner())
            } else {
                anyhow::anyhow!("field `{path}`: {}", e.inner())
            }
        })?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn m(&self) -> usize {
        self.m.unwrap_or(match self.scheme {
            SchemeKind::Owf => 2 * self.n,
            SchemeKind::Owsg => 3,
        })
    }

    pub fn bit(&self) -> Result<bool> {
        match self.b {
            0 => Ok(false),
            1 => Ok(true),
            b => bail!("field `b`: expected 0 or 1, got {b}"),
        }
    }

    pub fn owf_params(&self) -> OwfParams {
        match self.owf {
            OwfKind::Hash => OwfParams::Hash {
                n: self.n,
                m: self.m(),
            },
            OwfKind::Toy => OwfParams::Toy {
                n: self.n,
                m: self.m(),
                seed: self.owf_seed,
            },
        }
    }

    pub fn owsg_params(&self) -> OwsgParams {
        OwsgParams {
            n: self.n,
            m: self.m(),
            seed: self.owsg_seed,
            layers: self.layers,
        }
    }

    pub fn pke_spec(&self) -> PkeSpec {
        match self.pke {
            PkeKind::Group => PkeSpec::Group {
                params: GroupParams::default(),
            },
            PkeKind::Transparent => PkeSpec::Transparent,
        }
    }

    fn strategy(&self) -> Result<AdversaryStrategy> {
        let inverter = |retained| AdversaryStrategy::ClassicalInverter {
            target: self.target,
            retained,
        };
        Ok(match self.adversary {
            AdversaryName::Honest => AdversaryStrategy::HonestDeleter,
            AdversaryName::Inverter => inverter(Retained::Discard),
            AdversaryName::InverterHadamard => inverter(Retained::Hadamard),
            AdversaryName::InverterComputational => inverter(Retained::Computational),
            AdversaryName::Retainer => AdversaryStrategy::HadamardRetainer {
                certificate: CertificatePolicy::KnownInvalid,
            },
            AdversaryName::RetainerGuess => AdversaryStrategy::HadamardRetainer {
                certificate: CertificatePolicy::Guess,
            },
            AdversaryName::Circuit => AdversaryStrategy::Circuit {
                circuit: CircuitSpec::Random {
                    layers: self.layers,
                    seed: self.circuit_seed,
                },
                workspace: self.workspace,
            },
            other => bail!(
                "adversary `{}` only plays the other-preimage game",
                name(other)
            ),
        })
    }

    pub fn experiment(&self) -> Result<ExperimentConfig> {
        let scheme = match self.scheme {
            SchemeKind::Owf => SchemeConfig::Owf {
                owf: self.owf_params(),
            },
            SchemeKind::Owsg => SchemeConfig::Owsg {
                owsg: self.owsg_params(),
                t: self.t,
            },
        };
        let mut cfg = ExperimentConfig::new(scheme, self.strategy()?)
            .with_pke(self.pke_spec())
            .with_wrapper(self.wrapper.into())
            .with_zero_secret(self.zero_secret)
            .with_trials(self.trials)
            .with_seed(self.seed)
            .with_mode(self.mode.into());
        cfg.confidence = self.confidence;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn preimage(&self) -> Result<PreimageConfig> {
        if self.scheme != SchemeKind::Owf {
            bail!("the other-preimage game needs --scheme owf");
        }
        let adversary = match self.adversary {
            AdversaryName::Echo => PreimageAdversary::Echo,
            AdversaryName::Brute => PreimageAdversary::BruteForce,
            AdversaryName::Guess => PreimageAdversary::RandomGuess,
            AdversaryName::Xor => PreimageAdversary::XorSecret,
            other => bail!(
                "adversary `{}` does not play the other-preimage game",
                name(other)
            ),
        };
        Ok(PreimageConfig {
            owf: self.owf_params(),
            adversary,
            zero_secret: self.zero_secret,
            trials: self.trials,
            seed: self.seed,
            confidence: self.confidence,
        })
    }
}

fn name(a: AdversaryName) -> String {
    a.to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default()
}

//! Trial execution for the deletion experiment and its hybrids.
//!
//! A trial samples the classical data (`x0`, `x1`, keys, adversary coins) from
//! seeded lanes, so runs for `b = 0` and `b = 1` share it. Quantum
//! measurements then either branch (exact mode, every outcome with its exact
//! probability) or are sampled (empirical mode).

use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Mode, Primitive, WrapperKind};
use super::outcome::{merge, Event, EventWeights, OutcomeDistribution};
use super::stats::wilson;
use super::HarnessError;
use crate::primitives::SemanticWrapper;
use crate::pvd::{OwsgPvdScheme, PvdScheme};
use crate::qstate::{
    Basis, BitString, BranchProb, Circuit, DenseState, ExactProb, PurifiedJointState,
};
use crate::rng::{stream, Lane};

/// Which distribution to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Game {
    /// The deletion experiment against the real scheme.
    EvPke,
    /// Deletion experiment with the wrapped `x0 ^ x1`.
    Hyb0,
    /// As `Hyb0` with the phase drawn by measuring a purifying register C
    /// after the adversary, aborting unless the result is `b`.
    Hyb1,
    /// As `Hyb1`, first aborting unless a Hadamard-basis measurement of C
    /// matches the verified certificate.
    Hyb2,
    /// `Hyb2` with the Hadamard-basis measurement of C moved before the
    /// adversary runs.
    Hyb2Commuted,
}

impl Game {
    pub fn hybrid(index: u8) -> Result<Self, HarnessError> {
        match index {
            0 => Ok(Game::Hyb0),
            1 => Ok(Game::Hyb1),
            2 => Ok(Game::Hyb2),
            _ => Err(HarnessError::InvalidConfig(format!(
                "no hybrid {index}; expected 0, 1 or 2"
            ))),
        }
    }
}

/// What the public verification data lets the challenger check.
#[derive(Debug, Clone)]
pub(crate) enum Images {
    Classical { y0: BitString, y1: BitString },
    Quantum { phi0: DenseState, phi1: DenseState },
}

/// Resolves measurements by branching or sampling.
pub(crate) struct Chooser {
    mode: Mode,
    rng: ChaCha20Rng,
    enum_limit: usize,
}

impl Chooser {
    fn choose<T>(
        &mut self,
        branches: Vec<(BranchProb, T)>,
    ) -> Result<Vec<(ExactProb, T)>, HarnessError> {
        match self.mode {
            Mode::Exact => branches
                .into_iter()
                .map(|(p, t)| {
                    p.exact().map(|p| (p, t)).ok_or_else(|| {
                        HarnessError::Infeasible(
                            "branch probabilities are not exact; use empirical mode".into(),
                        )
                    })
                })
                .collect(),
            Mode::Empirical => {
                let total: f64 = branches.iter().map(|(p, _)| p.to_f64()).sum();
                let mut u = self.rng.random::<f64>() * total;
                let last = branches.len() - 1;
                for (i, (p, t)) in branches.into_iter().enumerate() {
                    u -= p.to_f64();
                    if u < 0.0 || i == last {
                        return Ok(vec![(ExactProb::one(), t)]);
                    }
                }
                unreachable!("non-empty branch list")
            }
        }
    }

    pub(crate) fn measure_a(
        &mut self,
        joint: &PurifiedJointState,
        basis: Basis,
    ) -> Result<Vec<(ExactProb, BitString, PurifiedJointState)>, HarnessError> {
        match self.mode {
            Mode::Exact => {
                let branches = joint.a_branches(basis, self.enum_limit)?;
                Ok(self
                    .choose(
                        branches
                            .into_iter()
                            .map(|b| (b.prob, (b.outcome, b.state)))
                            .collect(),
                    )?
                    .into_iter()
                    .map(|(p, (o, s))| (p, o, s))
                    .collect())
            }
            Mode::Empirical => {
                let (o, s) = joint.a_measure(basis, &mut self.rng)?;
                Ok(vec![(ExactProb::one(), o, s)])
            }
        }
    }

    fn measure_c(
        &mut self,
        joint: &PurifiedJointState,
        basis: Basis,
    ) -> Result<Vec<(ExactProb, bool, PurifiedJointState)>, HarnessError> {
        let branches = joint
            .c_branches(basis)
            .into_iter()
            .map(|b| (b.prob, (b.outcome, b.state)))
            .collect();
        Ok(self
            .choose(branches)?
            .into_iter()
            .map(|(p, (o, s))| (p, o, s))
            .collect())
    }
}

fn certain_or_approx(p: f64) -> BranchProb {
    if p == 0.0 {
        BranchProb::Exact(ExactProb::zero())
    } else if p == 1.0 {
        BranchProb::Exact(ExactProb::one())
    } else {
        BranchProb::Approx(p)
    }
}

struct Context<'a> {
    cfg: &'a ExperimentConfig,
    primitive: Primitive,
    circuit: Option<Circuit>,
}

struct Start {
    weight: ExactProb,
    /// Hadamard-basis result for C when measured before the adversary.
    early: Option<bool>,
    joint: PurifiedJointState,
}

impl<'a> Context<'a> {
    fn new(cfg: &'a ExperimentConfig) -> Result<Self, HarnessError> {
        cfg.validate()?;
        let primitive = Primitive::build(&cfg.scheme)?;
        let circuit = cfg.adversary.prepare_circuit(cfg.scheme.input_bits());
        Ok(Self {
            cfg,
            primitive,
            circuit,
        })
    }

    fn images(&self, x0: &BitString, x1: &BitString) -> Result<Images, HarnessError> {
        Ok(match &self.primitive {
            Primitive::Owf(f) => Images::Classical {
                y0: f.eval(x0)?,
                y1: f.eval(x1)?,
            },
            Primitive::Owsg { owsg, .. } => Images::Quantum {
                phi0: owsg.stategen(x0)?,
                phi1: owsg.stategen(x1)?,
            },
        })
    }

    /// Encrypts `b` under the real scheme and reads the instance back out.
    fn evpke_instance(
        &self,
        b: bool,
        index: u64,
    ) -> Result<(PurifiedJointState, Images), HarnessError> {
        let seed = self.cfg.seed;
        let (mut keys, mut enc) = (
            stream(seed, Lane::Keys, index),
            stream(seed, Lane::Encryption, index),
        );
        let (images, ct) = match &self.primitive {
            Primitive::Owf(f) => {
                let s = PvdScheme::new(self.cfg.pke, f.clone());
                let kp = s.keygen(&mut keys)?;
                let (vk, ct) = s.encrypt(&kp.pk, b, &mut enc)?;
                let crate::pvd::VerificationKey::Classical { y0, y1 } = vk else {
                    unreachable!("classical key from the one-way function scheme");
                };
                (Images::Classical { y0, y1 }, ct)
            }
            Primitive::Owsg { owsg, t } => {
                let s = OwsgPvdScheme::new(self.cfg.pke, *owsg, *t)?;
                let kp = s.keygen(&mut keys)?;
                let (mut vk, ct) = s.encrypt(&kp.pk, b, &mut enc)?;
                let (phi0, phi1) = (vk.take_copy(0)?, vk.take_copy(1)?);
                (Images::Quantum { phi0, phi1 }, ct)
            }
        };
        let (_, quantum) = ct.into_parts();
        let joint = PurifiedJointState::with_phase(
            quantum.x0().clone(),
            quantum.x1().clone(),
            quantum.phase(),
        )?;
        Ok((joint, images))
    }

    /// Samples `x0`, `x1`, prepares the starting joint state and hands it
    /// through the configured wrapper.
    fn hybrid_instance(
        &self,
        game: Game,
        b: bool,
        index: u64,
    ) -> Result<(PurifiedJointState, Images), HarnessError> {
        let seed = self.cfg.seed;
        let n = self.cfg.scheme.input_bits();
        let (x0, x1) = crate::pvd::sample_pair(n, &mut stream(seed, Lane::Instance, index))?;
        let images = self.images(&x0, &x1)?;
        let z = if self.cfg.zero_secret {
            BitString::zeros(n)?
        } else {
            x0.xor(&x1)?
        };
        let joint = match game {
            Game::Hyb0 => PurifiedJointState::with_phase(x0, x1, b)?,
            _ => PurifiedJointState::purify(x0, x1)?,
        };
        let wrapper = match self.cfg.wrapper {
            WrapperKind::Pke => {
                let kp = self.cfg.pke.keygen(&mut stream(seed, Lane::Keys, index))?;
                SemanticWrapper::Pke {
                    pke: self.cfg.pke,
                    pk: kp.pk,
                }
            }
            WrapperKind::Commitment => SemanticWrapper::Commitment,
            WrapperKind::Identity => SemanticWrapper::Identity,
        };
        // The strategies ignore the classical payload; it is produced anyway so
        // the run performs the same work as the real experiment.
        let wrapped = wrapper.wrap(
            &z,
            (),
            (),
            joint,
            &mut stream(seed, Lane::Encryption, index),
        )?;
        Ok((wrapped.input.quantum, images))
    }

    /// Verification outcomes: `Some(c)` when the certificate verifies against
    /// the `c`-th key, `None` when it is rejected.
    fn verify(
        &self,
        images: &Images,
        cert: &BitString,
    ) -> Result<Vec<(BranchProb, Option<bool>)>, HarnessError> {
        match (&self.primitive, images) {
            (Primitive::Owf(f), Images::Classical { y0, y1 }) => {
                let y = f.eval(cert)?;
                let c = if &y == y0 {
                    Some(false)
                } else if &y == y1 {
                    Some(true)
                } else {
                    None
                };
                Ok(vec![(BranchProb::Exact(ExactProb::one()), c)])
            }
            (Primitive::Owsg { owsg, .. }, Images::Quantum { phi0, phi1 }) => {
                let f0 = owsg.acceptance_probability(cert, phi0)?;
                let f1 = owsg.acceptance_probability(cert, phi1)?;
                Ok([
                    (f0, Some(false)),
                    ((1.0 - f0) * f1, Some(true)),
                    ((1.0 - f0) * (1.0 - f1), None),
                ]
                .into_iter()
                .filter(|(p, _)| *p > 0.0)
                .map(|(p, c)| (certain_or_approx(p), c))
                .collect())
            }
            _ => unreachable!("images match the primitive"),
        }
    }

    fn trial(&self, game: Game, b: bool, index: u64) -> Result<EventWeights, HarnessError> {
        let seed = self.cfg.seed;
        let mut chooser = Chooser {
            mode: self.cfg.mode,
            rng: stream(seed, Lane::Measurement, index),
            enum_limit: self.cfg.enum_limit,
        };
        let coins = stream(seed, Lane::Adversary, index);
        let (joint, images) = match game {
            Game::EvPke => self.evpke_instance(b, index)?,
            _ => self.hybrid_instance(game, b, index)?,
        };
        let starts = if game == Game::Hyb2Commuted {
            chooser
                .measure_c(&joint, Basis::Hadamard)?
                .into_iter()
                .map(|(weight, h, joint)| Start {
                    weight,
                    early: Some(h),
                    joint,
                })
                .collect()
        } else {
            vec![Start {
                weight: ExactProb::one(),
                early: None,
                joint,
            }]
        };

        let mut events = EventWeights::new();
        let mut add =
            |e: Event, w: ExactProb| *events.entry(e).or_insert_with(ExactProb::zero) += w;
        for start in starts {
            // every branch sees the same adversary coins
            let mut coins = coins.clone();
            let outputs = self.cfg.adversary.act(
                &self.primitive,
                &images,
                self.circuit.as_ref(),
                start.joint,
                &mut chooser,
                &mut coins,
            )?;
            for (pa, out) in outputs {
                let verdicts = self.verify(&images, &out.cert)?;
                for (pv, verdict) in chooser.choose(verdicts)? {
                    let w = start.weight * pa * pv;
                    let Some(c_prime) = verdict else {
                        add(Event::Rejected, w);
                        continue;
                    };
                    let output = Event::Output(out.residual.clone());
                    match game {
                        Game::EvPke | Game::Hyb0 => add(output, w),
                        Game::Hyb1 => {
                            phase_check(&mut chooser, &out.joint, b, w, output, &mut add)?
                        }
                        Game::Hyb2 => {
                            for (ph, h, joint) in chooser.measure_c(&out.joint, Basis::Hadamard)? {
                                if h != c_prime {
                                    add(Event::HadamardAbort, w * ph);
                                } else {
                                    phase_check(
                                        &mut chooser,
                                        &joint,
                                        b,
                                        w * ph,
                                        output.clone(),
                                        &mut add,
                                    )?;
                                }
                            }
                        }
                        Game::Hyb2Commuted => {
                            if start.early != Some(c_prime) {
                                add(Event::HadamardAbort, w);
                            } else {
                                phase_check(&mut chooser, &out.joint, b, w, output, &mut add)?;
                            }
                        }
                    }
                }
            }
        }
        Ok(events)
    }
}

fn phase_check(
    chooser: &mut Chooser,
    joint: &PurifiedJointState,
    b: bool,
    w: ExactProb,
    output: Event,
    add: &mut impl FnMut(Event, ExactProb),
) -> Result<(), HarnessError> {
    for (pc, c, _) in chooser.measure_c(joint, Basis::Computational)? {
        if c != b {
            add(Event::PhaseAbort, w * pc);
        } else {
            add(output.clone(), w * pc);
        }
    }
    Ok(())
}

/// Runs `cfg.trials` independent trials of `game` with plaintext bit `b`.
pub fn run_game(
    cfg: &ExperimentConfig,
    game: Game,
    b: bool,
) -> Result<OutcomeDistribution, HarnessError> {
    let ctx = Context::new(cfg)?;
    let events = (0..cfg.trials)
        .into_par_iter()
        .map(|i| ctx.trial(game, b, i))
        .try_reduce(EventWeights::new, |a, c| Ok(merge(a, c)))?;
    let bits = cfg.adversary.residual_bits(cfg.scheme.input_bits());
    OutcomeDistribution::from_events(events, bits, cfg.mode, cfg.trials, cfg.confidence)
}

/// The deletion experiment: keys, encryption of `b`, adversary, verification.
pub fn run_evpke(cfg: &ExperimentConfig, b: bool) -> Result<OutcomeDistribution, HarnessError> {
    run_game(cfg, Game::EvPke, b)
}

pub fn run_hyb(
    cfg: &ExperimentConfig,
    index: u8,
    b: bool,
) -> Result<OutcomeDistribution, HarnessError> {
    run_game(cfg, Game::hybrid(index)?, b)
}

/// Probability of the Hadamard-basis abort in the second hybrid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AbortEstimate {
    pub probability: f64,
    /// Exact value in exact mode.
    #[serde(skip)]
    pub exact: Option<ExactProb>,
    pub ci: (f64, f64),
    pub trials: u64,
}

impl AbortEstimate {
    pub(crate) fn from_distributions(
        d0: &OutcomeDistribution,
        d1: &OutcomeDistribution,
        confidence: f64,
    ) -> Self {
        let delta = d0.hadamard_abort().max(d1.hadamard_abort());
        let probability = delta.to_f64().expect("finite");
        let trials = d0.trials();
        match d0.mode() {
            Mode::Exact => Self {
                probability,
                exact: Some(delta),
                ci: (probability, probability),
                trials,
            },
            Mode::Empirical => {
                let hits = (delta * ExactProb::from_integer(trials as i128)).to_integer() as u64;
                Self {
                    probability,
                    exact: None,
                    ci: wilson(hits, trials, confidence),
                    trials,
                }
            }
        }
    }
}

/// Abort probability of the Hadamard-basis check, maximized over `b`.
pub fn abort_probability(cfg: &ExperimentConfig) -> Result<AbortEstimate, HarnessError> {
    let (d0, d1) = rayon::join(
        || run_game(cfg, Game::Hyb2, false),
        || run_game(cfg, Game::Hyb2, true),
    );
    Ok(AbortEstimate::from_distributions(
        &d0?,
        &d1?,
        cfg.confidence,
    ))
}

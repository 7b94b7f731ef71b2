//! The reduction target: given both images and one preimage, find the other.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::wilson;
use super::HarnessError;
use crate::primitives::{OwfParams, OwfSpec};
use crate::pvd::sample_pair;
use crate::qstate::BitString;
use crate::rng::{stream, Lane};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PreimageAdversary {
    /// Returns the preimage it was given.
    Echo,
    /// Inverts the image it was not given a preimage for, by enumeration.
    BruteForce,
    /// A uniformly random input.
    RandomGuess,
    /// Returns `x ^ z`; succeeds exactly when `z = x0 ^ x1` is visible.
    XorSecret,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreimageConfig {
    pub owf: OwfParams,
    pub adversary: PreimageAdversary,
    /// Give the adversary `0^n` instead of `x0 ^ x1`.
    pub zero_secret: bool,
    pub trials: u64,
    pub seed: u64,
    pub confidence: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GameOutcome {
    pub successes: u64,
    pub trials: u64,
    pub frequency: f64,
    pub ci: (f64, f64),
}

struct View<'a> {
    z: &'a BitString,
    y0: &'a BitString,
    y1: &'a BitString,
    x: &'a BitString,
}

impl PreimageAdversary {
    fn attack<R: Rng + ?Sized>(
        &self,
        owf: &OwfSpec,
        v: &View<'_>,
        coins: &mut R,
    ) -> Result<BitString, HarnessError> {
        Ok(match self {
            PreimageAdversary::Echo => v.x.clone(),
            PreimageAdversary::BruteForce => {
                let other = if &owf.eval(v.x)? == v.y0 { v.y1 } else { v.y0 };
                owf.first_preimage(other)?.expect("other is an image")
            }
            PreimageAdversary::RandomGuess => BitString::random(v.x.len(), coins)?,
            PreimageAdversary::XorSecret => v.x.xor(v.z)?,
        })
    }
}

/// Per trial: sample `x0 != x1` and a uniform `c`, give the adversary
/// `(z, y0, y1, x_c)` and count a success when its output maps to `y_{1-c}`.
pub fn other_preimage_game(cfg: &PreimageConfig) -> Result<GameOutcome, HarnessError> {
    if cfg.trials == 0 {
        return Err(HarnessError::InvalidConfig(
            "trials must be positive".into(),
        ));
    }
    let owf = cfg.owf.build()?;
    if cfg.adversary == PreimageAdversary::BruteForce && !owf.is_enumerable() {
        return Err(HarnessError::Infeasible(format!(
            "cannot enumerate {} input bits",
            owf.input_bits()
        )));
    }
    let n = owf.input_bits();
    let successes = (0..cfg.trials)
        .into_par_iter()
        .map(|i| -> Result<u64, HarnessError> {
            let (x0, x1) = sample_pair(n, &mut stream(cfg.seed, Lane::Instance, i))?;
            let c = stream(cfg.seed, Lane::Measurement, i).random::<bool>();
            let (y0, y1) = (owf.eval(&x0)?, owf.eval(&x1)?);
            let z = if cfg.zero_secret {
                BitString::zeros(n)?
            } else {
                x0.xor(&x1)?
            };
            let (given, target) = if c { (&x1, &y0) } else { (&x0, &y1) };
            let view = View {
                z: &z,
                y0: &y0,
                y1: &y1,
                x: given,
            };
            let guess =
                cfg.adversary
                    .attack(&owf, &view, &mut stream(cfg.seed, Lane::Adversary, i))?;
            Ok((&owf.eval(&guess)? == target) as u64)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(GameOutcome {
        successes,
        trials: cfg.trials,
        frequency: successes as f64 / cfg.trials as f64,
        ci: wilson(successes, cfg.trials, cfg.confidence),
    })
}

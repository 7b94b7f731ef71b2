use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::config::Mode;
use super::stats::tv_deviation_bound;
use super::HarnessError;
use crate::qstate::{BitString, ExactProb};

/// A classical residual record: the outcome of the adversary's declared final
/// measurement. May be empty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Transcript(Vec<bool>);

impl Transcript {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<&BitString> for Transcript {
    fn from(b: &BitString) -> Self {
        Self(b.to_bits())
    }
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0
            .iter()
            .try_for_each(|&b| f.write_str(if b { "1" } else { "0" }))
    }
}

/// Output of one run of an experiment.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    Bottom,
    Residual(Transcript),
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Bottom => f.write_str("bottom"),
            Outcome::Residual(t) => write!(f, "r:{t}"),
        }
    }
}

impl Serialize for Outcome {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Why a run ended, before collapsing every failure to bottom.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Event {
    /// The certificate failed verification.
    Rejected,
    /// Hadamard-basis measurement of C disagreed with the certificate.
    HadamardAbort,
    /// Computational-basis measurement of C disagreed with `b`.
    PhaseAbort,
    Output(Transcript),
}

pub(crate) type EventWeights = BTreeMap<Event, ExactProb>;

pub(crate) fn merge(mut a: EventWeights, b: EventWeights) -> EventWeights {
    for (k, v) in b {
        let e = a.entry(k).or_insert_with(ExactProb::zero);
        *e += v;
    }
    a
}

/// Distribution over outcomes.
///
/// In exact mode the weights are exact over all quantum measurement branches,
/// averaged over the sampled classical instances. In empirical mode they are
/// sample frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    weights: BTreeMap<Outcome, ExactProb>,
    hadamard_abort: ExactProb,
    residual_bits: usize,
    mode: Mode,
    trials: u64,
    confidence: f64,
}

impl OutcomeDistribution {
    pub(crate) fn from_events(
        events: EventWeights,
        residual_bits: usize,
        mode: Mode,
        trials: u64,
        confidence: f64,
    ) -> Result<Self, HarnessError> {
        let scale = ExactProb::from_integer(trials as i128);
        let mut weights = BTreeMap::new();
        let mut hadamard_abort = ExactProb::zero();
        for (event, w) in events {
            let w = w / scale;
            if event == Event::HadamardAbort {
                hadamard_abort += w;
            }
            let outcome = match event {
                Event::Output(t) => {
                    if t.len() != residual_bits {
                        return Err(HarnessError::AlphabetMismatch {
                            left: residual_bits,
                            right: t.len(),
                        });
                    }
                    Outcome::Residual(t)
                }
                _ => Outcome::Bottom,
            };
            *weights.entry(outcome).or_insert_with(ExactProb::zero) += w;
        }
        weights.retain(|_, w| !w.is_zero());
        let d = Self {
            weights,
            hadamard_abort,
            residual_bits,
            mode,
            trials,
            confidence,
        };
        debug_assert!(d.total().is_one(), "weights sum to {}", d.total());
        Ok(d)
    }

    /// A distribution given directly by its weights, which must sum to one.
    pub fn exact(
        weights: BTreeMap<Outcome, ExactProb>,
        residual_bits: usize,
    ) -> Result<Self, HarnessError> {
        let total: ExactProb = weights.values().sum();
        if !total.is_one() || weights.values().any(|w| w.is_negative()) {
            return Err(HarnessError::InvalidConfig(format!(
                "weights sum to {total}"
            )));
        }
        for o in weights.keys() {
            if let Outcome::Residual(t) = o {
                if t.len() != residual_bits {
                    return Err(HarnessError::AlphabetMismatch {
                        left: residual_bits,
                        right: t.len(),
                    });
                }
            }
        }
        let weights = weights.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        Ok(Self {
            weights,
            hadamard_abort: ExactProb::zero(),
            residual_bits,
            mode: Mode::Exact,
            trials: 1,
            confidence: 0.99,
        })
    }

    fn total(&self) -> ExactProb {
        self.weights.values().sum()
    }

    pub fn weights(&self) -> &BTreeMap<Outcome, ExactProb> {
        &self.weights
    }

    pub fn weight(&self, o: &Outcome) -> ExactProb {
        self.weights.get(o).copied().unwrap_or_else(ExactProb::zero)
    }

    pub fn probability(&self, o: &Outcome) -> f64 {
        self.weight(o).to_f64().expect("finite")
    }

    pub fn bottom_mass(&self) -> ExactProb {
        self.weight(&Outcome::Bottom)
    }

    /// Mass of the Hadamard-basis abort (zero outside the second hybrid).
    pub fn hadamard_abort(&self) -> ExactProb {
        self.hadamard_abort
    }

    pub fn residual_bits(&self) -> usize {
        self.residual_bits
    }

    /// Number of outcomes in the declared alphabet: bottom plus `2^residual_bits`.
    pub fn alphabet_size(&self) -> f64 {
        1.0 + 2f64.powi(self.residual_bits as i32)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    /// `TV(self, truth)` bound at the configured confidence; zero in exact mode.
    pub fn deviation_bound(&self, alpha: f64) -> f64 {
        match self.mode {
            Mode::Exact => 0.0,
            Mode::Empirical => tv_deviation_bound(self.alphabet_size(), self.trials, alpha),
        }
    }

    /// `1/2 delta_bottom + 1/2 self`.
    pub fn half_bottom_mixture(&self) -> Self {
        let half = ExactProb::new(1, 2);
        let mut out = self.clone();
        out.weights.values_mut().for_each(|w| *w *= half);
        *out.weights
            .entry(Outcome::Bottom)
            .or_insert_with(ExactProb::zero) += half;
        out.hadamard_abort *= half;
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let weights: BTreeMap<String, f64> = self
            .weights
            .iter()
            .map(|(o, w)| (o.to_string(), w.to_f64().expect("finite")))
            .collect();
        serde_json::json!({
            "mode": self.mode,
            "trials": self.trials,
            "residual_bits": self.residual_bits,
            "weights": weights,
        })
    }
}

/// Total variation distance between two outcome distributions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TvDistance {
    pub value: f64,
    #[serde(serialize_with = "ser_ratio")]
    pub exact: ExactProb,
    /// Bound on `|value - TV(true p, true q)|` when either side is
    /// empirical; zero when both are exact.
    pub error_bound: f64,
}

fn ser_ratio<S: Serializer>(r: &ExactProb, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(r)
}

/// `1/2 sum_o |p(o) - q(o)|`.
pub fn tv_distance(
    p: &OutcomeDistribution,
    q: &OutcomeDistribution,
) -> Result<TvDistance, HarnessError> {
    if p.residual_bits != q.residual_bits {
        return Err(HarnessError::AlphabetMismatch {
            left: p.residual_bits,
            right: q.residual_bits,
        });
    }
    let mut sum = ExactProb::zero();
    for o in p
        .weights
        .keys()
        .chain(q.weights.keys().filter(|o| !p.weights.contains_key(*o)))
    {
        sum += (p.weight(o) - q.weight(o)).abs();
    }
    let exact = sum / ExactProb::from_integer(2);
    // the two sides share the failure probability
    let alpha = (1.0 - p.confidence.min(q.confidence)) / 2.0;
    Ok(TvDistance {
        value: exact.to_f64().expect("finite"),
        exact,
        error_bound: (p.deviation_bound(alpha) + q.deviation_bound(alpha)).min(1.0),
    })
}

//! Hybrid-chain analysis and the JSON report format.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::config::{ExperimentConfig, Mode};
use super::engine::{run_game, AbortEstimate, Game};
use super::outcome::{tv_distance, OutcomeDistribution, TvDistance};
use super::preimage::{other_preimage_game, PreimageConfig};
use super::HarnessError;
use crate::qstate::ExactProb;

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Inequality {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// Statistical allowance added to `rhs` in empirical mode.
    pub slack: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Interval {
    pub low: f64,
    pub high: f64,
    /// Exact rational value, in exact mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

impl Interval {
    fn of_tv(tv: &TvDistance, mode: Mode) -> Self {
        Self {
            low: (tv.value - tv.error_bound).max(0.0),
            high: (tv.value + tv.error_bound).min(1.0),
            exact: (mode == Mode::Exact).then(|| tv.exact.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub experiment: String,
    pub config: serde_json::Value,
    pub mode: Option<Mode>,
    pub advantages: BTreeMap<String, f64>,
    pub abort_probability: Option<f64>,
    pub inequalities: Vec<Inequality>,
    pub ci: BTreeMap<String, Interval>,
    pub seed: u64,
    pub trials: u64,
    pub wall_time_ms: u64,
}

impl Report {
    fn new(
        experiment: &str,
        config: serde_json::Value,
        mode: Option<Mode>,
        seed: u64,
        trials: u64,
    ) -> Self {
        Self {
            schema: REPORT_SCHEMA,
            experiment: experiment.into(),
            config,
            mode,
            advantages: BTreeMap::new(),
            abort_probability: None,
            inequalities: Vec::new(),
            ci: BTreeMap::new(),
            seed,
            trials,
            wall_time_ms: 0,
        }
    }

    pub fn all_satisfied(&self) -> bool {
        self.inequalities.iter().all(|i| i.satisfied)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    fn timed(mut self, start: Instant) -> Self {
        self.wall_time_ms = start.elapsed().as_millis() as u64;
        self
    }
}

fn config_json<T: Serialize>(cfg: &T) -> serde_json::Value {
    serde_json::to_value(cfg).expect("configs serialize")
}

fn f(r: ExactProb) -> f64 {
    r.to_f64().expect("finite")
}

/// The three hybrids for both bits, their advantages and the inequalities
/// relating them.
#[derive(Debug, Clone)]
pub struct ChainReport {
    /// `hybrids[i][b]`
    pub hybrids: [[OutcomeDistribution; 2]; 3],
    pub advantages: [TvDistance; 3],
    pub abort: AbortEstimate,
    pub inequalities: Vec<Inequality>,
}

fn run_pair(cfg: &ExperimentConfig, game: Game) -> Result<[OutcomeDistribution; 2], HarnessError> {
    let (d0, d1) = rayon::join(|| run_game(cfg, game, false), || run_game(cfg, game, true));
    Ok([d0?, d1?])
}

pub fn hybrid_chain_report(cfg: &ExperimentConfig) -> Result<ChainReport, HarnessError> {
    let hybrids = [
        run_pair(cfg, Game::Hyb0)?,
        run_pair(cfg, Game::Hyb1)?,
        run_pair(cfg, Game::Hyb2)?,
    ];
    let adv = |i: usize| tv_distance(&hybrids[i][0], &hybrids[i][1]);
    let advantages = [adv(0)?, adv(1)?, adv(2)?];
    let abort = AbortEstimate::from_distributions(&hybrids[2][0], &hybrids[2][1], cfg.confidence);
    let [a0, a1, a2] = advantages;
    let exact = cfg.mode == Mode::Exact;
    let mut inequalities = Vec::new();

    inequalities.push(Inequality {
        name: "advt_hyb2_is_zero".into(),
        lhs: a2.value,
        rhs: 0.0,
        slack: a2.error_bound,
        satisfied: if exact {
            a2.exact.is_zero()
        } else {
            a2.value <= a2.error_bound
        },
    });

    let slack = a0.error_bound + 2.0 * a1.error_bound;
    inequalities.push(Inequality {
        name: "advt_hyb0_le_2_advt_hyb1".into(),
        lhs: a0.value,
        rhs: 2.0 * a1.value,
        slack,
        satisfied: if exact {
            a0.exact <= a1.exact * ExactProb::from_integer(2)
        } else {
            a0.value <= 2.0 * a1.value + slack
        },
    });

    let gap = (a1.exact - a2.exact).abs();
    let slack = a1.error_bound + a2.error_bound;
    let delta_hi = abort.ci.1;
    inequalities.push(Inequality {
        name: "advt_gap_hyb1_hyb2_le_4_sqrt_delta".into(),
        lhs: f(gap),
        rhs: 4.0 * abort.probability.sqrt(),
        slack: if exact {
            0.0
        } else {
            slack + 4.0 * (delta_hi.sqrt() - abort.probability.sqrt())
        },
        satisfied: match abort.exact {
            Some(delta) => gap * gap <= delta * ExactProb::from_integer(16),
            None => f(gap) <= 4.0 * delta_hi.sqrt() + slack,
        },
    });

    for (b, name) in [
        (0, "hyb1_is_half_bottom_plus_hyb0_b0"),
        (1, "hyb1_is_half_bottom_plus_hyb0_b1"),
    ] {
        let mixture = hybrids[0][b].half_bottom_mixture();
        let tv = tv_distance(&hybrids[1][b], &mixture)?;
        let alpha = (1.0 - cfg.confidence) / 2.0;
        let slack =
            hybrids[1][b].deviation_bound(alpha) + hybrids[0][b].deviation_bound(alpha) / 2.0;
        inequalities.push(Inequality {
            name: name.into(),
            lhs: tv.value,
            rhs: 0.0,
            slack,
            satisfied: if exact {
                tv.exact.is_zero()
            } else {
                tv.value <= slack
            },
        });
    }

    Ok(ChainReport {
        hybrids,
        advantages,
        abort,
        inequalities,
    })
}

impl ChainReport {
    pub fn to_report(&self, cfg: &ExperimentConfig) -> Report {
        let mut r = Report::new(
            "chain",
            config_json(cfg),
            Some(cfg.mode),
            cfg.seed,
            cfg.trials,
        );
        for (i, tv) in self.advantages.iter().enumerate() {
            r.advantages.insert(format!("hyb{i}"), tv.value);
            r.ci.insert(format!("hyb{i}"), Interval::of_tv(tv, cfg.mode));
        }
        r.abort_probability = Some(self.abort.probability);
        r.ci.insert(
            "abort".into(),
            Interval {
                low: self.abort.ci.0,
                high: self.abort.ci.1,
                exact: self.abort.exact.map(|e| e.to_string()),
            },
        );
        r.inequalities = self.inequalities.clone();
        r
    }
}

pub fn chain_report(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let start = Instant::now();
    Ok(hybrid_chain_report(cfg)?.to_report(cfg).timed(start))
}

fn pair_report(cfg: &ExperimentConfig, game: Game, name: &str) -> Result<Report, HarnessError> {
    let start = Instant::now();
    let [d0, d1] = run_pair(cfg, game)?;
    let tv = tv_distance(&d0, &d1)?;
    let mut r = Report::new(name, config_json(cfg), Some(cfg.mode), cfg.seed, cfg.trials);
    r.advantages.insert(name.into(), tv.value);
    r.ci.insert(name.into(), Interval::of_tv(&tv, cfg.mode));
    if game == Game::Hyb2 {
        let abort = AbortEstimate::from_distributions(&d0, &d1, cfg.confidence);
        r.abort_probability = Some(abort.probability);
    }
    Ok(r.timed(start))
}

/// Advantage of distinguishing the deletion experiment for `b = 0` and `b = 1`.
pub fn evpke_report(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    pair_report(cfg, Game::EvPke, "evpke")
}

pub fn hybrid_report(cfg: &ExperimentConfig, index: u8) -> Result<Report, HarnessError> {
    pair_report(cfg, Game::hybrid(index)?, &format!("hyb{index}"))
}

pub fn abort_report(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let start = Instant::now();
    let [d0, d1] = run_pair(cfg, Game::Hyb2)?;
    let abort = AbortEstimate::from_distributions(&d0, &d1, cfg.confidence);
    let mut r = Report::new(
        "abort",
        config_json(cfg),
        Some(cfg.mode),
        cfg.seed,
        cfg.trials,
    );
    r.abort_probability = Some(abort.probability);
    r.ci.insert(
        "abort".into(),
        Interval {
            low: abort.ci.0,
            high: abort.ci.1,
            exact: abort.exact.map(|e| e.to_string()),
        },
    );
    Ok(r.timed(start))
}

pub fn preimage_report(cfg: &PreimageConfig) -> Result<Report, HarnessError> {
    let start = Instant::now();
    let out = other_preimage_game(cfg)?;
    let mut r = Report::new(
        "other-preimage",
        config_json(cfg),
        None,
        cfg.seed,
        cfg.trials,
    );
    r.advantages.insert("success".into(), out.frequency);
    r.ci.insert(
        "success".into(),
        Interval {
            low: out.ci.0,
            high: out.ci.1,
            exact: None,
        },
    );
    Ok(r.timed(start))
}

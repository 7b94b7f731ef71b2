//! Randomized numeric checks of the measurement lemmas and of the sparse
//! Hadamard sampler.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::chi_square_uniform;
use super::HarnessError;
use crate::qstate::{
    check_distinguish_implies_map, check_gentle_measurement, random, BitString, QStateError,
    TwoBranchState, DEFAULT_DENSE_CAP,
};
use crate::rng::{stream, Lane};

/// Largest Hilbert-space dimension used by the lemma suites.
pub const CHECK_MAX_DIM: usize = 16;
/// Largest `n` in the sampler sweep.
pub const SAMPLER_MAX_BITS: usize = 8;
/// Chi-square p-values at or below this fail the sampler suite.
pub const SAMPLER_P_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckSuite {
    /// `TD(rho, rho') <= 2 sqrt(delta)` after post-selecting on a projector.
    Gentle,
    /// The distinguishing-implies-mapping inequality.
    Dim,
    /// Sparse Hadamard sampler against the dense oracle, `n = 1..=8`.
    Measurement,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub suite: CheckSuite,
    /// For `measurement`, instances per value of `n`.
    pub instances: usize,
    pub seed: u64,
    /// Samples per sampler instance.
    pub samples: u64,
}

impl CheckConfig {
    pub fn new(suite: CheckSuite, instances: usize, seed: u64) -> Self {
        Self {
            suite,
            instances,
            seed,
            samples: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub suite: CheckSuite,
    pub instances: usize,
    pub passed: usize,
    /// Largest `lhs - rhs` (lemma suites) or smallest p-value (sampler).
    pub worst: f64,
    pub failures: Vec<String>,
}

impl CheckSummary {
    pub fn all_passed(&self) -> bool {
        self.passed == self.instances
    }
}

struct Verdict {
    ok: bool,
    score: f64,
    detail: String,
}

fn random_dim<R: Rng + ?Sized>(rng: &mut R) -> usize {
    1 << rng.random_range(1..=CHECK_MAX_DIM.trailing_zeros())
}

fn gentle_instance(seed: u64, index: u64) -> Result<Verdict, HarnessError> {
    let mut rng = stream(seed, Lane::Setup, index);
    loop {
        let dim = random_dim(&mut rng);
        let rho = random::density_matrix(dim, &mut rng);
        let rank = rng.random_range(1..=dim);
        let pi = random::projector(dim, rank, &mut rng);
        match check_gentle_measurement(&rho, &pi) {
            Ok(r) => {
                return Ok(Verdict {
                    ok: r.satisfied,
                    score: r.trace_distance - r.bound,
                    detail: format!("dim {dim}: TD {} > 2 sqrt({})", r.trace_distance, r.delta),
                })
            }
            Err(QStateError::ZeroAcceptance(_)) => continue,
            Err(e) => return Err(e.into()),
        }
    }
}

fn dim_instance(seed: u64, index: u64) -> Result<Verdict, HarnessError> {
    let mut rng = stream(seed, Lane::Setup, index);
    let dim = random_dim(&mut rng);
    let inst = random::distinguish_instance(dim, &mut rng);
    let r = check_distinguish_implies_map(&inst.d, &inst.p0, &inst.p1, &inst.psi)?;
    Ok(Verdict {
        ok: r.satisfied,
        score: r.rhs - r.lhs,
        detail: format!("dim {dim}: {} < {}", r.lhs, r.rhs),
    })
}

/// Samples the sparse sampler and compares with the dense Hadamard transform:
/// same support, and uniform on it.
fn sampler_instance(
    n: usize,
    samples: u64,
    seed: u64,
    index: u64,
) -> Result<Verdict, HarnessError> {
    let mut rng = stream(seed, Lane::Setup, index);
    let (x0, x1) = crate::pvd::sample_pair(n, &mut rng)?;
    let state = TwoBranchState::new(x0, x1, rng.random())?;
    let probs = state
        .to_dense(DEFAULT_DENSE_CAP)?
        .hadamard_all()
        .probabilities();
    let support: Vec<usize> = (0..probs.len()).filter(|&i| probs[i] > 1e-12).collect();
    let mut counts = vec![0u64; probs.len()];
    let mut sampler = stream(seed, Lane::Measurement, index);
    for _ in 0..samples {
        let w = state.hadamard_measure(&mut sampler);
        counts[w.to_index().expect("n <= 8") as usize] += 1;
    }
    let seen: Vec<usize> = (0..counts.len()).filter(|&i| counts[i] > 0).collect();
    if seen != support {
        return Ok(Verdict {
            ok: false,
            score: 0.0,
            detail: format!(
                "n {n}: sampled support {} cells, oracle {} cells",
                seen.len(),
                support.len()
            ),
        });
    }
    let analytic = support.iter().all(|&i| {
        let w = BitString::from_index(i as u64, n).expect("i < 2^n");
        state.in_hadamard_support(&w).unwrap_or(false)
    });
    let cells: Vec<u64> = support.iter().map(|&i| counts[i]).collect();
    let p = chi_square_uniform(&cells);
    Ok(Verdict {
        ok: analytic && p > SAMPLER_P_THRESHOLD,
        score: p,
        detail: format!("n {n}: chi-square p = {p:e}"),
    })
}

/// Runs one suite; instance `i` uses its own stream, so the result does not
/// depend on the thread count.
pub fn run_check(cfg: &CheckConfig) -> Result<CheckSummary, HarnessError> {
    if cfg.instances == 0 {
        return Err(HarnessError::InvalidConfig(
            "instances must be at least 1".into(),
        ));
    }
    let jobs: Vec<(usize, u64)> = match cfg.suite {
        CheckSuite::Gentle | CheckSuite::Dim => (0..cfg.instances as u64).map(|i| (0, i)).collect(),
        CheckSuite::Measurement => (1..=SAMPLER_MAX_BITS)
            .flat_map(|n| (0..cfg.instances as u64).map(move |i| (n, ((n as u64) << 32) | i)))
            .collect(),
    };
    let verdicts = jobs
        .par_iter()
        .map(|&(n, index)| match cfg.suite {
            CheckSuite::Gentle => gentle_instance(cfg.seed, index),
            CheckSuite::Dim => dim_instance(cfg.seed, index),
            CheckSuite::Measurement => sampler_instance(n, cfg.samples, cfg.seed, index),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let worst = match cfg.suite {
        CheckSuite::Measurement => verdicts.iter().map(|v| v.score).fold(1.0, f64::min),
        _ => verdicts
            .iter()
            .map(|v| v.score)
            .fold(f64::NEG_INFINITY, f64::max),
    };
    Ok(CheckSummary {
        suite: cfg.suite,
        instances: verdicts.len(),
        passed: verdicts.iter().filter(|v| v.ok).count(),
        worst,
        failures: verdicts
            .into_iter()
            .filter(|v| !v.ok)
            .map(|v| v.detail)
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        for suite in [CheckSuite::Gentle, CheckSuite::Dim] {
            let s = run_check(&CheckConfig::new(suite, 50, 3)).unwrap();
            assert!(s.all_passed(), "{s:?}");
            assert_eq!(s.instances, 50);
        }
        let s = run_check(&CheckConfig {
            samples: 5000,
            ..CheckConfig::new(CheckSuite::Measurement, 2, 3)
        })
        .unwrap();
        assert_eq!(s.instances, 16);
        assert!(s.all_passed(), "{s:?}");
    }

    #[test]
    fn zero_instances_rejected() {
        assert!(run_check(&CheckConfig::new(CheckSuite::Gentle, 0, 0)).is_err());
    }

    #[test]
    fn too_few_samples_miss_cells() {
        // 10 draws cannot cover the 128 cells of an n = 8 coset
        let s = run_check(&CheckConfig {
            samples: 10,
            ..CheckConfig::new(CheckSuite::Measurement, 1, 0)
        })
        .unwrap();
        assert!(!s.all_passed());
        assert!(s.failures.iter().any(|f| f.starts_with("n 8")));
    }
}

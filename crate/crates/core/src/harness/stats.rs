//! Interval estimates and goodness-of-fit tests for empirical runs.

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

fn two_sided_z(confidence: f64) -> f64 {
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    normal.inverse_cdf(1.0 - (1.0 - confidence) / 2.0)
}

/// Wilson score interval for a binomial proportion.
pub fn wilson(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z = two_sided_z(confidence);
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Bound on `TV(p_hat, p)` for an empirical distribution over `k` outcomes
/// from `samples` draws, holding with probability `1 - alpha`.
///
/// From `P(|p_hat - p|_1 >= eps) <= (2^k - 2) exp(-samples eps^2 / 2)`.
pub fn tv_deviation_bound(k: f64, samples: u64, alpha: f64) -> f64 {
    if samples == 0 {
        return 1.0;
    }
    let eps = (2.0 * (k * std::f64::consts::LN_2 + (1.0 / alpha).ln()) / samples as f64).sqrt();
    (eps / 2.0).min(1.0)
}

/// p-value of Pearson's chi-square test of `counts` against the uniform
/// distribution on `counts.len()` cells.
pub fn chi_square_uniform(counts: &[u64]) -> f64 {
    let k = counts.len();
    if k < 2 {
        return 1.0;
    }
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / k as f64;
    let stat: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    ChiSquared::new((k - 1) as f64).expect("k >= 2").sf(stat)
}

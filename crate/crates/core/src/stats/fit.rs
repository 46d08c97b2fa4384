use serde::{Deserialize, Serialize};

use super::StatsError;
use crate::money::Money;

/// Shifted exponential law `P(m) = exp(-(m - floor) / T) / T` on
/// `[floor, ∞)`. `T` is in cents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentialModel {
    pub temperature: f64,
    pub floor: Money,
}

impl ExponentialModel {
    pub fn cdf(&self, x: f64) -> f64 {
        let z = x - self.floor.as_f64();
        if z <= 0.0 {
            0.0
        } else {
            -(-z / self.temperature).exp_m1()
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        let z = x - self.floor.as_f64();
        if z < 0.0 {
            0.0
        } else {
            (-z / self.temperature).exp() / self.temperature
        }
    }
}

pub(crate) fn exact_mean(values: &[Money]) -> f64 {
    let sum: i128 = values.iter().map(|m| m.cents() as i128).sum();
    let n = values.len() as i128;
    // split into quotient and remainder so huge sums keep full precision
    (sum / n) as f64 + (sum % n) as f64 / n as f64
}

/// Maximum-likelihood shifted-exponential fit: `T = mean - floor`.
pub fn fit_exponential(balances: &[Money], floor: Money) -> Result<ExponentialModel, StatsError> {
    if balances.len() < 2 {
        return Err(StatsError::TooFewSamples {
            needed: 2,
            got: balances.len(),
        });
    }
    if let Some(&value) = balances.iter().find(|&&m| m < floor) {
        return Err(StatsError::BelowFloor { value, floor });
    }
    if balances.iter().all(|&m| m == balances[0]) {
        return Err(StatsError::DegenerateFit);
    }
    let sum: i128 = balances
        .iter()
        .map(|m| m.cents() as i128 - floor.cents() as i128)
        .sum();
    let n = balances.len() as i128;
    let temperature = (sum / n) as f64 + (sum % n) as f64 / n as f64;
    Ok(ExponentialModel { temperature, floor })
}

/// Kolmogorov–Smirnov distance between the empirical CDF of `balances` and
/// the continuous model CDF.
pub fn ks_distance(balances: &[Money], model: &ExponentialModel) -> Result<f64, StatsError> {
    if balances.len() < 2 {
        return Err(StatsError::TooFewSamples {
            needed: 2,
            got: balances.len(),
        });
    }
    let mut sorted = balances.to_vec();
    sorted.sort_unstable();
    Ok(ks_sorted(&sorted, |x| model.cdf(x)))
}

/// KS distance for pre-sorted samples against any continuous CDF.
pub(crate) fn ks_sorted(sorted: &[Money], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    sorted.iter().enumerate().fold(0.0f64, |d, (i, m)| {
        let f = cdf(m.as_f64());
        d.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
    })
}

/// Separate exponential fits to the positive and negative parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoSidedFit {
    /// Mean positive balance, in cents.
    pub t_plus: f64,
    /// Mean magnitude of negative balances, in cents.
    pub t_minus: f64,
    pub n_plus: usize,
    pub n_minus: usize,
}

/// Per-side maximum-likelihood temperatures, each side floored at zero.
/// Zero balances belong to neither side.
pub fn two_sided_fit(balances: &[Money]) -> Result<TwoSidedFit, StatsError> {
    let (mut sp, mut np, mut sn, mut nn) = (0i128, 0usize, 0i128, 0usize);
    for m in balances {
        if m.is_positive() {
            sp += m.cents() as i128;
            np += 1;
        } else if m.is_negative() {
            sn -= m.cents() as i128;
            nn += 1;
        }
    }
    if np < 2 || nn < 2 {
        return Err(StatsError::OneSided {
            positive: np,
            negative: nn,
        });
    }
    Ok(TwoSidedFit {
        t_plus: sp as f64 / np as f64,
        t_minus: sn as f64 / nn as f64,
        n_plus: np,
        n_minus: nn,
    })
}

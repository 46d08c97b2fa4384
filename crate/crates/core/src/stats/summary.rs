use serde::{Deserialize, Serialize};

use super::fit::{exact_mean, ks_sorted};
use super::lorenz::lorenz_sorted;
use super::{
    entropy, fit_exponential, histogram, two_sided_fit, ExponentialModel, Histogram, TwoSidedFit,
};
use crate::money::Money;

/// Population moments of integer balances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub n: usize,
    pub mean: f64,
    /// Population variance (divides by `n`).
    pub variance: f64,
    pub skewness: f64,
    pub min: Money,
    pub max: Money,
}

/// Moments from exact integer power sums around an integer pivot near the
/// mean, so no precision is lost to cancellation. Panics on an empty slice.
pub fn moments(balances: &[Money]) -> Moments {
    assert!(!balances.is_empty(), "moments of an empty sample");
    let n = balances.len();
    let mean = exact_mean(balances);
    let pivot = mean.round() as i128;
    let (mut s1, mut s2, mut s3) = (0i128, 0i128, 0i128);
    for m in balances {
        let d = m.cents() as i128 - pivot;
        s1 += d;
        s2 += d * d;
        s3 += d * d * d;
    }
    let nf = n as f64;
    let (a1, a2, a3) = (s1 as f64 / nf, s2 as f64 / nf, s3 as f64 / nf);
    let variance = (a2 - a1 * a1).max(0.0);
    let third = a3 - 3.0 * a1 * a2 + 2.0 * a1 * a1 * a1;
    let skewness = if variance > 0.0 {
        third / variance.powf(1.5)
    } else {
        0.0
    };
    Moments {
        n,
        mean,
        variance,
        skewness,
        min: *balances.iter().min().unwrap(),
        max: *balances.iter().max().unwrap(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryOptions {
    pub bin_width: Money,
    /// Histogram grid anchor, normally the boundary floor.
    pub anchor: Money,
    /// Floor for the one-sided exponential fit, when the regime has one.
    pub floor: Option<Money>,
    pub two_sided: bool,
}

/// One snapshot's distributional summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionSummary {
    #[serde(flatten)]
    pub moments: Moments,
    /// `max / mean`, a crude tail indicator; absent when the mean is not positive.
    pub max_over_mean: Option<f64>,
    pub histogram: Histogram,
    /// Entropy per agent in nats.
    pub entropy: f64,
    pub fit: Option<ExponentialModel>,
    /// KS distance to `fit`.
    pub ks: Option<f64>,
    pub two_sided_fit: Option<TwoSidedFit>,
    /// Gini coefficient, defined only when no balance is negative.
    pub gini: Option<f64>,
}

/// Histograms in summaries never exceed this many bins.
pub const MAX_SUMMARY_BINS: i128 = 1 << 20;

/// Doubles `bin_width` until the span `[min, max]` fits in
/// [`MAX_SUMMARY_BINS`] bins.
fn summary_bin_width(bin_width: Money, min: Money, max: Money) -> Money {
    let span = max.cents() as i128 - min.cents() as i128;
    let mut w = bin_width.cents() as i128;
    while span / w + 2 > MAX_SUMMARY_BINS {
        w *= 2;
    }
    Money::from_cents(w.min(i64::MAX as i128) as i64)
}

/// Moments, histogram, entropy and fits of one snapshot.
///
/// A snapshot spread too wide for `opts.bin_width` is binned with a
/// coarser power-of-two multiple of it on the same anchor.
pub fn summarize(balances: &[Money], opts: &SummaryOptions) -> DistributionSummary {
    let moments = moments(balances);
    let width = summary_bin_width(opts.bin_width, moments.min, moments.max);
    let histogram = histogram(balances, width, opts.anchor)
        .expect("summary bin width is validated by the caller");
    let entropy = entropy(&histogram);

    let mut sorted = balances.to_vec();
    sorted.sort_unstable();

    let fit = opts
        .floor
        .and_then(|floor| fit_exponential(balances, floor).ok());
    let ks = fit.map(|model| ks_sorted(&sorted, |x| model.cdf(x)));
    let two_sided_fit = if opts.two_sided {
        two_sided_fit(balances).ok()
    } else {
        None
    };
    let gini = if moments.min.is_negative() {
        None
    } else {
        let values: Vec<f64> = sorted.iter().map(|m| m.as_f64()).collect();
        lorenz_sorted(&values).ok().map(|c| c.gini)
    };
    let max_over_mean = (moments.mean > 0.0).then(|| moments.max.as_f64() / moments.mean);

    DistributionSummary {
        moments,
        max_over_mean,
        histogram,
        entropy,
        fit,
        ks,
        two_sided_fit,
        gini,
    }
}

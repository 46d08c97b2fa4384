use serde::{Deserialize, Serialize};

use super::StatsError;
use crate::money::Money;

/// Fixed-width histogram of balances. Bin `k` covers
/// `[origin + k w, origin + (k + 1) w)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_width: Money,
    pub origin: Money,
    pub counts: Vec<u64>,
    pub n_samples: u64,
}

/// Bins `balances` on the grid anchored at `anchor` with spacing
/// `bin_width`.
///
/// The stored origin is the lower edge of the first occupied bin, which
/// always lies on the anchor grid, so two histograms built with the same
/// anchor and width can be compared bin by bin. Values below the anchor are
/// binned, not dropped.
pub fn histogram(
    balances: &[Money],
    bin_width: Money,
    anchor: Money,
) -> Result<Histogram, StatsError> {
    if !bin_width.is_positive() {
        return Err(StatsError::InvalidBinWidth);
    }
    let w = bin_width.cents() as i128;
    let a = anchor.cents() as i128;
    let bin_of = |m: Money| (m.cents() as i128 - a).div_euclid(w);
    let (Some(lo), Some(hi)) = (
        balances.iter().map(|&m| bin_of(m)).min(),
        balances.iter().map(|&m| bin_of(m)).max(),
    ) else {
        return Ok(Histogram {
            bin_width,
            origin: anchor,
            counts: Vec::new(),
            n_samples: 0,
        });
    };
    let mut counts = vec![0u64; (hi - lo + 1) as usize];
    for &m in balances {
        counts[(bin_of(m) - lo) as usize] += 1;
    }
    let origin = Money::from_cents((a + lo * w) as i64);
    Ok(Histogram {
        bin_width,
        origin,
        counts,
        n_samples: balances.len() as u64,
    })
}

impl Histogram {
    pub fn bin_lo(&self, k: usize) -> Money {
        Money::from_cents(self.origin.cents() + k as i64 * self.bin_width.cents())
    }

    fn same_grid(&self, other: &Histogram) -> bool {
        self.bin_width == other.bin_width
            && (self.origin.cents() as i128 - other.origin.cents() as i128)
                .rem_euclid(self.bin_width.cents() as i128)
                == 0
    }

    /// Largest gap between the two binned CDFs, evaluated at every bin edge.
    pub fn ks_distance(&self, other: &Histogram) -> Result<f64, StatsError> {
        if !self.same_grid(other) {
            return Err(StatsError::IncompatibleBins);
        }
        if self.n_samples == 0 || other.n_samples == 0 {
            return Err(StatsError::TooFewSamples { needed: 1, got: 0 });
        }
        let w = self.bin_width.cents() as i128;
        let start = |h: &Histogram| (h.origin.cents() as i128).div_euclid(w);
        let (s1, s2) = (start(self), start(other));
        let lo = s1.min(s2);
        let hi = (s1 + self.counts.len() as i128).max(s2 + other.counts.len() as i128);
        let count_at = |h: &Histogram, s: i128, k: i128| -> u64 {
            let i = k - s;
            if i >= 0 && (i as usize) < h.counts.len() {
                h.counts[i as usize]
            } else {
                0
            }
        };
        let (n1, n2) = (self.n_samples as f64, other.n_samples as f64);
        let (mut c1, mut c2) = (0u64, 0u64);
        let mut d: f64 = 0.0;
        for k in lo..hi {
            c1 += count_at(self, s1, k);
            c2 += count_at(other, s2, k);
            d = d.max((c1 as f64 / n1 - c2 as f64 / n2).abs());
        }
        Ok(d)
    }
}

/// Shannon entropy `-Σ p_k ln p_k` of the bin occupation, in nats.
/// An empty histogram has zero entropy.
pub fn entropy(hist: &Histogram) -> f64 {
    if hist.n_samples == 0 {
        return 0.0;
    }
    let n = hist.n_samples as f64;
    hist.counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum::<f64>()
        + 0.0
}

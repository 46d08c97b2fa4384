use serde::{Deserialize, Serialize};

use super::StatsError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorenzPoint {
    /// Cumulative population share.
    pub x: f64,
    /// Cumulative value share.
    pub y: f64,
}

/// Cumulative value share held by the poorest population share, from
/// `(0, 0)` to `(1, 1)`, with its Gini coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LorenzCurve {
    pub points: Vec<LorenzPoint>,
    pub gini: f64,
}

impl LorenzCurve {
    /// Builds a curve from points that already start at the origin.
    pub(crate) fn from_points(points: Vec<LorenzPoint>) -> Self {
        let mut curve = LorenzCurve { points, gini: 0.0 };
        curve.gini = gini(&curve);
        curve
    }

    /// Samples `f` on `n` equal steps of `[0, 1]`.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Self {
        let points = (0..=n)
            .map(|i| {
                let x = i as f64 / n as f64;
                LorenzPoint { x, y: f(x) }
            })
            .collect();
        LorenzCurve::from_points(points)
    }

    /// Value at population share `x`, interpolated linearly.
    pub fn value_at(&self, x: f64) -> f64 {
        let i = self.points.partition_point(|p| p.x < x);
        if i == 0 {
            return self.points[0].y;
        }
        if i == self.points.len() {
            return self.points[i - 1].y;
        }
        let (a, b) = (self.points[i - 1], self.points[i]);
        if b.x == a.x {
            return b.y;
        }
        a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x)
    }

    /// Sup-norm distance to a reference curve, checked at this curve's
    /// vertices and on a uniform grid of `grid` steps.
    pub fn sup_distance(&self, reference: impl Fn(f64) -> f64, grid: usize) -> f64 {
        let vertices = self.points.iter().map(|p| (p.y - reference(p.x)).abs());
        let uniform = (0..=grid).map(|i| {
            let x = i as f64 / grid as f64;
            (self.value_at(x) - reference(x)).abs()
        });
        vertices.chain(uniform).fold(0.0, f64::max)
    }

    /// Slope of each segment, `Δy / Δx`, keyed by the segment's right end.
    pub fn slopes(&self) -> Vec<(f64, f64)> {
        self.points
            .windows(2)
            .filter(|w| w[1].x > w[0].x)
            .map(|w| (w[1].x, (w[1].y - w[0].y) / (w[1].x - w[0].x)))
            .collect()
    }
}

/// Lorenz curve of a raw sample.
///
/// Values are sorted ascending with a stable sort, so equal values keep
/// their input order.
pub fn lorenz_curve(values: &[f64]) -> Result<LorenzCurve, StatsError> {
    if values.is_empty() {
        return Err(StatsError::TooFewSamples { needed: 1, got: 0 });
    }
    if let Some(&bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(StatsError::InvalidValue(bad));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    lorenz_sorted(&sorted)
}

pub(crate) fn lorenz_sorted(sorted: &[f64]) -> Result<LorenzCurve, StatsError> {
    let total: f64 = sorted.iter().sum();
    if total <= 0.0 {
        return Err(StatsError::UndefinedCurve);
    }
    let n = sorted.len() as f64;
    let mut points = Vec::with_capacity(sorted.len() + 1);
    points.push(LorenzPoint { x: 0.0, y: 0.0 });
    let mut acc = 0.0;
    for (i, v) in sorted.iter().enumerate() {
        acc += v;
        points.push(LorenzPoint {
            x: (i + 1) as f64 / n,
            y: acc / total,
        });
    }
    // pin the end against rounding in the running sum
    if let Some(last) = points.last_mut() {
        last.y = 1.0;
    }
    Ok(LorenzCurve::from_points(points))
}

/// `1 - 2 × (trapezoidal area under the curve)`.
pub fn gini(curve: &LorenzCurve) -> f64 {
    let area: f64 = curve
        .points
        .windows(2)
        .map(|w| (w[1].x - w[0].x) * (w[1].y + w[0].y) / 2.0)
        .sum();
    1.0 - 2.0 * area
}

/// Lorenz curve of an exponential distribution, `x + (1 - x) ln(1 - x)`.
pub fn exponential_lorenz(x: f64) -> Result<f64, StatsError> {
    if !(0.0..=1.0).contains(&x) {
        return Err(StatsError::Domain(x));
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    Ok(x + (1.0 - x) * (-x).ln_1p())
}

//! Distributional summaries of ledger snapshots and value tables.

mod fit;
mod histogram;
mod lorenz;
mod stationarity;
mod summary;

pub use fit::{fit_exponential, ks_distance, two_sided_fit, ExponentialModel, TwoSidedFit};
pub use histogram::{entropy, histogram, Histogram};
pub use lorenz::{exponential_lorenz, gini, lorenz_curve, LorenzCurve, LorenzPoint};
pub use stationarity::stationarity_reached;
pub use summary::{
    moments, summarize, DistributionSummary, Moments, SummaryOptions, MAX_SUMMARY_BINS,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("bin width must be positive")]
    InvalidBinWidth,
    #[error("histograms use different bin grids")]
    IncompatibleBins,
    #[error("degenerate fit: all samples are equal")]
    DegenerateFit,
    #[error("sample {value} lies below the fit floor {floor}")]
    BelowFloor {
        value: crate::Money,
        floor: crate::Money,
    },
    #[error("one-sided sample: {positive} positive and {negative} negative values")]
    OneSided { positive: usize, negative: usize },
    #[error("Lorenz curve undefined: values sum to zero")]
    UndefinedCurve,
    #[error("Lorenz values must be finite and non-negative, got {0}")]
    InvalidValue(f64),
    #[error("{0} is outside the domain [0, 1]")]
    Domain(f64),
}

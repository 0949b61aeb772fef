//! Statistical kernels: point-biserial correlation, odds ratios with
//! log-method confidence intervals, homogeneity of odds ratios across
//! strata, and percentile binning.

mod bins;
mod correlation;
mod odds;

use thiserror::Error;

pub use bins::{bin_by_percentile, bin_of};
pub use correlation::{point_biserial, PointBiserialInputs};
pub use odds::{
    chi_square_sf, homogeneity_test, homogeneity_test_with, odds_ratio, ContingencyTable,
    HomogeneityMethod, HomogeneityResult, OddsRatioMethod, OddsRatioResult, Z_95,
};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("values and dummies differ in length ({values} vs {dummies})")]
    LengthMismatch { values: usize, dummies: usize },
    #[error("need at least two observations, got {0}")]
    TooFewObservations(usize),
    #[error("correlation undefined: only one dummy class is present")]
    SingleClass,
    #[error("correlation undefined: values have zero standard deviation")]
    ZeroVariance,
    #[error("stratum {index} is degenerate: it has no cases or no controls")]
    DegenerateStratum { index: usize },
    #[error("homogeneity test needs at least two strata, got {0}")]
    TooFewStrata(usize),
    #[error("the pooled odds ratio is undefined for these strata")]
    UndefinedPooledOddsRatio,
    #[error("bin count must be at least 2, got {0}")]
    TooFewBins(usize),
    #[error("percentile {percentile} for {id} is outside [0, 100]")]
    PercentileOutOfRange { id: String, percentile: f64 },
}

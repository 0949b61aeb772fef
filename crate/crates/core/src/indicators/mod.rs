//! Field-normalized productivity.
//!
//! A researcher's fractional scientific strength (FSS) is the yearly sum of
//! the field-normalized impact of their publications, each weighted by the
//! researcher's share of the byline:
//!
//! ```text
//! FSS = 1/t · Σ_i (c_i / c̄_i) · f_i
//! ```
//!
//! where `t` is the researcher's active years, `c_i` a publication's
//! citations, `c̄_i` the mean citations of cited publications of the same
//! year and subject category, and `f_i` the fractional contribution.

mod baselines;
mod fss;
mod weights;

use thiserror::Error;

pub use baselines::{compute_baselines, normalized_impact, Baseline, BaselineRow, BaselineTable};
pub use fss::{compute_all_fss, compute_fss, FssResult};
pub use weights::{fractional_weights, BylineShares, SchemeId, WeightScheme};

#[derive(Debug, Error, PartialEq)]
pub enum IndicatorError {
    #[error("byline is empty")]
    EmptyByline,
    #[error("cited publication {publication} has no baseline for any of its (year, category) pairs")]
    MissingBaseline { publication: String },
    #[error("researcher {researcher} has zero active years")]
    ZeroActiveYears { researcher: String },
    #[error("byline shares do not sum to 1: {0}")]
    InvalidShares(String),
}

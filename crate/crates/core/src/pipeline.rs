//! The full computation in one place: baselines, FSS, eligibility, field
//! rankings and highly-cited articles, then any of the analyses as tables.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analyses::{
    authorship_distribution, correlation_analysis, overlap_analysis, producer_analysis,
    rank_stratified_case_control, AuthorshipCounting,
};
use crate::corpus::{Corpus, Rank};
use crate::excellence::{
    eligible_fields, eligible_researchers, identify_hcas_with, rank_fields, FieldRanking, HcaSet,
    ThresholdTable, DEFAULT_COVERAGE, DEFAULT_HCA_FRACTION, DEFAULT_MIN_ACTIVE_YEARS,
    DEFAULT_TS_PERCENTILE,
};
use crate::indicators::{compute_all_fss, compute_baselines, BaselineTable, FssResult, IndicatorError};
use crate::report::{
    case_control_table, correlation_table, distribution_table, overlap_table, producer_table, Table,
};
use crate::stats::{HomogeneityMethod, StatsError};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    /// Top scientists sit strictly above this within-field percentile.
    pub ts_percentile: f64,
    /// Share of each (year, category) group flagged as highly cited.
    pub hca_fraction: f64,
    /// Minimum share of publishing members for a field to be ranked.
    pub coverage: f64,
    pub min_active_years: u32,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            ts_percentile: DEFAULT_TS_PERCENTILE,
            hca_fraction: DEFAULT_HCA_FRACTION,
            coverage: DEFAULT_COVERAGE,
            min_active_years: DEFAULT_MIN_ACTIVE_YEARS,
        }
    }
}

impl Thresholds {
    pub fn check(&self) -> Result<(), String> {
        if !(self.ts_percentile > 0.0 && self.ts_percentile < 100.0) {
            return Err(format!("ts_percentile {} is outside (0, 100)", self.ts_percentile));
        }
        if !(self.hca_fraction > 0.0 && self.hca_fraction < 1.0) {
            return Err(format!("hca_fraction {} is outside (0, 1)", self.hca_fraction));
        }
        if !(self.coverage > 0.0 && self.coverage < 1.0) {
            return Err(format!("coverage {} is outside (0, 1)", self.coverage));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Indicator(#[from] IndicatorError),
    #[error("no field reaches the coverage threshold {0}; nothing to rank")]
    NoEligibleFields(f64),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

#[derive(Clone, Debug)]
pub struct Computed {
    pub baselines: BaselineTable,
    pub fss: Vec<FssResult>,
    pub eligible_fields: BTreeSet<String>,
    pub rankings: Vec<FieldRanking>,
    pub hcas: HcaSet,
}

/// Runs every indicator stage. An external baseline table replaces the
/// corpus-derived one; an external threshold table overrides the groups it
/// lists.
pub fn compute(
    corpus: &Corpus,
    thresholds: &Thresholds,
    external_baselines: Option<BaselineTable>,
    external_thresholds: Option<&ThresholdTable>,
) -> Result<Computed, PipelineError> {
    let baselines = external_baselines.unwrap_or_else(|| compute_baselines(corpus));
    let fields = eligible_fields(corpus, thresholds.coverage);
    if fields.is_empty() {
        return Err(PipelineError::NoEligibleFields(thresholds.coverage));
    }
    let eligible = eligible_researchers(corpus, thresholds.min_active_years, thresholds.coverage);
    let fss: Vec<FssResult> = compute_all_fss(corpus, &baselines)?
        .into_iter()
        .filter(|r| eligible.contains(&r.researcher_id))
        .collect();
    let rankings = rank_fields(corpus, &fss, &eligible, thresholds.ts_percentile);
    let hcas = identify_hcas_with(corpus, thresholds.hca_fraction, external_thresholds);
    Ok(Computed {
        baselines,
        fss,
        eligible_fields: fields,
        rankings,
        hcas,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Analysis {
    Overlap,
    Producers,
    Correlation,
    Distribution,
    CaseControl,
}

impl Analysis {
    pub const ALL: [Analysis; 5] = [
        Analysis::Overlap,
        Analysis::Producers,
        Analysis::Correlation,
        Analysis::Distribution,
        Analysis::CaseControl,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Analysis::Overlap => "overlap",
            Analysis::Producers => "producers",
            Analysis::Correlation => "correlation",
            Analysis::Distribution => "distribution",
            Analysis::CaseControl => "case_control",
        }
    }
}

impl fmt::Display for Analysis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Analysis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Analysis::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| format!("unknown analysis `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisOptions {
    /// Bin counts for the authorship distribution, e.g. deciles and quartiles.
    pub distribution_bins: Vec<usize>,
    pub author_counting: AuthorshipCounting,
    /// Ranks for the case-control analysis.
    pub ranks: Vec<Rank>,
    pub homogeneity: HomogeneityMethod,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            distribution_bins: vec![10, 4],
            author_counting: AuthorshipCounting::PerBin,
            ranks: Rank::EVALUATED.to_vec(),
            homogeneity: HomogeneityMethod::Woolf,
        }
    }
}

/// One table per requested analysis, in the order requested.
pub fn analyze(
    corpus: &Corpus,
    rankings: &[FieldRanking],
    hcas: &HcaSet,
    which: &[Analysis],
    options: &AnalysisOptions,
) -> Result<Vec<(Analysis, Table)>, PipelineError> {
    let mut out = Vec::new();
    for &analysis in which {
        let table = match analysis {
            Analysis::Overlap => overlap_table(&overlap_analysis(corpus, rankings, hcas)),
            Analysis::Producers => producer_table(&producer_analysis(corpus, rankings, hcas)),
            Analysis::Correlation => correlation_table(&correlation_analysis(corpus, rankings, hcas)),
            Analysis::Distribution => {
                let mut all = Vec::new();
                for &k in &options.distribution_bins {
                    all.extend(authorship_distribution(corpus, rankings, hcas, k, options.author_counting)?);
                }
                distribution_table(&all)
            }
            Analysis::CaseControl => {
                let reports: Vec<_> = options
                    .ranks
                    .iter()
                    .map(|&rank| rank_stratified_case_control(corpus, rankings, hcas, rank, options.homogeneity))
                    .collect();
                case_control_table(&reports)
            }
        };
        out.push((analysis, table));
    }
    Ok(out)
}

//! Seeded synthetic corpora with planted ground truth.
//!
//! A small share of researchers are planted "stars": their articles draw
//! from a citation law scaled by `hca_propensity_boost`, and they lead
//! `boost^star_rate_exponent` times as many articles as their peers. With a
//! boost of 1 stars are indistinguishable from everyone else.

mod citations;
mod generate;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{write_publications, write_researchers, Corpus, LoadError, Rank, Window};

pub use citations::{CitationModel, FieldCitations};
pub use generate::generate_corpus;

pub const RESEARCHERS_FILE: &str = "researchers.csv";
pub const PUBLICATIONS_FILE: &str = "publications.csv";
pub const GROUND_TRUTH_FILE: &str = "ground_truth.json";

#[derive(Debug, Error)]
pub enum GenError {
    #[error("invalid generator config: {field}: {message}")]
    Invalid {
        field: &'static str,
        message: String,
    },
    #[error(transparent)]
    Write(#[from] LoadError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn invalid(field: &'static str, message: impl Into<String>) -> GenError {
    GenError::Invalid {
        field,
        message: message.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountRange {
    pub min: usize,
    pub max: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanRange {
    pub min: f64,
    pub max: f64,
}

/// Shares of each academic rank; must sum to 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankMix {
    pub assistant: f64,
    pub associate: f64,
    pub full: f64,
}

impl Default for RankMix {
    fn default() -> Self {
        Self {
            assistant: 0.35,
            associate: 0.35,
            full: 0.30,
        }
    }
}

/// Citation-intensity multiplier for articles led by non-star researchers
/// of each rank. Stars are boosted alike whatever their rank.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankPropensity {
    pub assistant: f64,
    pub associate: f64,
    pub full: f64,
}

impl RankPropensity {
    pub fn of(&self, rank: Rank) -> f64 {
        match rank {
            Rank::Assistant => self.assistant,
            Rank::Associate => self.associate,
            Rank::Full => self.full,
            Rank::Unspecified => 1.0,
        }
    }
}

impl Default for RankPropensity {
    fn default() -> Self {
        Self {
            assistant: 1.0,
            associate: 1.0,
            full: 1.0,
        }
    }
}

/// Byline length is `1 + Poisson(mean − 1)`, capped at `max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TeamSize {
    pub mean: f64,
    pub max: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenConfig {
    pub seed: u64,
    pub n_disciplines: usize,
    pub fields_per_discipline: usize,
    pub researchers_per_field: CountRange,
    /// Exact number of publications generated.
    pub n_publications: usize,
    pub window: Window,
    pub rank_mix: RankMix,
    pub citation_model: CitationModel,
    /// Each field's mean citation intensity is drawn uniformly from here.
    pub field_mean_citations: MeanRange,
    /// Chance that an article carries a second subject category.
    pub multi_category_prob: f64,
    /// Make citation counts distinct within every (year, category) group.
    /// Requires single-category articles.
    pub distinct_citations: bool,
    /// Team-size law per discipline, reused cyclically.
    pub team_sizes: Vec<TeamSize>,
    /// Chance that a non-lead byline slot holds an external author.
    pub external_coauthor_share: f64,
    /// Chance that a roster co-author comes from anywhere in the corpus
    /// rather than the lead's field.
    pub cross_field_share: f64,
    /// Chance that first and last byline slots are forced into one
    /// organization when either slot is external.
    pub same_org_first_last_prob: f64,
    pub n_organizations: usize,
    /// The first this many disciplines use byline-position weights.
    pub byline_weighted_disciplines: usize,
    /// Share of each field's eligible publishing members planted as stars.
    pub star_share: f64,
    pub hca_propensity_boost: f64,
    pub star_rate_exponent: f64,
    /// Share of members with at least one publication in ordinary fields.
    pub coverage_rate: f64,
    pub low_coverage_fields: usize,
    pub low_coverage_rate: f64,
    /// Share of each field's members active only one or two years.
    pub short_tenure_share: f64,
    pub rank_hca_propensity: RankPropensity,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            n_disciplines: 5,
            fields_per_discipline: 4,
            researchers_per_field: CountRange { min: 100, max: 100 },
            n_publications: 10_000,
            window: Window::new(2004, 2008),
            rank_mix: RankMix::default(),
            citation_model: CitationModel::default(),
            field_mean_citations: MeanRange { min: 4.0, max: 12.0 },
            multi_category_prob: 0.2,
            distinct_citations: false,
            team_sizes: vec![TeamSize { mean: 3.0, max: 10 }],
            external_coauthor_share: 0.4,
            cross_field_share: 0.05,
            same_org_first_last_prob: 0.5,
            n_organizations: 20,
            byline_weighted_disciplines: 1,
            star_share: 0.05,
            hca_propensity_boost: 4.0,
            star_rate_exponent: 0.5,
            coverage_rate: 0.95,
            low_coverage_fields: 3,
            low_coverage_rate: 0.3,
            short_tenure_share: 0.05,
            rank_hca_propensity: RankPropensity::default(),
        }
    }
}

fn check_share(field: &'static str, value: f64) -> Result<(), GenError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(invalid(field, format!("{value} is outside [0, 1]")))
    }
}

impl GenConfig {
    pub fn n_fields(&self) -> usize {
        self.n_disciplines * self.fields_per_discipline
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.n_disciplines == 0 {
            return Err(invalid("n_disciplines", "must be positive"));
        }
        if self.fields_per_discipline == 0 {
            return Err(invalid("fields_per_discipline", "must be positive"));
        }
        let r = self.researchers_per_field;
        if r.min == 0 || r.min > r.max {
            return Err(invalid("researchers_per_field", "need 1 <= min <= max"));
        }
        if self.window.is_empty() {
            return Err(invalid("window", "end_year precedes start_year"));
        }
        let mix = self.rank_mix;
        for (name, v) in [
            ("rank_mix.assistant", mix.assistant),
            ("rank_mix.associate", mix.associate),
            ("rank_mix.full", mix.full),
        ] {
            check_share(name, v)?;
        }
        if (mix.assistant + mix.associate + mix.full - 1.0).abs() > 1e-9 {
            return Err(invalid("rank_mix", "shares must sum to 1"));
        }
        match self.citation_model {
            CitationModel::DiscretizedLognormal { sigma } if !(sigma > 0.0 && sigma.is_finite()) => {
                return Err(invalid("citation_model.sigma", "must be positive"));
            }
            CitationModel::NegativeBinomial { dispersion } if !(dispersion > 0.0 && dispersion.is_finite()) => {
                return Err(invalid("citation_model.dispersion", "must be positive"));
            }
            _ => {}
        }
        let m = self.field_mean_citations;
        if !(m.min > 0.0 && m.min <= m.max && m.max.is_finite()) {
            return Err(invalid("field_mean_citations", "need 0 < min <= max"));
        }
        for (name, v) in [
            ("multi_category_prob", self.multi_category_prob),
            ("external_coauthor_share", self.external_coauthor_share),
            ("cross_field_share", self.cross_field_share),
            ("same_org_first_last_prob", self.same_org_first_last_prob),
            ("star_share", self.star_share),
            ("coverage_rate", self.coverage_rate),
            ("low_coverage_rate", self.low_coverage_rate),
            ("short_tenure_share", self.short_tenure_share),
        ] {
            check_share(name, v)?;
        }
        if self.distinct_citations && self.multi_category_prob > 0.0 {
            return Err(invalid(
                "distinct_citations",
                "needs multi_category_prob = 0 so each article sits in one group",
            ));
        }
        if self.team_sizes.is_empty() {
            return Err(invalid("team_sizes", "need at least one entry"));
        }
        for t in &self.team_sizes {
            if !(t.mean >= 1.0 && t.max >= 1 && t.mean <= t.max as f64) {
                return Err(invalid("team_sizes", "need 1 <= mean <= max"));
            }
        }
        if self.n_organizations == 0 {
            return Err(invalid("n_organizations", "must be positive"));
        }
        if self.byline_weighted_disciplines > self.n_disciplines {
            return Err(invalid("byline_weighted_disciplines", "exceeds n_disciplines"));
        }
        if !(self.hca_propensity_boost >= 1.0 && self.hca_propensity_boost.is_finite()) {
            return Err(invalid("hca_propensity_boost", "must be at least 1"));
        }
        if !(self.star_rate_exponent >= 0.0 && self.star_rate_exponent.is_finite()) {
            return Err(invalid("star_rate_exponent", "must be non-negative"));
        }
        if self.low_coverage_fields > self.n_fields() {
            return Err(invalid("low_coverage_fields", "exceeds the number of fields"));
        }
        let p = self.rank_hca_propensity;
        if [p.assistant, p.associate, p.full]
            .iter()
            .any(|v| !(*v > 0.0 && v.is_finite()))
        {
            return Err(invalid("rank_hca_propensity", "multipliers must be positive"));
        }
        Ok(())
    }
}

/// What the generator planted, written next to the corpus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub seed: u64,
    pub stars: BTreeSet<String>,
    /// Field → share of members with at least one publication.
    pub coverage: BTreeMap<String, f64>,
    pub low_coverage_fields: BTreeSet<String>,
    /// Field → members active fewer than three years.
    pub short_tenure: BTreeMap<String, usize>,
    pub rank_propensity: RankPropensity,
    pub hca_propensity_boost: f64,
    pub star_rate_exponent: f64,
    /// Field → citation law of ordinary articles.
    pub field_citations: BTreeMap<String, FieldCitations>,
    /// Field → number of articles it leads.
    pub field_publications: BTreeMap<String, usize>,
}

impl GroundTruth {
    /// Fields whose planted coverage meets `threshold`.
    pub fn eligible_fields(&self, threshold: f64) -> BTreeSet<String> {
        self.coverage
            .iter()
            .filter(|(_, &c)| c >= threshold)
            .map(|(f, _)| f.clone())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedFiles {
    pub researchers: PathBuf,
    pub publications: PathBuf,
    pub ground_truth: PathBuf,
}

/// Writes `researchers.csv`, `publications.csv` and `ground_truth.json`
/// into `dir`, creating it if needed.
pub fn write_generated(dir: &Path, corpus: &Corpus, truth: &GroundTruth) -> Result<GeneratedFiles, GenError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| GenError::Io { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    let files = GeneratedFiles {
        researchers: dir.join(RESEARCHERS_FILE),
        publications: dir.join(PUBLICATIONS_FILE),
        ground_truth: dir.join(GROUND_TRUTH_FILE),
    };
    write_researchers(&files.researchers, corpus.researchers())?;
    write_publications(&files.publications, corpus.publications())?;
    let mut json = serde_json::to_string_pretty(truth).expect("ground truth serializes");
    json.push('\n');
    std::fs::write(&files.ground_truth, json).map_err(io(&files.ground_truth))?;
    Ok(files)
}

//! Top scientists and highly-cited articles.
//!
//! Researchers are ranked against the peers of their own field on a 0–100
//! percentile scale (worst to best); those above the 95th percentile are top
//! scientists. A publication is highly cited when it sits in the top 5% of
//! the citation ranking of its (year, subject category) group.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::artifact::{read_rows, write_rows, ArtifactError};
use crate::corpus::Corpus;
use crate::indicators::FssResult;

pub const DEFAULT_TS_PERCENTILE: f64 = 95.0;
pub const DEFAULT_HCA_FRACTION: f64 = 0.05;
pub const DEFAULT_COVERAGE: f64 = 0.5;
pub const DEFAULT_MIN_ACTIVE_YEARS: u32 = 3;

// Guards floor(fraction * size) against products like 2.9999999999999996.
const FLOOR_SLACK: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum ExcellenceError {
    #[error("field {0} has no researchers to rank")]
    EmptyField(String),
}

/// Fields in which at least `coverage_threshold` of the members have one or
/// more publications.
pub fn eligible_fields(corpus: &Corpus, coverage_threshold: f64) -> BTreeSet<String> {
    let mut counts: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for r in corpus.researchers() {
        let entry = counts.entry(&r.field_id).or_default();
        entry.1 += 1;
        if !corpus.authorships_of(&r.id).is_empty() {
            entry.0 += 1;
        }
    }
    counts
        .into_iter()
        .filter(|(_, (publishing, members))| {
            *publishing as f64 / *members as f64 >= coverage_threshold
        })
        .map(|(field, _)| field.to_string())
        .collect()
}

/// Researchers active at least `min_years` whose field passes
/// [`eligible_fields`] at `coverage_threshold`.
pub fn eligible_researchers(
    corpus: &Corpus,
    min_years: u32,
    coverage_threshold: f64,
) -> BTreeSet<String> {
    let fields = eligible_fields(corpus, coverage_threshold);
    corpus
        .researchers()
        .iter()
        .filter(|r| r.active_years >= min_years && fields.contains(&r.field_id))
        .map(|r| r.id.clone())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankedResearcher {
    pub researcher_id: String,
    pub fss: f64,
    pub percentile: f64,
    pub is_top_scientist: bool,
}

/// Within-field productivity ranking, keyed by researcher id.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldRanking {
    pub field_id: String,
    entries: BTreeMap<String, RankedResearcher>,
}

impl FieldRanking {
    pub fn get(&self, researcher_id: &str) -> Option<&RankedResearcher> {
        self.entries.get(researcher_id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &RankedResearcher> {
        self.entries.values()
    }

    pub fn top_scientists(&self) -> impl Iterator<Item = &RankedResearcher> {
        self.iter().filter(|r| r.is_top_scientist)
    }

    pub fn percentiles(&self) -> BTreeMap<String, f64> {
        self.iter()
            .map(|r| (r.researcher_id.clone(), r.percentile))
            .collect()
    }
}

/// Ranks one field with the default top-scientist cut (> 95).
pub fn rank_field(field_id: &str, results: &[FssResult]) -> Result<FieldRanking, ExcellenceError> {
    rank_field_with_cutoff(field_id, results, DEFAULT_TS_PERCENTILE)
}

/// Percentile of a researcher = 100 × (peers with strictly lower FSS) / (n − 1),
/// so tied researchers share the lower value; a lone researcher sits at 100.
/// Top scientists are those strictly above `ts_percentile`.
pub fn rank_field_with_cutoff(
    field_id: &str,
    results: &[FssResult],
    ts_percentile: f64,
) -> Result<FieldRanking, ExcellenceError> {
    if results.is_empty() {
        return Err(ExcellenceError::EmptyField(field_id.to_string()));
    }
    let n = results.len();
    let mut sorted: Vec<f64> = results.iter().map(|r| r.fss).collect();
    sorted.sort_by(f64::total_cmp);

    let entries = results
        .iter()
        .map(|r| {
            let percentile = if n == 1 {
                100.0
            } else {
                let lower = sorted.partition_point(|&v| v < r.fss);
                100.0 * lower as f64 / (n - 1) as f64
            };
            let ranked = RankedResearcher {
                researcher_id: r.researcher_id.clone(),
                fss: r.fss,
                percentile,
                is_top_scientist: percentile > ts_percentile,
            };
            (r.researcher_id.clone(), ranked)
        })
        .collect();
    Ok(FieldRanking {
        field_id: field_id.to_string(),
        entries,
    })
}

/// Groups the eligible researchers' results by field and ranks each field.
pub fn rank_fields(
    corpus: &Corpus,
    results: &[FssResult],
    eligible: &BTreeSet<String>,
    ts_percentile: f64,
) -> Vec<FieldRanking> {
    let mut by_field: BTreeMap<&str, Vec<FssResult>> = BTreeMap::new();
    for result in results.iter().filter(|r| eligible.contains(&r.researcher_id)) {
        if let Some(r) = corpus.researcher(&result.researcher_id) {
            by_field.entry(&r.field_id).or_default().push(result.clone());
        }
    }
    by_field
        .into_iter()
        .filter_map(|(field, results)| rank_field_with_cutoff(field, &results, ts_percentile).ok())
        .collect()
}

/// Export row: `field_id,researcher_id,fss,percentile,is_ts`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankingRow {
    pub field_id: String,
    pub researcher_id: String,
    pub fss: f64,
    pub percentile: f64,
    pub is_ts: bool,
}

pub fn ranking_rows(rankings: &[FieldRanking]) -> Vec<RankingRow> {
    rankings
        .iter()
        .flat_map(|f| {
            f.iter().map(|r| RankingRow {
                field_id: f.field_id.clone(),
                researcher_id: r.researcher_id.clone(),
                fss: r.fss,
                percentile: r.percentile,
                is_ts: r.is_top_scientist,
            })
        })
        .collect()
}

pub fn rankings_from_rows(rows: Vec<RankingRow>) -> Vec<FieldRanking> {
    let mut fields: BTreeMap<String, BTreeMap<String, RankedResearcher>> = BTreeMap::new();
    for row in rows {
        fields.entry(row.field_id).or_default().insert(
            row.researcher_id.clone(),
            RankedResearcher {
                researcher_id: row.researcher_id,
                fss: row.fss,
                percentile: row.percentile,
                is_top_scientist: row.is_ts,
            },
        );
    }
    fields
        .into_iter()
        .map(|(field_id, entries)| FieldRanking { field_id, entries })
        .collect()
}

pub fn write_rankings(path: &Path, rankings: &[FieldRanking]) -> Result<(), ArtifactError> {
    write_rows(path, &ranking_rows(rankings))
}

pub fn read_rankings(path: &Path) -> Result<Vec<FieldRanking>, ArtifactError> {
    Ok(rankings_from_rows(read_rows(path)?))
}

/// Minimum citations (inclusive) for a highly-cited article, per
/// (year, category). Rows: `year,category,min_citations_inclusive`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ThresholdTable {
    entries: BTreeMap<(i32, String), u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub year: i32,
    pub category: String,
    pub min_citations_inclusive: u64,
}

impl ThresholdTable {
    pub fn get(&self, year: i32, category: &str) -> Option<u64> {
        self.entries.get(&(year, category.to_string())).copied()
    }

    pub fn insert(&mut self, year: i32, category: impl Into<String>, min_citations: u64) {
        self.entries.insert((year, category.into()), min_citations);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn rows(&self) -> Vec<ThresholdRow> {
        self.entries
            .iter()
            .map(|((year, category), &min)| ThresholdRow {
                year: *year,
                category: category.clone(),
                min_citations_inclusive: min,
            })
            .collect()
    }

    pub fn write(&self, path: &Path) -> Result<(), ArtifactError> {
        write_rows(path, &self.rows())
    }

    pub fn read(path: &Path) -> Result<Self, ArtifactError> {
        let mut table = Self::default();
        for row in read_rows::<ThresholdRow>(path)? {
            table.insert(row.year, row.category, row.min_citations_inclusive);
        }
        Ok(table)
    }
}

/// The highly-cited publications and the thresholds that selected them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HcaSet {
    pub publications: BTreeSet<String>,
    pub thresholds: ThresholdTable,
}

impl HcaSet {
    pub fn contains(&self, publication_id: &str) -> bool {
        self.publications.contains(publication_id)
    }

    pub fn len(&self) -> usize {
        self.publications.len()
    }

    pub fn is_empty(&self) -> bool {
        self.publications.is_empty()
    }
}

/// Corpus-relative thresholds: in a group of `g` publications the allowance
/// is `⌊top_fraction · g⌋` and the threshold is the citation count of the
/// allowance-th most cited publication, never below one citation. Groups
/// too small for a single allowance get no threshold.
pub fn hca_thresholds(corpus: &Corpus, top_fraction: f64) -> ThresholdTable {
    let mut groups: BTreeMap<(i32, &str), Vec<u64>> = BTreeMap::new();
    for p in corpus.publications() {
        let categories: BTreeSet<&str> = p.subject_categories.iter().map(String::as_str).collect();
        for category in categories {
            groups.entry((p.year, category)).or_default().push(p.citations);
        }
    }
    let mut table = ThresholdTable::default();
    for ((year, category), mut citations) in groups {
        let allowance = (top_fraction * citations.len() as f64 + FLOOR_SLACK).floor() as usize;
        if allowance == 0 {
            continue;
        }
        let allowance = allowance.min(citations.len());
        citations.sort_unstable_by(|a, b| b.cmp(a));
        table.insert(year, category, citations[allowance - 1].max(1));
    }
    table
}

/// Flags publications that reach the threshold in at least one of their
/// categories. Ties at the threshold are included.
pub fn identify_hcas(corpus: &Corpus, top_fraction: f64) -> HcaSet {
    identify_hcas_with(corpus, top_fraction, None)
}

/// As [`identify_hcas`], with an optional external threshold table. Groups
/// the external table does not cover keep their corpus-derived threshold.
pub fn identify_hcas_with(
    corpus: &Corpus,
    top_fraction: f64,
    external: Option<&ThresholdTable>,
) -> HcaSet {
    let mut thresholds = hca_thresholds(corpus, top_fraction);
    if let Some(external) = external {
        for ((year, category), min) in &external.entries {
            thresholds.insert(*year, category.clone(), *min);
        }
    }
    let publications = corpus
        .publications()
        .iter()
        .filter(|p| {
            p.subject_categories.iter().any(|c| {
                thresholds
                    .get(p.year, c)
                    .is_some_and(|min| p.citations >= min)
            })
        })
        .map(|p| p.id.clone())
        .collect();
    HcaSet {
        publications,
        thresholds,
    }
}

/// Researcher id → number of highly-cited publications they author.
pub fn hca_counts(corpus: &Corpus, hcas: &HcaSet) -> HashMap<String, usize> {
    let mut counts = HashMap::new();
    for p in corpus.publications().iter().filter(|p| hcas.contains(&p.id)) {
        for id in p.roster_authors() {
            *counts.entry(id.to_string()).or_insert(0) += 1;
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{AuthorSlot, DisciplinePolicy, Publication, Rank, Researcher, Window};

    fn result(id: &str, fss: f64) -> FssResult {
        FssResult {
            researcher_id: id.into(),
            fss,
            n_publications: 1,
            active_years: 5,
        }
    }

    fn researcher(id: &str, field: &str, active_years: u32) -> Researcher {
        Researcher {
            id: id.into(),
            field_id: field.into(),
            discipline_id: "D".into(),
            rank: Rank::Associate,
            active_years,
            organization_id: "U".into(),
        }
    }

    fn publication(id: &str, citations: u64, authors: &[&str]) -> Publication {
        Publication {
            id: id.into(),
            year: 2005,
            citations,
            subject_categories: vec!["MATH".into()],
            byline: authors
                .iter()
                .enumerate()
                .map(|(i, a)| AuthorSlot {
                    position: i as u32 + 1,
                    researcher_id: Some(a.to_string()),
                    organization_id: "U".into(),
                })
                .collect(),
        }
    }

    fn corpus(researchers: Vec<Researcher>, publications: Vec<Publication>) -> Corpus {
        Corpus::new(researchers, publications, Window::new(2004, 2008), DisciplinePolicy::default())
    }

    /// Field `F` of ten members of whom `publishing` have a paper.
    fn coverage_corpus(publishing: usize) -> Corpus {
        let researchers = (0..10).map(|i| researcher(&format!("r{i}"), "F", 5)).collect();
        let publications = (0..publishing)
            .map(|i| publication(&format!("p{i}"), 1, &[&format!("r{i}")]))
            .collect();
        corpus(researchers, publications)
    }

    #[test]
    fn coverage_boundary_is_inclusive() {
        assert!(eligible_fields(&coverage_corpus(5), 0.5).contains("F"));
        assert!(eligible_fields(&coverage_corpus(4), 0.5).is_empty());
    }

    #[test]
    fn tenure_boundary_is_inclusive() {
        let c = corpus(
            vec![researcher("three", "F", 3), researcher("two", "F", 2)],
            vec![publication("p", 1, &["three", "two"])],
        );
        let eligible = eligible_researchers(&c, 3, 0.5);
        assert!(eligible.contains("three"));
        assert!(!eligible.contains("two"));
    }

    #[test]
    fn twenty_one_distinct_values_step_by_five() {
        let results: Vec<_> = (0..21).map(|i| result(&format!("r{i:02}"), i as f64)).collect();
        let ranking = rank_field("F", &results).unwrap();
        for i in 0..21 {
            let r = ranking.get(&format!("r{i:02}")).unwrap();
            assert_eq!(r.percentile, 5.0 * i as f64);
        }
        let ts: Vec<_> = ranking.top_scientists().map(|r| r.researcher_id.as_str()).collect();
        assert_eq!(ts, ["r20"]);
    }

    #[test]
    fn all_tied_means_no_top_scientists() {
        let results: Vec<_> = (0..30).map(|i| result(&format!("r{i}"), 0.7)).collect();
        let ranking = rank_field("F", &results).unwrap();
        assert!(ranking.iter().all(|r| r.percentile == 0.0));
        assert_eq!(ranking.top_scientists().count(), 0);
    }

    #[test]
    fn two_researchers_and_singleton() {
        let ranking = rank_field("F", &[result("a", 1.0), result("b", 2.0)]).unwrap();
        assert_eq!(ranking.get("a").unwrap().percentile, 0.0);
        assert_eq!(ranking.get("b").unwrap().percentile, 100.0);
        assert_eq!(ranking.top_scientists().count(), 1);

        let alone = rank_field("F", &[result("a", 0.0)]).unwrap();
        assert_eq!(alone.get("a").unwrap().percentile, 100.0);
        assert_eq!(rank_field("F", &[]), Err(ExcellenceError::EmptyField("F".into())));
    }

    #[test]
    fn hundred_distinct_citation_counts_flag_five() {
        let pubs = (0..100).map(|i| publication(&format!("p{i:03}"), i, &[])).collect();
        let hcas = identify_hcas(&corpus(vec![], pubs), 0.05);
        let expected: BTreeSet<String> = (95..100).map(|i| format!("p{i:03}")).collect();
        assert_eq!(hcas.publications, expected);
        assert_eq!(hcas.thresholds.get(2005, "MATH"), Some(95));
    }

    #[test]
    fn tie_at_the_threshold_is_included() {
        // ranks 5 and 6 share 94 citations
        let pubs = (0..100)
            .map(|i| {
                let citations = if i == 94 { 95 } else { i };
                publication(&format!("p{i:03}"), citations, &[])
            })
            .collect();
        let hcas = identify_hcas(&corpus(vec![], pubs), 0.05);
        assert_eq!(hcas.len(), 6);
    }

    #[test]
    fn small_groups_and_uncited_groups_flag_nothing() {
        let small = (0..19).map(|i| publication(&format!("p{i}"), 100 + i, &[])).collect();
        assert!(identify_hcas(&corpus(vec![], small), 0.05).is_empty());

        let uncited = (0..40).map(|i| publication(&format!("p{i}"), 0, &[])).collect();
        assert!(identify_hcas(&corpus(vec![], uncited), 0.05).is_empty());
    }

    #[test]
    fn external_thresholds_override_corpus_groups() {
        let pubs: Vec<_> = (0..100).map(|i| publication(&format!("p{i:03}"), i, &[])).collect();
        let c = corpus(vec![], pubs);
        let mut external = ThresholdTable::default();
        external.insert(2005, "MATH", 90);
        let hcas = identify_hcas_with(&c, 0.05, Some(&external));
        assert_eq!(hcas.len(), 10);
    }

    #[test]
    fn multi_category_publication_qualifies_in_any_category() {
        let mut pubs: Vec<_> = (0..20).map(|i| publication(&format!("m{i:02}"), i, &[])).collect();
        for i in 0..20 {
            let mut p = publication(&format!("s{i:02}"), 100 + i, &[]);
            p.subject_categories = vec!["STAT".into()];
            pubs.push(p);
        }
        // top of MATH, bottom of STAT
        pubs[19].subject_categories.push("STAT".into());
        let hcas = identify_hcas(&corpus(vec![], pubs), 0.05);
        assert!(hcas.contains("m19"));
        assert!(hcas.contains("s19"));
    }

    #[test]
    fn rankings_survive_an_export_round_trip() {
        let results: Vec<_> = (0..5).map(|i| result(&format!("r{i}"), i as f64 * 0.1)).collect();
        let rankings = vec![rank_field("F", &results).unwrap()];
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rankings.csv");
        write_rankings(&path, &rankings).unwrap();
        let header = std::fs::read_to_string(&path).unwrap();
        assert!(header.starts_with("field_id,researcher_id,fss,percentile,is_ts\n"));
        assert_eq!(read_rankings(&path).unwrap(), rankings);
    }
}

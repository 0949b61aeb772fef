use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::IndicatorError;
use crate::artifact::{read_rows, write_rows, ArtifactError};
use crate::corpus::{Corpus, Publication};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Baseline {
    /// Mean citations over cited publications only; always positive.
    pub mean_citations: f64,
    pub n_cited: u64,
}

/// File row: `year,category,mean_citations,n_cited`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineRow {
    pub year: i32,
    pub category: String,
    pub mean_citations: f64,
    pub n_cited: u64,
}

/// Normalization denominators per (year, subject category).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BaselineTable {
    entries: BTreeMap<(i32, String), Baseline>,
}

impl BaselineTable {
    pub fn get(&self, year: i32, category: &str) -> Option<&Baseline> {
        self.entries.get(&(year, category.to_string()))
    }

    pub fn insert(&mut self, year: i32, category: impl Into<String>, baseline: Baseline) {
        self.entries.insert((year, category.into()), baseline);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, &str, &Baseline)> {
        self.entries
            .iter()
            .map(|((year, category), b)| (*year, category.as_str(), b))
    }

    pub fn to_rows(&self) -> Vec<BaselineRow> {
        self.iter()
            .map(|(year, category, b)| BaselineRow {
                year,
                category: category.to_string(),
                mean_citations: b.mean_citations,
                n_cited: b.n_cited,
            })
            .collect()
    }

    pub fn from_rows(rows: impl IntoIterator<Item = BaselineRow>) -> Self {
        let mut table = Self::default();
        for row in rows {
            table.insert(
                row.year,
                row.category,
                Baseline {
                    mean_citations: row.mean_citations,
                    n_cited: row.n_cited,
                },
            );
        }
        table
    }

    pub fn write(&self, path: &Path) -> Result<(), ArtifactError> {
        write_rows(path, &self.to_rows())
    }

    pub fn read(path: &Path) -> Result<Self, ArtifactError> {
        Ok(Self::from_rows(read_rows::<BaselineRow>(path)?))
    }
}

/// Mean citations per (year, category) over publications with at least one
/// citation. Pairs with no cited publication are absent.
pub fn compute_baselines(corpus: &Corpus) -> BaselineTable {
    let mut sums: BTreeMap<(i32, &str), (u128, u64)> = BTreeMap::new();
    for p in corpus.publications().iter().filter(|p| p.citations > 0) {
        let categories: BTreeSet<&str> = p.subject_categories.iter().map(String::as_str).collect();
        for category in categories {
            let entry = sums.entry((p.year, category)).or_default();
            entry.0 += u128::from(p.citations);
            entry.1 += 1;
        }
    }
    let mut table = BaselineTable::default();
    for ((year, category), (sum, n)) in sums {
        table.insert(
            year,
            category,
            Baseline {
                mean_citations: sum as f64 / n as f64,
                n_cited: n,
            },
        );
    }
    table
}

/// Citations divided by the publication's baseline. A publication listed in
/// several categories is normalized by the arithmetic mean of the baselines
/// available for them.
pub fn normalized_impact(publication: &Publication, baselines: &BaselineTable) -> Result<f64, IndicatorError> {
    if publication.citations == 0 {
        return Ok(0.0);
    }
    let categories: BTreeSet<&str> = publication.subject_categories.iter().map(String::as_str).collect();
    let means: Vec<f64> = categories
        .into_iter()
        .filter_map(|c| baselines.get(publication.year, c))
        .map(|b| b.mean_citations)
        .collect();
    if means.is_empty() {
        return Err(IndicatorError::MissingBaseline {
            publication: publication.id.clone(),
        });
    }
    let baseline = means.iter().sum::<f64>() / means.len() as f64;
    Ok(publication.citations as f64 / baseline)
}

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Context, Evaluated, TOTAL};
use crate::corpus::Corpus;
use crate::excellence::{FieldRanking, HcaSet};
use crate::stats::{bin_of, StatsError};

/// What one unit of authorship is.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuthorshipCounting {
    /// One count per (article, bin) pair.
    #[default]
    PerBin,
    /// One count per (article, author) pair.
    PerAuthor,
}

/// Highly-cited authorships over `k` percentile bins, bin 1 lowest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuthorshipDistribution {
    pub discipline_id: String,
    pub k: usize,
    pub n_hca: u64,
    pub frequencies: Vec<u64>,
}

impl AuthorshipDistribution {
    pub fn total(&self) -> u64 {
        self.frequencies.iter().sum()
    }

    /// Percent of all authorships in each bin.
    pub fn relative(&self) -> Vec<f64> {
        let total = self.total() as f64;
        self.frequencies
            .iter()
            .map(|&f| if total == 0.0 { 0.0 } else { 100.0 * f as f64 / total })
            .collect()
    }

    /// Running percent from bin 1 upwards; the last entry is exactly 100.
    pub fn cumulative(&self) -> Vec<f64> {
        let total = self.total();
        let mut running = 0;
        self.frequencies
            .iter()
            .map(|&f| {
                running += f;
                if total == 0 {
                    0.0
                } else {
                    100.0 * running as f64 / total as f64
                }
            })
            .collect()
    }

    fn add<'e>(&mut self, authors: impl Iterator<Item = &'e Evaluated<'e>>, counting: AuthorshipCounting) {
        let bins: Vec<usize> = authors.map(|e| bin_of(e.percentile, self.k)).collect();
        if bins.is_empty() {
            return;
        }
        self.n_hca += 1;
        match counting {
            AuthorshipCounting::PerBin => {
                for b in bins.into_iter().collect::<BTreeSet<_>>() {
                    self.frequencies[b - 1] += 1;
                }
            }
            AuthorshipCounting::PerAuthor => {
                for b in bins {
                    self.frequencies[b - 1] += 1;
                }
            }
        }
    }
}

/// Bins each discipline's highly-cited authorships by the within-field
/// percentile of the ranked authors. An article with authors in several
/// bins counts in each of them. Disciplines without highly-cited
/// authorships are omitted; the last entry is the cross-discipline total.
pub fn authorship_distribution(
    corpus: &Corpus,
    rankings: &[FieldRanking],
    hcas: &HcaSet,
    k: usize,
    counting: AuthorshipCounting,
) -> Result<Vec<AuthorshipDistribution>, StatsError> {
    if k < 2 {
        return Err(StatsError::TooFewBins(k));
    }
    let ctx = Context::new(corpus, rankings, hcas);
    let empty = |discipline: &str| AuthorshipDistribution {
        discipline_id: discipline.to_string(),
        k,
        n_hca: 0,
        frequencies: vec![0; k],
    };

    let mut out = Vec::new();
    for (discipline, pubs) in ctx.publications_by_discipline(true) {
        let mut dist = empty(discipline);
        for (_, authors) in pubs {
            dist.add(authors.iter().map(|id| &ctx.evaluated[id]), counting);
        }
        out.push(dist);
    }
    let mut total = empty(TOTAL);
    for p in ctx.hca_publications() {
        total.add(ctx.evaluated_authors(p).map(|(_, e)| e), counting);
    }
    if total.n_hca > 0 {
        out.push(total);
    }
    Ok(out)
}

//! Convergence between productivity excellence and highly-cited output.
//!
//! Every analysis reads the same three inputs: the corpus, the field
//! rankings of eligible researchers, and the highly-cited set. Only ranked
//! researchers take part; other roster authors and external co-authors are
//! ignored when attributing and classifying articles. A highly-cited article
//! belongs to every discipline that has at least one ranked author on it.

mod case_control;
mod correlation;
mod distribution;
mod overlap;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::corpus::{Corpus, Publication, Rank};
use crate::excellence::{FieldRanking, HcaSet};

pub use case_control::{rank_stratified_case_control, CaseControlReport, CaseControlRow};
pub use correlation::{
    correlation_analysis, field_point_biserial_inputs, CorrelationReport, DisciplineCorrelation,
    FieldCorrelation, STRONG_CORRELATION, WEAK_CORRELATION,
};
pub use distribution::{authorship_distribution, AuthorshipCounting, AuthorshipDistribution};
pub use overlap::{overlap_analysis, producer_analysis, OverlapReport, OverlapRow, ProducerReport, ProducerRow};

/// Label used for the cross-discipline row of each report.
pub const TOTAL: &str = "Total";

/// A ranked researcher as seen by the analyses.
#[derive(Clone, Debug)]
pub(crate) struct Evaluated<'a> {
    pub discipline: &'a str,
    pub rank: Rank,
    pub percentile: f64,
    pub is_ts: bool,
}

/// Shared lookups over (corpus, rankings, hcas).
pub(crate) struct Context<'a> {
    pub corpus: &'a Corpus,
    pub evaluated: HashMap<&'a str, Evaluated<'a>>,
    pub hcas: &'a HcaSet,
}

impl<'a> Context<'a> {
    pub fn new(corpus: &'a Corpus, rankings: &'a [FieldRanking], hcas: &'a HcaSet) -> Self {
        let mut evaluated = HashMap::new();
        for ranking in rankings {
            for r in ranking.iter() {
                if let Some(researcher) = corpus.researcher(&r.researcher_id) {
                    evaluated.insert(
                        researcher.id.as_str(),
                        Evaluated {
                            discipline: researcher.discipline_id.as_str(),
                            rank: researcher.rank,
                            percentile: r.percentile,
                            is_ts: r.is_top_scientist,
                        },
                    );
                }
            }
        }
        Self {
            corpus,
            evaluated,
            hcas,
        }
    }

    /// Ranked authors of a publication, in byline order.
    pub fn evaluated_authors<'p>(
        &'p self,
        publication: &'p Publication,
    ) -> impl Iterator<Item = (&'p str, &'p Evaluated<'a>)> + 'p {
        publication
            .roster_authors()
            .filter_map(move |id| self.evaluated.get(id).map(|e| (id, e)))
    }

    pub fn hca_publications(&self) -> impl Iterator<Item = &'a Publication> + '_ {
        self.corpus
            .publications()
            .iter()
            .filter(|p| self.hcas.contains(&p.id))
    }

    /// Disciplines that have at least one ranked researcher, sorted.
    pub fn disciplines(&self) -> BTreeSet<&'a str> {
        self.evaluated.values().map(|e| e.discipline).collect()
    }

    /// Researchers with one or more highly-cited publications.
    pub fn hca_authors(&self) -> BTreeSet<&'a str> {
        self.hca_publications()
            .flat_map(|p| p.roster_authors())
            .collect()
    }

    /// For every discipline, the publications that have at least one ranked
    /// author in it, each paired with those in-discipline authors.
    pub fn publications_by_discipline(
        &self,
        only_hcas: bool,
    ) -> BTreeMap<&'a str, Vec<(&'a Publication, Vec<&'a str>)>> {
        let mut out: BTreeMap<&'a str, Vec<(&'a Publication, Vec<&'a str>)>> = BTreeMap::new();
        for p in self.corpus.publications() {
            if only_hcas && !self.hcas.contains(&p.id) {
                continue;
            }
            let mut by_discipline: BTreeMap<&'a str, Vec<&'a str>> = BTreeMap::new();
            for id in p.roster_authors() {
                if let Some((key, e)) = self.evaluated.get_key_value(id) {
                    by_discipline.entry(e.discipline).or_default().push(key);
                }
            }
            for (discipline, authors) in by_discipline {
                out.entry(discipline).or_default().push((p, authors));
            }
        }
        out
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use std::collections::BTreeSet;

    use crate::corpus::{
        AuthorSlot, Corpus, DisciplinePolicy, Publication, Rank, Researcher, Window,
    };
    use crate::excellence::{rankings_from_rows, FieldRanking, HcaSet, RankingRow};

    /// Hand-built corpus with rankings and HCA flags set directly.
    #[derive(Default)]
    pub struct Fixture {
        researchers: Vec<Researcher>,
        rows: Vec<RankingRow>,
        publications: Vec<Publication>,
        hcas: BTreeSet<String>,
    }

    impl Fixture {
        pub fn new() -> Self {
            Self::default()
        }

        /// Ranked researcher in field `<discipline>-F`; top scientists sit
        /// at percentile 100, others at 0.
        pub fn researcher(&mut self, id: &str, discipline: &str, is_ts: bool) {
            let p = if is_ts { 100.0 } else { 0.0 };
            self.ranked(id, discipline, Rank::Assistant, p / 100.0, p, is_ts);
        }

        pub fn ranked(
            &mut self,
            id: &str,
            discipline: &str,
            rank: Rank,
            fss: f64,
            percentile: f64,
            is_ts: bool,
        ) {
            let field = format!("{discipline}-F");
            self.unranked(id, &field, discipline, rank);
            self.rows.push(RankingRow {
                field_id: field,
                researcher_id: id.into(),
                fss,
                percentile,
                is_ts,
            });
        }

        pub fn unranked(&mut self, id: &str, field: &str, discipline: &str, rank: Rank) {
            self.researchers.push(Researcher {
                id: id.into(),
                field_id: field.into(),
                discipline_id: discipline.into(),
                rank,
                active_years: 5,
                organization_id: "U".into(),
            });
        }

        pub fn paper(&mut self, id: &str, authors: &[&str]) {
            let byline = authors
                .iter()
                .enumerate()
                .map(|(i, a)| AuthorSlot {
                    position: i as u32 + 1,
                    researcher_id: (*a != "-").then(|| a.to_string()),
                    organization_id: "U".into(),
                })
                .collect();
            self.publications.push(Publication {
                id: id.into(),
                year: 2005,
                citations: 1,
                subject_categories: vec!["C".into()],
                byline,
            });
        }

        pub fn hca(&mut self, id: &str, authors: &[&str]) {
            self.paper(id, authors);
            self.hcas.insert(id.into());
        }

        pub fn corpus(&self) -> Corpus {
            Corpus::new(
                self.researchers.clone(),
                self.publications.clone(),
                Window::new(2004, 2008),
                DisciplinePolicy::default(),
            )
        }

        pub fn rankings(&self) -> Vec<FieldRanking> {
            rankings_from_rows(self.rows.clone())
        }

        pub fn hcas(&self) -> HcaSet {
            HcaSet {
                publications: self.hcas.clone(),
                ..HcaSet::default()
            }
        }
    }

    #[test]
    fn context_ignores_unranked_and_external_authors() {
        let mut f = Fixture::new();
        f.researcher("a", "D1", true);
        f.unranked("u", "D1-F", "D1", Rank::Full);
        f.hca("h", &["u", "-", "a"]);
        let (corpus, rankings, hcas) = (f.corpus(), f.rankings(), f.hcas());
        let ctx = super::Context::new(&corpus, &rankings, &hcas);
        let p = &corpus.publications()[0];
        let ids: Vec<&str> = ctx.evaluated_authors(p).map(|(id, _)| id).collect();
        assert_eq!(ids, ["a"]);
        let by = ctx.publications_by_discipline(true);
        assert_eq!(by["D1"][0].1, ["a"]);
    }
}

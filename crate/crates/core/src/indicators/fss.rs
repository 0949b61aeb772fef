use serde::{Deserialize, Serialize};

use super::{fractional_weights, normalized_impact, BaselineTable, IndicatorError, WeightScheme};
use crate::corpus::{Corpus, Researcher};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FssResult {
    pub researcher_id: String,
    pub fss: f64,
    /// Publications on which the researcher appears, cited or not.
    pub n_publications: usize,
    pub active_years: u32,
}

/// Yearly fractional scientific strength of one researcher.
///
/// The weighting scheme comes from the corpus policy for the researcher's
/// discipline. Uncited publications add nothing to the sum but still count
/// in `n_publications`.
pub fn compute_fss(
    researcher: &Researcher,
    corpus: &Corpus,
    baselines: &BaselineTable,
) -> Result<FssResult, IndicatorError> {
    if researcher.active_years == 0 {
        return Err(IndicatorError::ZeroActiveYears {
            researcher: researcher.id.clone(),
        });
    }
    let scheme = WeightScheme::from(corpus.discipline_policy().scheme_for(&researcher.discipline_id));
    let publications = corpus.publications();
    let authorships = corpus.authorships_of(&researcher.id);

    let mut total = 0.0;
    for a in authorships {
        let publication = &publications[a.publication];
        let impact = normalized_impact(publication, baselines)?;
        if impact == 0.0 {
            continue;
        }
        let weights = fractional_weights(&publication.byline, &scheme)?;
        total += impact * weights[a.slot];
    }

    Ok(FssResult {
        researcher_id: researcher.id.clone(),
        fss: total / f64::from(researcher.active_years),
        n_publications: corpus.publication_count(&researcher.id),
        active_years: researcher.active_years,
    })
}

/// FSS for every researcher in the corpus, in researcher-id order.
pub fn compute_all_fss(
    corpus: &Corpus,
    baselines: &BaselineTable,
) -> Result<Vec<FssResult>, IndicatorError> {
    corpus
        .researchers()
        .iter()
        .map(|r| compute_fss(r, corpus, baselines))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{AuthorSlot, DisciplinePolicy, Publication, Rank, Window};
    use crate::indicators::{compute_baselines, Baseline, SchemeId};

    fn researcher(id: &str, discipline: &str, active_years: u32) -> Researcher {
        Researcher {
            id: id.into(),
            field_id: format!("{discipline}/F"),
            discipline_id: discipline.into(),
            rank: Rank::Full,
            active_years,
            organization_id: "U1".into(),
        }
    }

    fn publication(id: &str, citations: u64, category: &str, authors: &[Option<&str>]) -> Publication {
        Publication {
            id: id.into(),
            year: 2006,
            citations,
            subject_categories: vec![category.into()],
            byline: authors
                .iter()
                .enumerate()
                .map(|(i, a)| AuthorSlot {
                    position: i as u32 + 1,
                    researcher_id: a.map(String::from),
                    organization_id: format!("U{i}"),
                })
                .collect(),
        }
    }

    #[test]
    fn sole_author_at_baseline_over_five_years() {
        let corpus = Corpus::new(
            vec![researcher("r", "01", 5)],
            vec![publication("p", 7, "MATH", &[Some("r")])],
            Window::new(2004, 2008),
            DisciplinePolicy::default(),
        );
        let baselines = compute_baselines(&corpus);
        let result = compute_fss(&corpus.researchers()[0], &corpus, &baselines).unwrap();
        assert_eq!(result.fss, 0.2);
        assert_eq!(result.n_publications, 1);
    }

    #[test]
    fn researcher_without_publications_scores_zero() {
        let corpus = Corpus::new(
            vec![researcher("r", "01", 3)],
            vec![],
            Window::new(2004, 2008),
            DisciplinePolicy::default(),
        );
        let result = compute_fss(&corpus.researchers()[0], &corpus, &BaselineTable::default()).unwrap();
        assert_eq!((result.fss, result.n_publications), (0.0, 0));
    }

    #[test]
    fn three_publication_hand_corpus() {
        // citations 4, 0, 9 against baselines 4.0, none, 3.0 with 2, 1 and 3 authors
        let corpus = Corpus::new(
            vec![researcher("r", "01", 4)],
            vec![
                publication("p1", 4, "A", &[Some("r"), None]),
                publication("p2", 0, "B", &[Some("r")]),
                publication("p3", 9, "C", &[None, Some("r"), None]),
            ],
            Window::new(2004, 2008),
            DisciplinePolicy::default(),
        );
        let mut baselines = BaselineTable::default();
        baselines.insert(2006, "A", Baseline { mean_citations: 4.0, n_cited: 1 });
        baselines.insert(2006, "C", Baseline { mean_citations: 3.0, n_cited: 4 });
        let result = compute_fss(&corpus.researchers()[0], &corpus, &baselines).unwrap();
        assert_eq!(result.fss, 0.375);
        assert_eq!(result.n_publications, 3);
    }

    #[test]
    fn discipline_policy_selects_byline_weights() {
        let authors = [Some("first"), None, None, None, Some("last")];
        let mut p = publication("p", 10, "A", &authors);
        p.byline[4].organization_id = p.byline[0].organization_id.clone();
        let mut policy = DisciplinePolicy::default();
        policy.disciplines.insert("05".into(), SchemeId::BylineWeighted);
        let corpus = Corpus::new(
            vec![researcher("first", "05", 1), researcher("last", "01", 1)],
            vec![p],
            Window::new(2004, 2008),
            policy,
        );
        let baselines = compute_baselines(&corpus);
        let first = compute_fss(corpus.researcher("first").unwrap(), &corpus, &baselines).unwrap();
        let last = compute_fss(corpus.researcher("last").unwrap(), &corpus, &baselines).unwrap();
        assert!((first.fss - 0.40).abs() < 1e-15);
        assert!((last.fss - 0.20).abs() < 1e-15);
    }

    #[test]
    fn zero_active_years_is_rejected() {
        let corpus = Corpus::new(
            vec![researcher("r", "01", 0)],
            vec![],
            Window::new(2004, 2008),
            DisciplinePolicy::default(),
        );
        assert!(matches!(
            compute_fss(&corpus.researchers()[0], &corpus, &BaselineTable::default()),
            Err(IndicatorError::ZeroActiveYears { .. })
        ));
    }
}

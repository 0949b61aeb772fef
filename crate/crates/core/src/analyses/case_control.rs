use serde::Serialize;

use super::Context;
use crate::corpus::{Corpus, Rank};
use crate::excellence::{FieldRanking, HcaSet};
use crate::stats::{
    homogeneity_test_with, odds_ratio, ContingencyTable, HomogeneityMethod, HomogeneityResult,
    OddsRatioResult, StatsError,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseControlRow {
    pub discipline_id: String,
    pub rank: Rank,
    pub contingency: ContingencyTable,
    /// `None` for a stratum without cases or without controls.
    pub or_result: Option<OddsRatioResult>,
}

impl CaseControlRow {
    pub fn is_degenerate(&self) -> bool {
        self.or_result.is_none()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseControlReport {
    pub rank: Rank,
    pub rows: Vec<CaseControlRow>,
    /// Across the non-degenerate strata; an error when fewer than two remain.
    pub homogeneity: Result<HomogeneityResult, StatsError>,
}

/// Per discipline, ranked researchers of one academic rank split by
/// top-scientist status (exposure) and highly-cited authorship (case).
pub fn rank_stratified_case_control(
    corpus: &Corpus,
    rankings: &[FieldRanking],
    hcas: &HcaSet,
    rank: Rank,
    method: HomogeneityMethod,
) -> CaseControlReport {
    let ctx = Context::new(corpus, rankings, hcas);
    let hca_authors = ctx.hca_authors();
    let mut rows: Vec<CaseControlRow> = ctx
        .disciplines()
        .into_iter()
        .map(|d| CaseControlRow {
            discipline_id: d.to_string(),
            rank,
            contingency: ContingencyTable::default(),
            or_result: None,
        })
        .collect();
    for (id, e) in ctx.evaluated.iter().filter(|(_, e)| e.rank == rank) {
        let i = rows
            .binary_search_by(|r| r.discipline_id.as_str().cmp(e.discipline))
            .expect("discipline listed");
        let t = &mut rows[i].contingency;
        match (hca_authors.contains(id), e.is_ts) {
            (true, true) => t.a += 1,
            (true, false) => t.b += 1,
            (false, true) => t.c += 1,
            (false, false) => t.d += 1,
        }
    }
    for row in &mut rows {
        row.or_result = odds_ratio(&row.contingency).ok();
    }
    let strata: Vec<ContingencyTable> = rows
        .iter()
        .filter(|r| !r.is_degenerate())
        .map(|r| r.contingency)
        .collect();
    CaseControlReport {
        rank,
        homogeneity: homogeneity_test_with(&strata, method),
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyses::tests::Fixture;

    /// Adds researchers in the four cells of `table` to `discipline`.
    fn plant(f: &mut Fixture, discipline: &str, rank: Rank, t: ContingencyTable) {
        let cells = [(t.a, true, true), (t.b, false, true), (t.c, true, false), (t.d, false, false)];
        for (count, is_ts, case) in cells {
            for i in 0..count {
                let id = format!("{discipline}-{rank}-{is_ts}-{case}-{i}");
                f.ranked(&id, discipline, rank, 0.0, if is_ts { 100.0 } else { 0.0 }, is_ts);
                if case {
                    f.hca(&format!("{id}-h"), &[&id]);
                }
            }
        }
    }

    fn run(f: &Fixture, rank: Rank) -> CaseControlReport {
        rank_stratified_case_control(&f.corpus(), &f.rankings(), &f.hcas(), rank, HomogeneityMethod::Woolf)
    }

    #[test]
    fn medicine_assistant_professors() {
        let mut f = Fixture::new();
        plant(&mut f, "MED", Rank::Assistant, ContingencyTable::new(51, 571, 12, 3963));
        let report = run(&f, Rank::Assistant);
        let or = report.rows[0].or_result.unwrap();
        assert!((or.or_value - 29.496_935_201_401).abs() < 1e-9);
        assert_eq!(report.rows[0].contingency.total(), 4597);
        assert_eq!(report.homogeneity, Err(StatsError::TooFewStrata(1)));
    }

    #[test]
    fn identical_strata_are_homogeneous() {
        let mut f = Fixture::new();
        let t = ContingencyTable::new(4, 6, 3, 17);
        for d in ["D1", "D2", "D3"] {
            plant(&mut f, d, Rank::Full, t);
        }
        let h = run(&f, Rank::Full).homogeneity.unwrap();
        assert!(h.chi_square.abs() < 1e-12);
        assert_eq!(h.degrees_of_freedom, 2);
    }

    #[test]
    fn other_ranks_are_not_counted() {
        let mut f = Fixture::new();
        plant(&mut f, "D1", Rank::Full, ContingencyTable::new(2, 2, 2, 2));
        plant(&mut f, "D1", Rank::Associate, ContingencyTable::new(1, 1, 1, 1));
        let report = run(&f, Rank::Associate);
        assert_eq!(report.rows[0].contingency, ContingencyTable::new(1, 1, 1, 1));
    }

    #[test]
    fn stratum_without_cases_is_marked_and_skipped() {
        let mut f = Fixture::new();
        plant(&mut f, "D1", Rank::Full, ContingencyTable::new(0, 0, 3, 9));
        plant(&mut f, "D2", Rank::Full, ContingencyTable::new(2, 3, 1, 9));
        plant(&mut f, "D3", Rank::Full, ContingencyTable::new(3, 2, 2, 8));
        let report = run(&f, Rank::Full);
        assert!(report.rows[0].is_degenerate());
        assert!(!report.rows[1].is_degenerate());
        assert_eq!(report.homogeneity.unwrap().degrees_of_freedom, 1);
    }
}

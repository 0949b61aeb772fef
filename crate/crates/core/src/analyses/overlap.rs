use std::collections::BTreeSet;

use serde::Serialize;

use super::{Context, TOTAL};
use crate::corpus::Corpus;
use crate::excellence::{FieldRanking, HcaSet};

/// Who authored a discipline's highly-cited articles. Counts are exact;
/// shares are derived from them.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OverlapRow {
    pub discipline_id: String,
    pub n_hca: u64,
    /// Publications with at least one ranked author in the discipline.
    pub n_output: u64,
    pub n_with_ts: u64,
    pub n_ts_only: u64,
    pub n_with_nonts: u64,
    pub n_nonts_only: u64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl OverlapRow {
    pub fn n_mixed(&self) -> u64 {
        self.n_with_ts - self.n_ts_only
    }

    pub fn hca_share_of_output(&self) -> f64 {
        ratio(self.n_hca, self.n_output)
    }

    pub fn share_with_ts(&self) -> f64 {
        ratio(self.n_with_ts, self.n_hca)
    }

    pub fn share_ts_only(&self) -> f64 {
        ratio(self.n_ts_only, self.n_hca)
    }

    pub fn share_with_nonts(&self) -> f64 {
        ratio(self.n_with_nonts, self.n_hca)
    }

    pub fn share_nonts_only(&self) -> f64 {
        ratio(self.n_nonts_only, self.n_hca)
    }

    pub fn share_mixed(&self) -> f64 {
        ratio(self.n_mixed(), self.n_hca)
    }

    fn classify(&mut self, ts_flags: impl Iterator<Item = bool>) {
        let (mut ts, mut nonts) = (0, 0);
        for is_ts in ts_flags {
            if is_ts {
                ts += 1;
            } else {
                nonts += 1;
            }
        }
        if ts + nonts == 0 {
            return;
        }
        self.n_hca += 1;
        if ts > 0 {
            self.n_with_ts += 1;
        }
        if nonts > 0 {
            self.n_with_nonts += 1;
        }
        if nonts == 0 {
            self.n_ts_only += 1;
        }
        if ts == 0 {
            self.n_nonts_only += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OverlapReport {
    pub rows: Vec<OverlapRow>,
    /// Each article counted once, classified over all its ranked authors.
    pub total: OverlapRow,
}

/// Splits each discipline's highly-cited articles by whether their ranked
/// in-discipline authors are all top scientists, none are, or both kinds
/// appear.
pub fn overlap_analysis(corpus: &Corpus, rankings: &[FieldRanking], hcas: &HcaSet) -> OverlapReport {
    let ctx = Context::new(corpus, rankings, hcas);
    let mut rows = Vec::new();
    for (discipline, pubs) in ctx.publications_by_discipline(false) {
        let mut row = OverlapRow {
            discipline_id: discipline.to_string(),
            n_output: pubs.len() as u64,
            ..OverlapRow::default()
        };
        for (p, authors) in pubs.iter().filter(|(p, _)| hcas.contains(&p.id)) {
            let _ = p;
            row.classify(authors.iter().map(|id| ctx.evaluated[id].is_ts));
        }
        rows.push(row);
    }

    let mut total = OverlapRow {
        discipline_id: TOTAL.to_string(),
        ..OverlapRow::default()
    };
    for p in corpus.publications() {
        let flags: Vec<bool> = ctx.evaluated_authors(p).map(|(_, e)| e.is_ts).collect();
        if flags.is_empty() {
            continue;
        }
        total.n_output += 1;
        if hcas.contains(&p.id) {
            total.classify(flags.into_iter());
        }
    }
    OverlapReport { rows, total }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProducerRow {
    pub discipline_id: String,
    pub n_ts: u64,
    pub n_ts_with_hca: u64,
    pub n_nonts: u64,
    pub n_nonts_with_hca: u64,
}

impl ProducerRow {
    pub fn share_ts_with_hca(&self) -> f64 {
        ratio(self.n_ts_with_hca, self.n_ts)
    }

    pub fn share_nonts_with_hca(&self) -> f64 {
        ratio(self.n_nonts_with_hca, self.n_nonts)
    }

    fn add(&mut self, is_ts: bool, has_hca: bool) {
        match (is_ts, has_hca) {
            (true, h) => {
                self.n_ts += 1;
                self.n_ts_with_hca += h as u64;
            }
            (false, h) => {
                self.n_nonts += 1;
                self.n_nonts_with_hca += h as u64;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProducerReport {
    pub rows: Vec<ProducerRow>,
    pub total: ProducerRow,
}

/// Counts top scientists and other ranked researchers with at least one
/// highly-cited article, per discipline.
pub fn producer_analysis(corpus: &Corpus, rankings: &[FieldRanking], hcas: &HcaSet) -> ProducerReport {
    let ctx = Context::new(corpus, rankings, hcas);
    let hca_authors: BTreeSet<&str> = ctx.hca_authors();
    let mut rows: Vec<ProducerRow> = ctx
        .disciplines()
        .into_iter()
        .map(|d| ProducerRow {
            discipline_id: d.to_string(),
            ..ProducerRow::default()
        })
        .collect();
    let mut total = ProducerRow {
        discipline_id: TOTAL.to_string(),
        ..ProducerRow::default()
    };
    for (id, e) in &ctx.evaluated {
        let has_hca = hca_authors.contains(id);
        let i = rows
            .binary_search_by(|r| r.discipline_id.as_str().cmp(e.discipline))
            .expect("discipline listed");
        rows[i].add(e.is_ts, has_hca);
        total.add(e.is_ts, has_hca);
    }
    ProducerReport { rows, total }
}

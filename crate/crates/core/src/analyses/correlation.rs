use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::Context;
use crate::corpus::Corpus;
use crate::excellence::{FieldRanking, HcaSet};
use crate::stats::{point_biserial, PointBiserialInputs};

/// Correlations at or below this count as weak.
pub const WEAK_CORRELATION: f64 = 0.3;
/// Correlations at or above this count as strong.
pub const STRONG_CORRELATION: f64 = 0.6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldCorrelation {
    pub field_id: String,
    pub discipline_id: String,
    pub n_researchers: usize,
    pub n_hca_authors: usize,
    /// `None` when only one class is present or FSS does not vary.
    pub r: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DisciplineCorrelation {
    pub discipline_id: String,
    pub n_fields: usize,
    pub n_defined: usize,
    pub n_weak: usize,
    pub n_strong: usize,
    pub mean: Option<f64>,
    pub min: Option<(String, f64)>,
    pub max: Option<(String, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub fields: Vec<FieldCorrelation>,
    pub disciplines: Vec<DisciplineCorrelation>,
}

/// FSS values paired with "authored at least one highly-cited article",
/// in researcher-id order.
pub fn field_point_biserial_inputs(
    ranking: &FieldRanking,
    hca_authors: &BTreeSet<&str>,
) -> (Vec<f64>, Vec<bool>) {
    ranking
        .iter()
        .map(|r| (r.fss, hca_authors.contains(r.researcher_id.as_str())))
        .unzip()
}

/// Point-biserial correlation between FSS and HCA authorship in each field,
/// summarised per discipline.
pub fn correlation_analysis(
    corpus: &Corpus,
    rankings: &[FieldRanking],
    hcas: &HcaSet,
) -> CorrelationReport {
    let ctx = Context::new(corpus, rankings, hcas);
    let hca_authors = ctx.hca_authors();

    let mut fields = Vec::new();
    for ranking in rankings {
        let Some(discipline) = ranking
            .iter()
            .find_map(|r| ctx.evaluated.get(r.researcher_id.as_str()))
            .map(|e| e.discipline.to_string())
        else {
            continue;
        };
        let (values, dummies) = field_point_biserial_inputs(ranking, &hca_authors);
        let n_hca_authors = dummies.iter().filter(|&&d| d).count();
        let r = PointBiserialInputs::new(values, dummies)
            .and_then(|inputs| point_biserial(&inputs))
            .ok();
        fields.push(FieldCorrelation {
            field_id: ranking.field_id.clone(),
            discipline_id: discipline,
            n_researchers: ranking.len(),
            n_hca_authors,
            r,
        });
    }

    let mut grouped: BTreeMap<&str, Vec<&FieldCorrelation>> = BTreeMap::new();
    for f in &fields {
        grouped.entry(&f.discipline_id).or_default().push(f);
    }
    let disciplines = grouped
        .into_iter()
        .map(|(discipline, list)| summarise(discipline, &list))
        .collect();
    CorrelationReport { fields, disciplines }
}

fn summarise(discipline: &str, fields: &[&FieldCorrelation]) -> DisciplineCorrelation {
    let defined: Vec<(&str, f64)> = fields
        .iter()
        .filter_map(|f| f.r.map(|r| (f.field_id.as_str(), r)))
        .collect();
    let pick = |better: fn(f64, f64) -> bool| {
        defined
            .iter()
            .copied()
            .reduce(|best, x| if better(x.1, best.1) { x } else { best })
            .map(|(id, r)| (id.to_string(), r))
    };
    DisciplineCorrelation {
        discipline_id: discipline.to_string(),
        n_fields: fields.len(),
        n_defined: defined.len(),
        n_weak: defined.iter().filter(|(_, r)| *r <= WEAK_CORRELATION).count(),
        n_strong: defined.iter().filter(|(_, r)| *r >= STRONG_CORRELATION).count(),
        mean: (!defined.is_empty())
            .then(|| defined.iter().map(|(_, r)| r).sum::<f64>() / defined.len() as f64),
        min: pick(|x, best| x < best),
        max: pick(|x, best| x > best),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyses::tests::Fixture;
    use crate::corpus::Rank;

    fn four_researcher_field(f: &mut Fixture, discipline: &str, hca_holders: &[usize]) {
        for i in 1..=4 {
            let id = format!("{discipline}r{i}");
            f.ranked(&id, discipline, Rank::Full, i as f64, 100.0 * (i - 1) as f64 / 3.0, false);
            if hca_holders.contains(&i) {
                f.hca(&format!("{id}-h"), &[&id]);
            } else {
                f.paper(&format!("{id}-p"), &[&id]);
            }
        }
    }

    #[test]
    fn top_half_hca_authors_give_the_textbook_value() {
        let mut f = Fixture::new();
        four_researcher_field(&mut f, "D1", &[3, 4]);
        let report = correlation_analysis(&f.corpus(), &f.rankings(), &f.hcas());
        let r = report.fields[0].r.unwrap();
        assert!((r - 0.894_427_190_999_915_9).abs() < 1e-12);
        assert_eq!(report.disciplines[0].n_strong, 1);
    }

    #[test]
    fn values_match_the_kernel_bit_for_bit() {
        let mut f = Fixture::new();
        four_researcher_field(&mut f, "D1", &[1, 4]);
        let (corpus, rankings, hcas) = (f.corpus(), f.rankings(), f.hcas());
        let report = correlation_analysis(&corpus, &rankings, &hcas);
        let authors = Context::new(&corpus, &rankings, &hcas).hca_authors();
        let (v, d) = field_point_biserial_inputs(&rankings[0], &authors);
        let direct = point_biserial(&PointBiserialInputs::new(v, d).unwrap()).unwrap();
        assert_eq!(report.fields[0].r.unwrap().to_bits(), direct.to_bits());
    }

    #[test]
    fn field_without_hca_authors_is_undefined_and_left_out_of_extrema() {
        let mut f = Fixture::new();
        four_researcher_field(&mut f, "D1", &[]);
        let report = correlation_analysis(&f.corpus(), &f.rankings(), &f.hcas());
        assert_eq!(report.fields[0].r, None);
        let d = &report.disciplines[0];
        assert_eq!((d.n_fields, d.n_defined), (1, 0));
        assert_eq!((d.min.clone(), d.max.clone(), d.mean), (None, None, None));
    }

    #[test]
    fn summary_extrema_come_from_the_field_list() {
        let mut f = Fixture::new();
        for (i, holders) in [&[4][..], &[3, 4], &[1], &[2, 3]].iter().enumerate() {
            // distinct fields inside one discipline
            let d = format!("X{i}");
            four_researcher_field(&mut f, &d, holders);
        }
        let (corpus, mut rankings, hcas) = (f.corpus(), f.rankings(), f.hcas());
        // relabel every field's researchers under D1
        let corpus = {
            let researchers = corpus
                .researchers()
                .iter()
                .cloned()
                .map(|mut r| {
                    r.discipline_id = "D1".into();
                    r
                })
                .collect();
            Corpus::new(
                researchers,
                corpus.publications().to_vec(),
                corpus.window(),
                corpus.discipline_policy().clone(),
            )
        };
        rankings.sort_by(|a, b| a.field_id.cmp(&b.field_id));
        let report = correlation_analysis(&corpus, &rankings, &hcas);
        let rs: Vec<f64> = report.fields.iter().filter_map(|f| f.r).collect();
        let d = &report.disciplines[0];
        assert_eq!(d.n_fields, 4);
        let lo = rs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = rs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(d.min.as_ref().unwrap().1, lo);
        assert_eq!(d.max.as_ref().unwrap().1, hi);
        assert_eq!(d.n_weak, rs.iter().filter(|&&r| r <= 0.3).count());
    }
}

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::Serialize;

use super::Corpus;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "type", content = "id", rename_all = "snake_case")]
pub enum EntityRef {
    Researcher(String),
    Publication(String),
    Corpus,
}

impl fmt::Display for EntityRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntityRef::Researcher(id) => write!(f, "researcher {id}"),
            EntityRef::Publication(id) => write!(f, "publication {id}"),
            EntityRef::Corpus => f.write_str("corpus"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    InvalidWindow,
    DuplicateResearcherId,
    ActiveYearsOutOfRange,
    FieldInSeveralDisciplines,
    DuplicatePublicationId,
    YearOutsideWindow,
    EmptySubjectCategories,
    EmptyByline,
    BylinePositionGap,
    DuplicateAuthorInByline,
    UnknownResearcher,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub entity: EntityRef,
    pub kind: ViolationKind,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.entity, self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    fn push(&mut self, entity: EntityRef, kind: ViolationKind, message: String) {
        self.violations.push(Violation {
            entity,
            kind,
            message,
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Lists every invariant violation in the corpus. Violations are data: the
/// report is empty iff the corpus is well formed.
pub fn validate_corpus(corpus: &Corpus) -> ValidationReport {
    let mut report = ValidationReport::default();
    let window = corpus.window();
    let window_len = window.len();

    if window.is_empty() {
        report.push(
            EntityRef::Corpus,
            ViolationKind::InvalidWindow,
            format!(
                "window {}..{} is empty",
                window.start_year, window.end_year
            ),
        );
    }

    let mut seen = HashSet::new();
    let mut field_discipline: BTreeMap<&str, &str> = BTreeMap::new();
    for r in corpus.researchers() {
        let entity = || EntityRef::Researcher(r.id.clone());
        if !seen.insert(r.id.as_str()) {
            report.push(
                entity(),
                ViolationKind::DuplicateResearcherId,
                "researcher id appears more than once".into(),
            );
        }
        if r.active_years < 1 || r.active_years > window_len {
            report.push(
                entity(),
                ViolationKind::ActiveYearsOutOfRange,
                format!(
                    "active_years = {} is outside 1..={window_len}",
                    r.active_years
                ),
            );
        }
        match field_discipline.get(r.field_id.as_str()) {
            Some(&d) if d != r.discipline_id => report.push(
                entity(),
                ViolationKind::FieldInSeveralDisciplines,
                format!(
                    "field {} is assigned to discipline {} here but {} elsewhere",
                    r.field_id, r.discipline_id, d
                ),
            ),
            Some(_) => {}
            None => {
                field_discipline.insert(&r.field_id, &r.discipline_id);
            }
        }
    }

    let mut seen = HashSet::new();
    for p in corpus.publications() {
        let entity = || EntityRef::Publication(p.id.clone());
        if !seen.insert(p.id.as_str()) {
            report.push(
                entity(),
                ViolationKind::DuplicatePublicationId,
                "publication id appears more than once".into(),
            );
        }
        if !window.contains(p.year) {
            report.push(
                entity(),
                ViolationKind::YearOutsideWindow,
                format!(
                    "year {} is outside {}..={}",
                    p.year, window.start_year, window.end_year
                ),
            );
        }
        if p.subject_categories.is_empty() {
            report.push(
                entity(),
                ViolationKind::EmptySubjectCategories,
                "no subject categories".into(),
            );
        }
        if p.byline.is_empty() {
            report.push(entity(), ViolationKind::EmptyByline, "empty byline".into());
            continue;
        }
        let positions_ok = p
            .byline
            .iter()
            .enumerate()
            .all(|(i, s)| s.position as usize == i + 1);
        if !positions_ok {
            let positions: Vec<String> =
                p.byline.iter().map(|s| s.position.to_string()).collect();
            report.push(
                entity(),
                ViolationKind::BylinePositionGap,
                format!(
                    "byline positions [{}] are not 1..={}",
                    positions.join(","),
                    p.byline.len()
                ),
            );
        }
        let mut authors = HashSet::new();
        let mut duplicated = Vec::new();
        for id in p.roster_authors() {
            if !authors.insert(id) && !duplicated.contains(&id) {
                duplicated.push(id);
            }
            if corpus.researcher(id).is_none() {
                report.push(
                    entity(),
                    ViolationKind::UnknownResearcher,
                    format!("byline references unknown researcher {id}"),
                );
            }
        }
        if !duplicated.is_empty() {
            report.push(
                entity(),
                ViolationKind::DuplicateAuthorInByline,
                format!("researcher(s) {} appear twice", duplicated.join(",")),
            );
        }
    }

    report
}

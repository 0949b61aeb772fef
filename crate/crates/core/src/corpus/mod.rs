//! Domain model for an evaluated research population and its publication record.
//!
//! A [`Corpus`] is immutable once built. Loading goes through [`load_corpus`],
//! which rejects referential and structural problems with the offending file
//! and line; [`read_corpus_unchecked`] parses the same files without those
//! checks so that [`validate_corpus`] can report every violation at once.

mod io;
mod validate;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::indicators::SchemeId;

pub use io::{
    format_byline, load_corpus, parse_byline, read_corpus_unchecked, write_publications, write_researchers, IngestConfig,
    LoadError,
};
pub use validate::{validate_corpus, EntityRef, ValidationReport, Violation, ViolationKind};

/// Academic rank. `Unspecified` rows take part in every analysis except the
/// rank-stratified case-control tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rank {
    Assistant,
    Associate,
    Full,
    Unspecified,
}

impl Rank {
    pub const EVALUATED: [Rank; 3] = [Rank::Assistant, Rank::Associate, Rank::Full];

    pub fn as_str(self) -> &'static str {
        match self {
            Rank::Assistant => "assistant",
            Rank::Associate => "associate",
            Rank::Full => "full",
            Rank::Unspecified => "unspecified",
        }
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Rank {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "assistant" => Ok(Rank::Assistant),
            "associate" => Ok(Rank::Associate),
            "full" => Ok(Rank::Full),
            "unspecified" | "" => Ok(Rank::Unspecified),
            other => Err(format!("unknown rank `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Researcher {
    pub id: String,
    /// Fine-grained research field; the unit of productivity comparison.
    pub field_id: String,
    /// Discipline grouping of fields; the unit of reporting.
    pub discipline_id: String,
    pub rank: Rank,
    /// Years of activity inside the observation window.
    pub active_years: u32,
    pub organization_id: String,
}

/// One position in a publication's byline. External co-authors carry no
/// researcher id but still count toward the byline length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorSlot {
    pub position: u32,
    pub researcher_id: Option<String>,
    pub organization_id: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Publication {
    pub id: String,
    pub year: i32,
    pub citations: u64,
    pub subject_categories: Vec<String>,
    pub byline: Vec<AuthorSlot>,
}

impl Publication {
    /// Roster researcher ids in byline order.
    pub fn roster_authors(&self) -> impl Iterator<Item = &str> {
        self.byline
            .iter()
            .filter_map(|slot| slot.researcher_id.as_deref())
    }
}

/// Inclusive observation window in calendar years.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub start_year: i32,
    pub end_year: i32,
}

impl Window {
    pub fn new(start_year: i32, end_year: i32) -> Self {
        Self {
            start_year,
            end_year,
        }
    }

    pub fn contains(&self, year: i32) -> bool {
        (self.start_year..=self.end_year).contains(&year)
    }

    /// Number of calendar years covered; zero for an inverted window.
    pub fn len(&self) -> u32 {
        if self.end_year < self.start_year {
            0
        } else {
            (self.end_year - self.start_year + 1) as u32
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Which weighting scheme each discipline uses, with a fallback.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisciplinePolicy {
    #[serde(default)]
    pub default: SchemeId,
    #[serde(default)]
    pub disciplines: BTreeMap<String, SchemeId>,
}

impl DisciplinePolicy {
    pub fn scheme_for(&self, discipline_id: &str) -> SchemeId {
        self.disciplines
            .get(discipline_id)
            .copied()
            .unwrap_or(self.default)
    }
}

/// A researcher's appearance on a publication: indices into
/// [`Corpus::publications`] and that publication's byline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Authorship {
    pub publication: usize,
    pub slot: usize,
}

/// The evaluated population and its publications over one window.
///
/// Researchers and publications are held sorted by id, so construction does
/// not depend on input row order.
#[derive(Clone, Debug)]
pub struct Corpus {
    researchers: Vec<Researcher>,
    publications: Vec<Publication>,
    window: Window,
    policy: DisciplinePolicy,
    researcher_index: HashMap<String, usize>,
    authorships: HashMap<String, Vec<Authorship>>,
}

impl Corpus {
    /// Builds the corpus and its lookup indices without checking invariants;
    /// run [`validate_corpus`] to find violations.
    pub fn new(
        mut researchers: Vec<Researcher>,
        mut publications: Vec<Publication>,
        window: Window,
        policy: DisciplinePolicy,
    ) -> Self {
        researchers.sort_by(|a, b| a.id.cmp(&b.id));
        publications.sort_by(|a, b| a.id.cmp(&b.id));

        let mut researcher_index = HashMap::with_capacity(researchers.len());
        for (i, r) in researchers.iter().enumerate() {
            researcher_index.entry(r.id.clone()).or_insert(i);
        }

        let mut authorships: HashMap<String, Vec<Authorship>> = HashMap::new();
        for (p, publication) in publications.iter().enumerate() {
            for (s, slot) in publication.byline.iter().enumerate() {
                if let Some(id) = &slot.researcher_id {
                    authorships.entry(id.clone()).or_default().push(Authorship {
                        publication: p,
                        slot: s,
                    });
                }
            }
        }

        Self {
            researchers,
            publications,
            window,
            policy,
            researcher_index,
            authorships,
        }
    }

    pub fn researchers(&self) -> &[Researcher] {
        &self.researchers
    }

    pub fn publications(&self) -> &[Publication] {
        &self.publications
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn discipline_policy(&self) -> &DisciplinePolicy {
        &self.policy
    }

    pub fn researcher(&self, id: &str) -> Option<&Researcher> {
        self.researcher_index.get(id).map(|&i| &self.researchers[i])
    }

    /// Every byline slot occupied by `researcher_id`, in publication order.
    pub fn authorships_of(&self, researcher_id: &str) -> &[Authorship] {
        self.authorships
            .get(researcher_id)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Number of distinct publications on which the researcher appears.
    pub fn publication_count(&self, researcher_id: &str) -> usize {
        let mut pubs: Vec<usize> = self
            .authorships_of(researcher_id)
            .iter()
            .map(|a| a.publication)
            .collect();
        pubs.dedup();
        pubs.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_parses_known_values_and_blank_as_unspecified() {
        assert_eq!("full".parse::<Rank>().unwrap(), Rank::Full);
        assert_eq!("".parse::<Rank>().unwrap(), Rank::Unspecified);
        assert!("emeritus".parse::<Rank>().is_err());
    }

    #[test]
    fn window_length_is_inclusive() {
        assert_eq!(Window::new(2004, 2008).len(), 5);
        assert_eq!(Window::new(2008, 2004).len(), 0);
        assert!(Window::new(2004, 2008).contains(2008));
        assert!(!Window::new(2004, 2008).contains(2009));
    }

    #[test]
    fn corpus_orders_entities_by_id() {
        let r = |id: &str| Researcher {
            id: id.into(),
            field_id: "F".into(),
            discipline_id: "D".into(),
            rank: Rank::Full,
            active_years: 3,
            organization_id: "U".into(),
        };
        let corpus = Corpus::new(
            vec![r("b"), r("a")],
            vec![],
            Window::new(2004, 2008),
            DisciplinePolicy::default(),
        );
        let ids: Vec<_> = corpus.researchers().iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["a", "b"]);
        assert_eq!(corpus.researcher("b").unwrap().id, "b");
        assert!(corpus.authorships_of("a").is_empty());
    }
}

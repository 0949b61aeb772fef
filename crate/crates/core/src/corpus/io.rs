//! Researcher and publication files, in CSV or JSON (chosen by extension).
//!
//! CSV columns are matched by header name, so `rank` and `organization_id`
//! may be omitted from the researcher file. Bylines are `;`-separated
//! `position|researcher_id|organization_id` triples with `-` marking an
//! external co-author; subject categories are `;`-separated codes.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    validate_corpus, AuthorSlot, Corpus, DisciplinePolicy, Publication, Rank, Researcher,
    ValidationReport, Window,
};

pub const RESEARCHER_COLUMNS: [&str; 6] = [
    "id",
    "field_id",
    "discipline_id",
    "rank",
    "active_years",
    "organization_id",
];
pub const PUBLICATION_COLUMNS: [&str; 5] =
    ["id", "year", "citations", "subject_categories", "byline"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestConfig {
    pub window: Window,
    #[serde(default)]
    pub policy: DisciplinePolicy,
}

impl IngestConfig {
    pub fn new(window: Window) -> Self {
        Self {
            window,
            policy: DisciplinePolicy::default(),
        }
    }
}

/// Where in an input file a row came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Line(u64),
    /// 1-based position in a JSON array.
    Record(usize),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Line(n) => write!(f, "line {n}"),
            Location::Record(n) => write!(f, "record {n}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{}: unsupported file extension (expected .csv or .json)", path.display())]
    UnsupportedFormat { path: PathBuf },
    #[error("{}: missing column `{column}`", path.display())]
    MissingColumn { path: PathBuf, column: String },
    #[error("{}, {location}: field `{field}`: {message}", path.display())]
    Malformed {
        path: PathBuf,
        location: Location,
        field: String,
        message: String,
    },
    #[error("{}, {location}: duplicate researcher id `{id}`", path.display())]
    DuplicateResearcher {
        path: PathBuf,
        location: Location,
        id: String,
    },
    #[error(
        "{}, {location}: publication `{publication}` references unknown researcher `{id}`",
        path.display()
    )]
    UnknownResearcher {
        path: PathBuf,
        location: Location,
        publication: String,
        id: String,
    },
    #[error(
        "{}, {location}: publication `{publication}` year {year} is outside the window {}..={}",
        path.display(), window.start_year, window.end_year
    )]
    YearOutsideWindow {
        path: PathBuf,
        location: Location,
        publication: String,
        year: i32,
        window: Window,
    },
    #[error("corpus has {} invariant violation(s):\n{report}", report.len())]
    Invalid { report: ValidationReport },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

fn format_of(path: &Path) -> Result<Format, LoadError> {
    match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("csv") => Ok(Format::Csv),
        Some(e) if e.eq_ignore_ascii_case("json") => Ok(Format::Json),
        _ => Err(LoadError::UnsupportedFormat {
            path: path.to_path_buf(),
        }),
    }
}

fn open(path: &Path) -> Result<BufReader<File>, LoadError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| LoadError::Io {
            path: path.to_path_buf(),
            source,
        })
}

struct Located<T> {
    location: Location,
    row: T,
}

/// Column-name lookup over one CSV record.
struct CsvRow<'a> {
    path: &'a Path,
    location: Location,
    columns: &'a HashMap<String, usize>,
    record: &'a csv::StringRecord,
}

impl CsvRow<'_> {
    fn get(&self, column: &str) -> Option<&str> {
        self.columns
            .get(column)
            .and_then(|&i| self.record.get(i))
            .map(str::trim)
    }

    fn required(&self, column: &str) -> Result<&str, LoadError> {
        match self.get(column) {
            Some(v) if !v.is_empty() => Ok(v),
            _ => Err(self.malformed(column, "value is missing")),
        }
    }

    fn parse<T: std::str::FromStr>(&self, column: &str) -> Result<T, LoadError>
    where
        T::Err: fmt::Display,
    {
        let raw = self.required(column)?;
        raw.parse()
            .map_err(|e: T::Err| self.malformed(column, &format!("`{raw}`: {e}")))
    }

    fn malformed(&self, field: &str, message: &str) -> LoadError {
        LoadError::Malformed {
            path: self.path.to_path_buf(),
            location: self.location,
            field: field.to_string(),
            message: message.to_string(),
        }
    }
}

fn read_csv<T>(
    path: &Path,
    required: &[&str],
    mut parse: impl FnMut(&CsvRow<'_>) -> Result<T, LoadError>,
) -> Result<Vec<Located<T>>, LoadError> {
    let csv_err = |source| LoadError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(open(path)?);
    let columns: HashMap<String, usize> = reader
        .headers()
        .map_err(csv_err)?
        .iter()
        .enumerate()
        .map(|(i, h)| (h.to_string(), i))
        .collect();
    for column in required {
        if !columns.contains_key(*column) {
            return Err(LoadError::MissingColumn {
                path: path.to_path_buf(),
                column: column.to_string(),
            });
        }
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let row = CsvRow {
            path,
            location: Location::Line(line),
            columns: &columns,
            record: &record,
        };
        rows.push(Located {
            location: row.location,
            row: parse(&row)?,
        });
    }
    Ok(rows)
}

fn read_json<J: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<Located<J>>, LoadError> {
    let rows: Vec<J> = serde_json::from_reader(open(path)?).map_err(|source| LoadError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(rows
        .into_iter()
        .enumerate()
        .map(|(i, row)| Located {
            location: Location::Record(i + 1),
            row,
        })
        .collect())
}

#[derive(Deserialize)]
struct JsonResearcher {
    id: String,
    field_id: String,
    discipline_id: String,
    #[serde(default = "unspecified")]
    rank: Rank,
    active_years: u32,
    #[serde(default)]
    organization_id: String,
}

fn unspecified() -> Rank {
    Rank::Unspecified
}

#[derive(Deserialize)]
struct JsonSlot {
    position: u32,
    #[serde(default)]
    researcher_id: Option<String>,
    #[serde(default)]
    organization_id: String,
}

#[derive(Deserialize)]
struct JsonPublication {
    id: String,
    year: i32,
    citations: u64,
    subject_categories: Vec<String>,
    byline: Vec<JsonSlot>,
}

fn read_researchers(path: &Path) -> Result<Vec<Located<Researcher>>, LoadError> {
    match format_of(path)? {
        Format::Csv => read_csv(
            path,
            &["id", "field_id", "discipline_id", "active_years"],
            |row| {
                let rank = match row.get("rank") {
                    Some(raw) => raw
                        .parse()
                        .map_err(|e: String| row.malformed("rank", &e))?,
                    None => Rank::Unspecified,
                };
                Ok(Researcher {
                    id: row.required("id")?.to_string(),
                    field_id: row.required("field_id")?.to_string(),
                    discipline_id: row.required("discipline_id")?.to_string(),
                    rank,
                    active_years: row.parse("active_years")?,
                    organization_id: row.get("organization_id").unwrap_or("").to_string(),
                })
            },
        ),
        Format::Json => Ok(read_json::<JsonResearcher>(path)?
            .into_iter()
            .map(|l| Located {
                location: l.location,
                row: Researcher {
                    id: l.row.id,
                    field_id: l.row.field_id,
                    discipline_id: l.row.discipline_id,
                    rank: l.row.rank,
                    active_years: l.row.active_years,
                    organization_id: l.row.organization_id,
                },
            })
            .collect()),
    }
}

fn external_marker(id: &str) -> bool {
    id.is_empty() || id == "-"
}

/// Parses a `position|researcher_id|organization_id;...` byline cell.
pub fn parse_byline(raw: &str) -> Result<Vec<AuthorSlot>, String> {
    let mut slots = Vec::new();
    for triple in raw.split(';').map(str::trim).filter(|t| !t.is_empty()) {
        let parts: Vec<&str> = triple.split('|').map(str::trim).collect();
        let [position, researcher, organization] = parts[..] else {
            return Err(format!(
                "`{triple}` is not a position|researcher_id|organization_id triple"
            ));
        };
        let position = position
            .parse()
            .map_err(|e| format!("`{triple}`: bad position: {e}"))?;
        slots.push(AuthorSlot {
            position,
            researcher_id: (!external_marker(researcher)).then(|| researcher.to_string()),
            organization_id: organization.to_string(),
        });
    }
    slots.sort_by_key(|s| s.position);
    Ok(slots)
}

pub fn format_byline(byline: &[AuthorSlot]) -> String {
    byline
        .iter()
        .map(|s| {
            format!(
                "{}|{}|{}",
                s.position,
                s.researcher_id.as_deref().unwrap_or("-"),
                s.organization_id
            )
        })
        .collect::<Vec<_>>()
        .join(";")
}

fn split_categories(raw: &str) -> Vec<String> {
    raw.split(';')
        .map(str::trim)
        .filter(|c| !c.is_empty())
        .map(String::from)
        .collect()
}

fn read_publications(path: &Path) -> Result<Vec<Located<Publication>>, LoadError> {
    match format_of(path)? {
        Format::Csv => read_csv(path, &PUBLICATION_COLUMNS, |row| {
            let byline = parse_byline(row.required("byline")?)
                .map_err(|e| row.malformed("byline", &e))?;
            Ok(Publication {
                id: row.required("id")?.to_string(),
                year: row.parse("year")?,
                citations: row.parse("citations")?,
                subject_categories: split_categories(row.required("subject_categories")?),
                byline,
            })
        }),
        Format::Json => Ok(read_json::<JsonPublication>(path)?
            .into_iter()
            .map(|l| {
                let mut byline: Vec<AuthorSlot> = l
                    .row
                    .byline
                    .into_iter()
                    .map(|s| AuthorSlot {
                        position: s.position,
                        researcher_id: s.researcher_id.filter(|id| !external_marker(id)),
                        organization_id: s.organization_id,
                    })
                    .collect();
                byline.sort_by_key(|s| s.position);
                Located {
                    location: l.location,
                    row: Publication {
                        id: l.row.id,
                        year: l.row.year,
                        citations: l.row.citations,
                        subject_categories: l.row.subject_categories,
                        byline,
                    },
                }
            })
            .collect()),
    }
}

/// Byline slots without an organization inherit the researcher's own.
fn fill_slot_organizations(publications: &mut [Publication], researchers: &[Researcher]) {
    let orgs: HashMap<&str, &str> = researchers
        .iter()
        .map(|r| (r.id.as_str(), r.organization_id.as_str()))
        .collect();
    for slot in publications.iter_mut().flat_map(|p| p.byline.iter_mut()) {
        if slot.organization_id.is_empty() {
            if let Some(org) = slot.researcher_id.as_deref().and_then(|id| orgs.get(id)) {
                slot.organization_id = org.to_string();
            }
        }
    }
}

/// Loads and checks a corpus. Fails on the first malformed row, duplicate
/// researcher id, unknown byline reference or out-of-window year, and on any
/// remaining invariant violation.
pub fn load_corpus(
    researcher_file: &Path,
    publication_file: &Path,
    config: &IngestConfig,
) -> Result<Corpus, LoadError> {
    let researchers = read_researchers(researcher_file)?;
    let mut ids = HashSet::new();
    for l in &researchers {
        if !ids.insert(l.row.id.as_str()) {
            return Err(LoadError::DuplicateResearcher {
                path: researcher_file.to_path_buf(),
                location: l.location,
                id: l.row.id.clone(),
            });
        }
    }

    let publications = read_publications(publication_file)?;
    for l in &publications {
        if let Some(unknown) = l.row.roster_authors().find(|id| !ids.contains(id)) {
            return Err(LoadError::UnknownResearcher {
                path: publication_file.to_path_buf(),
                location: l.location,
                publication: l.row.id.clone(),
                id: unknown.to_string(),
            });
        }
        if !config.window.contains(l.row.year) {
            return Err(LoadError::YearOutsideWindow {
                path: publication_file.to_path_buf(),
                location: l.location,
                publication: l.row.id.clone(),
                year: l.row.year,
                window: config.window,
            });
        }
    }

    let corpus = assemble(researchers, publications, config);
    let report = validate_corpus(&corpus);
    if report.is_empty() {
        Ok(corpus)
    } else {
        Err(LoadError::Invalid { report })
    }
}

/// Parses both files without referential or invariant checks. Only
/// unreadable files and malformed rows are errors.
pub fn read_corpus_unchecked(
    researcher_file: &Path,
    publication_file: &Path,
    config: &IngestConfig,
) -> Result<Corpus, LoadError> {
    let researchers = read_researchers(researcher_file)?;
    let publications = read_publications(publication_file)?;
    Ok(assemble(researchers, publications, config))
}

fn assemble(
    researchers: Vec<Located<Researcher>>,
    publications: Vec<Located<Publication>>,
    config: &IngestConfig,
) -> Corpus {
    let researchers: Vec<Researcher> = researchers.into_iter().map(|l| l.row).collect();
    let mut publications: Vec<Publication> = publications.into_iter().map(|l| l.row).collect();
    fill_slot_organizations(&mut publications, &researchers);
    Corpus::new(
        researchers,
        publications,
        config.window,
        config.policy.clone(),
    )
}

fn create(path: &Path) -> Result<BufWriter<File>, LoadError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| LoadError::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> LoadError + '_ {
    move |source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Serialize)]
struct JsonSlotOut<'a> {
    position: u32,
    researcher_id: Option<&'a str>,
    organization_id: &'a str,
}

#[derive(Serialize)]
struct JsonPublicationOut<'a> {
    id: &'a str,
    year: i32,
    citations: u64,
    subject_categories: &'a [String],
    byline: Vec<JsonSlotOut<'a>>,
}

/// Writes researchers in the order given, as CSV or JSON by extension.
pub fn write_researchers(path: &Path, researchers: &[Researcher]) -> Result<(), LoadError> {
    let format = format_of(path)?;
    let mut out = create(path)?;
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            let csv_err = |source| LoadError::Csv {
                path: path.to_path_buf(),
                source,
            };
            w.write_record(RESEARCHER_COLUMNS).map_err(csv_err)?;
            for r in researchers {
                w.write_record([
                    r.id.as_str(),
                    &r.field_id,
                    &r.discipline_id,
                    r.rank.as_str(),
                    &r.active_years.to_string(),
                    &r.organization_id,
                ])
                .map_err(csv_err)?;
            }
            w.flush().map_err(io_err(path))?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, researchers).map_err(|source| {
                LoadError::Json {
                    path: path.to_path_buf(),
                    source,
                }
            })?;
            out.write_all(b"\n").map_err(io_err(path))?;
        }
    }
    out.flush().map_err(io_err(path))
}

/// Writes publications in the order given, as CSV or JSON by extension.
pub fn write_publications(path: &Path, publications: &[Publication]) -> Result<(), LoadError> {
    let format = format_of(path)?;
    let mut out = create(path)?;
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            let csv_err = |source| LoadError::Csv {
                path: path.to_path_buf(),
                source,
            };
            w.write_record(PUBLICATION_COLUMNS).map_err(csv_err)?;
            for p in publications {
                w.write_record([
                    p.id.as_str(),
                    &p.year.to_string(),
                    &p.citations.to_string(),
                    &p.subject_categories.join(";"),
                    &format_byline(&p.byline),
                ])
                .map_err(csv_err)?;
            }
            w.flush().map_err(io_err(path))?;
        }
        Format::Json => {
            let rows: Vec<JsonPublicationOut<'_>> = publications
                .iter()
                .map(|p| JsonPublicationOut {
                    id: &p.id,
                    year: p.year,
                    citations: p.citations,
                    subject_categories: &p.subject_categories,
                    byline: p
                        .byline
                        .iter()
                        .map(|s| JsonSlotOut {
                            position: s.position,
                            researcher_id: s.researcher_id.as_deref(),
                            organization_id: &s.organization_id,
                        })
                        .collect(),
                })
                .collect();
            serde_json::to_writer_pretty(&mut out, &rows).map_err(|source| LoadError::Json {
                path: path.to_path_buf(),
                source,
            })?;
            out.write_all(b"\n").map_err(io_err(path))?;
        }
    }
    out.flush().map_err(io_err(path))
}

//! Flat tabular files for intermediate results, as CSV or JSON arrays
//! chosen by file extension.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ArtifactError {
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
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

impl TableFormat {
    pub fn of(path: &Path) -> Result<Self, ArtifactError> {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Ok(TableFormat::Csv),
            Some(e) if e.eq_ignore_ascii_case("json") => Ok(TableFormat::Json),
            _ => Err(ArtifactError::UnsupportedFormat {
                path: path.to_path_buf(),
            }),
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            TableFormat::Csv => "csv",
            TableFormat::Json => "json",
        }
    }
}

pub fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), ArtifactError> {
    let format = TableFormat::of(path)?;
    let io = |source| ArtifactError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = BufWriter::new(File::create(path).map_err(io)?);
    match format {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            for row in rows {
                w.serialize(row).map_err(|source| ArtifactError::Csv {
                    path: path.to_path_buf(),
                    source,
                })?;
            }
            w.flush().map_err(io)?;
        }
        TableFormat::Json => {
            serde_json::to_writer_pretty(&mut out, rows).map_err(|source| {
                ArtifactError::Json {
                    path: path.to_path_buf(),
                    source,
                }
            })?;
            out.write_all(b"\n").map_err(io)?;
        }
    }
    out.flush().map_err(io)
}

pub fn read_rows<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, ArtifactError> {
    let format = TableFormat::of(path)?;
    let file = File::open(path).map_err(|source| ArtifactError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let reader = BufReader::new(file);
    match format {
        TableFormat::Csv => csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader)
            .deserialize()
            .collect::<Result<_, _>>()
            .map_err(|source| ArtifactError::Csv {
                path: path.to_path_buf(),
                source,
            }),
        TableFormat::Json => {
            serde_json::from_reader(reader).map_err(|source| ArtifactError::Json {
                path: path.to_path_buf(),
                source,
            })
        }
    }
}

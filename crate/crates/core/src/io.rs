//! CSV ingestion, sample manifests, label files and report output.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{Label, LabelSet};
use crate::report::ColumnReport;
use crate::sampler::Sample;

/// A table of raw string cells. Rows all have `headers.len()` cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableSource {
    pub path: PathBuf,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl TableSource {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    pub fn column(&self, index: usize) -> Vec<&str> {
        self.rows.iter().map(|r| r[index].as_str()).collect()
    }

    pub fn column_by_name(&self, name: &str) -> Result<Vec<&str>> {
        let i = self.column_index(name).ok_or_else(|| {
            Error::invalid(format!(
                "unknown column {name:?}; available columns: {}",
                self.headers.join(", ")
            ))
        })?;
        Ok(self.column(i))
    }
}

fn csv_error(path: &Path, err: csv::Error) -> Error {
    let message = match err.kind() {
        csv::ErrorKind::UnequalLengths {
            pos,
            expected_len,
            len,
        } => {
            let line = pos.as_ref().map_or(0, |p| p.line());
            format!("ragged row at line {line}: expected {expected_len} fields, found {len}")
        }
        csv::ErrorKind::Io(e) => {
            return Error::io(path, std::io::Error::new(e.kind(), e.to_string()))
        }
        _ => err.to_string(),
    };
    Error::Csv {
        path: path.to_owned(),
        message,
    }
}

/// Reads a headed CSV file. Cells are kept verbatim as strings, empty
/// cells included; quoting follows RFC 4180.
pub fn read_csv(path: impl AsRef<Path>) -> Result<TableSource> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(file);
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(str::to_owned)
        .collect();
    if headers.is_empty() || headers == [""] {
        return Err(Error::Csv {
            path: path.to_owned(),
            message: "missing header row".into(),
        });
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        rows.push(record.iter().map(str::to_owned).collect());
    }
    Ok(TableSource {
        path: path.to_owned(),
        headers,
        rows,
    })
}

/// Reads a single-column text file, one record per line. A trailing
/// newline does not produce an empty last record; `\r\n` endings are
/// accepted.
pub fn read_lines(path: impl AsRef<Path>) -> Result<Vec<String>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text.lines().map(str::to_owned).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestRow {
    pub row: usize,
    pub value: String,
}

/// The rows a guided run will learn from, to be labelled by a user.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleManifest {
    pub column: String,
    pub seed: u64,
    pub n: usize,
    pub n_tr: usize,
    pub rows: Vec<ManifestRow>,
}

impl SampleManifest {
    pub fn from_sample(column: &str, seed: u64, sample: &Sample) -> Self {
        SampleManifest {
            column: column.to_owned(),
            seed,
            n: sample.population,
            n_tr: sample.len(),
            rows: sample
                .iter()
                .map(|(row, value)| ManifestRow {
                    row,
                    value: value.to_owned(),
                })
                .collect(),
        }
    }

    pub fn indices(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.row).collect()
    }
}

/// Pretty-printed JSON with a trailing newline; `None` writes to stdout.
pub fn write_json<T: Serialize + ?Sized>(value: &T, path: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Json {
        path: path
            .map(Path::to_owned)
            .unwrap_or_else(|| "<stdout>".into()),
        source: e,
    })?;
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Json {
        path: path.to_owned(),
        source: e,
    })
}

pub fn emit_sample_manifest(manifest: &SampleManifest, path: Option<&Path>) -> Result<()> {
    write_json(manifest, path)
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<SampleManifest> {
    read_json(path.as_ref())
}

/// Parses a label file: a JSON object mapping row indices (as strings) to
/// `"healthy"` or `"anomalous"`.
pub fn read_labels(path: impl AsRef<Path>) -> Result<LabelSet> {
    let raw: BTreeMap<String, String> = read_json(path.as_ref())?;
    let mut entries = BTreeMap::new();
    for (key, value) in raw {
        let row: usize = key
            .trim()
            .parse()
            .map_err(|_| Error::LabelMismatch(format!("row index {key:?} is not an integer")))?;
        let label: Label = value.parse()?;
        if entries.insert(row, label).is_some() {
            return Err(Error::LabelMismatch(format!("row {row} labelled twice")));
        }
    }
    Ok(LabelSet::new(entries))
}

/// Parses a label file and checks it covers exactly the manifest's rows.
pub fn read_labels_for(path: impl AsRef<Path>, manifest: &SampleManifest) -> Result<LabelSet> {
    let labels = read_labels(path)?;
    let sample = Sample {
        indices: {
            let mut idx = manifest.indices();
            idx.sort_unstable();
            idx
        },
        records: Vec::new(),
        population: manifest.n,
    };
    labels.check_covers(&sample)?;
    Ok(labels)
}

pub fn write_labels(labels: &LabelSet, path: &Path) -> Result<()> {
    let raw: BTreeMap<String, String> = labels
        .entries
        .iter()
        .map(|(row, label)| (row.to_string(), label.to_string()))
        .collect();
    write_json(&raw, Some(path))
}

/// Serializes reports as a pretty-printed JSON array; `None` writes to
/// stdout.
pub fn write_report(reports: &[ColumnReport], path: Option<&Path>) -> Result<()> {
    write_json(reports, path)
}

pub fn report_json(reports: &[ColumnReport]) -> Result<String> {
    serde_json::to_string_pretty(reports).map_err(|e| Error::Json {
        path: "<memory>".into(),
        source: e,
    })
}

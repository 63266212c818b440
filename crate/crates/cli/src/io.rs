//! Tournament files: CSV rows of 0/1, or JSON `{"rows", "cols", "matrix"}`.
//!
//! CSV may start with a header of column labels; when the header has one
//! extra leading field, every data row starts with its row label.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use chainrank::Tournament;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TournamentFile {
    pub tournament: Tournament,
    pub row_labels: Option<Vec<String>>,
    pub col_labels: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct JsonTournament {
    rows: usize,
    cols: usize,
    matrix: Vec<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    row_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    col_labels: Option<Vec<String>>,
}

impl TournamentFile {
    pub fn new(tournament: Tournament) -> Self {
        TournamentFile {
            tournament,
            row_labels: None,
            col_labels: None,
        }
    }

    /// Display name of row `a` (0-based).
    pub fn row_label(&self, a: usize) -> String {
        label(&self.row_labels, a)
    }

    pub fn col_label(&self, b: usize) -> String {
        label(&self.col_labels, b)
    }

    fn validate_labels(self) -> Result<Self> {
        let (m, n) = self.tournament.shape();
        for (side, labels, len) in [
            ("row", &self.row_labels, m),
            ("column", &self.col_labels, n),
        ] {
            if let Some(l) = labels {
                if l.len() != len {
                    bail!("expected {len} {side} labels, found {}", l.len());
                }
            }
        }
        Ok(self)
    }
}

fn label(labels: &Option<Vec<String>>, i: usize) -> String {
    match labels {
        Some(l) => l[i].clone(),
        None => (i + 1).to_string(),
    }
}

fn bit(field: &str) -> Option<u8> {
    match field.trim() {
        "0" => Some(0),
        "1" => Some(1),
        _ => None,
    }
}

fn matrix_to_tournament(matrix: &[Vec<u8>]) -> Result<Tournament> {
    if matrix.is_empty() {
        bail!("tournament has no rows");
    }
    let n = matrix[0].len();
    if let Some((i, row)) = matrix.iter().enumerate().find(|(_, r)| r.len() != n) {
        bail!("row {} has {} entries, expected {n}", i + 1, row.len());
    }
    for (i, row) in matrix.iter().enumerate() {
        if let Some(j) = row.iter().position(|&v| v > 1) {
            bail!(
                "entry ({}, {}) is {}, expected 0 or 1",
                i + 1,
                j + 1,
                row[j]
            );
        }
    }
    Ok(Tournament::from_rows(matrix)?)
}

pub fn parse_csv(text: &str) -> Result<TournamentFile> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    for rec in reader.records() {
        let rec = rec.context("malformed CSV")?;
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        records.push(rec.iter().map(str::to_owned).collect::<Vec<_>>());
    }
    if records.is_empty() {
        bail!("tournament has no rows");
    }
    // a labelled data row has a label followed by bits; a header has a
    // blank corner, a non-bit field after the first, or a lone label
    let first = &records[0];
    let is_header = first[0].is_empty()
        || first[1..].iter().any(|f| bit(f).is_none())
        || (first.len() == 1 && bit(&first[0]).is_none());
    let header = if is_header {
        Some(records.remove(0))
    } else {
        None
    };
    let has_row_labels = matches!(&header, Some(h) if h[0].is_empty())
        || records.iter().any(|r| bit(&r[0]).is_none());
    let col_labels = match header {
        Some(h) if has_row_labels => Some(h[1..].to_vec()),
        other => other,
    };
    if has_row_labels && records.iter().any(|r| r.len() < 2) {
        bail!("labelled rows need at least one result");
    }
    let mut labels = Vec::new();
    let mut matrix = Vec::new();
    for (i, rec) in records.iter().enumerate() {
        let fields = if has_row_labels {
            labels.push(rec[0].clone());
            &rec[1..]
        } else {
            &rec[..]
        };
        let row = fields
            .iter()
            .enumerate()
            .map(|(j, f)| {
                bit(f).ok_or_else(|| {
                    anyhow!("entry ({}, {}) is '{f}', expected 0 or 1", i + 1, j + 1)
                })
            })
            .collect::<Result<Vec<u8>>>()?;
        matrix.push(row);
    }
    TournamentFile {
        tournament: matrix_to_tournament(&matrix)?,
        row_labels: has_row_labels.then_some(labels),
        col_labels,
    }
    .validate_labels()
}

pub fn parse_json(text: &str) -> Result<TournamentFile> {
    let j: JsonTournament = serde_json::from_str(text).context("malformed tournament JSON")?;
    let tournament = matrix_to_tournament(&j.matrix)?;
    if tournament.shape() != (j.rows, j.cols) {
        bail!(
            "declared size {}x{} does not match the {}x{} matrix",
            j.rows,
            j.cols,
            tournament.rows(),
            tournament.cols()
        );
    }
    TournamentFile {
        tournament,
        row_labels: j.row_labels,
        col_labels: j.col_labels,
    }
    .validate_labels()
}

pub fn parse(text: &str, format: Format) -> Result<TournamentFile> {
    match format {
        Format::Csv => parse_csv(text),
        Format::Json => parse_json(text),
    }
}

/// By extension, falling back to the first non-blank character.
pub fn detect_format(path: Option<&Path>, text: &str) -> Format {
    match path.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
        Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
        _ if text.trim_start().starts_with('{') => Format::Json,
        _ => Format::Csv,
    }
}

/// Reads a file, or stdin for `-`.
pub fn read_tournament(path: &Path) -> Result<TournamentFile> {
    let text = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin()).context("reading stdin")?
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    let shown = (path != Path::new("-")).then_some(path);
    parse(&text, detect_format(shown, &text)).with_context(|| format!("parsing {}", path.display()))
}

pub fn to_csv(file: &TournamentFile) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    let k = &file.tournament;
    if let Some(cols) = &file.col_labels {
        let mut header = Vec::new();
        if file.row_labels.is_some() {
            header.push(String::new());
        }
        header.extend(cols.iter().cloned());
        w.write_record(&header).expect("in-memory write");
    }
    for (a, row) in k.to_rows().iter().enumerate() {
        let mut rec = Vec::new();
        if let Some(rows) = &file.row_labels {
            rec.push(rows[a].clone());
        }
        rec.extend(row.iter().map(|v| v.to_string()));
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
}

pub fn to_json(file: &TournamentFile) -> String {
    let k = &file.tournament;
    let j = JsonTournament {
        rows: k.rows(),
        cols: k.cols(),
        matrix: k.to_rows(),
        row_labels: file.row_labels.clone(),
        col_labels: file.col_labels.clone(),
    };
    serde_json::to_string_pretty(&j).expect("serialisable")
}

pub fn serialize(file: &TournamentFile, format: Format) -> String {
    match format {
        Format::Csv => to_csv(file),
        Format::Json => to_json(file),
    }
}

//! Corpus input files: CSV with header `article_id,year,volume,keyword`, or
//! newline-delimited JSON objects with the same field names.

use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use serde_json::Value;

use super::{ArticleRef, KeywordRecord, Rejection};
use crate::error::{Error, Result};

/// Records read from a file plus the rows that could not be parsed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RecordBatch {
    pub records: Vec<KeywordRecord>,
    pub rejections: Vec<Rejection>,
}

/// Reads CSV (`.csv`) or NDJSON (`.jsonl`, `.ndjson`, `.json`); other
/// extensions are sniffed from the first non-blank byte.
pub fn read_records(path: &Path) -> Result<RecordBatch> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let ndjson = match ext.as_deref() {
        Some("csv") => false,
        Some("jsonl" | "ndjson" | "json") => true,
        _ => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            text.trim_start().starts_with('{')
        }
    };
    if ndjson {
        read_ndjson(BufReader::new(file), path)
    } else {
        read_csv(file, path)
    }
}

fn reject(line: u64, article_id: &str, raw_text: &str, reason: impl Into<String>) -> Rejection {
    Rejection {
        line: Some(line),
        article_id: article_id.to_string(),
        raw_text: raw_text.to_string(),
        reason: reason.into(),
    }
}

fn parse_year(s: &str) -> std::result::Result<i32, String> {
    s.trim()
        .parse::<i32>()
        .map_err(|_| format!("invalid year {s:?}"))
}

fn optional(s: &str) -> Option<String> {
    let s = s.trim();
    (!s.is_empty()).then(|| s.to_string())
}

pub fn read_csv<R: Read>(reader: R, path: &Path) -> Result<RecordBatch> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::Headers)
        .from_reader(reader);
    let headers = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
    let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let (Some(id_col), Some(year_col), Some(kw_col)) = (col("article_id"), col("year"), col("keyword"))
    else {
        return Err(Error::Format {
            path: path.to_path_buf(),
            line: 1,
            message: "CSV header must contain article_id, year, volume, keyword".into(),
        });
    };
    let vol_col = col("volume");

    let mut batch = RecordBatch::default();
    for row in rdr.records() {
        let row = match row {
            Ok(row) => row,
            Err(e) => {
                let line = e.position().map(|p| p.line()).unwrap_or(0);
                if matches!(e.kind(), csv::ErrorKind::Io(_)) {
                    return Err(csv_error(path, e));
                }
                batch.rejections.push(reject(line, "", "", e.to_string()));
                continue;
            }
        };
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let get = |i: usize| row.get(i).unwrap_or("");
        let (id, kw) = (get(id_col), get(kw_col));
        match parse_year(get(year_col)) {
            Ok(year) => batch.records.push(KeywordRecord {
                article: ArticleRef {
                    article_id: id.trim().to_string(),
                    year,
                    volume: vol_col.and_then(|c| optional(get(c))),
                },
                raw_text: kw.to_string(),
            }),
            Err(reason) => batch.rejections.push(reject(line, id, kw, reason)),
        }
    }
    Ok(batch)
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        line: e.position().map(|p| p.line() as usize).unwrap_or(0),
        message: e.to_string(),
    }
}

pub fn read_ndjson<R: BufRead>(reader: R, path: &Path) -> Result<RecordBatch> {
    let mut batch = RecordBatch::default();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i as u64 + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value = match serde_json::from_str(&line) {
            Ok(v) => v,
            Err(e) => {
                batch.rejections.push(reject(line_no, "", line.trim(), e.to_string()));
                continue;
            }
        };
        let text = |key: &str| match value.get(key) {
            Some(Value::String(s)) => Some(s.clone()),
            Some(Value::Number(n)) => Some(n.to_string()),
            _ => None,
        };
        let id = text("article_id").unwrap_or_default();
        let kw = text("keyword").unwrap_or_default();
        let year = match text("year") {
            Some(y) => parse_year(&y),
            None => Err("missing year".to_string()),
        };
        match year {
            Ok(year) => batch.records.push(KeywordRecord {
                article: ArticleRef {
                    article_id: id.trim().to_string(),
                    year,
                    volume: text("volume").as_deref().and_then(optional),
                },
                raw_text: kw,
            }),
            Err(reason) => batch.rejections.push(reject(line_no, &id, &kw, reason)),
        }
    }
    Ok(batch)
}

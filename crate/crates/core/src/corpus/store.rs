//! Persisted corpus: one JSON document with a top-level `schema_version`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::Corpus;
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
struct Envelope<'a> {
    schema_version: u32,
    corpus: &'a Corpus,
}

#[derive(Deserialize)]
struct OwnedEnvelope {
    corpus: Corpus,
}

pub fn to_json(corpus: &Corpus) -> Result<String> {
    Ok(serde_json::to_string_pretty(&Envelope {
        schema_version: SCHEMA_VERSION,
        corpus,
    })?)
}

pub fn from_json(text: &str) -> Result<Corpus> {
    let value: Value = serde_json::from_str(text).map_err(|e| parse_error(text, &e))?;
    match value.get("schema_version") {
        Some(Value::Number(n)) if n.as_u64() == Some(SCHEMA_VERSION as u64) => {}
        other => {
            return Err(Error::SchemaVersion {
                expected: SCHEMA_VERSION,
                found: other.map_or_else(|| "none".to_string(), Value::to_string),
            })
        }
    }
    let envelope: OwnedEnvelope = serde_json::from_value(value)?;
    envelope.corpus.validate()?;
    Ok(envelope.corpus)
}

pub fn save(corpus: &Corpus, path: &Path) -> Result<()> {
    fs::write(path, to_json(corpus)?).map_err(|e| Error::io(path, e))
}

pub fn load(path: &Path) -> Result<Corpus> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_json(&text)
}

fn parse_error(text: &str, e: &serde_json::Error) -> Error {
    let (line, column) = (e.line(), e.column());
    // At end of input serde_json reports the last character read; the fault is just past it.
    let offset = if e.is_eof() {
        text.len()
    } else if line == 0 {
        0
    } else {
        let preceding: usize = text.split_inclusive('\n').take(line - 1).map(str::len).sum();
        (preceding + column.saturating_sub(1)).min(text.len())
    };
    Error::Parse {
        offset,
        line,
        column,
        message: e.to_string(),
    }
}

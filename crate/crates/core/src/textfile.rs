//! Line-oriented text formats shared by the lexicon, subject and map files:
//! one entry per line, `#` starts a comment line, blank lines are skipped.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Non-comment, non-blank lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim_end_matches('\r');
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

/// A word list: one entry per line.
pub fn parse_word_list(text: &str) -> Vec<String> {
    content_lines(text).map(|(_, l)| l.trim().to_string()).collect()
}

/// Two tab-separated columns per line.
pub(crate) fn parse_pairs(text: &str, path: &Path) -> Result<Vec<(usize, String, String)>> {
    content_lines(text)
        .map(|(line, l)| match l.split_once('\t') {
            Some((left, right)) => Ok((line, left.trim().to_string(), right.trim().to_string())),
            None => Err(Error::Format {
                path: path.to_path_buf(),
                line,
                message: "expected two tab-separated columns".into(),
            }),
        })
        .collect()
}

pub(crate) fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

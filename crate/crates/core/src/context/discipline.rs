//! Mapping of specific subjects onto broad disciplines.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use super::SubjectNormalizer;
use crate::error::{Error, Result};
use crate::textfile;

const BUILTIN_MAP: &str = include_str!("../../data/disciplines.tsv");

/// Discipline assigned to subjects that are not in the map.
pub const UNMAPPED: &str = "Unmapped";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisciplineMap {
    entries: BTreeMap<String, String>,
}

impl Default for DisciplineMap {
    fn default() -> Self {
        DisciplineMap::parse(BUILTIN_MAP, Path::new("<builtin>")).expect("builtin discipline map is valid")
    }
}

impl DisciplineMap {
    /// Parses `subject<TAB>discipline` lines. A subject listed twice must map
    /// to the same discipline.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let normalizer = SubjectNormalizer::default();
        let mut entries: BTreeMap<String, String> = BTreeMap::new();
        for (line, subject, discipline) in textfile::parse_pairs(text, path)? {
            let Some(subject) = normalizer.normalize(&subject) else {
                continue;
            };
            if let Some(previous) = entries.get(&subject) {
                if *previous != discipline {
                    return Err(Error::Format {
                        path: path.to_path_buf(),
                        line,
                        message: format!(
                            "subject {subject:?} mapped to both {previous:?} and {discipline:?}"
                        ),
                    });
                }
            }
            entries.insert(subject, discipline);
        }
        Ok(DisciplineMap { entries })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&textfile::read(path)?, path)
    }

    pub fn from_pairs<I, S, D>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, D)>,
        S: AsRef<str>,
        D: Into<String>,
    {
        let normalizer = SubjectNormalizer::default();
        DisciplineMap {
            entries: pairs
                .into_iter()
                .filter_map(|(s, d)| Some((normalizer.normalize(s.as_ref())?, d.into())))
                .collect(),
        }
    }

    /// Discipline of a subject, or `None` if unmapped.
    pub fn get(&self, subject: &str) -> Option<&str> {
        let key = SubjectNormalizer::default().normalize(subject)?;
        self.entries.get(&key).map(String::as_str)
    }

    pub fn discipline(&self, subject: &str) -> &str {
        self.get(subject).unwrap_or(UNMAPPED)
    }

    pub fn disciplines(&self) -> BTreeSet<&str> {
        self.entries.values().map(String::as_str).collect()
    }

    pub fn subjects(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(s, d)| (s.as_str(), d.as_str()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Total mapping from a subject to its discipline, `"Unmapped"` as fallback.
pub fn map_discipline(subject: &str, map: &DisciplineMap) -> String {
    map.discipline(subject).to_string()
}

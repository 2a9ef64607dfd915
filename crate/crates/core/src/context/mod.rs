//! Degree of contextuality: the number of distinct subject areas a semantic
//! word is relevant to, taken over the union of several reference providers.

mod cache;
mod discipline;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textfile;

pub use cache::{
    fetch_and_cache, CacheEntry, CachedProvider, ContextCache, FetchOptions, FetchReport,
    RateLimiter,
};
pub use discipline::{map_discipline, DisciplineMap, UNMAPPED};

/// D(C) of a semantic word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ContextDegree(u32);

impl ContextDegree {
    pub fn new(value: u32) -> Self {
        ContextDegree(value)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    /// Exact label, `"{value}-C"`.
    pub fn label(self) -> String {
        format!("{}-C", self.0)
    }

    /// Bucketed label: values above 10 share `">10-C"`.
    pub fn bucket_label(self) -> String {
        if self.0 > 10 {
            ">10-C".to_string()
        } else {
            self.label()
        }
    }

    pub fn category_name(self) -> &'static str {
        const NAMES: [&str; 11] = [
            "No contextual",
            "Mono-contextual",
            "Di-contextual",
            "Tri-contextual",
            "Tetra-contextual",
            "Penta-contextual",
            "Hexa-contextual",
            "Hepta-contextual",
            "Octa-contextual",
            "Nona-contextual",
            "Deca-contextual",
        ];
        NAMES.get(self.0 as usize).copied().unwrap_or("Higher-contextual")
    }
}

impl fmt::Display for ContextDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-C", self.0)
    }
}

pub fn degree_label(value: i64) -> Result<String> {
    u32::try_from(value)
        .map(|v| ContextDegree(v).label())
        .map_err(|_| Error::NegativeDegree(value))
}

/// Reconciles subject labels across providers: case-fold, collapse
/// whitespace, drop trailing punctuation, then apply aliases.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SubjectNormalizer {
    aliases: BTreeMap<String, String>,
}

impl SubjectNormalizer {
    pub fn with_aliases<I, A, B>(aliases: I) -> Self
    where
        I: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let aliases = aliases
            .into_iter()
            .filter_map(|(a, b)| Some((clean(a.as_ref())?, clean(b.as_ref())?)))
            .collect();
        SubjectNormalizer { aliases }
    }

    /// Alias file: `alias<TAB>canonical` per line.
    pub fn from_alias_file(path: &Path) -> Result<Self> {
        let text = textfile::read(path)?;
        let pairs = textfile::parse_pairs(&text, path)?;
        Ok(Self::with_aliases(pairs.into_iter().map(|(_, a, b)| (a, b))))
    }

    pub fn normalize(&self, label: &str) -> Option<String> {
        let cleaned = clean(label)?;
        Some(self.aliases.get(&cleaned).cloned().unwrap_or(cleaned))
    }

    pub fn normalize_all<'a>(&self, labels: impl IntoIterator<Item = &'a str>) -> BTreeSet<String> {
        labels.into_iter().filter_map(|l| self.normalize(l)).collect()
    }
}

fn clean(label: &str) -> Option<String> {
    let folded = label.to_lowercase();
    let collapsed = folded.split_whitespace().collect::<Vec<_>>().join(" ");
    let trimmed = collapsed
        .trim_end_matches(|c: char| matches!(c, '.' | ',' | ';' | ':' | '!' | '?') || c.is_whitespace())
        .to_string();
    (!trimmed.is_empty()).then_some(trimmed)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProviderError {
    /// Network or parse failure; worth retrying.
    Transport(String),
    RateLimited { retry_after: Option<Duration> },
    /// The provider has no answer for the word and never will (e.g. no cache entry).
    Missing,
}

impl fmt::Display for ProviderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProviderError::Transport(m) => write!(f, "transport failure: {m}"),
            ProviderError::RateLimited { .. } => f.write_str("rate limited"),
            ProviderError::Missing => f.write_str("no entry"),
        }
    }
}

/// A source of subject labels for words.
pub trait ContextProvider: Send + Sync {
    fn name(&self) -> &str;

    /// Raw subject labels for `word`; an empty list means "no subject found".
    fn lookup(&self, word: &str) -> std::result::Result<Vec<String>, ProviderError>;
}

/// Offline provider backed by a `word<TAB>subject1;subject2;...` file. Words
/// absent from the file have no subjects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubjectLexicon {
    name: String,
    entries: BTreeMap<String, Vec<String>>,
}

impl SubjectLexicon {
    pub fn from_entries<I, W, S>(name: impl Into<String>, entries: I) -> Self
    where
        I: IntoIterator<Item = (W, Vec<S>)>,
        W: Into<String>,
        S: Into<String>,
    {
        SubjectLexicon {
            name: name.into(),
            entries: entries
                .into_iter()
                .map(|(w, s)| (w.into(), s.into_iter().map(Into::into).collect()))
                .collect(),
        }
    }

    pub fn parse(name: impl Into<String>, text: &str) -> Self {
        let entries = textfile::content_lines(text).map(|(_, line)| {
            let (word, subjects) = line.split_once('\t').unwrap_or((line, ""));
            let subjects: Vec<String> = subjects
                .split(';')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect();
            (word.trim().to_string(), subjects)
        });
        let mut lexicon = SubjectLexicon {
            name: name.into(),
            entries: BTreeMap::new(),
        };
        for (word, subjects) in entries {
            lexicon.entries.entry(word).or_default().extend(subjects);
        }
        lexicon
    }

    pub fn from_file(name: impl Into<String>, path: &Path) -> Result<Self> {
        Ok(Self::parse(name, &textfile::read(path)?))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl ContextProvider for SubjectLexicon {
    fn name(&self) -> &str {
        &self.name
    }

    fn lookup(&self, word: &str) -> std::result::Result<Vec<String>, ProviderError> {
        Ok(self
            .entries
            .get(word)
            .or_else(|| self.entries.get(&word.to_lowercase()))
            .cloned()
            .unwrap_or_default())
    }
}

/// Subjects of one word from every provider.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordContext {
    pub word: String,
    pub per_provider: BTreeMap<String, BTreeSet<String>>,
    pub union: BTreeSet<String>,
    pub degree: u32,
}

impl WordContext {
    pub fn from_sets(word: impl Into<String>, per_provider: BTreeMap<String, BTreeSet<String>>) -> Self {
        let union: BTreeSet<String> = per_provider.values().flatten().cloned().collect();
        WordContext {
            word: word.into(),
            degree: union.len() as u32,
            per_provider,
            union,
        }
    }

    pub fn degree(&self) -> ContextDegree {
        ContextDegree(self.degree)
    }
}

/// A word whose context could not be determined; it is left out of every
/// D(C)-dependent figure.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Unresolved {
    pub word: String,
    pub provider: String,
    pub reason: String,
}

impl fmt::Display for Unresolved {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unresolved word {:?} (provider {}): {}", self.word, self.provider, self.reason)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    /// Extra attempts after a transport failure.
    pub retries: u32,
    /// Base delay; doubles with each retry.
    pub backoff: Duration,
    /// Separate budget for rate-limit waits.
    pub rate_limit_waits: u32,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            retries: 3,
            backoff: Duration::from_millis(500),
            rate_limit_waits: 16,
        }
    }
}

impl RetryPolicy {
    pub fn no_wait(retries: u32) -> Self {
        RetryPolicy {
            retries,
            backoff: Duration::ZERO,
            rate_limit_waits: 16,
        }
    }
}

/// Calls the provider, retrying transport failures and waiting out rate limits.
/// `before_attempt` runs ahead of every call (used for rate limiting).
pub(crate) fn lookup_with_retry(
    provider: &dyn ContextProvider,
    word: &str,
    policy: &RetryPolicy,
    mut before_attempt: impl FnMut(),
) -> std::result::Result<Vec<String>, Unresolved> {
    let unresolved = |reason: String| Unresolved {
        word: word.to_string(),
        provider: provider.name().to_string(),
        reason,
    };
    let (mut failures, mut waits) = (0u32, 0u32);
    loop {
        before_attempt();
        match provider.lookup(word) {
            Ok(subjects) => return Ok(subjects),
            Err(ProviderError::Missing) => return Err(unresolved("no entry".into())),
            Err(ProviderError::RateLimited { retry_after }) => {
                if waits >= policy.rate_limit_waits {
                    return Err(unresolved(format!("still rate limited after {waits} waits")));
                }
                waits += 1;
                thread::sleep(retry_after.unwrap_or(policy.backoff * 2u32.pow(waits.min(6))));
            }
            Err(ProviderError::Transport(message)) => {
                if failures >= policy.retries {
                    return Err(unresolved(format!(
                        "transport failure after {} attempts: {message}",
                        failures + 1
                    )));
                }
                thread::sleep(policy.backoff * 2u32.pow(failures.min(6)));
                failures += 1;
            }
        }
    }
}

/// Queries every provider and unions the normalized labels. The result does
/// not depend on provider order.
pub fn lookup_context(
    word: &str,
    providers: &[&dyn ContextProvider],
    normalizer: &SubjectNormalizer,
    policy: &RetryPolicy,
) -> std::result::Result<WordContext, Unresolved> {
    let mut per_provider: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    let mut failures = Vec::new();
    for provider in providers {
        match lookup_with_retry(*provider, word, policy, || {}) {
            Ok(subjects) => per_provider
                .entry(provider.name().to_string())
                .or_default()
                .extend(normalizer.normalize_all(subjects.iter().map(String::as_str))),
            Err(u) => failures.push(u),
        }
    }
    // Report the alphabetically first failing provider so the outcome is order-free.
    failures.sort();
    match failures.into_iter().next() {
        Some(u) => Err(u),
        None => Ok(WordContext::from_sets(word, per_provider)),
    }
}

/// Contexts of a word set, split into resolved and unresolved words.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextResolution {
    pub contexts: BTreeMap<String, WordContext>,
    pub unresolved: BTreeMap<String, Unresolved>,
}

pub fn resolve_contexts<'a>(
    words: impl IntoIterator<Item = &'a str>,
    providers: &[&dyn ContextProvider],
    normalizer: &SubjectNormalizer,
    policy: &RetryPolicy,
) -> ContextResolution {
    let mut resolution = ContextResolution::default();
    if providers.is_empty() {
        for word in words {
            resolution.unresolved.insert(
                word.to_string(),
                Unresolved {
                    word: word.to_string(),
                    provider: "-".into(),
                    reason: "no context providers configured".into(),
                },
            );
        }
        return resolution;
    }
    for word in words {
        match lookup_context(word, providers, normalizer, policy) {
            Ok(ctx) => {
                resolution.contexts.insert(word.to_string(), ctx);
            }
            Err(u) => {
                resolution.unresolved.insert(word.to_string(), u);
            }
        }
    }
    resolution
}

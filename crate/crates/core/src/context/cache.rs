//! Local cache of provider answers, one JSON object per (word, provider) line.
//! Analysis reads only from the cache, which keeps runs reproducible offline.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::thread;
use std::time::{Duration, Instant};

use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use super::{lookup_with_retry, ContextProvider, ProviderError, RetryPolicy, SubjectNormalizer, Unresolved};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub word: String,
    pub provider: String,
    pub subjects: Vec<String>,
    /// ISO-8601 UTC timestamp.
    pub fetched_at: String,
}

/// In-memory view of the cache file. Writes go through `&mut self`, so a
/// cache value has a single writer.
#[derive(Debug, Clone, Default)]
pub struct ContextCache {
    path: Option<PathBuf>,
    entries: BTreeMap<(String, String), CacheEntry>,
}

impl ContextCache {
    pub fn in_memory() -> Self {
        ContextCache::default()
    }

    /// Opens `path`, loading existing entries; a missing file is an empty cache.
    pub fn open(path: &Path) -> Result<Self> {
        let mut cache = ContextCache {
            path: Some(path.to_path_buf()),
            entries: BTreeMap::new(),
        };
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(Error::io(path, e)),
        };
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let entry: CacheEntry = serde_json::from_str(line).map_err(|e| Error::Format {
                path: path.to_path_buf(),
                line: i + 1,
                message: e.to_string(),
            })?;
            cache
                .entries
                .insert((entry.word.clone(), entry.provider.clone()), entry);
        }
        Ok(cache)
    }

    pub fn get(&self, word: &str, provider: &str) -> Option<&CacheEntry> {
        self.entries.get(&(word.to_string(), provider.to_string()))
    }

    pub fn contains(&self, word: &str, provider: &str) -> bool {
        self.get(word, provider).is_some()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &CacheEntry> {
        self.entries.values()
    }

    pub fn providers(&self) -> BTreeSet<&str> {
        self.entries.keys().map(|(_, p)| p.as_str()).collect()
    }

    /// Stores an entry and, for a file-backed cache, appends it to the file.
    pub fn insert(&mut self, entry: CacheEntry) -> Result<()> {
        if let Some(path) = &self.path {
            let mut file = OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .map_err(|e| Error::io(path, e))?;
            let line = serde_json::to_string(&entry)?;
            writeln!(file, "{line}").map_err(|e| Error::io(path, e))?;
        }
        self.entries
            .insert((entry.word.clone(), entry.provider.clone()), entry);
        Ok(())
    }
}

/// Serves one provider's answers from a cache. Uncached words are `Missing`.
#[derive(Debug, Clone)]
pub struct CachedProvider<'a> {
    name: String,
    cache: &'a ContextCache,
}

impl<'a> CachedProvider<'a> {
    pub fn new(name: impl Into<String>, cache: &'a ContextCache) -> Self {
        CachedProvider {
            name: name.into(),
            cache,
        }
    }
}

impl ContextProvider for CachedProvider<'_> {
    fn name(&self) -> &str {
        &self.name
    }

    fn lookup(&self, word: &str) -> std::result::Result<Vec<String>, ProviderError> {
        self.cache
            .get(word, &self.name)
            .map(|e| e.subjects.clone())
            .ok_or(ProviderError::Missing)
    }
}

/// Spaces calls `1 / rate` seconds apart; the first call also waits one interval.
#[derive(Debug)]
pub struct RateLimiter {
    interval: Duration,
    next: Instant,
}

impl RateLimiter {
    pub fn per_second(rate: f64) -> Self {
        let interval = Duration::from_secs_f64(1.0 / rate);
        RateLimiter {
            interval,
            next: Instant::now() + interval,
        }
    }

    pub fn acquire(&mut self) {
        let now = Instant::now();
        if self.next > now {
            thread::sleep(self.next - now);
        }
        self.next = self.next.max(now) + self.interval;
    }
}

#[derive(Debug, Clone, Default)]
pub struct FetchOptions {
    /// Calls per second; `None` means unlimited.
    pub rate_limit: Option<f64>,
    pub policy: RetryPolicy,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FetchReport {
    pub fetched: Vec<String>,
    pub already_cached: Vec<String>,
    pub unresolved: Vec<Unresolved>,
}

/// Fetches every word not yet cached for `provider` and appends the answers.
pub fn fetch_and_cache<'a>(
    words: impl IntoIterator<Item = &'a str>,
    provider: &dyn ContextProvider,
    cache: &mut ContextCache,
    normalizer: &SubjectNormalizer,
    options: &FetchOptions,
) -> Result<FetchReport> {
    if let Some(rate) = options.rate_limit {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::Config(format!("rate limit must be positive, got {rate}")));
        }
    }
    let mut limiter = options.rate_limit.map(RateLimiter::per_second);
    let mut report = FetchReport::default();
    let distinct: BTreeSet<&str> = words.into_iter().map(str::trim).filter(|w| !w.is_empty()).collect();
    for word in distinct {
        if cache.contains(word, provider.name()) {
            report.already_cached.push(word.to_string());
            continue;
        }
        let answer = lookup_with_retry(provider, word, &options.policy, || {
            if let Some(l) = limiter.as_mut() {
                l.acquire();
            }
        });
        match answer {
            Ok(subjects) => {
                let subjects: Vec<String> = normalizer
                    .normalize_all(subjects.iter().map(String::as_str))
                    .into_iter()
                    .collect();
                cache.insert(CacheEntry {
                    word: word.to_string(),
                    provider: provider.name().to_string(),
                    subjects,
                    fetched_at: Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true),
                })?;
                report.fetched.push(word.to_string());
            }
            Err(u) => report.unresolved.push(u),
        }
    }
    Ok(report)
}

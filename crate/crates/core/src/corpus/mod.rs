//! The keyword corpus: articles, distinct keywords with their yearly
//! incidence, and the distinct constituent words.

mod input;
mod store;

use std::collections::{BTreeMap, BTreeSet};
use std::thread;

use serde::{Deserialize, Serialize};

use crate::classify::Lexicons;
use crate::error::{Error, Result};
use crate::tokenize::{decompose, NormalizationRules, Token, TokenSeq};

pub use input::{read_csv, read_ndjson, read_records, RecordBatch};
pub use store::{from_json, load, save, to_json, SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ArticleRef {
    pub article_id: String,
    pub year: i32,
    pub volume: Option<String>,
}

impl ArticleRef {
    pub fn new(article_id: impl Into<String>, year: i32) -> Self {
        ArticleRef {
            article_id: article_id.into(),
            year,
            volume: None,
        }
    }

    pub fn with_volume(mut self, volume: impl Into<String>) -> Self {
        self.volume = Some(volume.into());
        self
    }
}

/// One (article, keyword) row as found in the source.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct KeywordRecord {
    pub article: ArticleRef,
    pub raw_text: String,
}

impl KeywordRecord {
    pub fn new(article: ArticleRef, raw_text: impl Into<String>) -> Self {
        KeywordRecord {
            article,
            raw_text: raw_text.into(),
        }
    }
}

/// An accepted source row of a keyword.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Source {
    pub article_id: String,
    pub raw_text: String,
}

/// A distinct keyword of the corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Keyword {
    /// Normalized words, with `-` inside hyphen groups.
    pub canonical_text: String,
    pub tokens: TokenSeq,
    /// Year -> number of distinct articles carrying the keyword that year.
    pub yearly_incidence: BTreeMap<i32, u32>,
    pub total_frequency: u32,
    pub sources: BTreeSet<Source>,
}

impl Keyword {
    pub fn articles(&self) -> BTreeSet<&str> {
        self.sources.iter().map(|s| s.article_id.as_str()).collect()
    }

    pub fn appears_in(&self, year: i32) -> bool {
        self.yearly_incidence.contains_key(&year)
    }
}

/// A distinct constituent word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Word {
    pub surface: String,
    /// Token slots across the distinct-keyword set.
    pub occurrences: u32,
    /// Distinct keywords containing the word.
    pub keywords_formed: u32,
    /// Source spellings seen for the word, used by the acronym test.
    pub raw_surfaces: BTreeSet<String>,
}

/// A record refused at ingest. `line` is set when the reader knows it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rejection {
    pub line: Option<u64>,
    pub article_id: String,
    pub raw_text: String,
    pub reason: String,
}

impl std::fmt::Display for Rejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        write!(
            f,
            "rejected record (article {:?}, keyword {:?}): {}",
            self.article_id, self.raw_text, self.reason
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearRange {
    pub min: i32,
    pub max: i32,
}

impl Default for YearRange {
    fn default() -> Self {
        YearRange { min: 1900, max: 2100 }
    }
}

impl YearRange {
    pub fn contains(&self, year: i32) -> bool {
        (self.min..=self.max).contains(&year)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct IngestOptions {
    pub normalization: NormalizationRules,
    pub year_range: YearRange,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    normalization: NormalizationRules,
    year_range: YearRange,
    articles: BTreeMap<String, ArticleRef>,
    /// Keyed by the identity key (words joined by spaces).
    keywords: BTreeMap<String, Keyword>,
    words: BTreeMap<String, Word>,
    rejections: Vec<Rejection>,
}

impl Corpus {
    pub fn articles(&self) -> &BTreeMap<String, ArticleRef> {
        &self.articles
    }

    pub fn keywords(&self) -> &BTreeMap<String, Keyword> {
        &self.keywords
    }

    pub fn words(&self) -> &BTreeMap<String, Word> {
        &self.words
    }

    pub fn rejections(&self) -> &[Rejection] {
        &self.rejections
    }

    pub fn normalization(&self) -> &NormalizationRules {
        &self.normalization
    }

    pub fn year_range(&self) -> YearRange {
        self.year_range
    }

    pub fn keyword(&self, text: &str) -> Option<&Keyword> {
        self.keywords
            .get(text)
            .or_else(|| self.keywords.values().find(|k| k.canonical_text == text))
    }

    pub fn years(&self) -> BTreeSet<i32> {
        self.articles.values().map(|a| a.year).collect()
    }

    /// Accepted source rows, enough to rebuild this corpus with [`ingest`].
    pub fn records(&self) -> Vec<KeywordRecord> {
        let mut out = Vec::new();
        for kw in self.keywords.values() {
            for src in &kw.sources {
                let article = self.articles[&src.article_id].clone();
                out.push(KeywordRecord::new(article, src.raw_text.clone()));
            }
        }
        out.sort();
        out
    }

    /// Attaches rejections produced while reading the input files.
    pub fn with_reader_rejections(mut self, rejections: impl IntoIterator<Item = Rejection>) -> Self {
        self.rejections.extend(rejections);
        self.rejections.sort();
        self
    }

    /// Checks the structural invariants; used after loading persisted state.
    pub fn validate(&self) -> Result<()> {
        for (key, kw) in &self.keywords {
            let sum: u32 = kw.yearly_incidence.values().sum();
            if sum != kw.total_frequency {
                return Err(Error::Invariant(format!(
                    "keyword {key:?}: total_frequency {} != sum of yearly incidence {sum}",
                    kw.total_frequency
                )));
            }
            if kw.tokens.is_empty() {
                return Err(Error::Invariant(format!("keyword {key:?} has no tokens")));
            }
            for src in &kw.sources {
                if !self.articles.contains_key(&src.article_id) {
                    return Err(Error::Invariant(format!(
                        "keyword {key:?} cites unknown article {:?}",
                        src.article_id
                    )));
                }
            }
        }
        for (text, word) in &self.words {
            if !(word.occurrences >= word.keywords_formed && word.keywords_formed >= 1) {
                return Err(Error::Invariant(format!(
                    "word {text:?}: occurrences {} / keywords {}",
                    word.occurrences, word.keywords_formed
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct Accepted {
    article: ArticleRef,
    raw_text: String,
    tokens: TokenSeq,
}

/// Accumulates records; builders over disjoint record streams can be merged
/// in any order and finish to the same corpus.
#[derive(Debug, Clone)]
pub struct CorpusBuilder {
    options: IngestOptions,
    lexicons: Lexicons,
    accepted: Vec<Accepted>,
    rejections: Vec<Rejection>,
}

impl CorpusBuilder {
    pub fn new(options: IngestOptions, lexicons: Lexicons) -> Self {
        CorpusBuilder {
            options,
            lexicons,
            accepted: Vec::new(),
            rejections: Vec::new(),
        }
    }

    pub fn add(&mut self, record: KeywordRecord) {
        let reject = |reason: String| Rejection {
            line: None,
            article_id: record.article.article_id.clone(),
            raw_text: record.raw_text.clone(),
            reason,
        };
        if record.article.article_id.trim().is_empty() {
            self.rejections.push(reject("missing article_id".into()));
            return;
        }
        if record.raw_text.trim().is_empty() {
            self.rejections.push(reject("empty keyword".into()));
            return;
        }
        if !self.options.year_range.contains(record.article.year) {
            let r = self.options.year_range;
            self.rejections.push(reject(format!(
                "year {} outside {}..={}",
                record.article.year, r.min, r.max
            )));
            return;
        }
        match decompose(&record.raw_text, &self.options.normalization, &self.lexicons) {
            Ok(tokens) => self.accepted.push(Accepted {
                article: ArticleRef {
                    article_id: record.article.article_id.trim().to_string(),
                    ..record.article
                },
                raw_text: record.raw_text,
                tokens,
            }),
            Err(e) => self.rejections.push(reject(e.to_string())),
        }
    }

    pub fn extend(&mut self, records: impl IntoIterator<Item = KeywordRecord>) {
        for r in records {
            self.add(r);
        }
    }

    pub fn merge(&mut self, other: CorpusBuilder) {
        self.accepted.extend(other.accepted);
        self.rejections.extend(other.rejections);
    }

    pub fn finish(self) -> Result<Corpus> {
        let CorpusBuilder {
            options,
            accepted,
            mut rejections,
            ..
        } = self;

        // Articles whose rows disagree on metadata are dropped as a whole.
        let mut by_article: BTreeMap<String, Vec<Accepted>> = BTreeMap::new();
        for a in accepted {
            by_article.entry(a.article.article_id.clone()).or_default().push(a);
        }
        let mut articles = BTreeMap::new();
        let mut by_key: BTreeMap<String, Vec<Accepted>> = BTreeMap::new();
        for (id, rows) in by_article {
            let metas: BTreeSet<&ArticleRef> = rows.iter().map(|r| &r.article).collect();
            if metas.len() > 1 {
                let reason = format!(
                    "article {id:?} has conflicting year/volume: {}",
                    metas
                        .iter()
                        .map(|m| format!("{}/{}", m.year, m.volume.as_deref().unwrap_or("-")))
                        .collect::<Vec<_>>()
                        .join(", ")
                );
                rejections.extend(rows.iter().map(|r| Rejection {
                    line: None,
                    article_id: id.clone(),
                    raw_text: r.raw_text.clone(),
                    reason: reason.clone(),
                }));
                continue;
            }
            articles.insert(id, rows[0].article.clone());
            for row in rows {
                by_key.entry(row.tokens.key()).or_default().push(row);
            }
        }

        if by_key.is_empty() {
            return Err(Error::EmptyCorpus);
        }

        let mut keywords = BTreeMap::new();
        let mut words: BTreeMap<String, Word> = BTreeMap::new();
        for (key, rows) in by_key {
            let keyword = merge_variants(&rows);
            for (i, token) in keyword.tokens.tokens().iter().enumerate() {
                let word = words.entry(token.word.clone()).or_insert_with(|| Word {
                    surface: token.word.clone(),
                    occurrences: 0,
                    keywords_formed: 0,
                    raw_surfaces: BTreeSet::new(),
                });
                word.occurrences += 1;
                for row in &rows {
                    word.raw_surfaces.insert(row.tokens.tokens()[i].surface.clone());
                }
            }
            let distinct: BTreeSet<&str> = keyword.tokens.words().collect();
            for w in distinct {
                words.get_mut(w).expect("inserted above").keywords_formed += 1;
            }
            keywords.insert(key, keyword);
        }

        rejections.sort();
        rejections.dedup();
        Ok(Corpus {
            normalization: options.normalization,
            year_range: options.year_range,
            articles,
            keywords,
            words,
            rejections,
        })
    }
}

// All rows share the identity key, hence the word sequence and form flags.
fn merge_variants(rows: &[Accepted]) -> Keyword {
    let first = &rows[0].tokens;
    let n = first.len();
    let mut joins = vec![false; n.saturating_sub(1)];
    let mut tokens: Vec<Token> = first.tokens().to_vec();
    for row in rows {
        for (j, joined) in row.tokens.joins().into_iter().enumerate() {
            joins[j] |= joined;
        }
        for (t, other) in tokens.iter_mut().zip(row.tokens.tokens()) {
            if other.surface < t.surface {
                t.surface = other.surface.clone();
            }
        }
    }
    let tokens = TokenSeq::regroup(tokens, &joins);

    let sources: BTreeSet<Source> = rows
        .iter()
        .map(|r| Source {
            article_id: r.article.article_id.clone(),
            raw_text: r.raw_text.clone(),
        })
        .collect();
    let mut per_year: BTreeMap<i32, BTreeSet<&str>> = BTreeMap::new();
    for r in rows {
        per_year
            .entry(r.article.year)
            .or_default()
            .insert(&r.article.article_id);
    }
    let yearly_incidence: BTreeMap<i32, u32> = per_year
        .into_iter()
        .map(|(y, arts)| (y, arts.len() as u32))
        .collect();
    Keyword {
        canonical_text: tokens.render(),
        total_frequency: yearly_incidence.values().sum(),
        yearly_incidence,
        tokens,
        sources,
    }
}

/// Builds a corpus from records. Order of the records does not matter.
pub fn ingest(
    records: impl IntoIterator<Item = KeywordRecord>,
    options: &IngestOptions,
    lexicons: &Lexicons,
) -> Result<Corpus> {
    let mut builder = CorpusBuilder::new(options.clone(), lexicons.clone());
    builder.extend(records);
    builder.finish()
}

/// Same result as [`ingest`], decomposing the records on `workers` threads.
pub fn ingest_parallel(
    records: Vec<KeywordRecord>,
    options: &IngestOptions,
    lexicons: &Lexicons,
    workers: usize,
) -> Result<Corpus> {
    let workers = workers.max(1);
    let chunk = records.len().div_ceil(workers).max(1);
    let builders: Vec<CorpusBuilder> = thread::scope(|s| {
        let handles: Vec<_> = records
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    let mut b = CorpusBuilder::new(options.clone(), lexicons.clone());
                    b.extend(part.iter().cloned());
                    b
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("ingest worker panicked"))
            .collect()
    });
    let mut merged = CorpusBuilder::new(options.clone(), lexicons.clone());
    for b in builders {
        merged.merge(b);
    }
    merged.finish()
}

//! Word-association metrics.
//!
//! Every word category (FW, EW, AC, and SW at each degree of contextuality)
//! gets three counts over the distinct-keyword set:
//!
//! * `f`: distinct words in the category,
//! * `a`: associations made by those words with their neighbours,
//! * `k`: distinct keywords containing at least one word of the category,
//!
//! and five ratios derived from them:
//!
//! | name      | value           |
//! |-----------|-----------------|
//! | WD(A)     | a / f           |
//! | WC(A)     | a / k           |
//! | KD(F)     | k / f           |
//! | WD(A)I    | a / (f k)       |
//! | WD(A)I-N  | a / (f k D(C))  |

mod discipline;
mod trend;
mod yearly;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::classify::{WordClasses, WordKind};
use crate::corpus::Corpus;
use crate::tokenize::{wordship, TokenSeq};

pub use discipline::{
    discipline_ranking, rank_disciplines, subject_frequencies, DisciplineRanking, DisciplineStats,
};
pub use trend::{trend_diagnostics, TrendDiagnostics, WcExtreme};
pub use yearly::{
    wordship_pattern, yearly_keyword_stats, yearly_word_stats, WordshipBucket, WordshipDistribution,
    WordshipPattern, YearlyKeywordStats, YearlyWordStats,
};

/// A metrics row: one word category, with semantic words split by D(C).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CategoryKey {
    Semantic(u32),
    Acronym,
    Eponymous,
    Form,
}

impl CategoryKey {
    pub fn degree(self) -> Option<u32> {
        match self {
            CategoryKey::Semantic(d) => Some(d),
            _ => None,
        }
    }

    pub fn kind(self) -> WordKind {
        match self {
            CategoryKey::Semantic(_) => WordKind::Semantic,
            CategoryKey::Acronym => WordKind::Acronym,
            CategoryKey::Eponymous => WordKind::Eponymous,
            CategoryKey::Form => WordKind::Form,
        }
    }
}

impl fmt::Display for CategoryKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CategoryKey::Semantic(d) => write!(f, "{d}-C"),
            other => f.write_str(other.kind().code()),
        }
    }
}

impl FromStr for CategoryKey {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let inner = s
            .strip_prefix("SW")
            .map(|r| r.trim().trim_start_matches('(').trim_end_matches(')').trim())
            .unwrap_or(s);
        match inner {
            "AC" => Ok(CategoryKey::Acronym),
            "EW" => Ok(CategoryKey::Eponymous),
            "FW" => Ok(CategoryKey::Form),
            other => other
                .strip_suffix("-C")
                .and_then(|d| d.parse().ok())
                .map(CategoryKey::Semantic)
                .ok_or_else(|| format!("unknown word category {s:?}")),
        }
    }
}

impl Serialize for CategoryKey {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CategoryKey {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// The fundamental triple of one category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryStats {
    pub category: CategoryKey,
    pub f: u64,
    pub a: u64,
    pub k: u64,
}

impl CategoryStats {
    pub fn new(category: CategoryKey, f: u64, a: u64, k: u64) -> Self {
        CategoryStats { category, f, a, k }
    }

    pub fn parameters(&self) -> ParameterSet {
        parameters(self, self.category.degree())
    }
}

/// The five derived ratios; a ratio is absent when its denominator is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ParameterSet {
    pub wd_a: Option<Ratio<u64>>,
    pub wc_a: Option<Ratio<u64>>,
    pub kd_f: Option<Ratio<u64>>,
    pub wd_a_index: Option<Ratio<u64>>,
    /// Only for semantic words with D(C) >= 1.
    pub wd_a_index_normalized: Option<Ratio<u64>>,
}

pub fn parameters(stats: &CategoryStats, degree: Option<u32>) -> ParameterSet {
    let CategoryStats { f, a, k, .. } = *stats;
    let div = |num: u64, den: u64| (den > 0).then(|| Ratio::new(num, den));
    let degree = match stats.category {
        CategoryKey::Semantic(_) => degree.filter(|d| *d > 0),
        _ => None,
    };
    ParameterSet {
        wd_a: div(a, f),
        wc_a: div(a, k),
        kd_f: div(k, f),
        wd_a_index: div(a, f * k),
        wd_a_index_normalized: degree.and_then(|d| div(a, f * k * d as u64)),
    }
}

/// How neighbours are found when counting associations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdjacencyRule {
    /// Form words are removed before looking for neighbours.
    #[default]
    Reduced,
    /// Neighbours in the keyword as written, form words included.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AssociationConfig {
    /// Rule for SW, EW and AC words. Form words always use the full sequence.
    pub rule: AdjacencyRule,
    /// Whether a form word next to another form word counts as an FW association.
    pub form_word_pairs: bool,
}

impl Default for AssociationConfig {
    fn default() -> Self {
        AssociationConfig {
            rule: AdjacencyRule::Reduced,
            form_word_pairs: true,
        }
    }
}

/// Associations contributed by one keyword to `category`: for each token of
/// the category, its number of immediate neighbours. A pair of same-category
/// words therefore counts twice.
pub fn associations(
    tokens: &TokenSeq,
    category: CategoryKey,
    classes: &WordClasses,
    config: &AssociationConfig,
) -> u64 {
    let is_form = |w: &str| classes.kind(w) == Some(WordKind::Form);
    let words: Vec<&str> = tokens.words().collect();

    if category == CategoryKey::Form {
        let mut count = 0;
        for (i, w) in words.iter().enumerate() {
            if !is_form(w) {
                continue;
            }
            let neighbours = [i.checked_sub(1), Some(i + 1)];
            count += neighbours
                .into_iter()
                .flatten()
                .filter_map(|j| words.get(j))
                .filter(|n| config.form_word_pairs || !is_form(n))
                .count() as u64;
        }
        return count;
    }

    let seq: Vec<&str> = match config.rule {
        AdjacencyRule::Reduced => words.into_iter().filter(|w| !is_form(w)).collect(),
        AdjacencyRule::Full => words,
    };
    let n = seq.len() as u64;
    seq.iter()
        .enumerate()
        .filter(|(_, w)| classes.key(w) == Some(category))
        .map(|(i, _)| match (i == 0, i as u64 + 1 == n) {
            (true, true) => 0,
            (true, false) | (false, true) => 1,
            (false, false) => 2,
        })
        .sum()
}

/// (f, a, k) of one category over the distinct keywords. An empty category
/// gives (0, 0, 0).
pub fn fundamental_triple(
    corpus: &Corpus,
    classes: &WordClasses,
    category: CategoryKey,
    config: &AssociationConfig,
) -> CategoryStats {
    let f = corpus
        .words()
        .keys()
        .filter(|w| classes.key(w) == Some(category))
        .count() as u64;
    let (mut a, mut k) = (0, 0);
    for keyword in corpus.keywords().values() {
        if keyword.tokens.words().any(|w| classes.key(w) == Some(category)) {
            k += 1;
            a += associations(&keyword.tokens, category, classes, config);
        }
    }
    CategoryStats::new(category, f, a, k)
}

/// Triples for every semantic degree present plus the AC, EW and FW rows
/// (which are always listed, possibly empty), in table order.
pub fn category_table(corpus: &Corpus, classes: &WordClasses, config: &AssociationConfig) -> Vec<CategoryStats> {
    let mut keys: BTreeSet<CategoryKey> = corpus.words().keys().filter_map(|w| classes.key(w)).collect();
    keys.extend([CategoryKey::Acronym, CategoryKey::Eponymous, CategoryKey::Form]);
    keys.into_iter()
        .map(|key| fundamental_triple(corpus, classes, key, config))
        .collect()
}

/// Wordship of each distinct keyword, keyed by identity key.
pub fn keyword_wordships(corpus: &Corpus) -> impl Iterator<Item = (&str, usize)> {
    corpus
        .keywords()
        .iter()
        .map(|(key, kw)| (key.as_str(), wordship(&kw.tokens)))
}

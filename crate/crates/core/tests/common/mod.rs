//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::OnceLock;

use proptest::prelude::*;
use wordship::analysis::Analysis;
use wordship::classify::Lexicons;
use wordship::config::Config;
use wordship::context::{ContextProvider, RetryPolicy, SubjectLexicon, SubjectNormalizer};
use wordship::corpus::{ingest, read_records, ArticleRef, Corpus, IngestOptions, KeywordRecord};
use wordship::metrics::CategoryKey;

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

/// The five-keyword corpus with its two stub subject lexicons.
pub fn golden_analysis() -> Analysis {
    let config = Config::load(&fixture("golden/wordship.json")).unwrap();
    let lexicons = config.lexicons().unwrap();
    let batch = read_records(&fixture("golden/corpus.csv")).unwrap();
    assert!(batch.rejections.is_empty(), "{:?}", batch.rejections);
    let corpus = ingest(batch.records, &config.ingest_options().unwrap(), &lexicons).unwrap();
    let cache = config.open_cache().unwrap();
    let providers = config.providers(&cache).unwrap();
    let refs: Vec<&dyn ContextProvider> = providers.iter().map(|p| p.as_ref()).collect();
    Analysis::new(corpus, &lexicons)
        .unwrap()
        .with_contexts(&refs, &config.normalizer().unwrap(), &config.retry_policy())
}

pub fn tsv_rows(rel: &str) -> Vec<Vec<String>> {
    std::fs::read_to_string(fixture(rel))
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| l.split('\t').map(|c| c.trim().to_string()).collect())
        .collect()
}

/// A reference association-parameter row: category, f, a, k and the five printed values.
pub struct PrintedRow {
    pub category: CategoryKey,
    pub f: u64,
    pub a: u64,
    pub k: u64,
    pub printed: [Option<f64>; 5],
}

pub fn reference_parameters() -> Vec<PrintedRow> {
    tsv_rows("reference_parameters.tsv")
        .into_iter()
        .map(|r| {
            let num = |i: usize| r.get(i).filter(|s| !s.is_empty()).map(|s| s.parse::<f64>().unwrap());
            PrintedRow {
                category: r[0].parse().unwrap(),
                f: r[1].parse().unwrap(),
                a: r[2].parse().unwrap(),
                k: r[3].parse().unwrap(),
                printed: [num(4), num(5), num(6), num(7), num(8)],
            }
        })
        .collect()
}

// Random corpora -------------------------------------------------------------

pub const FORM_WORDS: [&str; 5] = ["of", "and", "in", "the", "for"];
pub const CONTENT_WORDS: [&str; 16] = [
    "laser", "crystal", "spin", "wave", "gap", "band", "field", "noise", "phonon", "magnet", "film", "edge",
    "raman", "hall", "LED", "NMR",
];

pub fn random_lexicons() -> Lexicons {
    static LEXICONS: OnceLock<Lexicons> = OnceLock::new();
    LEXICONS
        .get_or_init(|| Lexicons::english().with_eponyms(["raman", "hall"]).unwrap())
        .clone()
}

fn ingest_options() -> &'static IngestOptions {
    static OPTIONS: OnceLock<IngestOptions> = OnceLock::new();
    OPTIONS.get_or_init(IngestOptions::default)
}

/// Subject lexicon for the random vocabulary. "edge" and "film" are absent (0-C).
pub fn random_subjects() -> SubjectLexicon {
    let subjects = ["physics", "optics", "chemistry", "music", "geology", "biology", "medicine"];
    let entries = CONTENT_WORDS.iter().enumerate().filter(|(_, w)| !matches!(**w, "edge" | "film")).map(|(i, w)| {
        let n = 1 + i % 5;
        (w.to_lowercase(), subjects[..n].iter().map(|s| s.to_string()).collect::<Vec<_>>())
    });
    SubjectLexicon::from_entries("stub", entries)
}

pub fn random_analysis(corpus: Corpus) -> Analysis {
    let provider = random_subjects();
    Analysis::new(corpus, &random_lexicons())
        .unwrap()
        .with_contexts(&[&provider], &SubjectNormalizer::default(), &RetryPolicy::no_wait(0))
}

/// Keyword text: one to six words, at least one content word, joined by spaces or hyphens.
pub fn keyword_text() -> impl Strategy<Value = String> {
    (
        prop::sample::select(CONTENT_WORDS.to_vec()),
        prop::collection::vec((any::<bool>(), prop::sample::select(CONTENT_WORDS.to_vec()), any::<bool>()), 0..6),
    )
        .prop_map(|(first, rest)| {
            let mut text = first.to_string();
            for (form, word, hyphen) in rest {
                let w = if form { FORM_WORDS[word.len() % FORM_WORDS.len()] } else { word };
                text.push(if hyphen && !form { '-' } else { ' ' });
                text.push_str(w);
            }
            text
        })
}

/// Up to 50 records over up to 12 articles; an article's year is fixed by its id.
pub fn records(max: usize) -> impl Strategy<Value = Vec<KeywordRecord>> {
    prop::collection::vec((0u32..12, keyword_text()), 1..=max).prop_map(|rows| {
        rows.into_iter()
            .map(|(article, text)| {
                let year = 2006 + (article % 5) as i32;
                let article = ArticleRef::new(format!("art-{article:02}"), year).with_volume((year - 1974).to_string());
                KeywordRecord::new(article, text)
            })
            .collect()
    })
}

pub fn build(records: Vec<KeywordRecord>) -> Corpus {
    static LEXICONS: OnceLock<Lexicons> = OnceLock::new();
    ingest(records, ingest_options(), LEXICONS.get_or_init(random_lexicons)).unwrap()
}

/// Every record repeated in `copies` distinct articles of the same year.
pub fn replicate(records: &[KeywordRecord], copies: u32) -> Vec<KeywordRecord> {
    let mut out = Vec::new();
    for r in records {
        for c in 0..copies {
            let mut a = r.article.clone();
            a.article_id = format!("{}-copy{c}", a.article_id);
            out.push(KeywordRecord::new(a, r.raw_text.clone()));
        }
    }
    out
}

/// Independent association count: drop form words, list every adjacent pair,
/// and credit each endpoint that belongs to the category.
pub fn brute_force_associations(
    sequences: &[Vec<&str>],
    is_form: impl Fn(&str) -> bool,
    in_category: impl Fn(&str) -> bool,
) -> u64 {
    let mut total = 0;
    for seq in sequences {
        let reduced: Vec<&str> = seq.iter().copied().filter(|w| !is_form(w)).collect();
        for pair in reduced.windows(2) {
            total += pair.iter().filter(|w| in_category(w)).count() as u64;
        }
    }
    total
}

pub fn counts<K: Ord>(items: impl IntoIterator<Item = K>) -> BTreeMap<K, u64> {
    let mut m = BTreeMap::new();
    for i in items {
        *m.entry(i).or_insert(0) += 1;
    }
    m
}

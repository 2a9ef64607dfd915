//! Word categories: eponymous words (EW), form words (FW), acronyms (AC) and
//! semantic words (SW). Semantic words later receive a degree of contextuality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::context::{ContextDegree, ContextResolution};
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::metrics::CategoryKey;
use crate::textfile;

const BUILTIN_FORM_WORDS: &str = include_str!("../data/form_words.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum WordKind {
    #[serde(rename = "SW")]
    Semantic,
    #[serde(rename = "AC")]
    Acronym,
    #[serde(rename = "EW")]
    Eponymous,
    #[serde(rename = "FW")]
    Form,
}

impl WordKind {
    pub const ALL: [WordKind; 4] = [
        WordKind::Semantic,
        WordKind::Acronym,
        WordKind::Eponymous,
        WordKind::Form,
    ];

    pub fn code(self) -> &'static str {
        match self {
            WordKind::Semantic => "SW",
            WordKind::Acronym => "AC",
            WordKind::Eponymous => "EW",
            WordKind::Form => "FW",
        }
    }
}

impl fmt::Display for WordKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordCategory {
    pub kind: WordKind,
    /// Present only for semantic words whose context has been resolved.
    pub context_degree: Option<ContextDegree>,
}

impl WordCategory {
    pub fn of(kind: WordKind) -> Self {
        WordCategory {
            kind,
            context_degree: None,
        }
    }

    /// Metrics key, or `None` for a semantic word without a resolved degree.
    pub fn key(&self) -> Option<CategoryKey> {
        match self.kind {
            WordKind::Semantic => self.context_degree.map(|d| CategoryKey::Semantic(d.value())),
            WordKind::Acronym => Some(CategoryKey::Acronym),
            WordKind::Eponymous => Some(CategoryKey::Eponymous),
            WordKind::Form => Some(CategoryKey::Form),
        }
    }
}

impl fmt::Display for WordCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.kind, self.context_degree) {
            (WordKind::Semantic, Some(d)) => write!(f, "SW ({d})"),
            (kind, _) => write!(f, "{kind}"),
        }
    }
}

/// Word lists that decide FW, EW and AC membership. Entries are compared
/// case-insensitively; the three sets must be pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Lexicons {
    form_words: BTreeSet<String>,
    eponyms: BTreeSet<String>,
    acronyms: BTreeSet<String>,
}

impl Lexicons {
    pub fn new<F, E, A>(form_words: F, eponyms: E, acronyms: A) -> Result<Self>
    where
        F: IntoIterator,
        F::Item: AsRef<str>,
        E: IntoIterator,
        E::Item: AsRef<str>,
        A: IntoIterator,
        A::Item: AsRef<str>,
    {
        fn fold<I: IntoIterator>(items: I) -> BTreeSet<String>
        where
            I::Item: AsRef<str>,
        {
            items
                .into_iter()
                .map(|s| s.as_ref().trim().to_lowercase())
                .filter(|s| !s.is_empty())
                .collect()
        }
        let lex = Lexicons {
            form_words: fold(form_words),
            eponyms: fold(eponyms),
            acronyms: fold(acronyms),
        };
        lex.validate()?;
        Ok(lex)
    }

    /// The builtin English form-word list and empty eponym/acronym lists.
    pub fn english() -> Self {
        Lexicons::new(
            textfile::parse_word_list(BUILTIN_FORM_WORDS),
            std::iter::empty::<&str>(),
            std::iter::empty::<&str>(),
        )
        .expect("builtin form words are valid")
    }

    pub fn builtin_form_words() -> Vec<String> {
        textfile::parse_word_list(BUILTIN_FORM_WORDS)
    }

    /// Loads lexicon files; an absent form-word path selects the builtin list.
    pub fn from_files(
        form_words: Option<&Path>,
        eponyms: Option<&Path>,
        acronyms: Option<&Path>,
    ) -> Result<Self> {
        let read = |p: Option<&Path>| -> Result<Option<Vec<String>>> {
            p.map(|p| textfile::read(p).map(|t| textfile::parse_word_list(&t)))
                .transpose()
        };
        Lexicons::new(
            read(form_words)?.unwrap_or_else(Lexicons::builtin_form_words),
            read(eponyms)?.unwrap_or_default(),
            read(acronyms)?.unwrap_or_default(),
        )
    }

    pub fn with_eponyms<I>(mut self, eponyms: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: AsRef<str>,
    {
        self.eponyms
            .extend(eponyms.into_iter().map(|s| s.as_ref().trim().to_lowercase()));
        self.validate()?;
        Ok(self)
    }

    pub fn with_acronyms<I>(mut self, acronyms: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: AsRef<str>,
    {
        self.acronyms
            .extend(acronyms.into_iter().map(|s| s.as_ref().trim().to_lowercase()));
        self.validate()?;
        Ok(self)
    }

    /// Fails on the first word present in two lists.
    pub fn validate(&self) -> Result<()> {
        let pairs = [
            (&self.form_words, "form word", &self.eponyms, "eponym"),
            (&self.form_words, "form word", &self.acronyms, "acronym"),
            (&self.eponyms, "eponym", &self.acronyms, "acronym"),
        ];
        for (a, an, b, bn) in pairs {
            if let Some(word) = a.intersection(b).next() {
                return Err(Error::LexiconConflict {
                    word: word.clone(),
                    first: an,
                    second: bn,
                });
            }
        }
        Ok(())
    }

    pub fn is_form_word(&self, word: &str) -> bool {
        self.form_words.contains(&word.to_lowercase())
    }

    pub fn is_eponym(&self, word: &str) -> bool {
        self.eponyms.contains(&word.to_lowercase())
    }

    pub fn is_acronym(&self, word: &str) -> bool {
        self.acronyms.contains(&word.to_lowercase())
    }

    pub fn form_words(&self) -> &BTreeSet<String> {
        &self.form_words
    }

    pub fn eponyms(&self) -> &BTreeSet<String> {
        &self.eponyms
    }

    pub fn acronyms(&self) -> &BTreeSet<String> {
        &self.acronyms
    }
}

/// 2 to 6 characters, all uppercase letters or digits, with at least one letter.
pub fn is_acronym_shaped(s: &str) -> bool {
    let n = s.chars().count();
    (2..=6).contains(&n)
        && s.chars().all(|c| c.is_uppercase() || c.is_ascii_digit())
        && s.chars().any(char::is_uppercase)
}

/// Classifies one normalized word with precedence FW > EW > AC > SW.
pub fn classify_word(word: &str, lexicons: &Lexicons, raw_surface: &str) -> Result<WordCategory> {
    if word.trim().is_empty() {
        return Err(Error::EmptyWord);
    }
    let kind = if lexicons.is_form_word(word) {
        WordKind::Form
    } else if lexicons.is_eponym(word) {
        WordKind::Eponymous
    } else if lexicons.is_acronym(word) || is_acronym_shaped(raw_surface) || is_acronym_shaped(word)
    {
        WordKind::Acronym
    } else {
        WordKind::Semantic
    };
    Ok(WordCategory::of(kind))
}

/// Category of every distinct word of a corpus.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WordClasses {
    map: BTreeMap<String, WordCategory>,
}

impl WordClasses {
    pub fn get(&self, word: &str) -> Option<&WordCategory> {
        self.map.get(word)
    }

    pub fn kind(&self, word: &str) -> Option<WordKind> {
        self.map.get(word).map(|c| c.kind)
    }

    pub fn key(&self, word: &str) -> Option<CategoryKey> {
        self.map.get(word).and_then(WordCategory::key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &WordCategory)> {
        self.map.iter().map(|(w, c)| (w.as_str(), c))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn insert(&mut self, word: impl Into<String>, category: WordCategory) {
        self.map.insert(word.into(), category);
    }

    /// Semantic words, the ones that need a context lookup.
    pub fn semantic_words(&self) -> impl Iterator<Item = &str> {
        self.iter()
            .filter(|(_, c)| c.kind == WordKind::Semantic)
            .map(|(w, _)| w)
    }

    /// Fills the degree of every resolved semantic word; unresolved ones keep `None`.
    pub fn apply_contexts(&mut self, resolution: &ContextResolution) {
        for (word, category) in self.map.iter_mut() {
            if category.kind == WordKind::Semantic {
                category.context_degree = resolution
                    .contexts
                    .get(word)
                    .map(|c| ContextDegree::new(c.degree));
            }
        }
    }
}

/// Classifies every word of `corpus`. A word is an acronym if any of its raw
/// surfaces is acronym-shaped.
pub fn classify_corpus(corpus: &Corpus, lexicons: &Lexicons) -> Result<WordClasses> {
    let mut map = BTreeMap::new();
    for (text, word) in corpus.words() {
        let mut category = classify_word(text, lexicons, text)?;
        if category.kind == WordKind::Semantic
            && word.raw_surfaces.iter().any(|s| is_acronym_shaped(s))
        {
            category = WordCategory::of(WordKind::Acronym);
        }
        map.insert(text.clone(), category);
    }
    Ok(WordClasses { map })
}

/// Distinct-word count per kind. Every corpus word must be classified.
pub fn category_census(corpus: &Corpus, classes: &WordClasses) -> Result<BTreeMap<WordKind, usize>> {
    let missing: Vec<String> = corpus
        .words()
        .keys()
        .filter(|w| classes.get(w).is_none())
        .cloned()
        .collect();
    if !missing.is_empty() {
        return Err(Error::Unclassified(missing));
    }
    let mut census: BTreeMap<WordKind, usize> = WordKind::ALL.iter().map(|k| (*k, 0)).collect();
    for word in corpus.words().keys() {
        if let Some(kind) = classes.kind(word) {
            *census.entry(kind).or_default() += 1;
        }
    }
    Ok(census)
}

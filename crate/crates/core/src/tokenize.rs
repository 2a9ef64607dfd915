//! Keyword decomposition: splitting a keyword string into normalized
//! constituent words while keeping hyphen-group structure and form-word flags.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classify::{is_acronym_shaped, Lexicons};
use crate::error::{Error, Result};
use crate::textfile;

const BUILTIN_EXCEPTIONS: &str = include_str!("../data/singular_exceptions.tsv");

/// Characters treated as hyphens when splitting compounds.
const HYPHENS: [char; 4] = ['-', '\u{2010}', '\u{2011}', '\u{2013}'];

/// Normalization applied to every token before it becomes a word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormalizationRules {
    pub lowercase: bool,
    pub singularize: bool,
    pub hyphen_splits: bool,
    /// Characters deleted from the keyword before splitting.
    #[serde(with = "char_set")]
    pub strip_characters: BTreeSet<char>,
    /// `plural -> singular` overrides consulted before the suffix rules.
    pub exceptions: BTreeMap<String, String>,
}

impl Default for NormalizationRules {
    fn default() -> Self {
        NormalizationRules {
            lowercase: true,
            singularize: true,
            hyphen_splits: true,
            strip_characters: ['"', '\'', '(', ')', '\u{2018}', '\u{2019}', '\u{201c}', '\u{201d}']
                .into_iter()
                .collect(),
            exceptions: parse_exceptions(BUILTIN_EXCEPTIONS, Path::new("<builtin>"))
                .expect("builtin exception lexicon is valid"),
        }
    }
}

impl NormalizationRules {
    /// Adds the pairs of an exception lexicon file, overriding builtin entries.
    pub fn load_exceptions(&mut self, path: &Path) -> Result<()> {
        let text = textfile::read(path)?;
        let extra = parse_exceptions(&text, path)?;
        self.exceptions.extend(extra);
        check_exceptions(&self.exceptions, path)
    }
}

/// Parses `plural<TAB>singular` lines.
pub fn parse_exceptions(text: &str, path: &Path) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (_, plural, singular) in textfile::parse_pairs(text, path)? {
        map.insert(plural.to_lowercase(), singular.to_lowercase());
    }
    check_exceptions(&map, path)?;
    Ok(map)
}

// Targets must be fixpoints so that normalization stays idempotent.
fn check_exceptions(map: &BTreeMap<String, String>, path: &Path) -> Result<()> {
    for (plural, singular) in map {
        if let Some(next) = map.get(singular) {
            if next != singular {
                return Err(Error::Format {
                    path: path.to_path_buf(),
                    line: 0,
                    message: format!(
                        "exception {plural:?} -> {singular:?} chains into {singular:?} -> {next:?}"
                    ),
                });
            }
        }
    }
    Ok(())
}

mod char_set {
    use std::collections::BTreeSet;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(set: &BTreeSet<char>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&set.iter().collect::<String>())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeSet<char>, D::Error> {
        Ok(String::deserialize(d)?.chars().collect())
    }
}

/// One constituent word of a keyword.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    /// Normalized word; the identity used everywhere downstream.
    pub word: String,
    /// The token as it appeared in the source, after character stripping.
    pub surface: String,
    /// Tokens of one hyphenated compound share a group id (1-based within the keyword).
    pub group: Option<u32>,
    pub form_word: bool,
}

/// Ordered constituent words of one keyword.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TokenSeq {
    tokens: Vec<Token>,
}

impl TokenSeq {
    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.word.as_str())
    }

    /// Identity key: normalized words joined by single spaces, hyphen structure ignored.
    pub fn key(&self) -> String {
        self.words().collect::<Vec<_>>().join(" ")
    }

    /// Words joined by spaces, with `-` between members of one hyphen group.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.tokens.iter().enumerate() {
            if i > 0 {
                let prev = &self.tokens[i - 1];
                let joined = prev.group.is_some() && prev.group == t.group;
                out.push(if joined { '-' } else { ' ' });
            }
            out.push_str(&t.word);
        }
        out
    }

    /// `true` between positions `i` and `i + 1` when they belong to one hyphen group.
    pub(crate) fn joins(&self) -> Vec<bool> {
        self.tokens
            .windows(2)
            .map(|w| w[0].group.is_some() && w[0].group == w[1].group)
            .collect()
    }

    /// Builds a sequence over the same words from explicit join flags, renumbering groups.
    pub(crate) fn regroup(mut tokens: Vec<Token>, joins: &[bool]) -> TokenSeq {
        let mut next = 0;
        for i in 0..tokens.len() {
            let joined_left = i > 0 && joins[i - 1];
            let joined_right = i + 1 < tokens.len() && joins[i];
            tokens[i].group = if joined_left {
                tokens[i - 1].group
            } else if joined_right {
                next += 1;
                Some(next)
            } else {
                None
            };
        }
        TokenSeq { tokens }
    }
}

impl fmt::Display for TokenSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Number of non-form-word tokens.
pub fn wordship(seq: &TokenSeq) -> usize {
    seq.tokens.iter().filter(|t| !t.form_word).count()
}

/// Splits `raw` into normalized words.
///
/// Splitting happens on whitespace and, when `hyphen_splits` is on, on hyphens;
/// the pieces of one hyphenated run share a group id. Leading and trailing
/// punctuation of each piece is dropped.
pub fn decompose(raw: &str, rules: &NormalizationRules, lexicons: &Lexicons) -> Result<TokenSeq> {
    let cleaned: String = raw
        .chars()
        .filter(|c| !rules.strip_characters.contains(c))
        .collect();

    let mut tokens = Vec::new();
    let mut next_group = 0;
    for chunk in cleaned.split_whitespace() {
        let pieces: Vec<&str> = if rules.hyphen_splits {
            chunk.split(&HYPHENS[..]).map(trim_punctuation).filter(|p| !p.is_empty()).collect()
        } else {
            Some(trim_punctuation(chunk)).filter(|p| !p.is_empty()).into_iter().collect()
        };
        let group = if pieces.len() > 1 {
            next_group += 1;
            Some(next_group)
        } else {
            None
        };
        for piece in pieces {
            let word = normalize_word(piece, rules);
            tokens.push(Token {
                form_word: lexicons.is_form_word(&word),
                word,
                surface: piece.to_string(),
                group,
            });
        }
    }

    if tokens.is_empty() {
        return Err(Error::NoTokens(raw.to_string()));
    }
    if tokens.iter().all(|t| t.form_word) {
        return Err(Error::OnlyFormWords(raw.to_string()));
    }
    Ok(TokenSeq { tokens })
}

fn trim_punctuation(s: &str) -> &str {
    s.trim_matches(|c: char| !c.is_alphanumeric())
}

/// Normalizes one token. Idempotent for every rule set.
///
/// Acronym-shaped tokens keep their case; a plural acronym such as `LEDs`
/// loses its trailing `s` when singularization is on.
pub fn normalize_word(token: &str, rules: &NormalizationRules) -> String {
    if is_acronym_shaped(token) {
        return token.to_string();
    }
    if rules.singularize {
        if let Some(stem) = token.strip_suffix('s') {
            if is_acronym_shaped(stem) {
                return stem.to_string();
            }
        }
    }
    let word = if rules.lowercase {
        token.to_lowercase()
    } else {
        token.to_string()
    };
    if rules.singularize {
        singularize(&word, &rules.exceptions)
    } else {
        word
    }
}

/// Applies the suffix rules until the word stops changing.
pub fn singularize(word: &str, exceptions: &BTreeMap<String, String>) -> String {
    let mut current = word.to_string();
    // Each step either shortens the word or lands on an exception target, which is final.
    for _ in 0..16 {
        match singularize_once(&current, exceptions) {
            Some(next) if next != current => current = next,
            _ => break,
        }
    }
    current
}

fn singularize_once(word: &str, exceptions: &BTreeMap<String, String>) -> Option<String> {
    let lower = word.to_lowercase();
    if let Some(singular) = exceptions.get(&lower) {
        return Some(match_case(word, singular));
    }
    if exceptions.values().any(|v| *v == lower) {
        return None;
    }
    if lower.chars().count() <= 3 || !lower.ends_with('s') {
        return None;
    }
    if ["ss", "us", "is", "ics"].iter().any(|s| lower.ends_with(s)) {
        return None;
    }
    let stem = if lower.ends_with("ies") && lower.chars().count() > 4 {
        return Some(format!("{}y", &word[..word.len() - 3]));
    } else if ["sses", "xes", "ches", "shes", "zzes"].iter().any(|s| lower.ends_with(s)) {
        &word[..word.len() - 2]
    } else {
        &word[..word.len() - 1]
    };
    Some(stem.to_string())
}

// Carries a leading capital over to an exception target when lowercasing is off.
fn match_case(original: &str, target: &str) -> String {
    let mut chars = original.chars();
    match chars.next() {
        Some(c) if c.is_uppercase() => {
            let mut t = target.chars();
            t.next()
                .map(|first| first.to_uppercase().chain(t).collect())
                .unwrap_or_default()
        }
        _ => target.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> Lexicons {
        Lexicons::english()
    }

    fn decomp(raw: &str) -> TokenSeq {
        decompose(raw, &NormalizationRules::default(), &lex()).unwrap()
    }

    fn summary(seq: &TokenSeq) -> Vec<(String, Option<u32>, bool)> {
        seq.tokens().iter().map(|t| (t.word.clone(), t.group, t.form_word)).collect()
    }

    #[test]
    fn aharonov_bohm_effect() {
        let seq = decomp("Aharonov-Bohm effect");
        assert_eq!(
            summary(&seq),
            vec![
                ("aharonov".into(), Some(1), false),
                ("bohm".into(), Some(1), false),
                ("effect".into(), None, false),
            ]
        );
        assert_eq!(seq.render(), "aharonov-bohm effect");
    }

    #[test]
    fn nuclear_spin_lattice() {
        let seq = decomp("Nuclear spin-lattice relaxation effect");
        let words: Vec<_> = seq.words().collect();
        assert_eq!(words, ["nuclear", "spin", "lattice", "relaxation", "effect"]);
        assert_eq!(seq.tokens()[1].group, Some(1));
        assert_eq!(seq.tokens()[2].group, Some(1));
        assert_eq!(seq.tokens()[3].group, None);
        assert_eq!(wordship(&seq), 5);
    }

    #[test]
    fn form_words_are_flagged_and_excluded_from_wordship() {
        let seq = decomp("Defect of absorption-spectra");
        assert_eq!(
            summary(&seq),
            vec![
                ("defect".into(), None, false),
                ("of".into(), None, true),
                ("absorption".into(), Some(1), false),
                ("spectra".into(), Some(1), false),
            ]
        );
        assert_eq!(wordship(&seq), 3);
        assert_eq!(wordship(&decomp("Surface of acoustic wave")), 3);
        assert_eq!(wordship(&decomp("Wide band-gap semiconductor")), 4);
        assert_eq!(wordship(&decomp("laser")), 1);
    }

    #[test]
    fn triple_hyphen_run_is_one_group() {
        let seq = decomp("nuclear spin-lattice-relaxation effect");
        let groups: Vec<_> = seq.tokens().iter().map(|t| t.group).collect();
        assert_eq!(groups, [None, Some(1), Some(1), Some(1), None]);
        assert_eq!(seq.key(), "nuclear spin lattice relaxation effect");
    }

    #[test]
    fn hyphen_splitting_can_be_disabled() {
        let rules = NormalizationRules {
            hyphen_splits: false,
            ..Default::default()
        };
        let seq = decompose("spin-lattice relaxation", &rules, &lex()).unwrap();
        let words: Vec<_> = seq.words().collect();
        assert_eq!(words, ["spin-lattice", "relaxation"]);
    }

    #[test]
    fn stripping_and_edge_punctuation() {
        let seq = decomp("\"Quantum (Hall) effect,\"");
        let words: Vec<_> = seq.words().collect();
        assert_eq!(words, ["quantum", "hall", "effect"]);
    }

    #[test]
    fn empty_and_form_only_keywords_are_errors() {
        let rules = NormalizationRules::default();
        assert!(matches!(decompose("   ", &rules, &lex()), Err(Error::NoTokens(_))));
        assert!(matches!(decompose("(\"\")", &rules, &lex()), Err(Error::NoTokens(_))));
        assert!(matches!(decompose(" - ", &rules, &lex()), Err(Error::NoTokens(_))));
        assert!(matches!(
            decompose("of the", &rules, &lex()),
            Err(Error::OnlyFormWords(_))
        ));
    }

    #[test]
    fn numbers_are_kept() {
        let seq = decomp("helium 3");
        assert_eq!(seq.words().collect::<Vec<_>>(), ["helium", "3"]);
    }

    #[test]
    fn normalize_examples() {
        let rules = NormalizationRules::default();
        assert_eq!(normalize_word("Defects", &rules), "defect");
        assert_eq!(normalize_word("defect", &rules), "defect");
        assert_eq!(normalize_word("Lattice", &rules), "lattice");
        assert_eq!(normalize_word("SQUID", &rules), "SQUID");
        assert_eq!(normalize_word("LEDs", &rules), "LED");
        assert_eq!(normalize_word("properties", &rules), "property");
        assert_eq!(normalize_word("glasses", &rules), "glass");
        assert_eq!(normalize_word("fluxes", &rules), "flux");
        assert_eq!(normalize_word("phases", &rules), "phase");
        assert_eq!(normalize_word("physics", &rules), "physics");
        assert_eq!(normalize_word("gases", &rules), "gas");
        assert_eq!(normalize_word("lens", &rules), "lens");
        assert_eq!(normalize_word("matrices", &rules), "matrix");
        assert_eq!(normalize_word("series", &rules), "series");
        assert_eq!(normalize_word("spectra", &rules), "spectra");
        assert_eq!(normalize_word("gas", &rules), "gas");
    }

    #[test]
    fn normalize_respects_switches() {
        let rules = NormalizationRules {
            lowercase: false,
            singularize: false,
            ..Default::default()
        };
        assert_eq!(normalize_word("Defects", &rules), "Defects");
        let rules = NormalizationRules {
            lowercase: false,
            ..Default::default()
        };
        assert_eq!(normalize_word("Defects", &rules), "Defect");
        assert_eq!(normalize_word("Matrices", &rules), "Matrix");
    }

    #[test]
    fn exception_chains_are_rejected() {
        let err = parse_exceptions("a\tb\nb\tc\n", Path::new("x.tsv")).unwrap_err();
        assert!(err.to_string().contains("chains"));
        let ok = parse_exceptions("# c\nlenses\tlens\n\nlens\tlens\n", Path::new("x.tsv")).unwrap();
        assert_eq!(ok.len(), 2);
    }

    #[test]
    fn rules_round_trip_through_json() {
        let rules = NormalizationRules::default();
        let json = serde_json::to_string(&rules).unwrap();
        let back: NormalizationRules = serde_json::from_str(&json).unwrap();
        assert_eq!(rules, back);
        let partial: NormalizationRules =
            serde_json::from_str(r#"{"singularize": false, "strip_characters": "()"}"#).unwrap();
        assert!(!partial.singularize && partial.lowercase);
        assert_eq!(partial.strip_characters.len(), 2);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn normalize_is_idempotent(token in "[A-Za-z0-9]{1,12}", lower in any::<bool>(), sing in any::<bool>()) {
                let rules = NormalizationRules { lowercase: lower, singularize: sing, ..Default::default() };
                let once = normalize_word(&token, &rules);
                prop_assert_eq!(normalize_word(&once, &rules), once);
            }

            #[test]
            fn hyphen_groups_are_contiguous(raw in "[a-z]{1,5}([ -][a-z]{1,5}){0,6}") {
                if let Ok(seq) = decompose(&raw, &NormalizationRules::default(), &Lexicons::english()) {
                    let mut seen = std::collections::BTreeSet::new();
                    let mut last = None;
                    for t in seq.tokens() {
                        if t.group != last {
                            if let Some(g) = t.group {
                                prop_assert!(seen.insert(g), "group {} reappears", g);
                            }
                        }
                        last = t.group;
                    }
                    prop_assert!(wordship(&seq) >= 1);
                }
            }
        }
    }
}

//! JSON configuration file. Relative paths are resolved against the
//! directory holding the file.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::classify::Lexicons;
use crate::context::{
    CachedProvider, ContextCache, ContextProvider, DisciplineMap, RetryPolicy, SubjectLexicon, SubjectNormalizer,
};
use crate::corpus::{IngestOptions, YearRange};
use crate::error::{Error, Result};
use crate::metrics::AssociationConfig;
use crate::report::OutputFormat;
use crate::textfile;
use crate::tokenize::NormalizationRules;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub normalization: NormalizationConfig,
    pub ingest: IngestConfig,
    pub lexicons: LexiconPaths,
    pub contexts: ContextConfig,
    pub discipline_map: Option<PathBuf>,
    pub metrics: AssociationConfig,
    pub output: OutputConfig,
    #[serde(skip)]
    base_dir: PathBuf,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormalizationConfig {
    pub lowercase: Option<bool>,
    pub singularize: Option<bool>,
    pub hyphen_splits: Option<bool>,
    /// Replaces the default set of stripped characters.
    pub strip_characters: Option<String>,
    /// Extra `plural<TAB>singular` pairs.
    pub exceptions_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IngestConfig {
    pub year_min: Option<i32>,
    pub year_max: Option<i32>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LexiconPaths {
    pub form_words: Option<PathBuf>,
    pub eponyms: Option<PathBuf>,
    pub acronyms: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContextConfig {
    /// NDJSON cache read by cache-backed providers.
    pub cache: Option<PathBuf>,
    pub providers: Vec<ProviderSpec>,
    /// `alias<TAB>canonical` subject labels.
    pub aliases: Option<PathBuf>,
    pub retries: Option<u32>,
}

/// A bare name reads that provider's answers from the cache; an object names
/// an offline subject lexicon.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum ProviderSpec {
    Cached(String),
    Lexicon { name: String, lexicon: PathBuf },
}

impl ProviderSpec {
    pub fn name(&self) -> &str {
        match self {
            ProviderSpec::Cached(name) | ProviderSpec::Lexicon { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub format: OutputFormat,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = textfile::read(path)?;
        let base = path.parent().unwrap_or(Path::new("")).to_path_buf();
        Self::from_json(&text, base).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn from_json(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut config: Config = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.base_dir = base_dir.into();
        let names: Vec<&str> = config.contexts.providers.iter().map(ProviderSpec::name).collect();
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::Config(format!("provider {name:?} listed twice")));
            }
        }
        Ok(config)
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        self.base_dir.join(path)
    }

    fn resolve_opt(&self, path: &Option<PathBuf>) -> Option<PathBuf> {
        path.as_deref().map(|p| self.resolve(p))
    }

    pub fn normalization(&self) -> Result<NormalizationRules> {
        let n = &self.normalization;
        let mut rules = NormalizationRules::default();
        rules.lowercase = n.lowercase.unwrap_or(rules.lowercase);
        rules.singularize = n.singularize.unwrap_or(rules.singularize);
        rules.hyphen_splits = n.hyphen_splits.unwrap_or(rules.hyphen_splits);
        if let Some(chars) = &n.strip_characters {
            rules.strip_characters = chars.chars().collect();
        }
        if let Some(path) = self.resolve_opt(&n.exceptions_file) {
            rules.load_exceptions(&path)?;
        }
        Ok(rules)
    }

    pub fn ingest_options(&self) -> Result<IngestOptions> {
        let default = YearRange::default();
        let year_range = YearRange {
            min: self.ingest.year_min.unwrap_or(default.min),
            max: self.ingest.year_max.unwrap_or(default.max),
        };
        if year_range.min > year_range.max {
            return Err(Error::Config(format!(
                "year_min {} is after year_max {}",
                year_range.min, year_range.max
            )));
        }
        Ok(IngestOptions {
            normalization: self.normalization()?,
            year_range,
        })
    }

    pub fn lexicons(&self) -> Result<Lexicons> {
        let l = &self.lexicons;
        Lexicons::from_files(
            self.resolve_opt(&l.form_words).as_deref(),
            self.resolve_opt(&l.eponyms).as_deref(),
            self.resolve_opt(&l.acronyms).as_deref(),
        )
    }

    pub fn normalizer(&self) -> Result<SubjectNormalizer> {
        match self.resolve_opt(&self.contexts.aliases) {
            Some(path) => SubjectNormalizer::from_alias_file(&path),
            None => Ok(SubjectNormalizer::default()),
        }
    }

    pub fn discipline_map(&self) -> Result<DisciplineMap> {
        match self.resolve_opt(&self.discipline_map) {
            Some(path) => DisciplineMap::from_file(&path),
            None => Ok(DisciplineMap::default()),
        }
    }

    pub fn retry_policy(&self) -> RetryPolicy {
        let mut policy = RetryPolicy::default();
        if let Some(r) = self.contexts.retries {
            policy.retries = r;
        }
        policy
    }

    pub fn cache_path(&self) -> Option<PathBuf> {
        self.resolve_opt(&self.contexts.cache)
    }

    /// The cache, or an empty one when none is configured.
    pub fn open_cache(&self) -> Result<ContextCache> {
        match self.cache_path() {
            Some(path) => ContextCache::open(&path),
            None => Ok(ContextCache::in_memory()),
        }
    }

    /// Builds every configured provider. Cache-backed providers need a cache path.
    pub fn providers<'c>(&self, cache: &'c ContextCache) -> Result<Vec<Box<dyn ContextProvider + 'c>>> {
        let mut out: Vec<Box<dyn ContextProvider + 'c>> = Vec::new();
        for spec in &self.contexts.providers {
            match spec {
                ProviderSpec::Cached(name) => {
                    if self.contexts.cache.is_none() {
                        return Err(Error::Config(format!(
                            "provider {name:?} reads from the context cache but contexts.cache is not set"
                        )));
                    }
                    out.push(Box::new(CachedProvider::new(name.clone(), cache)));
                }
                ProviderSpec::Lexicon { name, lexicon } => {
                    out.push(Box::new(SubjectLexicon::from_file(name.clone(), &self.resolve(lexicon))?));
                }
            }
        }
        Ok(out)
    }

    /// The offline lexicon configured under `name`.
    pub fn lexicon_provider(&self, name: &str) -> Result<SubjectLexicon> {
        match self.contexts.providers.iter().find(|p| p.name() == name) {
            Some(ProviderSpec::Lexicon { lexicon, .. }) => SubjectLexicon::from_file(name, &self.resolve(lexicon)),
            Some(ProviderSpec::Cached(_)) => Err(Error::Config(format!(
                "provider {name:?} is cache-backed; only offline lexicons can be fetched from"
            ))),
            None => Err(Error::Config(format!("no provider named {name:?} in the configuration"))),
        }
    }

    pub fn output_format(&self) -> OutputFormat {
        self.output.format
    }
}

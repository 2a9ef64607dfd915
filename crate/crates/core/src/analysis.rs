//! The whole pipeline over one corpus: classification, contexts and every
//! derived statistic, plus a self-check of the metric invariants.

use std::collections::BTreeMap;

use crate::classify::{category_census, classify_corpus, Lexicons, WordClasses, WordKind};
use crate::context::{
    resolve_contexts, ContextProvider, ContextResolution, DisciplineMap, RetryPolicy, SubjectNormalizer,
};
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::metrics::{
    category_table, discipline_ranking, fundamental_triple, trend_diagnostics, wordship_pattern,
    yearly_keyword_stats, yearly_word_stats, AssociationConfig, CategoryKey, CategoryStats,
    DisciplineRanking, TrendDiagnostics, WordshipPattern, YearlyKeywordStats, YearlyWordStats,
};

#[derive(Debug, Clone)]
pub struct Analysis {
    corpus: Corpus,
    classes: WordClasses,
    contexts: ContextResolution,
    association: AssociationConfig,
    disciplines: DisciplineMap,
}

impl Analysis {
    /// Classifies the corpus. Until contexts are supplied every semantic word
    /// is unresolved and left out of the SW rows.
    pub fn new(corpus: Corpus, lexicons: &Lexicons) -> Result<Self> {
        let classes = classify_corpus(&corpus, lexicons)?;
        let contexts = resolve_contexts(classes.semantic_words(), &[], &SubjectNormalizer::default(), &RetryPolicy::default());
        Ok(Analysis {
            corpus,
            classes,
            contexts,
            association: AssociationConfig::default(),
            disciplines: DisciplineMap::default(),
        })
    }

    /// Looks up every semantic word with `providers`.
    pub fn with_contexts(
        self,
        providers: &[&dyn ContextProvider],
        normalizer: &SubjectNormalizer,
        policy: &RetryPolicy,
    ) -> Self {
        let resolution = resolve_contexts(self.classes.semantic_words(), providers, normalizer, policy);
        self.with_resolution(resolution)
    }

    pub fn with_resolution(mut self, resolution: ContextResolution) -> Self {
        self.classes.apply_contexts(&resolution);
        self.contexts = resolution;
        self
    }

    pub fn with_association(mut self, config: AssociationConfig) -> Self {
        self.association = config;
        self
    }

    pub fn with_discipline_map(mut self, map: DisciplineMap) -> Self {
        self.disciplines = map;
        self
    }

    pub fn corpus(&self) -> &Corpus {
        &self.corpus
    }

    pub fn classes(&self) -> &WordClasses {
        &self.classes
    }

    pub fn contexts(&self) -> &ContextResolution {
        &self.contexts
    }

    pub fn association(&self) -> &AssociationConfig {
        &self.association
    }

    pub fn discipline_map(&self) -> &DisciplineMap {
        &self.disciplines
    }

    pub fn triple(&self, category: CategoryKey) -> CategoryStats {
        fundamental_triple(&self.corpus, &self.classes, category, &self.association)
    }

    pub fn category_table(&self) -> Vec<CategoryStats> {
        category_table(&self.corpus, &self.classes, &self.association)
    }

    pub fn keyword_stats(&self) -> Vec<YearlyKeywordStats> {
        yearly_keyword_stats(&self.corpus)
    }

    pub fn word_stats(&self) -> Vec<YearlyWordStats> {
        yearly_word_stats(&self.corpus)
    }

    pub fn wordship(&self) -> WordshipPattern {
        wordship_pattern(&self.corpus, true)
    }

    /// Only words of the corpus that are semantic contribute subjects.
    pub fn disciplines(&self) -> DisciplineRanking {
        let contexts = self
            .contexts
            .contexts
            .values()
            .filter(|c| self.classes.kind(&c.word) == Some(WordKind::Semantic));
        discipline_ranking(contexts, &self.disciplines)
    }

    pub fn diagnostics(&self) -> TrendDiagnostics {
        trend_diagnostics(&self.category_table())
    }

    /// Semantic words of the corpus without a resolved context.
    pub fn unresolved_words(&self) -> Vec<&str> {
        self.classes
            .iter()
            .filter(|(_, c)| c.kind == WordKind::Semantic && c.context_degree.is_none())
            .map(|(w, _)| w)
            .collect()
    }

    /// Re-derives the structural properties of the metrics and reports the
    /// first one that does not hold.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Invariant(m));
        let census = category_census(&self.corpus, &self.classes)?;
        let words = self.corpus.words().len();
        if census.values().sum::<usize>() != words {
            return fail(format!("category census covers {} of {words} words", census.values().sum::<usize>()));
        }

        let table = self.category_table();
        let unresolved = self.unresolved_words().len();
        let f_total: u64 = table.iter().map(|s| s.f).sum();
        if f_total as usize + unresolved != words {
            return fail(format!("f sums to {f_total} plus {unresolved} unresolved, expected {words} words"));
        }

        let keywords = self.corpus.keywords().len() as u64;
        for stats in &table {
            if stats.k > keywords {
                return fail(format!("{}: k = {} exceeds {keywords} keywords", stats.category, stats.k));
            }
            let p = stats.parameters();
            if let (Some(wd), Some(wc), Some(kd)) = (p.wd_a, p.wc_a, p.kd_f) {
                if kd * wc != wd {
                    return fail(format!("{}: KD(F) * WC(A) != WD(A)", stats.category));
                }
            }
        }

        let pattern = self.wordship();
        if pattern.overall.total() != keywords {
            return fail(format!("wordship buckets hold {} of {keywords} keywords", pattern.overall.total()));
        }
        let mut per_kind: BTreeMap<WordKind, u64> = BTreeMap::new();
        for stats in &table {
            *per_kind.entry(stats.category.kind()).or_default() += stats.f;
        }
        for kind in [WordKind::Acronym, WordKind::Eponymous, WordKind::Form] {
            if per_kind.get(&kind).copied().unwrap_or(0) != census[&kind] as u64 {
                return fail(format!("{kind} row disagrees with the census"));
            }
        }
        for row in self.word_stats() {
            if row.word_occurrences < row.distinct_words {
                return fail("word occurrences below distinct words".into());
            }
        }
        Ok(())
    }
}

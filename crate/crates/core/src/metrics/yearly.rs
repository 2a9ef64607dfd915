//! Year-wise keyword and word statistics, and the wordship pattern.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Keyword};
use crate::numeric::percentage;
use crate::tokenize::wordship;

/// Articles and keywords of one year, or of the whole corpus when `year` is `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearlyKeywordStats {
    pub year: Option<i32>,
    pub volumes: BTreeSet<String>,
    /// A: articles.
    pub articles: u64,
    /// B: distinct keywords.
    pub distinct_keywords: u64,
    /// C: corpus-wide frequency summed over those keywords.
    pub total_frequency: u64,
}

impl YearlyKeywordStats {
    /// B/A.
    pub fn avg_keywords_per_article(&self) -> Option<Ratio<u64>> {
        (self.articles > 0).then(|| Ratio::new(self.distinct_keywords, self.articles))
    }

    /// C/B.
    pub fn freq_per_keyword(&self) -> Option<Ratio<u64>> {
        (self.distinct_keywords > 0).then(|| Ratio::new(self.total_frequency, self.distinct_keywords))
    }
}

/// Constituent words of one year's distinct keywords (overall when `year` is `None`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearlyWordStats {
    pub year: Option<i32>,
    pub volumes: BTreeSet<String>,
    pub articles: u64,
    /// Distinct keywords.
    pub keywords: u64,
    pub distinct_words: u64,
    /// Token slots, form words included.
    pub word_occurrences: u64,
}

impl YearlyWordStats {
    /// Keywords per distinct word.
    pub fn ratio(&self) -> Option<Ratio<u64>> {
        (self.distinct_words > 0).then(|| Ratio::new(self.keywords, self.distinct_words))
    }
}

struct Slice<'a> {
    year: Option<i32>,
    volumes: BTreeSet<String>,
    articles: u64,
    keywords: Vec<&'a Keyword>,
}

/// One slice per year in ascending order, then the overall slice.
fn slices(corpus: &Corpus) -> Vec<Slice<'_>> {
    let mut out: Vec<Slice> = corpus
        .years()
        .into_iter()
        .map(|year| {
            let arts = corpus.articles().values().filter(|a| a.year == year);
            Slice {
                year: Some(year),
                volumes: arts.clone().filter_map(|a| a.volume.clone()).collect(),
                articles: arts.count() as u64,
                keywords: corpus.keywords().values().filter(|k| k.appears_in(year)).collect(),
            }
        })
        .collect();
    out.push(Slice {
        year: None,
        volumes: corpus.articles().values().filter_map(|a| a.volume.clone()).collect(),
        articles: corpus.articles().len() as u64,
        keywords: corpus.keywords().values().collect(),
    });
    out
}

pub fn yearly_keyword_stats(corpus: &Corpus) -> Vec<YearlyKeywordStats> {
    slices(corpus)
        .into_iter()
        .map(|s| YearlyKeywordStats {
            year: s.year,
            volumes: s.volumes,
            articles: s.articles,
            distinct_keywords: s.keywords.len() as u64,
            total_frequency: s.keywords.iter().map(|k| k.total_frequency as u64).sum(),
        })
        .collect()
}

pub fn yearly_word_stats(corpus: &Corpus) -> Vec<YearlyWordStats> {
    slices(corpus)
        .into_iter()
        .map(|s| {
            let words: BTreeSet<&str> = s.keywords.iter().flat_map(|k| k.tokens.words()).collect();
            YearlyWordStats {
                year: s.year,
                volumes: s.volumes,
                articles: s.articles,
                keywords: s.keywords.len() as u64,
                distinct_words: words.len() as u64,
                word_occurrences: s.keywords.iter().map(|k| k.tokens.len() as u64).sum(),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum WordshipBucket {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "3")]
    Three,
    #[serde(rename = ">3")]
    More,
}

impl WordshipBucket {
    pub const ALL: [WordshipBucket; 4] = [Self::One, Self::Two, Self::Three, Self::More];

    pub fn of(wordship: usize) -> Self {
        match wordship {
            0 | 1 => Self::One,
            2 => Self::Two,
            3 => Self::Three,
            _ => Self::More,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::One => "1",
            Self::Two => "2",
            Self::Three => "3",
            Self::More => ">3",
        }
    }
}

/// Keyword counts per wordship, kept exact so callers can regroup.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordshipDistribution {
    pub by_wordship: BTreeMap<usize, u64>,
}

impl WordshipDistribution {
    pub fn from_keywords<'a>(keywords: impl IntoIterator<Item = &'a Keyword>) -> Self {
        let mut by_wordship = BTreeMap::new();
        for k in keywords {
            *by_wordship.entry(wordship(&k.tokens)).or_insert(0) += 1;
        }
        WordshipDistribution { by_wordship }
    }

    pub fn total(&self) -> u64 {
        self.by_wordship.values().sum()
    }

    pub fn bucket(&self, bucket: WordshipBucket) -> u64 {
        self.by_wordship
            .iter()
            .filter(|(w, _)| WordshipBucket::of(**w) == bucket)
            .map(|(_, n)| n)
            .sum()
    }

    /// Share of the bucket in percent, `None` for an empty distribution.
    pub fn bucket_percentage(&self, bucket: WordshipBucket) -> Option<Ratio<u64>> {
        percentage(self.bucket(bucket), self.total())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordshipPattern {
    pub overall: WordshipDistribution,
    /// Empty unless requested.
    pub per_year: BTreeMap<i32, WordshipDistribution>,
}

pub fn wordship_pattern(corpus: &Corpus, per_year: bool) -> WordshipPattern {
    let overall = WordshipDistribution::from_keywords(corpus.keywords().values());
    let per_year = if per_year {
        corpus
            .years()
            .into_iter()
            .map(|y| {
                let kws = corpus.keywords().values().filter(|k| k.appears_in(y));
                (y, WordshipDistribution::from_keywords(kws))
            })
            .collect()
    } else {
        BTreeMap::new()
    };
    WordshipPattern { overall, per_year }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::Lexicons;
    use crate::corpus::{ingest, ArticleRef, IngestOptions, KeywordRecord};
    use crate::numeric::fixed_opt;

    fn rec(id: &str, year: i32, text: &str) -> KeywordRecord {
        KeywordRecord::new(ArticleRef::new(id, year).with_volume(format!("v{}", year - 1974)), text)
    }

    fn corpus(records: Vec<KeywordRecord>) -> Corpus {
        ingest(records, &IngestOptions::default(), &Lexicons::english()).unwrap()
    }

    #[test]
    fn keyword_stats_use_corpus_wide_frequency() {
        let c = corpus(vec![
            rec("a1", 2006, "laser"),
            rec("a1", 2006, "quantum dot"),
            rec("a2", 2006, "laser"),
            rec("a3", 2007, "laser"),
        ]);
        let rows = yearly_keyword_stats(&c);
        assert_eq!(rows.len(), 3);
        let y2006 = &rows[0];
        assert_eq!((y2006.articles, y2006.distinct_keywords, y2006.total_frequency), (2, 2, 4));
        assert_eq!(y2006.volumes.iter().collect::<Vec<_>>(), ["v32"]);
        let y2007 = &rows[1];
        assert_eq!((y2007.articles, y2007.distinct_keywords, y2007.total_frequency), (1, 1, 3));
        let all = &rows[2];
        assert_eq!(all.year, None);
        assert_eq!((all.articles, all.distinct_keywords, all.total_frequency), (3, 2, 4));
        assert_eq!(fixed_opt(all.avg_keywords_per_article().as_ref(), 2), "0.67");
        assert_eq!(fixed_opt(all.freq_per_keyword().as_ref(), 2), "2.00");
    }

    #[test]
    fn one_year_row_equals_overall() {
        let c = corpus(vec![rec("a1", 2008, "band gap"), rec("a2", 2008, "gap")]);
        let rows = yearly_keyword_stats(&c);
        assert_eq!(rows.len(), 2);
        assert_eq!(YearlyKeywordStats { year: None, ..rows[0].clone() }, rows[1]);
    }

    #[test]
    fn word_stats() {
        let c = corpus(vec![rec("a1", 2006, "defect of absorption"), rec("a2", 2007, "absorption edge")]);
        let rows = yearly_word_stats(&c);
        let all = rows.last().unwrap();
        assert_eq!((all.keywords, all.distinct_words, all.word_occurrences), (2, 4, 5));
        assert_eq!(fixed_opt(all.ratio().as_ref(), 2), "0.50");
        assert_eq!((rows[0].distinct_words, rows[0].word_occurrences), (3, 3));

        let disjoint = corpus(vec![rec("a1", 2006, "red laser"), rec("a1", 2006, "blue diode")]);
        let all = yearly_word_stats(&disjoint).pop().unwrap();
        assert_eq!(all.distinct_words, all.word_occurrences);
    }

    #[test]
    fn wordship_buckets() {
        let c = corpus(vec![
            rec("a1", 2006, "laser"),
            rec("a1", 2006, "defect of absorption-spectra"),
            rec("a2", 2007, "nuclear spin-lattice-relaxation effect"),
        ]);
        let p = wordship_pattern(&c, true);
        assert_eq!(p.overall.total(), 3);
        assert_eq!(p.overall.bucket(WordshipBucket::One), 1);
        assert_eq!(p.overall.bucket(WordshipBucket::Three), 1);
        assert_eq!(p.overall.bucket(WordshipBucket::More), 1);
        assert_eq!(p.overall.by_wordship.get(&5), Some(&1));
        assert_eq!(p.per_year[&2006].total(), 2);
        assert_eq!(fixed_opt(p.overall.bucket_percentage(WordshipBucket::Two).as_ref(), 0), "0");

        let single = corpus(vec![rec("a1", 2006, "laser")]);
        let p = wordship_pattern(&single, false);
        assert!(p.per_year.is_empty());
        assert_eq!(fixed_opt(p.overall.bucket_percentage(WordshipBucket::One).as_ref(), 0), "100");
    }
}

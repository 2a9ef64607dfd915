//! Subject frequencies rolled up into broad disciplines.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::context::{DisciplineMap, WordContext, UNMAPPED};
use crate::numeric::percentage;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisciplineStats {
    pub discipline: String,
    /// Subject -> frequency, nonzero entries only.
    pub subjects: BTreeMap<String, u64>,
    /// Subjects with nonzero frequency.
    pub n: u64,
    /// Sum of subject frequencies.
    pub total: u64,
    /// Dense rank by `total`, 1 = largest.
    pub rank: u32,
    /// Share of the grand total in percent.
    pub percentage: Option<Ratio<u64>>,
}

impl DisciplineStats {
    /// F/n.
    pub fn per_subject(&self) -> Option<Ratio<u64>> {
        (self.n > 0).then(|| Ratio::new(self.total, self.n))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisciplineRanking {
    /// Ordered by rank, then discipline name.
    pub rows: Vec<DisciplineStats>,
    pub grand_total: u64,
    /// Subjects the map does not know; they are ranked under "Unmapped".
    pub unmapped_subjects: BTreeSet<String>,
}

impl DisciplineRanking {
    pub fn get(&self, discipline: &str) -> Option<&DisciplineStats> {
        self.rows.iter().find(|r| r.discipline == discipline)
    }
}

/// Number of words whose subject union contains each subject.
pub fn subject_frequencies<'a>(contexts: impl IntoIterator<Item = &'a WordContext>) -> BTreeMap<String, u64> {
    let mut freq = BTreeMap::new();
    for ctx in contexts {
        for subject in &ctx.union {
            *freq.entry(subject.clone()).or_insert(0) += 1;
        }
    }
    freq
}

pub fn discipline_ranking<'a>(
    contexts: impl IntoIterator<Item = &'a WordContext>,
    map: &DisciplineMap,
) -> DisciplineRanking {
    rank_disciplines(&subject_frequencies(contexts), map)
}

/// Ranks disciplines from precomputed subject frequencies.
pub fn rank_disciplines(frequencies: &BTreeMap<String, u64>, map: &DisciplineMap) -> DisciplineRanking {
    let mut groups: BTreeMap<String, BTreeMap<String, u64>> = BTreeMap::new();
    let mut unmapped_subjects = BTreeSet::new();
    for (subject, &f) in frequencies.iter().filter(|(_, f)| **f > 0) {
        let discipline = match map.get(subject) {
            Some(d) => d.to_string(),
            None => {
                unmapped_subjects.insert(subject.clone());
                UNMAPPED.to_string()
            }
        };
        groups.entry(discipline).or_default().insert(subject.clone(), f);
    }

    let grand_total: u64 = groups.values().flat_map(|s| s.values()).sum();
    let mut rows: Vec<DisciplineStats> = groups
        .into_iter()
        .map(|(discipline, subjects)| {
            let total = subjects.values().sum();
            DisciplineStats {
                discipline,
                n: subjects.len() as u64,
                subjects,
                total,
                rank: 0,
                percentage: percentage(total, grand_total),
            }
        })
        .collect();
    rows.sort_by(|a, b| b.total.cmp(&a.total).then_with(|| a.discipline.cmp(&b.discipline)));

    let mut rank = 0;
    let mut previous = None;
    for row in &mut rows {
        if previous != Some(row.total) {
            rank += 1;
            previous = Some(row.total);
        }
        row.rank = rank;
    }
    DisciplineRanking {
        rows,
        grand_total,
        unmapped_subjects,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::fixed_opt;

    fn ctx(word: &str, subjects: &[&str]) -> WordContext {
        let set = subjects.iter().map(|s| s.to_string()).collect();
        WordContext::from_sets(word, BTreeMap::from([("p".to_string(), set)]))
    }

    #[test]
    fn single_subject() {
        let map = DisciplineMap::default();
        let r = discipline_ranking([&ctx("storm", &["meteorology"])], &map);
        assert_eq!(r.rows.len(), 1);
        let row = &r.rows[0];
        assert_eq!(row.discipline, "Atmospheric science");
        assert_eq!((row.n, row.total, row.rank), (1, 1, 1));
        assert_eq!(fixed_opt(row.percentage.as_ref(), 2), "100.00");
    }

    #[test]
    fn dense_ranks_and_unmapped() {
        let map = DisciplineMap::from_pairs([("a", "X"), ("b", "Y"), ("c", "Z")]);
        let contexts = [
            ctx("w1", &["a", "b", "zzz"]),
            ctx("w2", &["a", "b", "c"]),
            ctx("w3", &["c"]),
            ctx("w4", &[]),
        ];
        let r = discipline_ranking(&contexts, &map);
        let ranks: Vec<(&str, u64, u32)> = r.rows.iter().map(|x| (x.discipline.as_str(), x.total, x.rank)).collect();
        assert_eq!(ranks, [("X", 2, 1), ("Y", 2, 1), ("Z", 2, 1), (UNMAPPED, 1, 2)]);
        assert_eq!(r.grand_total, 7);
        assert_eq!(r.unmapped_subjects.iter().collect::<Vec<_>>(), ["zzz"]);
        assert_eq!(fixed_opt(r.get("X").unwrap().per_subject().as_ref(), 2), "2.00");
    }

    #[test]
    fn zero_frequencies_are_ignored() {
        let map = DisciplineMap::from_pairs([("a", "X"), ("b", "X")]);
        let freq = BTreeMap::from([("a".to_string(), 3), ("b".to_string(), 0)]);
        let r = rank_disciplines(&freq, &map);
        assert_eq!(r.rows[0].n, 1);
        assert_eq!(r.rows[0].per_subject(), Some(Ratio::from_integer(3)));
    }
}

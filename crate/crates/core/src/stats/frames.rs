use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Comparison, Contingency2x2, Correction};
use crate::annotation::AnnotationStore;
use crate::corpus::Period;

/// Occurrence counts per key plus the grand total of the population they
/// were drawn from. `total` may exceed the sum of `counts` when the table
/// only lists part of the population (e.g. printed top-k rows).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable<K: Ord> {
    pub counts: BTreeMap<K, u64>,
    pub total: u64,
}

impl<K: Ord> Default for CountTable<K> {
    fn default() -> Self {
        Self {
            counts: BTreeMap::new(),
            total: 0,
        }
    }
}

impl<K: Ord + Clone> CountTable<K> {
    pub fn add(&mut self, key: K, n: u64) {
        *self.counts.entry(key).or_default() += n;
        self.total += n;
    }

    pub fn get(&self, key: &K) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    /// Keys by descending count, ties lexicographic.
    pub fn ranked(&self) -> Vec<(K, u64)> {
        let mut v: Vec<(K, u64)> = self.counts.iter().map(|(k, &c)| (k.clone(), c)).collect();
        v.sort_by(|x, y| y.1.cmp(&x.1).then_with(|| x.0.cmp(&y.0)));
        v
    }

    pub fn top_k(&self, k: usize) -> Vec<K> {
        self.ranked().into_iter().take(k).map(|(key, _)| key).collect()
    }
}

/// Frame occurrence counts in one period; every instance counts.
pub fn frame_frequencies(store: &AnnotationStore, period: Period) -> CountTable<String> {
    let counts = store.totals().frame_occurrences[period.index()].clone();
    let total = counts.values().sum();
    CountTable { counts, total }
}

/// Union of each period's top `k`, sorted by combined count descending.
pub fn top_k_union<K: Ord + Clone>(before: &CountTable<K>, after: &CountTable<K>, k: usize) -> Vec<K> {
    let keys: BTreeSet<K> = before.top_k(k).into_iter().chain(after.top_k(k)).collect();
    let mut out: Vec<(K, u64)> = keys
        .into_iter()
        .map(|key| {
            let combined = before.get(&key) + after.get(&key);
            (key, combined)
        })
        .collect();
    out.sort_by(|x, y| y.1.cmp(&x.1).then_with(|| x.0.cmp(&y.0)));
    out.into_iter().map(|(k, _)| k).collect()
}

/// Rows for `keys` against the tables' totals. Keys absent from both
/// tables are returned separately rather than tested.
pub fn compare_tables<K: Ord + Clone>(
    before: &CountTable<K>,
    after: &CountTable<K>,
    keys: &[K],
    correction: Correction,
) -> (Vec<Comparison<K>>, Vec<K>) {
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for key in keys {
        let (a, c) = (before.get(key), after.get(key));
        if a == 0 && c == 0 {
            skipped.push(key.clone());
            continue;
        }
        match Contingency2x2::from_totals(a, before.total, c, after.total, correction) {
            Ok(table) => rows.push(Comparison {
                key: key.clone(),
                table,
            }),
            Err(_) => skipped.push(key.clone()),
        }
    }
    (rows, skipped)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameComparisons {
    pub rows: Vec<Comparison<String>>,
    /// Frames absent in both periods.
    pub skipped: Vec<String>,
}

/// Per-frame share of all frame occurrences, before vs after.
pub fn compare_frame_shares(store: &AnnotationStore, frames: &[String], correction: Correction) -> FrameComparisons {
    let before = frame_frequencies(store, Period::Before);
    let after = frame_frequencies(store, Period::After);
    let (rows, skipped) = compare_tables(&before, &after, frames, correction);
    FrameComparisons { rows, skipped }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub frame: String,
    pub count_before: u64,
    pub count_after: u64,
    pub total: u64,
    /// Left empty for the curator to fill in.
    pub definition: String,
}

/// Frames with at least `min_count` occurrences overall, most frequent first.
pub fn curate_candidates(store: &AnnotationStore, min_count: u64) -> Vec<Candidate> {
    let before = frame_frequencies(store, Period::Before);
    let after = frame_frequencies(store, Period::After);
    let mut combined = CountTable::default();
    for (k, &v) in before.counts.iter().chain(after.counts.iter()) {
        combined.add(k.clone(), v);
    }
    combined
        .ranked()
        .into_iter()
        .filter(|(_, n)| *n >= min_count)
        .map(|(frame, total)| Candidate {
            count_before: before.get(&frame),
            count_after: after.get(&frame),
            total,
            definition: String::new(),
            frame,
        })
        .collect()
}

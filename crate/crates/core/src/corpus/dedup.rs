use std::collections::{BTreeMap, HashMap, HashSet};

use super::{ArticleStatus, CorpusSnapshot};
use crate::text::normalized_words;

/// Word k-shingles of the lowercased, punctuation-stripped text. Texts
/// shorter than `k` words yield one shingle of all their words.
pub fn shingles(text: &str, k: usize) -> HashSet<String> {
    let words = normalized_words(text);
    if words.is_empty() {
        return HashSet::new();
    }
    if words.len() < k {
        return std::iter::once(words.join(" ")).collect();
    }
    words.windows(k).map(|w| w.join(" ")).collect()
}

pub fn jaccard(a: &HashSet<String>, b: &HashSet<String>) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    let inter = a.intersection(b).count();
    inter as f64 / (a.len() + b.len() - inter) as f64
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Clusters the eligible articles (not yet removed by an earlier stage) and
/// returns `removed article_id -> survivor article_id`.
///
/// Clusters are connected components of the "Jaccard >= threshold" graph;
/// the survivor is the earliest `published_at`, ties broken by `article_id`.
pub(crate) fn duplicate_map(snapshot: &CorpusSnapshot) -> BTreeMap<String, String> {
    let cfg = &snapshot.config;
    let eligible: Vec<usize> = snapshot
        .articles
        .iter()
        .enumerate()
        .filter(|(_, a)| !matches!(a.status, ArticleStatus::NonEnglish))
        .map(|(i, _)| i)
        .collect();
    let sets: Vec<HashSet<String>> = eligible
        .iter()
        .map(|&i| shingles(&snapshot.articles[i].record.body, cfg.dedup_shingle_size))
        .collect();

    let mut index: HashMap<&str, Vec<usize>> = HashMap::new();
    for (local, set) in sets.iter().enumerate() {
        for sh in set {
            index.entry(sh.as_str()).or_default().push(local);
        }
    }

    let mut dsu = DisjointSet::new(eligible.len());
    for (local, set) in sets.iter().enumerate() {
        let mut shared: HashMap<usize, usize> = HashMap::new();
        for sh in set {
            for &other in &index[sh.as_str()] {
                if other > local {
                    *shared.entry(other).or_default() += 1;
                }
            }
        }
        for (other, inter) in shared {
            let union = set.len() + sets[other].len() - inter;
            if inter as f64 / union as f64 >= cfg.dedup_jaccard_threshold {
                dsu.union(local, other);
            }
        }
    }

    let mut clusters: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for local in 0..eligible.len() {
        clusters.entry(dsu.find(local)).or_default().push(eligible[local]);
    }
    let mut removed = BTreeMap::new();
    for members in clusters.values().filter(|m| m.len() > 1) {
        let survivor = *members
            .iter()
            .min_by(|&&x, &&y| {
                let (a, b) = (&snapshot.articles[x], &snapshot.articles[y]);
                (a.record.published_at, a.id()).cmp(&(b.record.published_at, b.id()))
            })
            .expect("non-empty cluster");
        let survivor_id = snapshot.articles[survivor].id().to_string();
        for &m in members.iter().filter(|&&m| m != survivor) {
            removed.insert(snapshot.articles[m].id().to_string(), survivor_id.clone());
        }
    }
    removed
}

/// Marks near-duplicates in place and returns how many were removed.
pub fn remove_near_duplicates(snapshot: &CorpusSnapshot) -> (CorpusSnapshot, usize) {
    let removed = duplicate_map(snapshot);
    let mut out = snapshot.clone();
    for article in &mut out.articles {
        if let Some(survivor) = removed.get(article.id()) {
            article.status = ArticleStatus::Duplicate;
            article.duplicate_of = Some(survivor.clone());
        }
    }
    (out, removed.len())
}

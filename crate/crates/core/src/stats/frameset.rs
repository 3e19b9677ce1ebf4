use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Comparison, Contingency2x2, CountTable, Correction, PairKey, TargetFilter, TargetMatcher};
use crate::annotation::{AnnotatedSentence, AnnotationStore, FrameInstance};
use crate::corpus::{CorpusSnapshot, Period};
use crate::{io, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountingMode {
    FrameOccurrence,
    PairSentencePresence,
    ArticlePresence,
}

/// A frame name, or a (frame, role) pair whose element text must pass the
/// frame set's target filter.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Member {
    Frame(String),
    Pair(PairKey),
}

impl fmt::Display for Member {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Member::Frame(name) => f.write_str(name),
            Member::Pair(p) => p.fmt(f),
        }
    }
}

/// A curated list of frames or frame–element pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameSetSpec {
    pub name: String,
    pub counting_mode: CountingMode,
    pub members: Vec<Member>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<TargetFilter>,
}

impl FrameSetSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text).map_err(|e| Error::json("frame set", e))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let spec: Self = io::read_json(path)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.members.is_empty() {
            return Err(Error::EmptyFrameSet(self.name.clone()));
        }
        let mut seen = BTreeSet::new();
        for m in &self.members {
            let empty = match m {
                Member::Frame(f) => f.trim().is_empty(),
                Member::Pair(p) => p.frame.trim().is_empty() || p.role.trim().is_empty(),
            };
            if empty {
                return Err(self.invalid("members must have non-empty names"));
            }
            if !seen.insert(m) {
                return Err(self.invalid(&format!("member {m} is listed twice")));
            }
        }
        if self.has_pairs() && self.target.is_none() {
            return Err(self.invalid("pair members require a target filter"));
        }
        Ok(())
    }

    fn invalid(&self, reason: &str) -> Error {
        Error::FrameSet {
            name: self.name.clone(),
            reason: reason.to_string(),
        }
    }

    pub fn has_pairs(&self) -> bool {
        self.members.iter().any(|m| matches!(m, Member::Pair(_)))
    }

    pub fn frame_members(&self) -> Result<Vec<String>> {
        self.members
            .iter()
            .map(|m| match m {
                Member::Frame(f) => Ok(f.clone()),
                Member::Pair(_) => Err(self.invalid("frame-occurrence counting needs frame members")),
            })
            .collect()
    }

    pub fn compile(&self) -> Result<CompiledFrameSet<'_>> {
        self.validate()?;
        let matcher = self.target.as_ref().map(TargetFilter::matcher).transpose()?;
        Ok(CompiledFrameSet { spec: self, matcher })
    }
}

/// A frame set ready to match against annotated sentences.
pub struct CompiledFrameSet<'a> {
    spec: &'a FrameSetSpec,
    matcher: Option<TargetMatcher>,
}

impl CompiledFrameSet<'_> {
    pub fn spec(&self) -> &FrameSetSpec {
        self.spec
    }

    pub fn instance_matches(&self, member: &Member, inst: &FrameInstance, text: &str) -> bool {
        match member {
            Member::Frame(f) => inst.frame == *f,
            Member::Pair(p) => {
                inst.frame == p.frame
                    && inst.elements.iter().any(|el| {
                        el.role == p.role
                            && el.span.text(text).is_some_and(|t| {
                                self.matcher.as_ref().is_none_or(|m| m.is_match(t))
                            })
                    })
            }
        }
    }

    /// Member indices present in the sentence, ascending.
    pub fn members_in(&self, sentence: &AnnotatedSentence) -> Vec<usize> {
        self.spec
            .members
            .iter()
            .enumerate()
            .filter(|(_, m)| {
                sentence
                    .frames
                    .iter()
                    .any(|inst| self.instance_matches(m, inst, &sentence.text))
            })
            .map(|(i, _)| i)
            .collect()
    }

    pub fn sentence_matches(&self, sentence: &AnnotatedSentence) -> bool {
        self.spec.members.iter().any(|m| {
            sentence
                .frames
                .iter()
                .any(|inst| self.instance_matches(m, inst, &sentence.text))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameSetShare {
    pub name: String,
    /// Summed member occurrences per period.
    pub counts: [u64; 2],
    pub totals: [u64; 2],
    pub shares: [f64; 2],
    pub table: Contingency2x2,
    pub rows: Vec<Comparison<String>>,
}

impl FrameSetShare {
    /// Aggregate and per-member rows from per-period frame tables.
    pub fn from_tables(
        spec: &FrameSetSpec,
        tables: &[CountTable<String>; 2],
        correction: Correction,
    ) -> Result<Self> {
        let frames = spec.frame_members()?;
        let counts = [0, 1].map(|p| frames.iter().map(|f| tables[p].get(f)).sum::<u64>());
        let totals = [tables[0].total, tables[1].total];
        let table = Contingency2x2::from_totals(counts[0], totals[0], counts[1], totals[1], correction)?;
        let (rows, _) = super::compare_tables(&tables[0], &tables[1], &frames, correction);
        Ok(Self {
            name: spec.name.clone(),
            counts,
            totals,
            shares: [table.share_before, table.share_after],
            table,
            rows,
        })
    }
}

/// Share of all frame occurrences taken by the member frames, per period.
pub fn frameset_occurrence_share(
    store: &AnnotationStore,
    spec: &FrameSetSpec,
    correction: Correction,
) -> Result<FrameSetShare> {
    spec.validate()?;
    let tables = [
        super::frame_frequencies(store, Period::Before),
        super::frame_frequencies(store, Period::After),
    ];
    FrameSetShare::from_tables(spec, &tables, correction)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArticleShare {
    pub name: String,
    pub articles_with_member: [u64; 2],
    pub articles: [u64; 2],
    pub shares: [f64; 2],
}

/// Fraction of retained articles with at least one member occurrence.
pub fn frameset_article_share(
    store: &AnnotationStore,
    corpus: &CorpusSnapshot,
    spec: &FrameSetSpec,
) -> Result<ArticleShare> {
    let compiled = spec.compile()?;
    let mut hit: BTreeSet<&str> = BTreeSet::new();
    for s in store.sentences() {
        if compiled.sentence_matches(s) {
            hit.insert(&s.sentence_id.article_id);
        }
    }
    let mut with_member = [0u64; 2];
    let mut articles = [0u64; 2];
    for a in corpus.retained() {
        let p = a.period.index();
        articles[p] += 1;
        if hit.contains(a.id()) {
            with_member[p] += 1;
        }
    }
    let shares = [0, 1].map(|p| ratio(with_member[p], articles[p]));
    Ok(ArticleShare {
        name: spec.name.clone(),
        articles_with_member: with_member,
        articles,
        shares,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentencePresence {
    pub name: String,
    /// Sentences holding at least one member, each counted once.
    pub distinct: [u64; 2],
    /// All target sentences per period.
    pub sentences: [u64; 2],
    pub shares: [f64; 2],
    /// Sentences per member, in member order. A sentence may count toward
    /// several members.
    pub per_member: Vec<(Member, [u64; 2])>,
}

impl SentencePresence {
    /// Per-member sentence counts tested against the sentence totals.
    pub fn comparisons(&self, correction: Correction) -> Vec<Comparison<Member>> {
        self.per_member
            .iter()
            .filter(|(_, c)| c[0] + c[1] > 0)
            .filter_map(|(m, c)| {
                Contingency2x2::from_totals(c[0], self.sentences[0], c[1], self.sentences[1], correction)
                    .ok()
                    .map(|table| Comparison {
                        key: m.clone(),
                        table,
                    })
            })
            .collect()
    }

    pub fn aggregate(&self, correction: Correction) -> Result<Contingency2x2> {
        Contingency2x2::from_totals(self.distinct[0], self.sentences[0], self.distinct[1], self.sentences[1], correction)
    }
}

/// Sentence-level presence of members (typically pairs under the target
/// filter), with distinct and per-member counts.
pub fn frameset_sentence_presence(store: &AnnotationStore, spec: &FrameSetSpec) -> Result<SentencePresence> {
    let compiled = spec.compile()?;
    let mut distinct = [0u64; 2];
    let mut per_member = vec![[0u64; 2]; spec.members.len()];
    for s in store.sentences() {
        let hits = compiled.members_in(s);
        if hits.is_empty() {
            continue;
        }
        let p = s.period.index();
        distinct[p] += 1;
        for i in hits {
            per_member[i][p] += 1;
        }
    }
    let sentences = [store.sentence_total(Period::Before), store.sentence_total(Period::After)];
    Ok(SentencePresence {
        name: spec.name.clone(),
        distinct,
        sentences,
        shares: [0, 1].map(|p| ratio(distinct[p], sentences[p])),
        per_member: spec.members.iter().cloned().zip(per_member).collect(),
    })
}

fn ratio(n: u64, d: u64) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 / d as f64
    }
}

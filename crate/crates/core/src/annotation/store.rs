use std::collections::BTreeMap;

use super::{validate_annotation, FrameInstance, FrameInventory, SentenceAnnotation, Violation};
use crate::corpus::{Period, SentenceId, SentenceRecord};
use crate::{Error, Result};

/// A target sentence together with its frame annotations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedSentence {
    pub sentence_id: SentenceId,
    pub period: Period,
    pub text: String,
    pub frames: Vec<FrameInstance>,
}

/// Per-period totals, indexed by [`Period::index`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StoreTotals {
    pub frame_occurrences: [BTreeMap<String, u64>; 2],
    pub annotations: [u64; 2],
    pub sentences: [u64; 2],
}

/// Every target sentence of a corpus with its (possibly empty) frames, in
/// canonical sentence order. Immutable once built.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnnotationStore {
    entries: BTreeMap<SentenceId, AnnotatedSentence>,
    totals: StoreTotals,
}

impl AnnotationStore {
    pub fn builder(index: &[SentenceRecord]) -> StoreBuilder {
        StoreBuilder {
            entries: index
                .iter()
                .map(|s| {
                    (
                        s.sentence_id.clone(),
                        AnnotatedSentence {
                            sentence_id: s.sentence_id.clone(),
                            period: s.period,
                            text: s.text.clone(),
                            frames: Vec::new(),
                        },
                    )
                })
                .collect(),
        }
    }

    /// Builds a store directly from annotated sentences (tests, fixtures).
    pub fn from_sentences(sentences: impl IntoIterator<Item = AnnotatedSentence>) -> Self {
        let entries = sentences
            .into_iter()
            .map(|s| (s.sentence_id.clone(), s))
            .collect();
        StoreBuilder { entries }.build()
    }

    pub fn sentences(&self) -> impl Iterator<Item = &AnnotatedSentence> {
        self.entries.values()
    }

    pub fn sentences_in(&self, period: Period) -> impl Iterator<Item = &AnnotatedSentence> {
        self.entries.values().filter(move |s| s.period == period)
    }

    pub fn get(&self, id: &SentenceId) -> Option<&AnnotatedSentence> {
        self.entries.get(id)
    }

    pub fn totals(&self) -> &StoreTotals {
        &self.totals
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total frame occurrences in `period`.
    pub fn frame_total(&self, period: Period) -> u64 {
        self.totals.annotations[period.index()]
    }

    pub fn sentence_total(&self, period: Period) -> u64 {
        self.totals.sentences[period.index()]
    }

    pub fn frame_names(&self) -> impl Iterator<Item = &String> {
        let mut names: Vec<&String> = self
            .totals
            .frame_occurrences
            .iter()
            .flat_map(|m| m.keys())
            .collect();
        names.sort();
        names.dedup();
        names.into_iter()
    }

    /// Recomputes totals from the entries; used to assert the invariant.
    pub fn recompute_totals(&self) -> StoreTotals {
        compute_totals(&self.entries)
    }
}

fn compute_totals(entries: &BTreeMap<SentenceId, AnnotatedSentence>) -> StoreTotals {
    let mut t = StoreTotals::default();
    for s in entries.values() {
        let p = s.period.index();
        t.sentences[p] += 1;
        for f in &s.frames {
            t.annotations[p] += 1;
            *t.frame_occurrences[p].entry(f.frame.clone()).or_default() += 1;
        }
    }
    t
}

pub struct StoreBuilder {
    entries: BTreeMap<SentenceId, AnnotatedSentence>,
}

impl StoreBuilder {
    pub fn contains(&self, id: &SentenceId) -> bool {
        self.entries.contains_key(id)
    }

    pub fn text(&self, id: &SentenceId) -> Option<&str> {
        self.entries.get(id).map(|s| s.text.as_str())
    }

    /// Attaches frames to a known sentence after validation.
    pub fn attach(
        &mut self,
        annotation: SentenceAnnotation,
        inventory: Option<&FrameInventory>,
    ) -> Result<(), AttachError> {
        let entry = self
            .entries
            .get_mut(&annotation.sentence_id)
            .ok_or(AttachError::UnknownSentence)?;
        let violations = validate_annotation(&annotation, &entry.text, inventory);
        if !violations.is_empty() {
            return Err(AttachError::Invalid(violations));
        }
        entry.frames = annotation.frames;
        Ok(())
    }

    pub fn build(self) -> AnnotationStore {
        let totals = compute_totals(&self.entries);
        AnnotationStore {
            entries: self.entries,
            totals,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttachError {
    UnknownSentence,
    Invalid(Vec<Violation>),
}

impl From<AttachError> for Error {
    fn from(e: AttachError) -> Self {
        match e {
            AttachError::UnknownSentence => Error::Invalid("unknown sentence_id".into()),
            AttachError::Invalid(v) => Error::Invalid(
                v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "),
            ),
        }
    }
}

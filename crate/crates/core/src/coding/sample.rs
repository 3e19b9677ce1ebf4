use serde::{Deserialize, Serialize};

use super::SplitMix64;
use crate::annotation::{AnnotatedSentence, AnnotationStore, FrameInstance};
use crate::corpus::{Period, SentenceId};
use crate::stats::{CompiledFrameSet, FrameSetSpec, Member};
use crate::{Error, Result};

pub const DEFAULT_SAMPLE_SIZE: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub frameset: String,
    pub n: usize,
    pub seed: u64,
}

impl SampleSpec {
    pub fn new(frameset: &str, n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("sample size must be positive".into()));
        }
        Ok(Self {
            frameset: frameset.to_string(),
            n,
            seed,
        })
    }

    pub fn sample_id(&self) -> String {
        format!("{}-n{}-seed{}", self.frameset, self.n, self.seed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HighlightKind {
    Trigger,
    Element,
}

/// A span to emphasise when showing a sampled sentence, in char offsets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Highlight {
    pub kind: HighlightKind,
    pub frame: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<String>,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleItem {
    pub sentence_id: SentenceId,
    pub period: Period,
    pub text: String,
    pub highlights: Vec<Highlight>,
}

/// Sentences drawn for qualitative coding, with text snapshots so sessions
/// stay readable without the store.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub sample_id: String,
    pub spec: SampleSpec,
    /// Population size per period.
    pub population: [u64; 2],
    pub before: Vec<SampleItem>,
    pub after: Vec<SampleItem>,
}

impl Sample {
    pub fn period(&self, period: Period) -> &[SampleItem] {
        match period {
            Period::Before => &self.before,
            Period::After => &self.after,
        }
    }

    /// Before items, then after items.
    pub fn items(&self) -> impl Iterator<Item = &SampleItem> {
        self.before.iter().chain(&self.after)
    }

    pub fn item(&self, id: &SentenceId) -> Option<&SampleItem> {
        self.items().find(|i| &i.sentence_id == id)
    }

    pub fn contains(&self, id: &SentenceId) -> bool {
        self.item(id).is_some()
    }

    pub fn len(&self) -> usize {
        self.before.len() + self.after.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn highlights(compiled: &CompiledFrameSet<'_>, s: &AnnotatedSentence) -> Vec<Highlight> {
    let mut out = Vec::new();
    for inst in &s.frames {
        for m in &compiled.spec().members {
            if !compiled.instance_matches(m, inst, &s.text) {
                continue;
            }
            out.push(Highlight {
                kind: HighlightKind::Trigger,
                frame: inst.frame.clone(),
                role: None,
                start: inst.trigger.start,
                end: inst.trigger.end,
            });
            if let Member::Pair(p) = m {
                for el in inst.elements.iter().filter(|el| el.role == p.role) {
                    out.push(Highlight {
                        kind: HighlightKind::Element,
                        frame: inst.frame.clone(),
                        role: Some(el.role.clone()),
                        start: el.span.start,
                        end: el.span.end,
                    });
                }
            }
        }
    }
    out.sort_by(|a, b| (a.start, a.end, &a.frame, &a.role).cmp(&(b.start, b.end, &b.frame, &b.role)));
    out.dedup();
    out
}

/// Draws up to `spec.n` sentences per period from those containing a member
/// of `frameset`. One generator seeded with `spec.seed` serves the before
/// population and then the after population.
pub fn draw_sample(store: &AnnotationStore, frameset: &FrameSetSpec, spec: &SampleSpec) -> Result<Sample> {
    if spec.n == 0 {
        return Err(Error::Invalid("sample size must be positive".into()));
    }
    if spec.frameset != frameset.name {
        return Err(Error::Invalid(format!(
            "sample spec names frame set `{}` but `{}` was given",
            spec.frameset, frameset.name
        )));
    }
    let compiled = frameset.compile()?;
    let mut rng = SplitMix64::new(spec.seed);
    let mut drawn: [Vec<SampleItem>; 2] = [Vec::new(), Vec::new()];
    let mut population = [0u64; 2];
    for period in Period::ALL {
        let pop: Vec<&AnnotatedSentence> = store
            .sentences_in(period)
            .filter(|s| compiled.sentence_matches(s))
            .collect();
        if pop.is_empty() {
            return Err(Error::EmptyPopulation {
                frameset: frameset.name.clone(),
                period: period.as_str().to_string(),
            });
        }
        population[period.index()] = pop.len() as u64;
        drawn[period.index()] = rng
            .sample_indices(pop.len(), spec.n)
            .into_iter()
            .map(|i| {
                let s = pop[i];
                SampleItem {
                    sentence_id: s.sentence_id.clone(),
                    period,
                    text: s.text.clone(),
                    highlights: highlights(&compiled, s),
                }
            })
            .collect();
    }
    let [before, after] = drawn;
    Ok(Sample {
        sample_id: spec.sample_id(),
        spec: spec.clone(),
        population,
        before,
        after,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSample {
    pub sentence_id: SentenceId,
    pub period: Period,
    pub text: String,
    pub instance: FrameInstance,
}

/// Up to `n` occurrences of `frame` across both periods, drawn uniformly
/// without replacement. Population order is canonical sentence order, then
/// instance order within the sentence.
pub fn sample_frame_instances(store: &AnnotationStore, frame: &str, n: usize, seed: u64) -> Result<Vec<InstanceSample>> {
    let pop: Vec<(&AnnotatedSentence, &FrameInstance)> = store
        .sentences()
        .flat_map(|s| s.frames.iter().filter(|f| f.frame == frame).map(move |f| (s, f)))
        .collect();
    if pop.is_empty() {
        return Err(Error::FrameAbsent(frame.to_string()));
    }
    Ok(SplitMix64::new(seed)
        .sample_indices(pop.len(), n)
        .into_iter()
        .map(|i| {
            let (s, f) = pop[i];
            InstanceSample {
                sentence_id: s.sentence_id.clone(),
                period: s.period,
                text: s.text.clone(),
                instance: f.clone(),
            }
        })
        .collect())
}

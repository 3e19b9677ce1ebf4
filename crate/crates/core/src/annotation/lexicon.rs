use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::{stem, FrameElementInstance, FrameInstance, SentenceAnnotation, Span};
use crate::corpus::SentenceRecord;
use crate::text::{char_offset, tokens};
use crate::{io, Error, Result};

/// Where an element capture rule looks relative to the trigger.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaptureSide {
    /// Last match ending at or before the trigger start.
    Before,
    /// First match starting at or after the trigger end.
    After,
    /// First match anywhere in the sentence.
    #[default]
    Any,
}

/// A regex over the sentence text. The named group `fe`, when present,
/// delimits the element; otherwise the whole match does.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaptureRule {
    pub role: String,
    pub pattern: String,
    #[serde(default)]
    pub side: CaptureSide,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub lexemes: Vec<String>,
    #[serde(default)]
    pub elements: Vec<CaptureRule>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct LexiconFile {
    frames: BTreeMap<String, LexiconEntry>,
}

/// A validated lexicon with compiled capture rules.
#[derive(Debug, Clone)]
pub struct TriggerLexicon {
    entries: BTreeMap<String, LexiconEntry>,
    by_stem: HashMap<String, Vec<String>>,
    rules: BTreeMap<String, Vec<(String, Regex, CaptureSide)>>,
}

impl TriggerLexicon {
    pub fn new(entries: BTreeMap<String, LexiconEntry>) -> Result<Self> {
        let mut by_stem: HashMap<String, Vec<String>> = HashMap::new();
        let mut rules = BTreeMap::new();
        for (frame, entry) in &entries {
            if frame.trim().is_empty() {
                return Err(Error::Config("lexicon frame names must not be empty".into()));
            }
            if entry.lexemes.is_empty() {
                return Err(Error::Config(format!("lexicon entry `{frame}` has no lexemes")));
            }
            let mut seen = BTreeSet::new();
            for lexeme in &entry.lexemes {
                let lower = lexeme.to_lowercase();
                if lower.trim().is_empty() || !seen.insert(lower.clone()) {
                    return Err(Error::Config(format!(
                        "lexicon entry `{frame}`: lexeme `{lexeme}` is empty or repeated"
                    )));
                }
                let frames = by_stem.entry(stem(&lower)).or_default();
                if !frames.contains(frame) {
                    frames.push(frame.clone());
                }
            }
            let mut compiled = Vec::new();
            for rule in &entry.elements {
                if rule.role.trim().is_empty() {
                    return Err(Error::Config(format!("lexicon entry `{frame}`: empty role")));
                }
                let re = Regex::new(&rule.pattern).map_err(|e| {
                    Error::Config(format!("lexicon entry `{frame}`, role `{}`: {e}", rule.role))
                })?;
                compiled.push((rule.role.clone(), re, rule.side));
            }
            rules.insert(frame.clone(), compiled);
        }
        for frames in by_stem.values_mut() {
            frames.sort();
        }
        Ok(Self {
            entries,
            by_stem,
            rules,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: LexiconFile =
            serde_json::from_str(text).map_err(|e| Error::json("lexicon", e))?;
        Self::new(file.frames)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file: LexiconFile = io::read_json(path)?;
        Self::new(file.frames)
    }

    pub fn entries(&self) -> &BTreeMap<String, LexiconEntry> {
        &self.entries
    }

    fn capture(&self, frame: &str, text: &str, trigger: Span) -> Vec<FrameElementInstance> {
        let mut out = Vec::new();
        for (role, re, side) in self.rules.get(frame).into_iter().flatten() {
            let spans = re.captures_iter(text).filter_map(|caps| {
                let m = caps.name("fe").or_else(|| caps.get(0))?;
                let span = Span::new(char_offset(text, m.start()), char_offset(text, m.end()));
                (span.start < span.end).then_some(span)
            });
            let chosen = match side {
                CaptureSide::Any => spans.into_iter().next(),
                CaptureSide::After => spans.into_iter().find(|s| s.start >= trigger.end),
                CaptureSide::Before => spans.into_iter().filter(|s| s.end <= trigger.start).last(),
            };
            if let Some(span) = chosen {
                out.push(FrameElementInstance {
                    role: role.clone(),
                    span,
                });
            }
        }
        out
    }
}

/// Emits one frame instance per token whose stem matches a lexeme, ordered
/// by trigger offset (frame name breaks ties).
pub fn lexicon_annotate(sentence: &SentenceRecord, lexicon: &TriggerLexicon) -> SentenceAnnotation {
    let text = &sentence.text;
    let mut frames = Vec::new();
    for tok in tokens(text) {
        let Some(matched) = lexicon.by_stem.get(&stem(tok.text)) else {
            continue;
        };
        let trigger = Span::new(tok.char_start, tok.char_end);
        for frame in matched {
            frames.push(FrameInstance {
                frame: frame.clone(),
                trigger,
                elements: lexicon.capture(frame, text, trigger),
            });
        }
    }
    SentenceAnnotation {
        sentence_id: sentence.sentence_id.clone(),
        frames,
    }
}

use std::fmt;

use serde::{Deserialize, Serialize};

use super::FrameInventory;
use crate::corpus::SentenceId;
use crate::text::{char_len, char_slice};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }

    pub fn text<'a>(&self, sentence: &'a str) -> Option<&'a str> {
        char_slice(sentence, self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameElementInstance {
    pub role: String,
    #[serde(flatten)]
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameInstance {
    pub frame: String,
    pub trigger: Span,
    #[serde(default)]
    pub elements: Vec<FrameElementInstance>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceAnnotation {
    pub sentence_id: SentenceId,
    pub frames: Vec<FrameInstance>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    EmptySpan,
    SpanOutOfBounds,
    EmptyFrameName,
    EmptyRole,
    UnknownFrame,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::EmptySpan => "empty span",
            ViolationKind::SpanOutOfBounds => "span out of bounds",
            ViolationKind::EmptyFrameName => "empty frame name",
            ViolationKind::EmptyRole => "empty role",
            ViolationKind::UnknownFrame => "unknown frame",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.detail)
    }
}

fn check_span(span: Span, len: usize, what: &str, out: &mut Vec<Violation>) {
    if span.start >= span.end {
        out.push(Violation {
            kind: ViolationKind::EmptySpan,
            detail: format!("{what} [{}, {})", span.start, span.end),
        });
    }
    if span.end > len {
        out.push(Violation {
            kind: ViolationKind::SpanOutOfBounds,
            detail: format!("{what} end {} exceeds sentence length {len}", span.end),
        });
    }
}

/// Lists every span or naming problem; empty means valid. Frame names are
/// checked against `inventory` only when one is given (strict mode).
pub fn validate_annotation(
    annotation: &SentenceAnnotation,
    text: &str,
    inventory: Option<&FrameInventory>,
) -> Vec<Violation> {
    let len = char_len(text);
    let mut out = Vec::new();
    for frame in &annotation.frames {
        if frame.frame.trim().is_empty() {
            out.push(Violation {
                kind: ViolationKind::EmptyFrameName,
                detail: String::new(),
            });
        } else if let Some(inv) = inventory {
            if !inv.contains(&frame.frame) {
                out.push(Violation {
                    kind: ViolationKind::UnknownFrame,
                    detail: frame.frame.clone(),
                });
            }
        }
        check_span(frame.trigger, len, &format!("{} trigger", frame.frame), &mut out);
        for el in &frame.elements {
            if el.role.trim().is_empty() {
                out.push(Violation {
                    kind: ViolationKind::EmptyRole,
                    detail: frame.frame.clone(),
                });
            }
            check_span(el.span, len, &format!("{}.{}", frame.frame, el.role), &mut out);
        }
    }
    out
}

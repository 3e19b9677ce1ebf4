//! One JSON object per line:
//!
//! ```text
//! {"sentence_id": "<article>:<index>", "text": "...", "frames": [{"frame": "Warning", "trigger": {"start": 12, "end": 19}, "elements": [{"role": "Speaker", "start": 0, "end": 7}]}]}
//! ```
//!
//! Output uses `", "` and `": "` separators and raw UTF-8. Any valid JSON
//! with these fields is accepted on import.

use std::collections::HashSet;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use super::{AnnotatedSentence, AnnotationStore, FrameInstance, FrameInventory, SentenceAnnotation};
use super::store::AttachError;
use crate::corpus::{SentenceId, SentenceRecord};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImportRejection {
    /// 1-based input line.
    pub line: usize,
    pub sentence_id: Option<String>,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImportReport {
    pub accepted: usize,
    pub rejections: Vec<ImportRejection>,
}

impl ImportReport {
    pub fn unknown_sentence_count(&self) -> usize {
        self.rejections
            .iter()
            .filter(|r| r.reason.starts_with("unknown sentence_id"))
            .count()
    }
}

#[derive(Deserialize)]
struct Line {
    sentence_id: String,
    text: String,
    #[serde(default)]
    frames: Vec<FrameInstance>,
}

#[derive(serde::Serialize)]
struct LineRef<'a> {
    sentence_id: &'a SentenceId,
    text: &'a str,
    frames: &'a [FrameInstance],
}

/// Reads interchange lines against the sentence index. Invalid lines are
/// rejected with reasons; sentences without a line keep empty frames.
pub fn import_annotations<R: BufRead>(
    reader: R,
    index: &[SentenceRecord],
    inventory: Option<&FrameInventory>,
) -> Result<(AnnotationStore, ImportReport)> {
    let mut builder = AnnotationStore::builder(index);
    let mut report = ImportReport::default();
    let mut seen = HashSet::new();
    for (i, raw) in reader.lines().enumerate() {
        let raw = raw.map_err(|e| Error::io("<annotations>", e))?;
        if raw.trim().is_empty() {
            continue;
        }
        let reject = |sid: Option<&str>, reason: String| ImportRejection {
            line: i + 1,
            sentence_id: sid.map(str::to_string),
            reason,
        };
        let line: Line = match serde_json::from_str(&raw) {
            Ok(l) => l,
            Err(e) => {
                report.rejections.push(reject(None, format!("malformed line: {e}")));
                continue;
            }
        };
        let sid = line.sentence_id.as_str();
        let id: SentenceId = match sid.parse() {
            Ok(id) => id,
            Err(e) => {
                report.rejections.push(reject(Some(sid), e.to_string()));
                continue;
            }
        };
        let Some(known_text) = builder.text(&id) else {
            report.rejections.push(reject(Some(sid), "unknown sentence_id".into()));
            continue;
        };
        if known_text != line.text {
            report
                .rejections
                .push(reject(Some(sid), "text does not match the sentence index".into()));
            continue;
        }
        if seen.contains(&id) {
            report
                .rejections
                .push(reject(Some(sid), "duplicate line for sentence_id".into()));
            continue;
        }
        let annotation = SentenceAnnotation {
            sentence_id: id.clone(),
            frames: line.frames,
        };
        match builder.attach(annotation, inventory) {
            Ok(()) => {
                seen.insert(id);
                report.accepted += 1;
            }
            Err(AttachError::UnknownSentence) => {
                report.rejections.push(reject(Some(sid), "unknown sentence_id".into()))
            }
            Err(AttachError::Invalid(v)) => report.rejections.push(reject(
                Some(sid),
                v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "),
            )),
        }
    }
    Ok((builder.build(), report))
}

/// Serialises one sentence as an interchange line, without the newline.
pub fn to_interchange_line(sentence: &AnnotatedSentence) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SpacedFormatter);
    LineRef {
        sentence_id: &sentence.sentence_id,
        text: &sentence.text,
        frames: &sentence.frames,
    }
    .serialize(&mut ser)
    .expect("in-memory serialisation");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// Writes every sentence of the store in canonical order.
pub fn export_annotations<W: Write>(store: &AnnotationStore, mut out: W) -> io::Result<()> {
    for sentence in store.sentences() {
        out.write_all(to_interchange_line(sentence).as_bytes())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

struct SpacedFormatter;

impl Formatter for SpacedFormatter {
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        w.write_all(b": ")
    }
}

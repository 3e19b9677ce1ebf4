//! Line-oriented coding flow for terminals without the web workbench.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use super::{Highlight, SessionStore};
use crate::corpus::SentenceId;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeOutcome {
    pub labeled_now: usize,
    pub labeled: usize,
    pub total: usize,
}

/// Wraps each maximal highlighted run of characters in `[` `]`.
pub fn render_highlighted(text: &str, highlights: &[Highlight]) -> String {
    let chars: Vec<char> = text.chars().collect();
    let mut marked = vec![false; chars.len()];
    for h in highlights {
        for m in marked.iter_mut().take(h.end.min(chars.len())).skip(h.start) {
            *m = true;
        }
    }
    let mut out = String::with_capacity(text.len() + 8);
    for (i, c) in chars.iter().enumerate() {
        if marked[i] && (i == 0 || !marked[i - 1]) {
            out.push('[');
        }
        out.push(*c);
        if marked[i] && (i + 1 == chars.len() || !marked[i + 1]) {
            out.push(']');
        }
    }
    out
}

fn io_err(e: std::io::Error) -> Error {
    Error::io("<terminal>", e)
}

fn read_line(input: &mut impl BufRead) -> Result<Option<String>> {
    let mut line = String::new();
    if input.read_line(&mut line).map_err(io_err)? == 0 {
        return Ok(None);
    }
    Ok(Some(line.trim().to_string()))
}

/// Prompts for each unlabeled sentence in sample order. Answer with a
/// category number, `s` to skip or `q` to stop. Every label is saved as it
/// is entered.
pub fn code_session(store: &SessionStore, session_id: &str, mut input: impl BufRead, mut out: impl Write) -> Result<CodeOutcome> {
    let mut session = store.load(session_id)?;
    let sample = store.load_sample(&session.sample_id)?;
    let schema = store.schema(&session.schema)?;
    let mut skipped: BTreeSet<SentenceId> = BTreeSet::new();
    let mut labeled_now = 0;

    'items: loop {
        let Some(item) = sample
            .items()
            .find(|i| !session.labels.contains_key(&i.sentence_id) && !skipped.contains(&i.sentence_id))
        else {
            break;
        };
        let (done, total) = session.progress(&sample);
        writeln!(out, "\n[{}/{}] {} ({})", done + 1, total, item.sentence_id, item.period.as_str()).map_err(io_err)?;
        writeln!(out, "{}", render_highlighted(&item.text, &item.highlights)).map_err(io_err)?;
        for (i, c) in schema.level1.iter().enumerate() {
            writeln!(out, "  {}) {}", i + 1, c.label).map_err(io_err)?;
        }

        let level1 = loop {
            write!(out, "level 1 [1-{}, s=skip, q=quit]: ", schema.level1.len()).map_err(io_err)?;
            out.flush().map_err(io_err)?;
            let Some(answer) = read_line(&mut input)? else { break 'items };
            match answer.as_str() {
                "q" => break 'items,
                "s" => {
                    skipped.insert(item.sentence_id.clone());
                    continue 'items;
                }
                _ => match answer.parse::<usize>() {
                    Ok(k) if (1..=schema.level1.len()).contains(&k) => break schema.level1[k - 1].id.clone(),
                    _ => writeln!(out, "not a category: {answer}").map_err(io_err)?,
                },
            }
        };

        let subs = schema.subcategories(&level1);
        let mut level2 = None;
        if !subs.is_empty() {
            for (i, c) in subs.iter().enumerate() {
                writeln!(out, "  {}) {}", i + 1, c.label).map_err(io_err)?;
            }
            level2 = loop {
                write!(out, "level 2 [1-{}, empty=none]: ", subs.len()).map_err(io_err)?;
                out.flush().map_err(io_err)?;
                let Some(answer) = read_line(&mut input)? else { break 'items };
                if answer.is_empty() {
                    break None;
                }
                match answer.parse::<usize>() {
                    Ok(k) if (1..=subs.len()).contains(&k) => break Some(subs[k - 1].id.clone()),
                    _ => writeln!(out, "not a subcategory: {answer}").map_err(io_err)?,
                }
            };
        }

        session = store.label(session_id, &item.sentence_id, &level1, level2.as_deref())?;
        labeled_now += 1;
    }

    let (labeled, total) = session.progress(&sample);
    writeln!(out, "\n{labeled}/{total} labeled").map_err(io_err)?;
    Ok(CodeOutcome {
        labeled_now,
        labeled,
        total,
    })
}

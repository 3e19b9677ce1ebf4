//! Tokenisation and keyword matching shared by cleaning, sentence
//! extraction and the statistics layer.
//!
//! All public offsets are Unicode scalar (char) offsets. Byte offsets are
//! kept alongside so callers can slice the source string without
//! re-scanning.

use serde::{Deserialize, Serialize};

/// A maximal run of alphanumeric characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token<'a> {
    pub text: &'a str,
    pub char_start: usize,
    pub char_end: usize,
    pub byte_start: usize,
    pub byte_end: usize,
}

/// Splits `text` into alphanumeric runs. Everything else is a boundary.
pub fn tokens(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    let mut char_idx = 0;
    for (byte_idx, ch) in text.char_indices() {
        if ch.is_alphanumeric() {
            if start.is_none() {
                start = Some((char_idx, byte_idx));
            }
        } else if let Some((cs, bs)) = start.take() {
            out.push(Token {
                text: &text[bs..byte_idx],
                char_start: cs,
                char_end: char_idx,
                byte_start: bs,
                byte_end: byte_idx,
            });
        }
        char_idx += 1;
    }
    if let Some((cs, bs)) = start {
        out.push(Token {
            text: &text[bs..],
            char_start: cs,
            char_end: char_idx,
            byte_start: bs,
            byte_end: text.len(),
        });
    }
    out
}

pub fn char_len(text: &str) -> usize {
    text.chars().count()
}

/// Byte offset of the `char_idx`-th scalar, or `text.len()` at the end.
pub fn byte_offset(text: &str, char_idx: usize) -> Option<usize> {
    if char_idx == 0 {
        return Some(0);
    }
    let mut count = 0;
    for (b, _) in text.char_indices() {
        if count == char_idx {
            return Some(b);
        }
        count += 1;
    }
    (count == char_idx).then_some(text.len())
}

/// Slices `text` by a half-open char range.
pub fn char_slice(text: &str, start: usize, end: usize) -> Option<&str> {
    if start > end {
        return None;
    }
    let b0 = byte_offset(text, start)?;
    let b1 = byte_offset(text, end)?;
    Some(&text[b0..b1])
}

/// Char offset for a byte offset that sits on a char boundary.
pub fn char_offset(text: &str, byte_idx: usize) -> usize {
    text[..byte_idx].chars().count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum MatchMode {
    /// A single whole token.
    #[default]
    Token,
    /// A sequence of whole tokens separated by non-alphanumeric text.
    Phrase,
}

/// What a keyword is used for once the corpus has been collected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum KeywordRole {
    /// Articles mentioning it are retained; sentences mentioning it are targets.
    Primary,
    /// Articles mentioning it without a primary term are retained separately;
    /// sentences mentioning it are targets.
    Secondary,
    /// Used for collection only and ignored by cleaning and extraction.
    #[default]
    CollectionOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeywordSpec {
    pub term: String,
    #[serde(default)]
    pub case_sensitive: bool,
    #[serde(default)]
    pub mode: MatchMode,
    #[serde(default)]
    pub role: KeywordRole,
    /// Also accept the dotted spelling (`A.I.`) of an uppercase acronym.
    #[serde(default)]
    pub allow_dotted: bool,
}

impl KeywordSpec {
    pub fn new(term: &str, case_sensitive: bool, mode: MatchMode, role: KeywordRole) -> Self {
        Self {
            term: term.to_string(),
            case_sensitive,
            mode,
            role,
            allow_dotted: false,
        }
    }

    /// Counts whole-token occurrences in `text`.
    pub fn count_in(&self, text: &str) -> usize {
        self.spans_in(text).len()
    }

    pub fn matches(&self, text: &str) -> bool {
        self.count_in(text) > 0
    }

    /// Occurrence spans (char offsets) in `text`.
    pub fn spans_in(&self, text: &str) -> Vec<(usize, usize)> {
        let toks = tokens(text);
        let term_toks: Vec<&str> = tokens(&self.term).iter().map(|t| t.text).collect();
        let mut out = Vec::new();
        if term_toks.is_empty() {
            return out;
        }
        let eq = |a: &str, b: &str| {
            if self.case_sensitive {
                a == b
            } else {
                a.to_lowercase() == b.to_lowercase()
            }
        };
        let n = term_toks.len();
        let mut i = 0;
        while i + n <= toks.len() {
            let window = &toks[i..i + n];
            if window.iter().zip(&term_toks).all(|(t, q)| eq(t.text, q)) {
                out.push((window[0].char_start, window[n - 1].char_end));
                i += n;
                continue;
            }
            if self.allow_dotted {
                if let Some(end) = dotted_match(text, &toks, i, &self.term) {
                    out.push((toks[i].char_start, end));
                    i += self.term.chars().count();
                    continue;
                }
            }
            i += 1;
        }
        out
    }
}

/// Matches `A.I.` for term `AI`: single-letter tokens separated by exactly
/// one period and followed by a period. Returns the char end offset.
fn dotted_match(text: &str, toks: &[Token<'_>], at: usize, term: &str) -> Option<usize> {
    let letters: Vec<char> = term.chars().collect();
    if letters.len() < 2 || !letters.iter().all(|c| c.is_uppercase()) {
        return None;
    }
    if at + letters.len() > toks.len() {
        return None;
    }
    for (k, letter) in letters.iter().enumerate() {
        let tok = toks[at + k];
        let mut chars = tok.text.chars();
        if chars.next() != Some(*letter) || chars.next().is_some() {
            return None;
        }
        let after = &text[tok.byte_end..];
        if !after.starts_with('.') {
            return None;
        }
        if k + 1 < letters.len() && toks[at + k + 1].byte_start != tok.byte_end + 1 {
            return None;
        }
    }
    Some(toks[at + letters.len() - 1].char_end + 1)
}

/// Lowercase alphanumeric words, used for shingling and stopword ratios.
pub fn normalized_words(text: &str) -> Vec<String> {
    tokens(text).iter().map(|t| t.text.to_lowercase()).collect()
}

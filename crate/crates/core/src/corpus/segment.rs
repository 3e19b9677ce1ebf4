use super::{Article, CorpusConfig, Provenance, SentenceId, SentenceRecord};

/// Lowercased tokens, period included, after which a `.` never ends a sentence.
pub const ABBREVIATIONS: &[&str] = &[
    "mr.", "mrs.", "ms.", "dr.", "prof.", "u.s.", "u.k.", "e.g.", "i.e.", "etc.", "vs.", "no.",
    "inc.", "ltd.", "st.", "jr.", "sr.",
];

const CLOSERS: &[char] = &['"', '\'', '”', '’', ')', ']'];
const OPENERS: &[char] = &['"', '\'', '“', '‘', '(', '['];

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn starts_sentence(c: char) -> bool {
    c.is_uppercase() || c.is_ascii_digit() || OPENERS.contains(&c)
}

/// True when the `.` at `dot` closes an abbreviation or an initial.
fn suppressed(chars: &[char], dot: usize) -> bool {
    let mut start = dot;
    while start > 0 && !chars[start - 1].is_whitespace() {
        start -= 1;
    }
    let word: String = chars[start..=dot]
        .iter()
        .skip_while(|c| OPENERS.contains(c))
        .collect::<String>()
        .to_lowercase();
    if ABBREVIATIONS.contains(&word.as_str()) {
        return true;
    }
    let mut it = word.chars();
    matches!((it.next(), it.next(), it.next()), (Some(c), Some('.'), None) if c.is_alphabetic())
}

/// Rule-based sentence boundaries as half-open char ranges, trimmed of
/// surrounding whitespace. Text outside the ranges is whitespace only.
pub fn split_sentences(text: &str) -> Vec<(usize, usize)> {
    let chars: Vec<char> = text.chars().collect();
    let n = chars.len();
    let mut out = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < n {
        if !is_terminator(chars[i]) {
            i += 1;
            continue;
        }
        let mut end = i;
        while end < n && is_terminator(chars[end]) {
            end += 1;
        }
        let single_dot = end == i + 1 && chars[i] == '.';
        while end < n && CLOSERS.contains(&chars[end]) {
            end += 1;
        }
        let mut next = end;
        while next < n && chars[next].is_whitespace() {
            next += 1;
        }
        let boundary = next > end
            && next < n
            && starts_sentence(chars[next])
            && !(single_dot && suppressed(&chars, i));
        if boundary {
            push_trimmed(&chars, start, end, &mut out);
            start = next;
            i = next;
        } else {
            i = end.max(i + 1);
        }
    }
    push_trimmed(&chars, start, n, &mut out);
    out
}

fn push_trimmed(chars: &[char], mut start: usize, mut end: usize, out: &mut Vec<(usize, usize)>) {
    while start < end && chars[start].is_whitespace() {
        start += 1;
    }
    while end > start && chars[end - 1].is_whitespace() {
        end -= 1;
    }
    if start < end {
        out.push((start, end));
    }
}

/// Headline and preamble are one sentence each; the body is split by rule.
/// Indices are 0-based in document order.
pub fn segment_sentences(article: &Article, config: &CorpusConfig) -> Vec<SentenceRecord> {
    let mut out = Vec::new();
    for (provenance, field) in article.fields() {
        let spans = match provenance {
            Provenance::Headline | Provenance::Preamble => {
                let chars: Vec<char> = field.chars().collect();
                let mut v = Vec::new();
                push_trimmed(&chars, 0, chars.len(), &mut v);
                v
            }
            Provenance::Body => split_sentences(field),
        };
        for (s, e) in spans {
            let text = crate::text::char_slice(field, s, e)
                .expect("span within field")
                .to_string();
            let mut mentions: Vec<String> = config
                .target_keywords()
                .filter(|k| k.matches(&text))
                .map(|k| k.term.clone())
                .collect();
            mentions.sort();
            mentions.dedup();
            out.push(SentenceRecord {
                sentence_id: SentenceId::new(article.id(), out.len() as u32),
                provenance,
                period: article.period,
                text,
                mentions,
            });
        }
    }
    out
}

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::text::{KeywordRole, KeywordSpec, MatchMode};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegexMode {
    /// Optional short word and whitespace, the term, a short tail.
    #[default]
    Canonical,
    /// `(^.{0,P}|^)(TERM).{0,S}$` applied verbatim.
    Literal,
}

/// Selects frame-element strings that refer directly to the target term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetFilter {
    pub term: String,
    #[serde(default)]
    pub mode: RegexMode,
    #[serde(default = "three")]
    pub prefix_word_limit: usize,
    #[serde(default = "three")]
    pub suffix_char_limit: usize,
}

fn three() -> usize {
    3
}

impl TargetFilter {
    pub fn new(term: &str, mode: RegexMode) -> Self {
        Self {
            term: term.to_string(),
            mode,
            prefix_word_limit: 3,
            suffix_char_limit: 3,
        }
    }

    pub fn ai() -> Self {
        Self::new("AI", RegexMode::Canonical)
    }

    pub fn pattern(&self) -> String {
        let term = regex::escape(&self.term);
        let (p, s) = (self.prefix_word_limit, self.suffix_char_limit);
        match self.mode {
            RegexMode::Canonical if p == 0 => format!(r"^{term}.{{0,{s}}}$"),
            RegexMode::Canonical => format!(r"^(?:\p{{L}}{{1,{p}}}\s+)?{term}.{{0,{s}}}$"),
            RegexMode::Literal => format!(r"(^.{{0,{p}}}|^)({term}).{{0,{s}}}$"),
        }
    }

    pub fn matcher(&self) -> Result<TargetMatcher> {
        if self.term.trim().is_empty() {
            return Err(Error::Config("target term must not be empty".into()));
        }
        let regex = Regex::new(&self.pattern())
            .map_err(|e| Error::Config(format!("target pattern: {e}")))?;
        Ok(TargetMatcher {
            regex,
            term: KeywordSpec::new(&self.term, true, MatchMode::Phrase, KeywordRole::Primary),
        })
    }
}

/// A compiled [`TargetFilter`].
#[derive(Debug, Clone)]
pub struct TargetMatcher {
    regex: Regex,
    term: KeywordSpec,
}

impl TargetMatcher {
    /// Exact-match test used for frame-element pair extraction.
    pub fn is_match(&self, fe_text: &str) -> bool {
        self.regex.is_match(fe_text.trim())
    }

    /// Whole-token containment, used for role distributions.
    pub fn contained_in(&self, fe_text: &str) -> bool {
        self.term.matches(fe_text)
    }
}

pub fn match_target(fe_text: &str, filter: &TargetFilter) -> bool {
    filter.matcher().map(|m| m.is_match(fe_text)).unwrap_or(false)
}

pub fn contains_target(fe_text: &str, filter: &TargetFilter) -> bool {
    filter.matcher().map(|m| m.contained_in(fe_text)).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stated_cases_canonical() {
        let f = TargetFilter::ai();
        assert!(match_target("the AIs", &f));
        assert!(!match_target("OpenAI", &f));
        assert!(!match_target("an AI artist", &f));
    }

    #[test]
    fn canonical_variants() {
        let f = TargetFilter::ai();
        for ok in ["AI", "AI.", "AI's", "an AI", " AI ", "Its AI"] {
            assert!(match_target(ok, &f), "{ok}");
        }
        for bad in ["ai", "their AI", "AI tools", "the  big AI", "1 AI"] {
            assert!(!match_target(bad, &f), "{bad}");
        }
    }

    #[test]
    fn literal_mode_follows_printed_pattern() {
        let f = TargetFilter::new("AI", RegexMode::Literal);
        assert_eq!(f.pattern(), r"(^.{0,3}|^)(AI).{0,3}$");
        // four characters precede the term, which the printed pattern refuses
        assert!(!match_target("the AIs", &f));
        assert!(match_target("an AI", &f));
        assert!(!match_target("OpenAI", &f));
        assert!(match_target("xAI", &f));
    }

    #[test]
    fn containment() {
        let f = TargetFilter::ai();
        assert!(contains_target("experts warned that AI could harm jobs", &f));
        assert!(!contains_target("said the airline", &f));
    }

    #[test]
    fn chatgpt_term() {
        let f = TargetFilter::new("ChatGPT", RegexMode::Canonical);
        assert!(!match_target("the ChatGPT bot", &f));
        assert!(match_target("ChatGPT's", &f));
    }
}

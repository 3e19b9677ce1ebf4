use chrono::{DateTime, TimeZone, Utc};
use serde::{Deserialize, Serialize};

use crate::text::{KeywordRole, KeywordSpec, MatchMode};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CorpusConfig {
    pub threshold_instant: DateTime<Utc>,
    pub keywords: Vec<KeywordSpec>,
    pub dedup_shingle_size: usize,
    pub dedup_jaccard_threshold: f64,
    pub english_stopword_ratio_min: f64,
    /// Bodies with fewer tokens are tagged `und` instead of being classified.
    pub language_min_tokens: usize,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self {
            threshold_instant: Utc.with_ymd_and_hms(2022, 11, 30, 0, 0, 0).unwrap(),
            keywords: vec![
                KeywordSpec::new("AI", true, MatchMode::Token, KeywordRole::Primary),
                KeywordSpec::new("ChatGPT", false, MatchMode::Token, KeywordRole::Secondary),
                KeywordSpec::new(
                    "machine learning",
                    false,
                    MatchMode::Phrase,
                    KeywordRole::CollectionOnly,
                ),
            ],
            dedup_shingle_size: 5,
            dedup_jaccard_threshold: 0.85,
            english_stopword_ratio_min: 0.08,
            language_min_tokens: 20,
        }
    }
}

impl CorpusConfig {
    pub fn validate(&self) -> Result<()> {
        if self.keywords.is_empty() {
            return Err(Error::Config("keywords must not be empty".into()));
        }
        if self.keywords.iter().any(|k| k.term.trim().is_empty()) {
            return Err(Error::Config("keyword terms must not be empty".into()));
        }
        if !self.keywords.iter().any(|k| k.role == KeywordRole::Primary) {
            return Err(Error::Config("at least one keyword must have role `primary`".into()));
        }
        if self.dedup_shingle_size == 0 {
            return Err(Error::Config("dedup_shingle_size must be positive".into()));
        }
        if !(self.dedup_jaccard_threshold > 0.0 && self.dedup_jaccard_threshold <= 1.0) {
            return Err(Error::Config("dedup_jaccard_threshold must lie in (0, 1]".into()));
        }
        if !(self.english_stopword_ratio_min > 0.0 && self.english_stopword_ratio_min < 1.0) {
            return Err(Error::Config("english_stopword_ratio_min must lie in (0, 1)".into()));
        }
        Ok(())
    }

    pub fn keywords_with(&self, role: KeywordRole) -> impl Iterator<Item = &KeywordSpec> {
        self.keywords.iter().filter(move |k| k.role == role)
    }

    /// Keywords that make a sentence a target sentence.
    pub fn target_keywords(&self) -> impl Iterator<Item = &KeywordSpec> {
        self.keywords
            .iter()
            .filter(|k| matches!(k.role, KeywordRole::Primary | KeywordRole::Secondary))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = CorpusConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.threshold_instant.to_rfc3339(), "2022-11-30T00:00:00+00:00");
        let terms: Vec<_> = cfg.keywords.iter().map(|k| k.term.as_str()).collect();
        assert_eq!(terms, ["AI", "ChatGPT", "machine learning"]);
        assert_eq!(cfg.target_keywords().count(), 2);
    }

    #[test]
    fn partial_json_fills_defaults() {
        let cfg: CorpusConfig = serde_json::from_str(r#"{"dedup_shingle_size": 3}"#).unwrap();
        assert_eq!(cfg.dedup_shingle_size, 3);
        assert_eq!(cfg.dedup_jaccard_threshold, 0.85);
    }

    #[test]
    fn rejects_bad_values() {
        let mut cfg = CorpusConfig::default();
        cfg.dedup_jaccard_threshold = 0.0;
        assert!(cfg.validate().is_err());
        let mut cfg = CorpusConfig::default();
        cfg.keywords.clear();
        assert!(cfg.validate().is_err());
        let mut cfg = CorpusConfig::default();
        cfg.keywords.retain(|k| k.role != KeywordRole::Primary);
        assert!(cfg.validate().is_err());
    }
}

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dedup::duplicate_map;
use super::keywords::classify;
use super::language::{detect_language, LanguageTag};
use super::segment::segment_sentences;
use super::{Article, ArticleStatus, CorpusConfig, IngestRejection, SentenceRecord};
use crate::io;
use crate::Result;

pub const ARTICLES_FILE: &str = "articles.jsonl";
pub const SENTENCES_FILE: &str = "sentences.jsonl";
pub const CLEANING_LOG_FILE: &str = "cleaning_log.json";
pub const CONFIG_FILE: &str = "config.json";
pub const REJECTIONS_FILE: &str = "ingest_rejections.jsonl";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovedCounts {
    pub non_english: usize,
    pub duplicate: usize,
    pub no_explicit_mention: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetainedCounts {
    pub mentions_ai: usize,
    pub mentions_chatgpt_only: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleaningLog {
    pub ingested: usize,
    pub removed: RemovedCounts,
    pub retained: RetainedCounts,
    /// Articles whose language could not be determined; kept.
    pub flagged_undetermined: Vec<String>,
}

impl CleaningLog {
    pub fn removed_total(&self) -> usize {
        self.removed.non_english + self.removed.duplicate + self.removed.no_explicit_mention
    }

    pub fn retained_total(&self) -> usize {
        self.retained.mentions_ai + self.retained.mentions_chatgpt_only
    }

    pub fn is_conserved(&self) -> bool {
        self.ingested == self.removed_total() + self.retained_total()
    }
}

/// Immutable corpus state. Articles are kept in `article_id` order.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSnapshot {
    pub config: CorpusConfig,
    pub articles: Vec<Article>,
    pub rejections: Vec<IngestRejection>,
    pub log: Option<CleaningLog>,
}

impl CorpusSnapshot {
    pub fn new(config: CorpusConfig, mut articles: Vec<Article>, rejections: Vec<IngestRejection>) -> Self {
        articles.sort_by(|a, b| a.id().cmp(b.id()));
        Self {
            config,
            articles,
            rejections,
            log: None,
        }
    }

    pub fn retained(&self) -> impl Iterator<Item = &Article> {
        self.articles.iter().filter(|a| a.status.is_retained())
    }

    pub fn article(&self, id: &str) -> Option<&Article> {
        self.articles
            .binary_search_by(|a| a.id().cmp(id))
            .ok()
            .map(|i| &self.articles[i])
    }

    pub fn retained_per_period(&self) -> [usize; 2] {
        let mut counts = [0; 2];
        for a in self.retained() {
            counts[a.period.index()] += 1;
        }
        counts
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        io::write_json(&dir.join(CONFIG_FILE), &self.config)?;
        io::write_jsonl(&dir.join(ARTICLES_FILE), &self.articles)?;
        io::write_jsonl(&dir.join(REJECTIONS_FILE), &self.rejections)?;
        if let Some(log) = &self.log {
            io::write_json(&dir.join(CLEANING_LOG_FILE), log)?;
        }
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let config: CorpusConfig = io::read_json(&dir.join(CONFIG_FILE))?;
        let articles: Vec<Article> = io::read_jsonl(&dir.join(ARTICLES_FILE))?;
        let rejections_path = dir.join(REJECTIONS_FILE);
        let rejections = if rejections_path.exists() {
            io::read_jsonl(&rejections_path)?
        } else {
            Vec::new()
        };
        let log_path = dir.join(CLEANING_LOG_FILE);
        let log = if log_path.exists() {
            Some(io::read_json(&log_path)?)
        } else {
            None
        };
        let mut snap = CorpusSnapshot::new(config, articles, rejections);
        snap.log = log;
        Ok(snap)
    }
}

/// Runs the cleaning cascade: language, then near-duplicates, then keywords.
///
/// Each stage works from the raw record fields, so cleaning an already
/// cleaned snapshot (or only its retained articles) changes nothing.
pub fn clean(snapshot: &CorpusSnapshot) -> CorpusSnapshot {
    let config = &snapshot.config;
    let mut out = snapshot.clone();
    let mut log = CleaningLog {
        ingested: out.articles.len(),
        ..CleaningLog::default()
    };

    let tags: Vec<LanguageTag> = out
        .articles
        .par_iter()
        .map(|a| detect_language(&a.record, config))
        .collect();
    for (article, tag) in out.articles.iter_mut().zip(tags) {
        article.language = Some(tag.as_str().to_string());
        article.duplicate_of = None;
        article.status = ArticleStatus::Pending;
        match tag {
            LanguageTag::Other => {
                article.status = ArticleStatus::NonEnglish;
                log.removed.non_english += 1;
            }
            LanguageTag::Und => log.flagged_undetermined.push(article.id().to_string()),
            LanguageTag::En => {}
        }
    }

    let duplicates = duplicate_map(&out);
    for article in &mut out.articles {
        if let Some(survivor) = duplicates.get(article.id()) {
            article.status = ArticleStatus::Duplicate;
            article.duplicate_of = Some(survivor.clone());
            log.removed.duplicate += 1;
        }
    }

    for article in &mut out.articles {
        if article.status != ArticleStatus::Pending {
            continue;
        }
        article.status = classify(article, config);
        match article.status {
            ArticleStatus::MentionsAi => log.retained.mentions_ai += 1,
            ArticleStatus::ChatgptOnly => log.retained.mentions_chatgpt_only += 1,
            _ => log.removed.no_explicit_mention += 1,
        }
    }
    log.flagged_undetermined
        .retain(|id| out.article(id).is_some_and(|a| a.status.is_retained()));

    debug_assert!(log.is_conserved());
    out.log = Some(log);
    out
}

/// Sentences of retained articles that mention a target keyword, in
/// `(article_id, sentence_index)` order.
pub fn extract_target_sentences(snapshot: &CorpusSnapshot) -> Vec<SentenceRecord> {
    let retained: Vec<&Article> = snapshot.retained().collect();
    let mut out: Vec<SentenceRecord> = retained
        .par_iter()
        .flat_map_iter(|a| segment_sentences(a, &snapshot.config))
        .filter(|s| !s.mentions.is_empty())
        .collect();
    out.sort_by(|a, b| a.sentence_id.cmp(&b.sentence_id));
    out
}

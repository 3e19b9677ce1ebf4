//! Article ingestion, the cleaning cascade and target-sentence extraction.
//!
//! Cleaning is order-fixed: language filter, then near-duplicate removal,
//! then keyword partition. Every stage reads the raw record fields, so the
//! cascade is idempotent on its own output.

mod config;
mod dedup;
mod ingest;
mod keywords;
mod language;
mod record;
mod segment;
mod snapshot;

pub use config::CorpusConfig;
pub use dedup::{jaccard, remove_near_duplicates, shingles};
pub use ingest::{ingest_articles, ingest_jsonl, IngestRejection};
pub use keywords::{keyword_partition, Partition};
pub use language::{detect_language, LanguageTag, ENGLISH_STOPWORDS};
pub use record::{Article, ArticleRecord, ArticleStatus, Period, Provenance, SentenceId, SentenceRecord};
pub use segment::{segment_sentences, split_sentences, ABBREVIATIONS};
pub use snapshot::{
    clean, extract_target_sentences, CleaningLog, CorpusSnapshot, RemovedCounts, RetainedCounts,
    ARTICLES_FILE, CLEANING_LOG_FILE, CONFIG_FILE, REJECTIONS_FILE, SENTENCES_FILE,
};

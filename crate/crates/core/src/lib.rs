//! Frame-semantic narrative analysis for news corpora.
//!
//! The crate is organised along the pipeline it implements:
//!
//! - [`corpus`]: ingestion of article records, the cleaning cascade
//!   (language filter, near-duplicate removal, keyword partition) and
//!   extraction of target sentences split at a threshold instant.
//! - [`annotation`]: the frame-semantic annotation model, the line-delimited
//!   interchange format and a deterministic lexicon annotator.
//! - [`stats`]: contingency tests, frame and frame-element comparisons,
//!   curated frame-set analyses and descriptive corpus statistics.
//! - [`coding`]: seeded sampling, thematic coding sessions and
//!   inter-annotator agreement.
//! - [`report`]: CSV tables and a Markdown summary.
//! - [`pipeline`]: on-disk stages tying everything together.

#![forbid(unsafe_code)]

pub mod annotation;
pub mod assets;
pub mod coding;
pub mod config;
pub mod corpus;
mod error;
pub mod io;
pub mod pipeline;
pub mod report;
pub mod stats;
pub mod text;

pub use error::{Error, Result};

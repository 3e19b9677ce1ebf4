use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Error;

/// Position of an article relative to the threshold instant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Period {
    Before,
    After,
}

impl Period {
    pub const ALL: [Period; 2] = [Period::Before, Period::After];

    pub fn of(instant: DateTime<Utc>, threshold: DateTime<Utc>) -> Self {
        if instant < threshold {
            Period::Before
        } else {
            Period::After
        }
    }

    pub fn index(self) -> usize {
        match self {
            Period::Before => 0,
            Period::After => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Period::Before => "before",
            Period::After => "after",
        }
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An article exactly as it arrives on the ingestion boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArticleRecord {
    pub article_id: String,
    pub source_id: String,
    pub url: String,
    pub headline: String,
    pub preamble: Option<String>,
    pub body: String,
    pub published_at: DateTime<Utc>,
}

/// Outcome of the cleaning cascade for one article.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArticleStatus {
    /// Ingested, not yet cleaned.
    Pending,
    MentionsAi,
    ChatgptOnly,
    NonEnglish,
    Duplicate,
    NoExplicitMention,
}

impl ArticleStatus {
    pub fn is_retained(self) -> bool {
        matches!(self, ArticleStatus::MentionsAi | ArticleStatus::ChatgptOnly)
    }
}

/// An ingested record augmented by ingestion and cleaning.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Article {
    #[serde(flatten)]
    pub record: ArticleRecord,
    pub period: Period,
    pub language: Option<String>,
    pub duplicate_of: Option<String>,
    pub status: ArticleStatus,
}

impl Article {
    pub fn new(record: ArticleRecord, threshold: DateTime<Utc>) -> Self {
        let period = Period::of(record.published_at, threshold);
        Self {
            record,
            period,
            language: None,
            duplicate_of: None,
            status: ArticleStatus::Pending,
        }
    }

    pub fn id(&self) -> &str {
        &self.record.article_id
    }

    /// Headline, preamble and body in document order.
    pub fn fields(&self) -> impl Iterator<Item = (Provenance, &str)> {
        std::iter::once((Provenance::Headline, self.record.headline.as_str()))
            .chain(
                self.record
                    .preamble
                    .as_deref()
                    .map(|p| (Provenance::Preamble, p)),
            )
            .chain(std::iter::once((Provenance::Body, self.record.body.as_str())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Headline,
    Preamble,
    Body,
}

/// `(article_id, sentence_index)`, written as `"<article>:<index>"`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SentenceId {
    pub article_id: String,
    pub index: u32,
}

impl SentenceId {
    pub fn new(article_id: impl Into<String>, index: u32) -> Self {
        Self {
            article_id: article_id.into(),
            index,
        }
    }
}

impl fmt::Display for SentenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.article_id, self.index)
    }
}

impl FromStr for SentenceId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (article, index) = s
            .rsplit_once(':')
            .ok_or_else(|| Error::Invalid(format!("sentence id `{s}` lacks `:<index>`")))?;
        if article.is_empty() {
            return Err(Error::Invalid(format!("sentence id `{s}` has an empty article id")));
        }
        let index = index
            .parse()
            .map_err(|_| Error::Invalid(format!("sentence id `{s}` has a non-numeric index")))?;
        Ok(SentenceId::new(article, index))
    }
}

impl Serialize for SentenceId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SentenceId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceRecord {
    pub sentence_id: SentenceId,
    pub provenance: Provenance,
    pub period: Period,
    pub text: String,
    /// Matched target terms, sorted.
    pub mentions: Vec<String>,
}

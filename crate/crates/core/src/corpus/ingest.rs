use std::collections::HashSet;
use std::io::BufRead;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Article, ArticleRecord, CorpusConfig, CorpusSnapshot};
use crate::{Error, Result};

/// A record refused at the ingestion boundary. The run continues.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestRejection {
    /// 1-based input line.
    pub line: usize,
    pub article_id: Option<String>,
    pub reason: String,
}

/// Builds a snapshot from already-parsed records.
pub fn ingest_articles(
    records: impl IntoIterator<Item = ArticleRecord>,
    config: &CorpusConfig,
) -> Result<CorpusSnapshot> {
    config.validate()?;
    let mut seen = HashSet::new();
    let mut articles = Vec::new();
    for record in records {
        if !seen.insert(record.article_id.clone()) {
            return Err(Error::DuplicateArticle(record.article_id));
        }
        articles.push(Article::new(record, config.threshold_instant));
    }
    Ok(CorpusSnapshot::new(config.clone(), articles, Vec::new()))
}

/// Reads newline-delimited JSON records. Malformed lines are rejected with
/// a reason; a repeated `article_id` is a hard error.
pub fn ingest_jsonl<R: BufRead>(reader: R, config: &CorpusConfig) -> Result<CorpusSnapshot> {
    let mut records = Vec::new();
    let mut rejections = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<input>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        match parse_record(&line) {
            Ok(record) => records.push(record),
            Err((article_id, reason)) => rejections.push(IngestRejection {
                line: i + 1,
                article_id,
                reason,
            }),
        }
    }
    let mut snapshot = ingest_articles(records, config)?;
    snapshot.rejections = rejections;
    Ok(snapshot)
}

fn parse_record(line: &str) -> std::result::Result<ArticleRecord, (Option<String>, String)> {
    let value: Value =
        serde_json::from_str(line).map_err(|e| (None, format!("invalid JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| (None, "record is not a JSON object".to_string()))?;

    let article_id = match obj.get("article_id").and_then(Value::as_str) {
        Some(id) if !id.trim().is_empty() => id.to_string(),
        _ => return Err((None, "missing article_id".into())),
    };
    let fail = |reason: String| (Some(article_id.clone()), reason);

    let string_field = |name: &str| -> std::result::Result<String, (Option<String>, String)> {
        obj.get(name)
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| fail(format!("missing or non-string field `{name}`")))
    };

    let published_at = match obj.get("published_at").and_then(Value::as_str) {
        Some(ts) => DateTime::parse_from_rfc3339(ts)
            .map(|t| t.with_timezone(&Utc))
            .map_err(|e| fail(format!("published_at `{ts}` is not RFC 3339: {e}")))?,
        None => return Err(fail("missing published_at".into())),
    };
    let preamble = match obj.get("preamble") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(fail("preamble must be a string or null".into())),
    };

    Ok(ArticleRecord {
        source_id: string_field("source_id")?,
        url: string_field("url")?,
        headline: string_field("headline")?,
        body: string_field("body")?,
        preamble,
        published_at,
        article_id,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Period;

    fn line(id: &str, ts: &str) -> String {
        format!(
            r#"{{"article_id":"{id}","source_id":"bbc.com","url":"https://x/{id}","headline":"H","preamble":null,"body":"AI body","published_at":"{ts}"}}"#
        )
    }

    #[test]
    fn empty_stream() {
        let snap = ingest_jsonl("".as_bytes(), &CorpusConfig::default()).unwrap();
        assert!(snap.articles.is_empty());
        assert!(snap.rejections.is_empty());
    }

    #[test]
    fn period_is_computed() {
        let input = line("a", "2022-06-01T00:00:00Z");
        let snap = ingest_jsonl(input.as_bytes(), &CorpusConfig::default()).unwrap();
        assert_eq!(snap.articles[0].period, Period::Before);
    }

    #[test]
    fn twelve_records_two_malformed() {
        let mut lines: Vec<String> = (0..10)
            .map(|i| line(&format!("a{i:02}"), "2023-01-0{}T10:00:00Z").replace("{}", "1"))
            .collect();
        lines.insert(3, r#"{"source_id":"x","url":"u","headline":"h","body":"b","published_at":"2023-01-01T00:00:00Z"}"#.into());
        lines.insert(8, line("bad", "yesterday"));
        let input = lines.join("\n");
        let snap = ingest_jsonl(input.as_bytes(), &CorpusConfig::default()).unwrap();
        assert_eq!(snap.articles.len(), 10);
        assert_eq!(snap.rejections.len(), 2);
        assert_eq!(snap.rejections[0].line, 4);
        assert_eq!(snap.rejections[0].reason, "missing article_id");
        assert_eq!(snap.rejections[1].line, 9);
        assert_eq!(snap.rejections[1].article_id.as_deref(), Some("bad"));
    }

    #[test]
    fn duplicate_id_is_hard_error() {
        let input = format!("{}\n{}", line("a", "2023-01-01T00:00:00Z"), line("a", "2023-01-02T00:00:00Z"));
        let err = ingest_jsonl(input.as_bytes(), &CorpusConfig::default()).unwrap_err();
        assert!(matches!(err, Error::DuplicateArticle(id) if id == "a"));
    }

    #[test]
    fn offsets_are_normalised_to_utc() {
        let input = line("a", "2022-11-30T01:00:00+02:00");
        let snap = ingest_jsonl(input.as_bytes(), &CorpusConfig::default()).unwrap();
        assert_eq!(snap.articles[0].period, Period::Before);
    }
}

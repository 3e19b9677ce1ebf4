//! Corpus-level counts: articles over time, per publisher, keyword mention
//! rates and the AGI share.

use std::collections::BTreeMap;

use chrono::{DateTime, Datelike, Duration, NaiveDate, TimeZone, Utc};
use serde::{Deserialize, Serialize};

use super::{mann_whitney_u, welch_t, TestResult};
use crate::corpus::{Article, ArticleStatus, CorpusSnapshot, Period};
use crate::text::{KeywordRole, KeywordSpec, MatchMode};

/// Mean Gregorian month length in days.
const DAYS_PER_MONTH: f64 = 30.436875;

/// Articles published in one UTC calendar month, split by period.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonthBin {
    /// `YYYY-MM`.
    pub month: String,
    pub before: u64,
    pub after: u64,
}

impl MonthBin {
    pub fn total(&self) -> u64 {
        self.before + self.after
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublisherStats {
    pub source_id: String,
    pub articles: [u64; 2],
    /// Articles mentioning a secondary keyword (ChatGPT by default).
    pub chatgpt: [u64; 2],
    pub chatgpt_share: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MentionComparison {
    pub articles: [u64; 2],
    pub means: [f64; 2],
    /// after / before, when the before mean is positive.
    pub ratio: Option<f64>,
    pub mann_whitney: Option<TestResult>,
    pub welch: Option<TestResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescriptiveStats {
    /// Articles mentioning a primary keyword, per period.
    pub articles: [u64; 2],
    /// Length of each period's share of the timeframe in months.
    pub months: [f64; 2],
    pub monthly_average: [f64; 2],
    /// Contiguous calendar months from the earliest to the latest article.
    pub monthly: Vec<MonthBin>,
    /// All retained articles, including secondary-only ones. Sorted by
    /// total descending, then id.
    pub publishers: Vec<PublisherStats>,
    pub mentions: MentionComparison,
    pub agi_articles: [u64; 2],
    pub agi_share: [f64; 2],
}

fn agi_keywords() -> [KeywordSpec; 2] {
    [
        KeywordSpec::new("AGI", false, MatchMode::Token, KeywordRole::CollectionOnly),
        KeywordSpec::new(
            "artificial general intelligence",
            false,
            MatchMode::Phrase,
            KeywordRole::CollectionOnly,
        ),
    ]
}

fn any_field(article: &Article, kws: &[&KeywordSpec]) -> bool {
    article.fields().any(|(_, t)| kws.iter().any(|k| k.matches(t)))
}

fn ratio(n: u64, d: u64) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 / d as f64
    }
}

fn month_key(t: DateTime<Utc>) -> (i32, u32) {
    (t.year(), t.month())
}

fn next_month((y, m): (i32, u32)) -> (i32, u32) {
    if m == 12 {
        (y + 1, 1)
    } else {
        (y, m + 1)
    }
}

fn day_start(t: DateTime<Utc>) -> DateTime<Utc> {
    let d: NaiveDate = t.date_naive();
    Utc.from_utc_datetime(&d.and_hms_opt(0, 0, 0).expect("midnight"))
}

fn span_months(from: DateTime<Utc>, to: DateTime<Utc>) -> f64 {
    let secs = (to - from).num_seconds().max(0) as f64;
    secs / 86_400.0 / DAYS_PER_MONTH
}

/// Descriptive statistics over a cleaned corpus.
///
/// The timeframe runs from the start of the earliest AI article's UTC day to
/// the end of the latest one's, cut at the threshold instant; monthly
/// averages divide each period's article count by its length in months.
pub fn descriptive_stats(corpus: &CorpusSnapshot) -> DescriptiveStats {
    let config = &corpus.config;
    let primary: Vec<&KeywordSpec> = config.keywords_with(KeywordRole::Primary).collect();
    let secondary: Vec<&KeywordSpec> = config.keywords_with(KeywordRole::Secondary).collect();
    let agi = agi_keywords();
    let agi_refs: Vec<&KeywordSpec> = agi.iter().collect();

    let ai_articles: Vec<&Article> = corpus
        .retained()
        .filter(|a| a.status == ArticleStatus::MentionsAi)
        .collect();

    let mut articles = [0u64; 2];
    let mut mention_counts: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
    let mut agi_articles = [0u64; 2];
    let mut bins: BTreeMap<(i32, u32), [u64; 2]> = BTreeMap::new();
    for a in &ai_articles {
        let p = a.period.index();
        articles[p] += 1;
        let n: usize = a
            .fields()
            .map(|(_, t)| primary.iter().map(|k| k.count_in(t)).sum::<usize>())
            .sum();
        mention_counts[p].push(n as f64);
        if any_field(a, &agi_refs) {
            agi_articles[p] += 1;
        }
        bins.entry(month_key(a.record.published_at)).or_default()[p] += 1;
    }

    let mut monthly = Vec::new();
    if let (Some(&first), Some(&last)) = (bins.keys().next(), bins.keys().next_back()) {
        let mut key = first;
        loop {
            let c = bins.get(&key).copied().unwrap_or_default();
            monthly.push(MonthBin {
                month: format!("{:04}-{:02}", key.0, key.1),
                before: c[0],
                after: c[1],
            });
            if key == last {
                break;
            }
            key = next_month(key);
        }
    }

    let threshold = config.threshold_instant;
    let earliest = ai_articles.iter().map(|a| a.record.published_at).min();
    let latest = ai_articles.iter().map(|a| a.record.published_at).max();
    let mut months = [0.0; 2];
    if let (Some(lo), Some(hi)) = (earliest, latest) {
        let start = day_start(lo);
        let end = day_start(hi) + Duration::days(1);
        if articles[0] > 0 {
            months[0] = span_months(start, threshold.min(end));
        }
        if articles[1] > 0 {
            months[1] = span_months(threshold.max(start), end);
        }
    }
    let monthly_average = [0, 1].map(|p| if months[p] > 0.0 { articles[p] as f64 / months[p] } else { 0.0 });

    let means = [0, 1].map(|p| {
        let v = &mention_counts[p];
        if v.is_empty() {
            0.0
        } else {
            v.iter().sum::<f64>() / v.len() as f64
        }
    });
    let mentions = MentionComparison {
        articles,
        means,
        ratio: (means[0] > 0.0).then(|| means[1] / means[0]),
        mann_whitney: mann_whitney_u(&mention_counts[0], &mention_counts[1]),
        welch: welch_t(&mention_counts[0], &mention_counts[1]),
    };

    let mut pubs: BTreeMap<&str, ([u64; 2], [u64; 2])> = BTreeMap::new();
    for a in corpus.retained() {
        let p = a.period.index();
        let e = pubs.entry(&a.record.source_id).or_default();
        e.0[p] += 1;
        if any_field(a, &secondary) {
            e.1[p] += 1;
        }
    }
    let mut publishers: Vec<PublisherStats> = pubs
        .into_iter()
        .map(|(id, (arts, gpt))| PublisherStats {
            source_id: id.to_string(),
            articles: arts,
            chatgpt: gpt,
            chatgpt_share: [0, 1].map(|p| ratio(gpt[p], arts[p])),
        })
        .collect();
    publishers.sort_by(|x, y| {
        (y.articles[0] + y.articles[1])
            .cmp(&(x.articles[0] + x.articles[1]))
            .then_with(|| x.source_id.cmp(&y.source_id))
    });

    DescriptiveStats {
        articles,
        months,
        monthly_average,
        monthly,
        publishers,
        mentions,
        agi_articles,
        agi_share: [0, 1].map(|p| ratio(agi_articles[p], articles[p])),
    }
}

impl DescriptiveStats {
    pub fn period_articles(&self, period: Period) -> u64 {
        self.articles[period.index()]
    }
}

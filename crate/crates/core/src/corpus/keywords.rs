use super::{Article, ArticleStatus, CorpusConfig, CorpusSnapshot};
use crate::text::KeywordRole;

/// Article ids split by explicit keyword mentions, each list sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Partition {
    pub mentions_ai: Vec<String>,
    pub chatgpt_only: Vec<String>,
    pub removed: Vec<String>,
}

pub(crate) fn classify(article: &Article, config: &CorpusConfig) -> ArticleStatus {
    let mentions = |role: KeywordRole| {
        config
            .keywords_with(role)
            .any(|k| article.fields().any(|(_, text)| k.matches(text)))
    };
    if mentions(KeywordRole::Primary) {
        ArticleStatus::MentionsAi
    } else if mentions(KeywordRole::Secondary) {
        ArticleStatus::ChatgptOnly
    } else {
        ArticleStatus::NoExplicitMention
    }
}

/// Partitions the articles that survived the language and duplicate stages.
pub fn keyword_partition(snapshot: &CorpusSnapshot) -> Partition {
    let mut out = Partition::default();
    for article in &snapshot.articles {
        if matches!(article.status, ArticleStatus::NonEnglish | ArticleStatus::Duplicate) {
            continue;
        }
        let id = article.id().to_string();
        match classify(article, &snapshot.config) {
            ArticleStatus::MentionsAi => out.mentions_ai.push(id),
            ArticleStatus::ChatgptOnly => out.chatgpt_only.push(id),
            _ => out.removed.push(id),
        }
    }
    out
}

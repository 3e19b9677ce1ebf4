use serde::{Deserialize, Serialize};

use super::format::{fmt_p, fmt_pct};
use super::{ReportBundle, ReportInputs};
use crate::stats::Comparison;

/// Headline numbers, each already formatted. The same strings go to
/// `headline.csv` and the summary document.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Headline {
    pub alpha: String,
    pub rows: Vec<(String, String)>,
}

fn count_significant<K>(rows: &[Comparison<K>], alpha: f64) -> String {
    let sig = rows.iter().filter(|r| r.table.is_significant(alpha)).count();
    format!("{sig}/{}", rows.len())
}

impl Headline {
    pub fn from_inputs(inputs: &ReportInputs) -> Self {
        let alpha = inputs.alpha;
        let mut rows: Vec<(String, String)> = Vec::new();
        let mut push = |k: &str, v: String| rows.push((k.to_string(), v));

        if let Some(log) = &inputs.cleaning {
            push("ingested_articles", log.ingested.to_string());
            push("removed_non_english", log.removed.non_english.to_string());
            push("removed_duplicate", log.removed.duplicate.to_string());
            push("removed_no_explicit_mention", log.removed.no_explicit_mention.to_string());
            push("retained_mentions_ai", log.retained.mentions_ai.to_string());
            push("retained_chatgpt_only", log.retained.mentions_chatgpt_only.to_string());
        }
        if let Some(d) = &inputs.descriptive {
            push("articles.before", d.articles[0].to_string());
            push("articles.after", d.articles[1].to_string());
            push("monthly_average.before", format!("{:.1}", d.monthly_average[0]));
            push("monthly_average.after", format!("{:.1}", d.monthly_average[1]));
            push("mean_mentions.before", format!("{:.2}", d.mentions.means[0]));
            push("mean_mentions.after", format!("{:.2}", d.mentions.means[1]));
            push(
                "mean_mentions.mann_whitney_p",
                d.mentions.mann_whitney.map_or_else(|| "n/a".into(), |t| fmt_p(t.p_value)),
            );
            push(
                "mean_mentions.welch_p",
                d.mentions.welch.map_or_else(|| "n/a".into(), |t| fmt_p(t.p_value)),
            );
            push("agi_share.before", fmt_pct(d.agi_share[0]));
            push("agi_share.after", fmt_pct(d.agi_share[1]));
        }
        if let Some(f) = &inputs.frames {
            push("significant_frames", count_significant(f, alpha));
        }
        if let Some(p) = &inputs.pairs {
            push("significant_pairs", count_significant(p, alpha));
        }
        if let Some(d) = &inputs.danger {
            push("danger_share.before", fmt_pct(d.shares[0]));
            push("danger_share.after", fmt_pct(d.shares[1]));
            push("danger_share.p", fmt_p(d.table.p_value));
            push("significant_danger_frames", count_significant(&d.rows, alpha));
        }
        if let Some(a) = &inputs.anthropomorphism {
            push("anthropomorphism_share.before", fmt_pct(a.shares[0]));
            push("anthropomorphism_share.after", fmt_pct(a.shares[1]));
            let comps = a.comparisons(crate::stats::Correction::Yates);
            push("significant_anthropomorphism_pairs", count_significant(&comps, alpha));
        }
        for c in &inputs.coding {
            if let Some(ag) = &c.agreement {
                push(&format!("agreement.{}.p_o", c.schema), format!("{:.3}", ag.p_o));
                push(
                    &format!("agreement.{}.kappa", c.schema),
                    ag.kappa.map_or_else(|| "n/a".into(), |k| format!("{k:.3}")),
                );
            }
        }
        Self {
            alpha: format!("{alpha}"),
            rows,
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.rows.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// Markdown summary of a bundle's headline numbers with links to its CSVs.
pub fn emit_summary(bundle: &ReportBundle) -> String {
    let h = &bundle.headline;
    let a = &h.alpha;
    let v = |k: &str| h.get(k).unwrap_or("n/a").to_string();
    let mut out = String::from("# Narrative shift report\n");

    out.push_str("\n## Corpus\n\n");
    if h.get("ingested_articles").is_some() {
        out.push_str(&format!(
            "- ingested {}; removed {} non-English, {} duplicates, {} without an explicit mention\n",
            v("ingested_articles"),
            v("removed_non_english"),
            v("removed_duplicate"),
            v("removed_no_explicit_mention"),
        ));
        out.push_str(&format!(
            "- retained {} mentioning AI and {} mentioning only ChatGPT\n",
            v("retained_mentions_ai"),
            v("retained_chatgpt_only"),
        ));
    }
    out.push_str(&format!("- articles: {} → {}\n", v("articles.before"), v("articles.after")));
    out.push_str(&format!(
        "- monthly average: {} → {}\n",
        v("monthly_average.before"),
        v("monthly_average.after")
    ));
    out.push_str(&format!(
        "- mean AI mentions per article: {} → {} (Mann–Whitney p = {}, Welch p = {})\n",
        v("mean_mentions.before"),
        v("mean_mentions.after"),
        v("mean_mentions.mann_whitney_p"),
        v("mean_mentions.welch_p"),
    ));
    out.push_str(&format!("- AGI article share: {} → {}\n", v("agi_share.before"), v("agi_share.after")));

    out.push_str("\n## Frames\n\n");
    out.push_str(&format!("- significant frames at α={a}: {}\n", v("significant_frames")));
    out.push_str(&format!("- significant frame–element pairs at α={a}: {}\n", v("significant_pairs")));

    out.push_str("\n## Danger\n\n");
    out.push_str(&format!(
        "- danger frame share: {} → {} (p = {})\n",
        v("danger_share.before"),
        v("danger_share.after"),
        v("danger_share.p"),
    ));
    out.push_str(&format!("- significant danger frames at α={a}: {}\n", v("significant_danger_frames")));

    out.push_str("\n## Anthropomorphism\n\n");
    out.push_str(&format!(
        "- sentences with an anthropomorphising pair: {} → {}\n",
        v("anthropomorphism_share.before"),
        v("anthropomorphism_share.after"),
    ));
    out.push_str(&format!(
        "- significant pairs at α={a}: {}\n",
        v("significant_anthropomorphism_pairs")
    ));

    let agreements: Vec<&(String, String)> = h.rows.iter().filter(|(k, _)| k.starts_with("agreement.")).collect();
    if !agreements.is_empty() {
        out.push_str("\n## Coding agreement\n\n");
        for (k, val) in agreements {
            out.push_str(&format!("- {}: {val}\n", &k["agreement.".len()..]));
        }
    }

    out.push_str("\n## Files\n\n");
    for f in &bundle.files {
        if f.name.ends_with(".csv") {
            out.push_str(&format!("- [{0}]({0})\n", f.name));
        }
    }
    for o in &bundle.omitted {
        out.push_str(&format!("- {} omitted: {}\n", o.name, o.reason));
    }
    out
}

use std::fs;
use std::path::{Path, PathBuf};

use chrono::Utc;
use serde::{Deserialize, Serialize};

use super::format::{fmt_p, fmt_ratio, fmt_share, fmt_stat};
use super::summary::{emit_summary, Headline};
use super::{ReportInputs, RunMetadata};
use crate::stats::{Comparison, Contingency2x2, PairKey};
use crate::{io, Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const METADATA_FILE: &str = "metadata.json";
pub const SUMMARY_FILE: &str = "summary.md";
const HEADLINE_FILE: &str = "headline.csv";
const CODING_FILE: &str = "coding_breakdowns.csv";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    pub name: String,
    pub kind: String,
    /// Data rows, excluding the header. Absent for non-CSV files.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Omission {
    pub name: String,
    pub reason: String,
}

/// What a report run wrote.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    #[serde(skip)]
    pub dir: PathBuf,
    pub files: Vec<FileEntry>,
    pub omitted: Vec<Omission>,
    pub headline: Headline,
}

#[derive(Serialize)]
struct Metadata<'a> {
    generator: &'static str,
    version: &'static str,
    generated_at: String,
    alpha: f64,
    #[serde(flatten)]
    run: &'a RunMetadata,
}

struct Csv {
    name: &'static str,
    kind: &'static str,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    fn new(name: &'static str, kind: &'static str, header: &[&'static str]) -> Self {
        Self {
            name,
            kind,
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn bytes(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.into_inner()
            .map_err(|e| Error::Invalid(format!("CSV buffer: {e}")))
    }
}

fn share_cells(t: &Contingency2x2) -> [String; 5] {
    [
        t.a.to_string(),
        t.c.to_string(),
        fmt_share(t.share_before),
        fmt_share(t.share_after),
        fmt_ratio(t.share_ratio),
    ]
}

fn test_cells(t: &Contingency2x2, alpha: f64) -> [String; 7] {
    [
        t.a.to_string(),
        t.c.to_string(),
        t.total_before().to_string(),
        t.total_after().to_string(),
        fmt_stat(t.statistic),
        fmt_p(t.p_value),
        t.is_significant(alpha).to_string(),
    ]
}

const SHARE_COLS: [&str; 5] = ["count_before", "count_after", "share_before", "share_after", "ratio"];
const TEST_COLS: [&str; 7] = ["before", "after", "total_before", "total_after", "chi2", "p_value", "significant"];

fn header(keys: &[&'static str], rest: &[&'static str]) -> Vec<&'static str> {
    keys.iter().chain(rest).copied().collect()
}

fn frame_figure(name: &'static str, rows: &[Comparison<String>]) -> Csv {
    let mut c = Csv::new(name, "figure", &header(&["frame"], &SHARE_COLS));
    for r in rows {
        c.rows.push(std::iter::once(r.key.clone()).chain(share_cells(&r.table)).collect());
    }
    c
}

fn frame_table(name: &'static str, rows: &[Comparison<String>], alpha: f64) -> Csv {
    let mut sorted: Vec<&Comparison<String>> = rows.iter().collect();
    sorted.sort_by(|a, b| a.key.cmp(&b.key));
    let mut c = Csv::new(name, "table", &header(&["frame"], &TEST_COLS));
    for r in sorted {
        c.rows.push(std::iter::once(r.key.clone()).chain(test_cells(&r.table, alpha)).collect());
    }
    c
}

fn pair_figure(name: &'static str, rows: &[Comparison<PairKey>]) -> Csv {
    let mut c = Csv::new(name, "figure", &header(&["frame", "role"], &SHARE_COLS));
    for r in rows {
        c.rows.push(
            [r.key.frame.clone(), r.key.role.clone()]
                .into_iter()
                .chain(share_cells(&r.table))
                .collect(),
        );
    }
    c
}

fn pair_table(name: &'static str, rows: &[Comparison<PairKey>], alpha: f64) -> Csv {
    let mut sorted: Vec<&Comparison<PairKey>> = rows.iter().collect();
    sorted.sort_by(|a, b| a.key.cmp(&b.key));
    let mut c = Csv::new(name, "table", &header(&["frame", "role"], &TEST_COLS));
    for r in sorted {
        c.rows.push(
            [r.key.frame.clone(), r.key.role.clone()]
                .into_iter()
                .chain(test_cells(&r.table, alpha))
                .collect(),
        );
    }
    c
}

fn build(inputs: &ReportInputs) -> Result<(Vec<Csv>, Vec<Omission>)> {
    let missing = inputs.missing();
    if !missing.is_empty() {
        return Err(Error::MissingInput(missing.join(", ")));
    }
    let alpha = inputs.alpha;
    let d = inputs.descriptive.as_ref().expect("checked");
    let frames = inputs.frames.as_ref().expect("checked");
    let pairs = inputs.pairs.as_ref().expect("checked");
    let danger = inputs.danger.as_ref().expect("checked");
    let anthro = inputs.anthropomorphism.as_ref().expect("checked");
    let mut out = Vec::new();

    let mut c = Csv::new("fig2a_monthly.csv", "figure", &["month", "before", "after", "total"]);
    for b in &d.monthly {
        c.rows.push(vec![b.month.clone(), b.before.to_string(), b.after.to_string(), b.total().to_string()]);
    }
    out.push(c);

    let mut c = Csv::new(
        "fig2b_publishers.csv",
        "figure",
        &[
            "source_id",
            "articles_before",
            "articles_after",
            "chatgpt_before",
            "chatgpt_after",
            "chatgpt_share_before",
            "chatgpt_share_after",
        ],
    );
    for p in &d.publishers {
        c.rows.push(vec![
            p.source_id.clone(),
            p.articles[0].to_string(),
            p.articles[1].to_string(),
            p.chatgpt[0].to_string(),
            p.chatgpt[1].to_string(),
            fmt_share(p.chatgpt_share[0]),
            fmt_share(p.chatgpt_share[1]),
        ]);
    }
    out.push(c);

    out.push(frame_figure("fig3_frames.csv", frames));
    out.push(pair_figure("fig4_pairs.csv", pairs));

    let mut c = frame_figure("fig5_danger.csv", &danger.rows);
    c.rows.insert(
        0,
        std::iter::once("(all)".to_string()).chain(share_cells(&danger.table)).collect(),
    );
    out.push(c);

    let correction = danger.table.correction;
    let anthro_rows = anthro.comparisons(correction);
    let mut c = Csv::new(
        "fig6_anthropomorphism.csv",
        "figure",
        &["frame", "role", "sentences_before", "sentences_after", "share_before", "share_after", "ratio"],
    );
    let share = |n: u64, p: usize| if anthro.sentences[p] == 0 { 0.0 } else { n as f64 / anthro.sentences[p] as f64 };
    let ratio = |c: [u64; 2]| (c[0] > 0 && anthro.sentences[1] > 0).then(|| share(c[1], 1) / share(c[0], 0));
    c.rows.push(vec![
        "(any)".into(),
        String::new(),
        anthro.distinct[0].to_string(),
        anthro.distinct[1].to_string(),
        fmt_share(anthro.shares[0]),
        fmt_share(anthro.shares[1]),
        fmt_ratio(ratio(anthro.distinct)),
    ]);
    for (m, counts) in &anthro.per_member {
        let (frame, role) = match m {
            crate::stats::Member::Frame(f) => (f.clone(), String::new()),
            crate::stats::Member::Pair(p) => (p.frame.clone(), p.role.clone()),
        };
        c.rows.push(vec![
            frame,
            role,
            counts[0].to_string(),
            counts[1].to_string(),
            fmt_share(share(counts[0], 0)),
            fmt_share(share(counts[1], 1)),
            fmt_ratio(ratio(*counts)),
        ]);
    }
    out.push(c);

    out.push(frame_table("table1.csv", frames, alpha));
    out.push(pair_table("table2.csv", pairs, alpha));
    out.push(frame_table("table3.csv", &danger.rows, alpha));
    let pair_rows: Vec<Comparison<PairKey>> = anthro_rows
        .into_iter()
        .filter_map(|r| match r.key {
            crate::stats::Member::Pair(p) => Some(Comparison { key: p, table: r.table }),
            crate::stats::Member::Frame(f) => Some(Comparison {
                key: PairKey::new(&f, ""),
                table: r.table,
            }),
        })
        .collect();
    out.push(pair_table("table4.csv", &pair_rows, alpha));

    let mut omitted = Vec::new();
    let labeled: Vec<_> = inputs
        .coding
        .iter()
        .flat_map(|s| s.breakdowns.iter().map(move |b| (s, b)))
        .filter(|(_, b)| b.labeled[0] + b.labeled[1] > 0)
        .collect();
    if labeled.is_empty() {
        omitted.push(Omission {
            name: CODING_FILE.into(),
            reason: "no labeled coding sessions".into(),
        });
    } else {
        let mut c = Csv::new(
            CODING_FILE,
            "table",
            &["schema", "session_id", "annotator_id", "level1", "level2", "before", "after"],
        );
        for (s, b) in labeled {
            for r in &b.rows {
                c.rows.push(vec![
                    s.schema.clone(),
                    b.session_id.clone(),
                    b.annotator_id.clone(),
                    r.level1.clone(),
                    r.level2.clone().unwrap_or_default(),
                    r.counts[0].to_string(),
                    r.counts[1].to_string(),
                ]);
            }
        }
        out.push(c);
    }
    Ok((out, omitted))
}

/// Writes every CSV, `headline.csv`, the summary, run metadata and a
/// manifest into `dir`. CSV bytes depend only on the inputs; the generation
/// time is confined to the metadata file.
pub fn emit_tables(inputs: &ReportInputs, dir: &Path) -> Result<ReportBundle> {
    let (mut csvs, omitted) = build(inputs)?;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let headline = Headline::from_inputs(inputs);
    let mut h = Csv::new(HEADLINE_FILE, "headline", &["metric", "value"]);
    h.rows = headline.rows.iter().map(|(k, v)| vec![k.clone(), v.clone()]).collect();
    csvs.push(h);

    let mut files = Vec::new();
    for c in &csvs {
        io::atomic_write(&dir.join(c.name), &c.bytes()?)?;
        files.push(FileEntry {
            name: c.name.to_string(),
            kind: c.kind.to_string(),
            rows: Some(c.rows.len()),
        });
    }
    for o in &omitted {
        let stale = dir.join(&o.name);
        if stale.exists() {
            fs::remove_file(&stale).map_err(|e| Error::io(&stale, e))?;
        }
    }

    let meta = Metadata {
        generator: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        generated_at: Utc::now().to_rfc3339(),
        alpha: inputs.alpha,
        run: &inputs.metadata,
    };
    io::write_json(&dir.join(METADATA_FILE), &meta)?;
    files.push(FileEntry {
        name: METADATA_FILE.into(),
        kind: "metadata".into(),
        rows: None,
    });
    files.push(FileEntry {
        name: SUMMARY_FILE.into(),
        kind: "summary".into(),
        rows: None,
    });

    let bundle = ReportBundle {
        dir: dir.to_path_buf(),
        files,
        omitted,
        headline,
    };
    io::atomic_write(&dir.join(SUMMARY_FILE), emit_summary(&bundle).as_bytes())?;
    io::write_json(&dir.join(MANIFEST_FILE), &bundle)?;
    Ok(bundle)
}

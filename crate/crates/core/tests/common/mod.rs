#![allow(dead_code)]

use std::path::{Path, PathBuf};

use frameshift_core::config::RunConfig;
use frameshift_core::pipeline::{Pipeline, ANALYSIS_FILE};
use frameshift_core::report::ReportInputs;
use serde_json::Value;

pub fn demo_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../demo")
}

pub fn golden() -> Value {
    let text = std::fs::read_to_string(demo_dir().join("expected/golden.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

pub fn demo_pipeline(out: &Path) -> Pipeline {
    let config = RunConfig::load(&demo_dir().join("config.json")).unwrap();
    Pipeline::new(config, Some(demo_dir().join("articles.jsonl")), out)
}

pub fn analysis(out: &Path) -> ReportInputs {
    let text = std::fs::read_to_string(out.join("stats").join(ANALYSIS_FILE)).unwrap();
    serde_json::from_str(&text).unwrap()
}

pub fn pair(v: &Value) -> [u64; 2] {
    [v[0].as_u64().unwrap(), v[1].as_u64().unwrap()]
}

/// Every golden count that differs from the analysis, as readable lines.
pub fn golden_mismatches(inputs: &ReportInputs, golden: &Value) -> Vec<String> {
    let mut bad = Vec::new();
    let mut check = |what: String, got: String, want: String| {
        if got != want {
            bad.push(format!("{what}: got {got}, want {want}"));
        }
    };

    let log = inputs.cleaning.as_ref().expect("cleaning log");
    let g = &golden["cleaning"];
    for (name, got) in [
        ("ingested", log.ingested),
        ("non_english", log.removed.non_english),
        ("duplicate", log.removed.duplicate),
        ("no_explicit_mention", log.removed.no_explicit_mention),
        ("mentions_ai", log.retained.mentions_ai),
        ("mentions_chatgpt_only", log.retained.mentions_chatgpt_only),
    ] {
        check(format!("cleaning.{name}"), got.to_string(), g[name].to_string());
    }

    let d = inputs.descriptive.as_ref().expect("descriptive");
    check("articles".into(), format!("{:?}", d.articles), format!("{:?}", pair(&golden["articles"])));
    check("agi".into(), format!("{:?}", d.agi_articles), format!("{:?}", pair(&golden["agi_articles"])));
    let means: Vec<String> = d.mentions.means.iter().map(|m| format!("{m:.2}")).collect();
    let want: Vec<String> = golden["mean_mentions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| format!("{:.2}", m.as_f64().unwrap()))
        .collect();
    check("mean_mentions".into(), means.join(","), want.join(","));
    let avg: Vec<String> = d.monthly_average.iter().map(|m| format!("{m:.1}")).collect();
    let want: Vec<String> = golden["monthly_average"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| format!("{:.1}", m.as_f64().unwrap()))
        .collect();
    check("monthly_average".into(), avg.join(","), want.join(","));
    let months: Vec<String> = d.monthly.iter().map(|m| format!("{} {} {}", m.month, m.before, m.after)).collect();
    let want: Vec<String> = golden["monthly"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| format!("{} {} {}", m[0].as_str().unwrap(), m[1], m[2]))
        .collect();
    check("monthly".into(), months.join("; "), want.join("; "));
    let pubs: Vec<String> = {
        let mut v: Vec<_> = d
            .publishers
            .iter()
            .map(|p| format!("{} {:?} {:?}", p.source_id, p.articles, p.chatgpt))
            .collect();
        v.sort();
        v
    };
    let want: Vec<String> = golden["publishers"]
        .as_object()
        .unwrap()
        .iter()
        .map(|(k, v)| format!("{k} [{}, {}] [{}, {}]", v[0], v[1], v[2], v[3]))
        .collect();
    check("publishers".into(), pubs.join("; "), want.join("; "));

    let frames = inputs.frames.as_ref().expect("frames");
    let mut got: Vec<String> = frames
        .iter()
        .map(|r| format!("{} [{}, {}]", r.key, r.table.a, r.table.c))
        .collect();
    got.sort();
    let want: Vec<String> = golden["frames"]
        .as_object()
        .unwrap()
        .iter()
        .map(|(k, v)| format!("{k} [{}, {}]", v[0], v[1]))
        .collect();
    check("frames".into(), got.join("; "), want.join("; "));
    if let Some(r) = frames.first() {
        check(
            "frame_totals".into(),
            format!("{:?}", [r.table.total_before(), r.table.total_after()]),
            format!("{:?}", pair(&golden["frame_totals"])),
        );
    }

    let pairs = inputs.pairs.as_ref().expect("pairs");
    let mut got: Vec<String> = pairs
        .iter()
        .map(|r| format!("{}|{} [{}, {}]", r.key.frame, r.key.role, r.table.a, r.table.c))
        .collect();
    got.sort();
    let want: Vec<String> = golden["pairs"]
        .as_object()
        .unwrap()
        .iter()
        .map(|(k, v)| format!("{k} [{}, {}]", v[0], v[1]))
        .collect();
    check("pairs".into(), got.join("; "), want.join("; "));

    let danger = inputs.danger.as_ref().expect("danger");
    check("danger".into(), format!("{:?}", danger.counts), format!("{:?}", pair(&golden["danger"])));

    let anthro = inputs.anthropomorphism.as_ref().expect("anthropomorphism");
    check(
        "target_sentences".into(),
        format!("{:?}", anthro.sentences),
        format!("{:?}", pair(&golden["target_sentences"])),
    );
    check(
        "anthropomorphism_distinct".into(),
        format!("{:?}", anthro.distinct),
        format!("{:?}", pair(&golden["anthropomorphism_distinct"])),
    );
    for (member, counts) in &anthro.per_member {
        let key = member.to_string();
        let key = key.trim_matches(|c| c == '(' || c == ')').replace(", ", "|");
        let want = &golden["anthropomorphism_pairs"][&key];
        let want = if want.is_null() { [0, 0] } else { pair(want) };
        check(format!("anthropomorphism.{key}"), format!("{counts:?}"), format!("{want:?}"));
    }
    bad
}

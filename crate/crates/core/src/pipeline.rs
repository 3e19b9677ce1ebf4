//! Resumable on-disk pipeline: ingest → clean → sentences → annotate →
//! stats → report.
//!
//! Each stage reads the previous stages' files and writes its own under the
//! run directory:
//!
//! ```text
//! <out>/ingest/      raw snapshot (articles.jsonl, config.json, ingest_rejections.jsonl)
//! <out>/corpus/      cleaned snapshot, sentences.jsonl, annotations.jsonl
//! <out>/stats/       analysis.json
//! <out>/coding/      samples/, sessions/, schemas/
//! <out>/report/      CSVs, summary.md, manifest.json, metadata.json
//! <out>/stages.json  input and output digests per stage
//! ```
//!
//! A stage whose input digest and output files match its record is skipped
//! as up to date, so a rerun never rewrites a finished stage.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::annotation::{
    export_annotations, import_annotations, lexicon_annotate, AnnotationStore, FrameInventory, ImportRejection,
    TriggerLexicon,
};
use crate::coding::{agreement, confusion, subgroup_breakdown, SessionStore};
use crate::config::{hex, RunConfig};
use crate::corpus::{
    clean, extract_target_sentences, ingest_jsonl, CorpusSnapshot, SentenceRecord, ARTICLES_FILE,
    CLEANING_LOG_FILE, CONFIG_FILE, REJECTIONS_FILE, SENTENCES_FILE,
};
use crate::report::{emit_tables, CodingSummary, ReportInputs};
use crate::{io, Error, Result};

pub const ANNOTATIONS_FILE: &str = "annotations.jsonl";
pub const ANNOTATION_REJECTIONS_FILE: &str = "annotation_rejections.jsonl";
pub const ANALYSIS_FILE: &str = "analysis.json";
pub const STAGES_FILE: &str = "stages.json";

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CODING: i32 = 7;
pub const EXIT_SERVE: i32 = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Ingest,
    Clean,
    Sentences,
    Annotate,
    Stats,
    Report,
}

impl Stage {
    pub const ALL: [Stage; 6] = [
        Stage::Ingest,
        Stage::Clean,
        Stage::Sentences,
        Stage::Annotate,
        Stage::Stats,
        Stage::Report,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Clean => "clean",
            Stage::Sentences => "sentences",
            Stage::Annotate => "annotate",
            Stage::Stats => "stats",
            Stage::Report => "report",
        }
    }

    /// Process exit code when this stage fails. Sentence extraction shares
    /// the cleaning code.
    pub fn exit_code(self) -> i32 {
        match self {
            Stage::Ingest => 3,
            Stage::Clean | Stage::Sentences => 4,
            Stage::Annotate => 5,
            Stage::Stats => 6,
            Stage::Report => 8,
        }
    }
}

/// Where a run keeps its files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub root: PathBuf,
}

impl Layout {
    pub fn new(root: &Path) -> Self {
        Self {
            root: root.to_path_buf(),
        }
    }

    pub fn ingest_dir(&self) -> PathBuf {
        self.root.join("ingest")
    }

    pub fn corpus_dir(&self) -> PathBuf {
        self.root.join("corpus")
    }

    pub fn stats_dir(&self) -> PathBuf {
        self.root.join("stats")
    }

    pub fn coding_dir(&self) -> PathBuf {
        self.root.join("coding")
    }

    pub fn report_dir(&self) -> PathBuf {
        self.root.join("report")
    }

    pub fn stages_file(&self) -> PathBuf {
        self.root.join(STAGES_FILE)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub input_digest: String,
    /// Output path relative to the run root → SHA-256 of its bytes.
    pub outputs: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageStatus {
    Ran,
    UpToDate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageOutcome {
    pub stage: Stage,
    pub status: StageStatus,
    pub detail: String,
}

#[derive(Debug)]
pub struct StageFailure {
    pub stage: Stage,
    pub error: Error,
}

impl std::fmt::Display for StageFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} failed: {}", self.stage.name(), self.error)
    }
}

impl std::error::Error for StageFailure {}

fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex(&Sha256::digest(&bytes)))
}

/// Digest over labelled parts: file contents (or "<absent>") and strings.
struct InputDigest(Sha256);

impl InputDigest {
    fn new(stage: Stage) -> Self {
        let mut h = Sha256::new();
        h.update(stage.name().as_bytes());
        Self(h)
    }

    fn text(&mut self, label: &str, value: &str) {
        self.0.update(format!("\n{label}={}:", value.len()).as_bytes());
        self.0.update(value.as_bytes());
    }

    fn file(&mut self, label: &str, path: &Path) -> Result<()> {
        if path.exists() {
            let d = sha256_file(path)?;
            self.text(label, &d);
        } else {
            self.text(label, "<absent>");
        }
        Ok(())
    }

    fn dir(&mut self, label: &str, dir: &Path) -> Result<()> {
        let mut files = Vec::new();
        collect_files(dir, &mut files)?;
        files.sort();
        for f in files {
            let rel = f.strip_prefix(dir).unwrap_or(&f).to_string_lossy().to_string();
            self.file(&format!("{label}/{rel}"), &f)?;
        }
        Ok(())
    }

    fn finish(self) -> String {
        hex(&self.0.finalize())
    }
}

fn collect_files(dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    if !dir.is_dir() {
        return Ok(());
    }
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let hidden = path.file_name().is_some_and(|n| n.to_string_lossy().starts_with('.'));
        if hidden {
            continue;
        }
        if path.is_dir() {
            collect_files(&path, out)?;
        } else {
            out.push(path);
        }
    }
    Ok(())
}

/// Reads a raw article stream into a snapshot.
pub fn ingest_file(input: &Path, config: &RunConfig) -> Result<CorpusSnapshot> {
    let f = File::open(input).map_err(|e| Error::io(input, e))?;
    ingest_jsonl(BufReader::new(f), &config.corpus)
}

/// Runs the lexicon over every sentence, in parallel, into a store.
pub fn annotate_with_lexicon(sentences: &[SentenceRecord], lexicon: &TriggerLexicon) -> Result<AnnotationStore> {
    let anns: Vec<_> = sentences.par_iter().map(|s| lexicon_annotate(s, lexicon)).collect();
    let mut builder = AnnotationStore::builder(sentences);
    for a in anns {
        builder.attach(a, None)?;
    }
    Ok(builder.build())
}

pub fn load_sentences(corpus_dir: &Path) -> Result<Vec<SentenceRecord>> {
    let path = corpus_dir.join(SENTENCES_FILE);
    if !path.exists() {
        return Err(Error::MissingInput(format!(
            "{} (run the sentences stage first)",
            path.display()
        )));
    }
    io::read_jsonl(&path)
}

/// Imports an interchange file against the sentence index.
pub fn import_file(
    path: &Path,
    sentences: &[SentenceRecord],
    inventory: Option<&FrameInventory>,
) -> Result<(AnnotationStore, Vec<ImportRejection>)> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    let (store, report) = import_annotations(BufReader::new(f), sentences, inventory)?;
    Ok((store, report.rejections))
}

/// The annotated store of a corpus directory.
pub fn load_store(corpus_dir: &Path) -> Result<AnnotationStore> {
    let sentences = load_sentences(corpus_dir)?;
    let path = corpus_dir.join(ANNOTATIONS_FILE);
    if !path.exists() {
        return Err(Error::MissingInput(format!(
            "{} (run the annotate stage first)",
            path.display()
        )));
    }
    let (store, rejections) = import_file(&path, &sentences, None)?;
    if let Some(r) = rejections.first() {
        return Err(Error::Invalid(format!(
            "{}: line {} rejected: {}",
            path.display(),
            r.line,
            r.reason
        )));
    }
    Ok(store)
}

/// Writes a store in interchange form.
pub fn save_store(store: &AnnotationStore, corpus_dir: &Path) -> Result<()> {
    let mut buf = Vec::new();
    export_annotations(store, &mut buf).map_err(|e| Error::io(corpus_dir.join(ANNOTATIONS_FILE), e))?;
    io::atomic_write(&corpus_dir.join(ANNOTATIONS_FILE), &buf)
}

/// The session store under `coding_dir`, honouring the configured schema
/// override directory.
pub fn open_sessions(coding_dir: &Path, config: &RunConfig) -> Result<SessionStore> {
    let store = SessionStore::open(coding_dir)?;
    Ok(match &config.schemas_dir {
        Some(dir) => store.with_schema_dir(dir),
        None => store,
    })
}

/// Breakdowns for every session, grouped by (schema, sample); agreement
/// between the first two sessions of each group by id.
pub fn coding_summaries(store: &SessionStore) -> Result<Vec<CodingSummary>> {
    let mut groups: BTreeMap<(String, String), Vec<_>> = BTreeMap::new();
    for s in store.list()? {
        groups.entry((s.schema.clone(), s.sample_id.clone())).or_default().push(s);
    }
    let mut out = Vec::new();
    for ((schema_name, sample_id), sessions) in groups {
        let schema = store.schema(&schema_name)?;
        let sample = store.load_sample(&sample_id)?;
        let breakdowns = sessions.iter().map(|s| subgroup_breakdown(s, &sample, &schema)).collect();
        let agreement = match sessions.as_slice() {
            [a, b, ..] => match agreement(&confusion(a, b, &schema)?) {
                Ok(r) => Some(r),
                Err(Error::NoJointLabels) => None,
                Err(e) => return Err(e),
            },
            _ => None,
        };
        out.push(CodingSummary {
            schema: schema_name,
            sample_id,
            breakdowns,
            agreement,
        });
    }
    Ok(out)
}

pub struct Pipeline {
    pub config: RunConfig,
    pub input: Option<PathBuf>,
    pub layout: Layout,
    /// Rerun every stage even when up to date.
    pub force: bool,
}

impl Pipeline {
    pub fn new(config: RunConfig, input: Option<PathBuf>, out: &Path) -> Self {
        Self {
            config,
            input,
            layout: Layout::new(out),
            force: false,
        }
    }

    fn records(&self) -> Result<BTreeMap<Stage, StageRecord>> {
        let path = self.layout.stages_file();
        if path.exists() {
            io::read_json(&path)
        } else {
            Ok(BTreeMap::new())
        }
    }

    fn input_digest(&self, stage: Stage) -> Result<String> {
        let l = &self.layout;
        let cfg = &self.config;
        let mut d = InputDigest::new(stage);
        match stage {
            Stage::Ingest => {
                let input = self
                    .input
                    .as_ref()
                    .ok_or_else(|| Error::MissingInput("an input article file".into()))?;
                if !input.exists() {
                    return Err(Error::MissingInput(format!("input file {}", input.display())));
                }
                d.file("input", input)?;
                d.text("corpus", &String::from_utf8_lossy(&io::to_json_pretty(&cfg.corpus)?));
            }
            Stage::Clean => d.dir("ingest", &l.ingest_dir())?,
            Stage::Sentences => {
                d.file("articles", &l.corpus_dir().join(ARTICLES_FILE))?;
                d.file("config", &l.corpus_dir().join(CONFIG_FILE))?;
            }
            Stage::Annotate => {
                d.file("sentences", &l.corpus_dir().join(SENTENCES_FILE))?;
                match (&cfg.annotations, &cfg.lexicon) {
                    (Some(a), _) => d.file("import", a)?,
                    (None, Some(lex)) => d.file("lexicon", lex)?,
                    (None, None) => {}
                }
                d.text("strict", &cfg.strict_frames.to_string());
            }
            Stage::Stats => {
                for f in [ARTICLES_FILE, CONFIG_FILE, CLEANING_LOG_FILE, SENTENCES_FILE, ANNOTATIONS_FILE] {
                    d.file(f, &l.corpus_dir().join(f))?;
                }
                d.text("danger", &serde_json::to_string(&cfg.danger()?).unwrap_or_default());
                d.text(
                    "anthropomorphism",
                    &serde_json::to_string(&cfg.anthropomorphism()?).unwrap_or_default(),
                );
                d.text(
                    "options",
                    &serde_json::to_string(&cfg.analysis_options()).unwrap_or_default(),
                );
            }
            Stage::Report => {
                d.file("analysis", &l.stats_dir().join(ANALYSIS_FILE))?;
                d.dir("coding", &l.coding_dir())?;
                if let Some(dir) = &cfg.schemas_dir {
                    d.dir("schemas", dir)?;
                }
                d.text("config", &cfg.digest());
            }
        }
        Ok(d.finish())
    }

    fn is_current(&self, rec: &StageRecord, digest: &str) -> Result<bool> {
        if rec.input_digest != digest || rec.outputs.is_empty() {
            return Ok(false);
        }
        for (rel, want) in &rec.outputs {
            let p = self.layout.root.join(rel);
            if !p.exists() || &sha256_file(&p)? != want {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn execute(&self, stage: Stage) -> Result<(Vec<PathBuf>, String)> {
        let l = &self.layout;
        let cfg = &self.config;
        match stage {
            Stage::Ingest => {
                let input = self.input.as_ref().expect("checked by digest");
                let snap = ingest_file(input, cfg)?;
                let dir = l.ingest_dir();
                snap.save(&dir)?;
                let detail = format!(
                    "{} articles, {} rejected lines",
                    snap.articles.len(),
                    snap.rejections.len()
                );
                Ok((snapshot_files(&dir, false), detail))
            }
            Stage::Clean => {
                let snap = CorpusSnapshot::load(&l.ingest_dir())?;
                let cleaned = clean(&snap);
                let dir = l.corpus_dir();
                cleaned.save(&dir)?;
                let log = cleaned.log.clone().unwrap_or_default();
                let detail = format!(
                    "{} retained ({} AI, {} ChatGPT only), {} removed",
                    log.retained_total(),
                    log.retained.mentions_ai,
                    log.retained.mentions_chatgpt_only,
                    log.removed_total()
                );
                Ok((snapshot_files(&dir, true), detail))
            }
            Stage::Sentences => {
                let dir = l.corpus_dir();
                let snap = CorpusSnapshot::load(&dir)?;
                let sentences = extract_target_sentences(&snap);
                let path = dir.join(SENTENCES_FILE);
                io::write_jsonl(&path, &sentences)?;
                Ok((vec![path], format!("{} target sentences", sentences.len())))
            }
            Stage::Annotate => {
                let dir = l.corpus_dir();
                let sentences = load_sentences(&dir)?;
                let inventory = cfg.strict_frames.then(FrameInventory::builtin);
                let (store, rejections) = match (&cfg.annotations, &cfg.lexicon) {
                    (Some(path), _) => import_file(path, &sentences, inventory.as_ref())?,
                    (None, Some(lex)) => {
                        let lexicon = TriggerLexicon::load(lex)?;
                        (annotate_with_lexicon(&sentences, &lexicon)?, Vec::new())
                    }
                    (None, None) => {
                        return Err(Error::MissingInput(
                            "no lexicon configured and no annotation file to import".into(),
                        ))
                    }
                };
                save_store(&store, &dir)?;
                let rej = dir.join(ANNOTATION_REJECTIONS_FILE);
                io::write_jsonl(&rej, &rejections)?;
                let occurrences: u64 = store.totals().annotations.iter().sum();
                let detail = format!(
                    "{} frame occurrences over {} sentences, {} rejected lines",
                    occurrences,
                    store.len(),
                    rejections.len()
                );
                Ok((vec![dir.join(ANNOTATIONS_FILE), rej], detail))
            }
            Stage::Stats => {
                let dir = l.corpus_dir();
                let corpus = CorpusSnapshot::load(&dir)?;
                let store = load_store(&dir)?;
                let mut inputs = ReportInputs::analyze(
                    &corpus,
                    &store,
                    &cfg.danger()?,
                    &cfg.anthropomorphism()?,
                    Vec::new(),
                    &cfg.analysis_options(),
                )?;
                inputs.metadata.config_hash = Some(cfg.digest());
                if let Some(input) = &self.input {
                    inputs.metadata.inputs.insert("articles".into(), sha256_file(input)?);
                }
                let path = l.stats_dir().join(ANALYSIS_FILE);
                io::write_json(&path, &inputs)?;
                let sig = inputs
                    .frames
                    .as_ref()
                    .map(|f| f.iter().filter(|r| r.table.is_significant(cfg.alpha)).count())
                    .unwrap_or(0);
                let detail = format!(
                    "{} frames compared, {} significant at alpha={}",
                    inputs.frames.as_ref().map_or(0, Vec::len),
                    sig,
                    cfg.alpha
                );
                Ok((vec![path], detail))
            }
            Stage::Report => {
                let mut inputs: ReportInputs = io::read_json(&l.stats_dir().join(ANALYSIS_FILE))?;
                inputs.alpha = cfg.alpha;
                let coding_dir = l.coding_dir();
                if coding_dir.join("sessions").is_dir() {
                    let sessions = open_sessions(&coding_dir, cfg)?;
                    inputs.coding = coding_summaries(&sessions)?;
                }
                inputs.metadata.seeds.insert("default".into(), cfg.seed);
                let bundle = emit_tables(&inputs, &l.report_dir())?;
                let files = bundle.files.iter().map(|f| l.report_dir().join(&f.name)).collect();
                Ok((files, format!("{} files written", bundle.files.len() + 1)))
            }
        }
    }

    /// Runs every stage in order, skipping those that are up to date.
    /// Stops at the first failure.
    pub fn run(&self) -> std::result::Result<Vec<StageOutcome>, StageFailure> {
        self.run_with(|_| {})
    }

    /// As [`run`](Self::run), reporting each outcome as it happens.
    pub fn run_with(
        &self,
        mut on_stage: impl FnMut(&StageOutcome),
    ) -> std::result::Result<Vec<StageOutcome>, StageFailure> {
        let fail = |stage| move |error| StageFailure { stage, error };
        let mut records = self.records().map_err(fail(Stage::Ingest))?;
        let mut outcomes = Vec::new();
        let mut upstream_ran = false;
        for stage in Stage::ALL {
            let digest = self.input_digest(stage).map_err(fail(stage))?;
            let current = match records.get(&stage) {
                Some(rec) if !self.force && !upstream_ran => self.is_current(rec, &digest).map_err(fail(stage))?,
                _ => false,
            };
            let outcome = if current {
                StageOutcome {
                    stage,
                    status: StageStatus::UpToDate,
                    detail: "up to date".into(),
                }
            } else {
                let (files, detail) = self.execute(stage).map_err(fail(stage))?;
                let mut outputs = BTreeMap::new();
                for f in files {
                    let rel = f
                        .strip_prefix(&self.layout.root)
                        .unwrap_or(&f)
                        .to_string_lossy()
                        .to_string();
                    outputs.insert(rel, sha256_file(&f).map_err(fail(stage))?);
                }
                records.insert(
                    stage,
                    StageRecord {
                        input_digest: digest,
                        outputs,
                    },
                );
                io::write_json(&self.layout.stages_file(), &records).map_err(fail(stage))?;
                upstream_ran = true;
                StageOutcome {
                    stage,
                    status: StageStatus::Ran,
                    detail,
                }
            };
            on_stage(&outcome);
            outcomes.push(outcome);
        }
        Ok(outcomes)
    }
}

fn snapshot_files(dir: &Path, cleaned: bool) -> Vec<PathBuf> {
    let mut v = vec![
        dir.join(CONFIG_FILE),
        dir.join(ARTICLES_FILE),
        dir.join(REJECTIONS_FILE),
    ];
    if cleaned {
        v.push(dir.join(CLEANING_LOG_FILE));
    }
    v
}

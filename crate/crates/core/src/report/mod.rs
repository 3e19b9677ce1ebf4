//! Report tables (CSV), a headline summary (Markdown) and run metadata.
//!
//! Inputs are plain result structs, so a report can be produced either from
//! a full analysis or from externally supplied count tables.

mod emit;
mod format;
mod summary;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use emit::{emit_tables, ReportBundle, MANIFEST_FILE, METADATA_FILE, SUMMARY_FILE};
pub use format::{fmt_p, fmt_pct, fmt_ratio, fmt_share};
pub use summary::{emit_summary, Headline};

use crate::annotation::AnnotationStore;
use crate::coding::{AgreementReport, Breakdown};
use crate::corpus::{CleaningLog, CorpusSnapshot, Period};
use crate::stats::{
    compare_frame_shares, compare_tables, descriptive_stats, extract_target_fe_pairs, frame_frequencies,
    frameset_occurrence_share, frameset_sentence_presence, top_k_union, Comparison, Correction, DescriptiveStats,
    FrameSetShare, FrameSetSpec, PairKey, SentencePresence, TargetFilter,
};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisOptions {
    pub alpha: f64,
    pub correction: Correction,
    /// Frames compared = union of each period's top k.
    pub top_k_frames: usize,
    pub top_k_pairs: usize,
    pub target: TargetFilter,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            alpha: 0.01,
            correction: Correction::Yates,
            top_k_frames: 15,
            top_k_pairs: 10,
            target: TargetFilter::ai(),
        }
    }
}

/// Coding results for one schema: each annotator's breakdown and, with two
/// sessions on the same sample, their agreement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodingSummary {
    pub schema: String,
    pub sample_id: String,
    pub breakdowns: Vec<Breakdown>,
    pub agreement: Option<AgreementReport>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub config_hash: Option<String>,
    pub seeds: BTreeMap<String, u64>,
    pub inputs: BTreeMap<String, String>,
}

/// Everything a report is built from. `None` components are reported as
/// missing by [`emit_tables`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportInputs {
    pub alpha: f64,
    pub cleaning: Option<CleaningLog>,
    pub descriptive: Option<DescriptiveStats>,
    /// Frame rows with the total frame count per period.
    pub frames: Option<Vec<Comparison<String>>>,
    pub pairs: Option<Vec<Comparison<PairKey>>>,
    pub danger: Option<FrameSetShare>,
    pub anthropomorphism: Option<SentencePresence>,
    pub coding: Vec<CodingSummary>,
    pub metadata: RunMetadata,
}

impl ReportInputs {
    pub fn empty(alpha: f64) -> Self {
        Self {
            alpha,
            cleaning: None,
            descriptive: None,
            frames: None,
            pairs: None,
            danger: None,
            anthropomorphism: None,
            coding: Vec::new(),
            metadata: RunMetadata::default(),
        }
    }

    /// Runs every analysis the report needs.
    pub fn analyze(
        corpus: &CorpusSnapshot,
        store: &AnnotationStore,
        danger: &FrameSetSpec,
        anthropomorphism: &FrameSetSpec,
        coding: Vec<CodingSummary>,
        opts: &AnalysisOptions,
    ) -> Result<Self> {
        let before = frame_frequencies(store, Period::Before);
        let after = frame_frequencies(store, Period::After);
        let frames = compare_frame_shares(store, &top_k_union(&before, &after, opts.top_k_frames), opts.correction);

        let [pb, pa] = extract_target_fe_pairs(store, &opts.target)?;
        let (pairs, _) = compare_tables(&pb, &pa, &top_k_union(&pb, &pa, opts.top_k_pairs), opts.correction);

        Ok(Self {
            alpha: opts.alpha,
            cleaning: corpus.log.clone(),
            descriptive: Some(descriptive_stats(corpus)),
            frames: Some(frames.rows),
            pairs: Some(pairs),
            danger: Some(frameset_occurrence_share(store, danger, opts.correction)?),
            anthropomorphism: Some(frameset_sentence_presence(store, anthropomorphism)?),
            coding,
            metadata: RunMetadata::default(),
        })
    }

    /// Names of absent required components.
    pub fn missing(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.descriptive.is_none() {
            out.push("descriptive statistics");
        }
        if self.frames.is_none() {
            out.push("frame comparisons");
        }
        if self.pairs.is_none() {
            out.push("frame-element pair comparisons");
        }
        if self.danger.is_none() {
            out.push("danger frame set");
        }
        if self.anthropomorphism.is_none() {
            out.push("anthropomorphism frame set");
        }
        out
    }
}

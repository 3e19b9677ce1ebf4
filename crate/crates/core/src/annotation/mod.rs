//! Frame-semantic annotation layer.
//!
//! Offsets everywhere in this module are Unicode scalar offsets into the
//! sentence text, half-open.

mod interchange;
mod inventory;
mod lexicon;
mod model;
mod stem;
mod store;

pub use interchange::{export_annotations, import_annotations, to_interchange_line, ImportRejection, ImportReport};
pub use inventory::FrameInventory;
pub use lexicon::{lexicon_annotate, CaptureRule, CaptureSide, LexiconEntry, TriggerLexicon};
pub use model::{validate_annotation, FrameElementInstance, FrameInstance, SentenceAnnotation, Span, Violation, ViolationKind};
pub use stem::stem;
pub use store::{AnnotatedSentence, AnnotationStore, AttachError, StoreBuilder, StoreTotals};

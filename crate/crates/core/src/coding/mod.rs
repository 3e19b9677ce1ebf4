//! Sampling sentences for qualitative review, two-level coding schemas,
//! annotator sessions and inter-annotator agreement.

mod agreement;
mod breakdown;
mod rng;
mod sample;
mod schema;
mod session;
mod terminal;

pub use agreement::{agreement, confusion, AgreementReport, ConfusionMatrix};
pub use breakdown::{subgroup_breakdown, Breakdown, BreakdownRow};
pub use rng::SplitMix64;
pub use sample::{
    draw_sample, sample_frame_instances, Highlight, HighlightKind, InstanceSample, Sample, SampleItem, SampleSpec,
    DEFAULT_SAMPLE_SIZE,
};
pub use schema::{Category, CodingSchema};
pub use session::{validate_id, CodingSession, Label, SessionStore};
pub use terminal::{code_session, render_highlighted, CodeOutcome};

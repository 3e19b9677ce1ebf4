//! Differential statistics over an annotation store.
//!
//! Everything here is a pure function of immutable inputs. Ordered outputs
//! sort by descending count with lexicographic tie-breaks.

mod chi2;
mod contingency;
mod descriptive;
mod frames;
mod frameset;
mod pairs;
mod rank_tests;
mod target;

pub use chi2::{chi2_2x2, chi2_yates, erfc, Chi2Test, Correction};
pub use contingency::{Comparison, Contingency2x2};
pub use descriptive::{descriptive_stats, DescriptiveStats, MentionComparison, MonthBin, PublisherStats};
pub use frames::{compare_frame_shares, compare_tables, curate_candidates, frame_frequencies, top_k_union, Candidate, CountTable, FrameComparisons};
pub use frameset::{
    frameset_article_share, frameset_occurrence_share, frameset_sentence_presence, ArticleShare, CountingMode,
    CompiledFrameSet, FrameSetShare, FrameSetSpec, Member, SentencePresence,
};
pub use pairs::{extract_target_fe_pairs, fe_role_distribution, PairKey, RoleDistribution};
pub use rank_tests::{mann_whitney_u, welch_t, TestResult};
pub use target::{contains_target, match_target, RegexMode, TargetFilter, TargetMatcher};

use serde::{Deserialize, Serialize};

use super::{CodingSchema, CodingSession, Sample};
use crate::corpus::Period;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BreakdownRow {
    pub level1: String,
    /// `None` marks the level-1 total row.
    pub level2: Option<String>,
    pub counts: [u64; 2],
}

/// Label counts per period: for each level-1 category its subcategory rows
/// followed by its total row, in schema order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Breakdown {
    pub session_id: String,
    pub annotator_id: String,
    pub rows: Vec<BreakdownRow>,
    pub labeled: [u64; 2],
}

impl Breakdown {
    pub fn level1_totals(&self) -> impl Iterator<Item = &BreakdownRow> {
        self.rows.iter().filter(|r| r.level2.is_none())
    }
}

pub fn subgroup_breakdown(session: &CodingSession, sample: &Sample, schema: &CodingSchema) -> Breakdown {
    let mut rows = Vec::new();
    let mut labeled = [0u64; 2];
    for item in sample.items() {
        if session.labels.contains_key(&item.sentence_id) {
            labeled[item.period.index()] += 1;
        }
    }
    let count = |l1: &str, l2: Option<&str>| -> [u64; 2] {
        let mut c = [0u64; 2];
        for period in Period::ALL {
            c[period.index()] = sample
                .period(period)
                .iter()
                .filter_map(|i| session.labels.get(&i.sentence_id))
                .filter(|l| l.level1 == l1 && l2.is_none_or(|s| l.level2.as_deref() == Some(s)))
                .count() as u64;
        }
        c
    };
    for cat in &schema.level1 {
        for sub in schema.subcategories(&cat.id) {
            rows.push(BreakdownRow {
                level1: cat.id.clone(),
                level2: Some(sub.id.clone()),
                counts: count(&cat.id, Some(&sub.id)),
            });
        }
        rows.push(BreakdownRow {
            level1: cat.id.clone(),
            level2: None,
            counts: count(&cat.id, None),
        });
    }
    Breakdown {
        session_id: session.session_id.clone(),
        annotator_id: session.annotator_id.clone(),
        rows,
        labeled,
    }
}

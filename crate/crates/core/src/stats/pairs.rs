use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{CountTable, TargetFilter};
use crate::annotation::AnnotationStore;
use crate::corpus::Period;
use crate::{Error, Result};

/// A (frame, frame element) combination.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PairKey {
    pub frame: String,
    pub role: String,
}

impl PairKey {
    pub fn new(frame: &str, role: &str) -> Self {
        Self {
            frame: frame.to_string(),
            role: role.to_string(),
        }
    }
}

impl fmt::Display for PairKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.frame, self.role)
    }
}

/// Counts each (frame instance, element) whose text passes the filter.
/// Totals are all matched pair occurrences per period.
pub fn extract_target_fe_pairs(
    store: &AnnotationStore,
    filter: &TargetFilter,
) -> Result<[CountTable<PairKey>; 2]> {
    let matcher = filter.matcher()?;
    let mut tables: [CountTable<PairKey>; 2] = Default::default();
    for s in store.sentences() {
        for frame in &s.frames {
            for el in &frame.elements {
                let Some(fe_text) = el.span.text(&s.text) else {
                    continue;
                };
                if matcher.is_match(fe_text) {
                    tables[s.period.index()].add(PairKey::new(&frame.frame, &el.role), 1);
                }
            }
        }
    }
    Ok(tables)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoleDistribution {
    pub frame: String,
    pub instances: u64,
    /// Fraction of instances whose element of this role contains the term.
    pub by_role: BTreeMap<String, f64>,
    /// Fraction of instances with the term inside at least one element.
    pub any_element: f64,
}

/// Where the target term sits inside the elements of `frame`, by whole-token
/// containment. `period = None` pools both periods.
pub fn fe_role_distribution(
    store: &AnnotationStore,
    frame: &str,
    filter: &TargetFilter,
    period: Option<Period>,
) -> Result<RoleDistribution> {
    let matcher = filter.matcher()?;
    let mut instances = 0u64;
    let mut any = 0u64;
    let mut by_role: BTreeMap<String, u64> = BTreeMap::new();
    for s in store.sentences().filter(|s| period.is_none_or(|p| s.period == p)) {
        for inst in s.frames.iter().filter(|f| f.frame == frame) {
            instances += 1;
            let mut hit_roles: Vec<&str> = Vec::new();
            for el in &inst.elements {
                by_role.entry(el.role.clone()).or_default();
                let contains = el
                    .span
                    .text(&s.text)
                    .is_some_and(|t| matcher.contained_in(t));
                if contains && !hit_roles.contains(&el.role.as_str()) {
                    hit_roles.push(&el.role);
                }
            }
            for role in &hit_roles {
                *by_role.get_mut(*role).expect("inserted above") += 1;
            }
            if !hit_roles.is_empty() {
                any += 1;
            }
        }
    }
    if instances == 0 {
        return Err(Error::FrameAbsent(frame.to_string()));
    }
    let n = instances as f64;
    Ok(RoleDistribution {
        frame: frame.to_string(),
        instances,
        by_role: by_role.into_iter().map(|(k, v)| (k, v as f64 / n)).collect(),
        any_element: any as f64 / n,
    })
}

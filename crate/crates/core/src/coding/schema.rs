use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{io, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Category {
    pub id: String,
    pub label: String,
}

/// A two-level thematic coding scheme.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodingSchema {
    pub name: String,
    pub level1: Vec<Category>,
    /// Subcategories keyed by level-1 id. Parents without an entry take no
    /// level-2 label.
    #[serde(default)]
    pub level2: BTreeMap<String, Vec<Category>>,
}

impl CodingSchema {
    pub fn from_json(text: &str) -> Result<Self> {
        let schema: Self = serde_json::from_str(text).map_err(|e| Error::json("coding schema", e))?;
        schema.validate()?;
        Ok(schema)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let schema: Self = io::read_json(path)?;
        schema.validate()?;
        Ok(schema)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Error::Invalid(format!("schema `{}`: {m}", self.name));
        if self.name.trim().is_empty() {
            return Err(Error::Invalid("schema name must not be empty".into()));
        }
        if self.level1.is_empty() {
            return Err(bad("level1 must not be empty".into()));
        }
        let mut ids = BTreeSet::new();
        for c in &self.level1 {
            if c.id.is_empty() || !ids.insert(c.id.as_str()) {
                return Err(bad(format!("level1 id `{}` is empty or repeated", c.id)));
            }
        }
        for (parent, subs) in &self.level2 {
            if !ids.contains(parent.as_str()) {
                return Err(bad(format!("level2 parent `{parent}` is not a level1 id")));
            }
            let mut seen = BTreeSet::new();
            for c in subs {
                if c.id.is_empty() || !seen.insert(c.id.as_str()) {
                    return Err(bad(format!("level2 id `{}` under `{parent}` is empty or repeated", c.id)));
                }
            }
        }
        Ok(())
    }

    pub fn level1_index(&self, id: &str) -> Option<usize> {
        self.level1.iter().position(|c| c.id == id)
    }

    pub fn subcategories(&self, level1: &str) -> &[Category] {
        self.level2.get(level1).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Checks that `level1` exists and `level2`, if given, belongs to it.
    pub fn check(&self, level1: &str, level2: Option<&str>) -> Result<()> {
        if self.level1_index(level1).is_none() {
            return Err(Error::InvalidLabel(format!(
                "`{level1}` is not a level1 category of `{}`",
                self.name
            )));
        }
        if let Some(sub) = level2 {
            if !self.subcategories(level1).iter().any(|c| c.id == sub) {
                return Err(Error::InvalidLabel(format!(
                    "`{sub}` is not a subcategory of `{level1}` in `{}`",
                    self.name
                )));
            }
        }
        Ok(())
    }

    pub fn level1_ids(&self) -> Vec<String> {
        self.level1.iter().map(|c| c.id.clone()).collect()
    }
}

use std::collections::BTreeSet;
use std::path::Path;

use crate::{Error, Result};

const BUILTIN: &str = include_str!("../../data/frame_inventory.txt");

/// Known frame names for strict validation. One name per line in files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameInventory {
    names: BTreeSet<String>,
}

impl FrameInventory {
    /// Frames named in the shipped frame sets and the reference tables.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN)
    }

    pub fn parse(text: &str) -> Self {
        let names = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_string)
            .collect();
        Self { names }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&text))
    }

    pub fn contains(&self, frame: &str) -> bool {
        self.names.contains(frame)
    }

    pub fn extend<I: IntoIterator<Item = String>>(&mut self, names: I) {
        self.names.extend(names);
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_has_table_frames() {
        let inv = FrameInventory::builtin();
        for f in ["Statement", "Warning", "Physical_artworks", "Communication_response", "Weapon"] {
            assert!(inv.contains(f), "{f}");
        }
        assert!(!inv.contains("Speaker"));
        assert_eq!(inv.len(), 66);
    }
}

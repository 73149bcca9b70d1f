//! Ground-truth mapping pools.
//!
//! File format: one mapping per line, `removed;added`, each side a
//! comma-separated list of method encodings. Blank lines and `#` comments
//! are skipped.

use std::collections::BTreeSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::method::{MethodRef, Side};

pub type TruthContent = (BTreeSet<MethodRef>, BTreeSet<MethodRef>);

/// The expected mappings for one migration rule.
#[derive(Debug, Clone, Default)]
pub struct GroundTruth {
    /// Canonically ordered, deduplicated.
    mappings: Vec<TruthContent>,
}

impl GroundTruth {
    pub fn from_mappings(mappings: impl IntoIterator<Item = TruthContent>) -> GroundTruth {
        let set: BTreeSet<TruthContent> = mappings.into_iter().collect();
        GroundTruth {
            mappings: set.into_iter().collect(),
        }
    }

    /// Ux: the number of expected mappings.
    pub fn len(&self) -> usize {
        self.mappings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mappings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &TruthContent> {
        self.mappings.iter()
    }

    pub fn contains(&self, removed: &BTreeSet<MethodRef>, added: &BTreeSet<MethodRef>) -> bool {
        self.mappings
            .binary_search_by(|(r, a)| (r, a).cmp(&(removed, added)))
            .is_ok()
    }

    /// The one-to-one portion of the pool (settings A and C draw from this).
    pub fn one_to_one_subset(&self) -> GroundTruth {
        GroundTruth {
            mappings: self
                .mappings
                .iter()
                .filter(|(r, a)| r.len() == 1 && a.len() == 1)
                .cloned()
                .collect(),
        }
    }

    /// (one-to-one, one-to-many, many-to-many) counts, classified the same
    /// way mappings are.
    pub fn cardinality_counts(&self) -> (usize, usize, usize) {
        let mut counts = (0, 0, 0);
        for (r, a) in &self.mappings {
            match crate::mapping::Cardinality::of(r.len(), a.len()) {
                crate::mapping::Cardinality::OneToOne => counts.0 += 1,
                crate::mapping::Cardinality::OneToMany => counts.1 += 1,
                crate::mapping::Cardinality::ManyToMany => counts.2 += 1,
            }
        }
        counts
    }
}

pub fn parse_truth(text: &str, origin: &Path) -> Result<GroundTruth> {
    let mut mappings: BTreeSet<TruthContent> = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |detail: String| Error::TruthFile {
            path: origin.to_path_buf(),
            line: idx + 1,
            detail,
        };
        let (removed_part, added_part) = line
            .split_once(';')
            .ok_or_else(|| parse_err("expected `removed;added`".to_string()))?;
        let removed = parse_side(removed_part, Side::Source).map_err(|e| parse_err(e))?;
        let added = parse_side(added_part, Side::Target).map_err(|e| parse_err(e))?;
        mappings.insert((removed, added));
    }
    Ok(GroundTruth {
        mappings: mappings.into_iter().collect(),
    })
}

fn parse_side(part: &str, side: Side) -> std::result::Result<BTreeSet<MethodRef>, String> {
    let mut methods = BTreeSet::new();
    for enc in part.split(',') {
        let enc = enc.trim();
        if enc.is_empty() {
            return Err(format!("empty method encoding on {} side", side.label()));
        }
        methods.insert(MethodRef::parse(side, enc).map_err(|e| e.to_string())?);
    }
    if methods.is_empty() {
        return Err(format!("{} side is empty", side.label()));
    }
    Ok(methods)
}

pub fn load_truth(path: &Path) -> Result<GroundTruth> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let truth = parse_truth(&text, path)?;
    if truth.is_empty() {
        return Err(Error::TruthFile {
            path: path.to_path_buf(),
            line: 0,
            detail: "ground truth has no mappings".to_string(),
        });
    }
    Ok(truth)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_dedups() {
        let truth = parse_truth(
            "# pool\n\
             getString/1;getAsString/0\n\
             put/2;addProperty/2,add/2\n\
             getString/1;getAsString/0\n",
            Path::new("<test>"),
        )
        .unwrap();
        assert_eq!(truth.len(), 2);
        assert_eq!(truth.cardinality_counts(), (1, 1, 0));
    }

    #[test]
    fn rejects_missing_separator() {
        let err = parse_truth("getString/1", Path::new("t.csv")).unwrap_err();
        assert!(err.to_string().contains("t.csv:1:"));
    }

    #[test]
    fn one_to_one_subset_filters() {
        let truth = parse_truth(
            "a/0;x/0\n\
             b/0,c/0;y/0,z/0\n\
             d/0;u/0,v/0\n",
            Path::new("<test>"),
        )
        .unwrap();
        assert_eq!(truth.one_to_one_subset().len(), 1);
        assert_eq!(truth.cardinality_counts(), (1, 1, 1));
    }
}

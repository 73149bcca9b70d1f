//! Migration fragments and the deduplicated, canonically ordered set the
//! mapping engine consumes.
//!
//! Interchange format (one fragment per line, UTF-8 JSON lines):
//!
//! ```text
//! {"removed":["put/2"],"added":["addProperty/2"],"freq":1,"prov":[["proj","commit","file",0]]}
//! ```
//!
//! Lines that are blank or start with `#` are ignored so emitted files can
//! carry a provenance header.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::method::{MethodRef, Side};

/// Where a fragment was witnessed: (project, commit, file, hunk index).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance(pub String, pub String, pub String, pub u32);

impl Provenance {
    pub fn new(
        project: impl Into<String>,
        commit: impl Into<String>,
        file: impl Into<String>,
        hunk: u32,
    ) -> Self {
        Provenance(project.into(), commit.into(), file.into(), hunk)
    }
}

/// A pair of method sets witnessed changing together, with the accumulated
/// frequency of that exact pair.
///
/// Invariant: both sides non-empty, frequency >= 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Fragment {
    pub removed: BTreeSet<MethodRef>,
    pub added: BTreeSet<MethodRef>,
    pub frequency: u64,
    pub provenance: Vec<Provenance>,
    /// Documentation-similarity score, present only on fragments born from
    /// splitting by description similarity (and anything they merge into).
    pub similarity: Option<f64>,
}

impl Fragment {
    pub fn new(
        removed: impl IntoIterator<Item = MethodRef>,
        added: impl IntoIterator<Item = MethodRef>,
        frequency: u64,
    ) -> Result<Self> {
        let removed: BTreeSet<MethodRef> = removed.into_iter().collect();
        let added: BTreeSet<MethodRef> = added.into_iter().collect();
        let fragment = Fragment {
            removed,
            added,
            frequency,
            provenance: Vec::new(),
            similarity: None,
        };
        fragment.check()?;
        Ok(fragment)
    }

    pub fn with_provenance(mut self, provenance: Vec<Provenance>) -> Self {
        self.provenance = provenance;
        self
    }

    fn check(&self) -> Result<()> {
        if self.removed.is_empty() {
            return Err(Error::Invariant(
                "fragment with empty removed set".to_string(),
            ));
        }
        if self.added.is_empty() {
            return Err(Error::Invariant("fragment with empty added set".to_string()));
        }
        if self.frequency == 0 {
            return Err(Error::Invariant("fragment with zero frequency".to_string()));
        }
        Ok(())
    }

    /// Number of methods on both sides; first sorting criterion.
    pub fn method_count(&self) -> usize {
        self.removed.len() + self.added.len()
    }

    /// The (removed, added) content, which is the fragment's identity.
    pub fn content(&self) -> (&BTreeSet<MethodRef>, &BTreeSet<MethodRef>) {
        (&self.removed, &self.added)
    }

    pub fn same_content(&self, other: &Fragment) -> bool {
        self.removed == other.removed && self.added == other.added
    }

    /// Canonical content key: method encodings joined, used for ordering ties.
    pub fn content_key(&self) -> String {
        let mut key = String::new();
        for m in &self.removed {
            key.push_str(&m.encode());
            key.push(',');
        }
        key.push('>');
        for m in &self.added {
            key.push_str(&m.encode());
            key.push(',');
        }
        key
    }

    /// Component-wise intersection of two fragments.
    ///
    /// Non-null only when the fragments share at least one removed and one
    /// added method; the intersection's frequency is the sum of both parents'.
    pub fn intersect(&self, other: &Fragment) -> Option<Fragment> {
        let removed: BTreeSet<MethodRef> = self.removed.intersection(&other.removed).cloned().collect();
        if removed.is_empty() {
            return None;
        }
        let added: BTreeSet<MethodRef> = self.added.intersection(&other.added).cloned().collect();
        if added.is_empty() {
            return None;
        }
        let mut provenance = self.provenance.clone();
        provenance.extend(other.provenance.iter().cloned());
        Some(Fragment {
            removed,
            added,
            frequency: self.frequency + other.frequency,
            provenance,
            similarity: merge_similarity(self.similarity, other.similarity),
        })
    }

    /// Component-wise difference, keeping this fragment's frequency.
    ///
    /// Returns `None` when either side would become empty: a one-sided
    /// residual is not a fragment.
    pub fn subtract(&self, other: &Fragment) -> Option<Fragment> {
        let removed: BTreeSet<MethodRef> = self.removed.difference(&other.removed).cloned().collect();
        if removed.is_empty() {
            return None;
        }
        let added: BTreeSet<MethodRef> = self.added.difference(&other.added).cloned().collect();
        if added.is_empty() {
            return None;
        }
        Some(Fragment {
            removed,
            added,
            frequency: self.frequency,
            provenance: self.provenance.clone(),
            similarity: self.similarity,
        })
    }

    pub fn to_json_line(&self) -> String {
        let wire = WireFragment {
            removed: self.removed.iter().map(MethodRef::encode).collect(),
            added: self.added.iter().map(MethodRef::encode).collect(),
            freq: self.frequency,
            prov: self.provenance.clone(),
        };
        serde_json::to_string(&wire).expect("fragment serializes")
    }

    pub fn from_json_line(line: &str) -> Result<Fragment> {
        let wire: WireFragment = serde_json::from_str(line)?;
        let removed = wire
            .removed
            .iter()
            .map(|m| MethodRef::parse(Side::Source, m))
            .collect::<Result<BTreeSet<_>>>()?;
        let added = wire
            .added
            .iter()
            .map(|m| MethodRef::parse(Side::Target, m))
            .collect::<Result<BTreeSet<_>>>()?;
        let fragment = Fragment {
            removed,
            added,
            frequency: wire.freq,
            provenance: wire.prov,
            similarity: None,
        };
        fragment.check()?;
        Ok(fragment)
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let removed: Vec<String> = self.removed.iter().map(|m| m.encode()).collect();
        let added: Vec<String> = self.added.iter().map(|m| m.encode()).collect();
        write!(
            f,
            "{{{}}} -> {{{}}} (freq {})",
            removed.join(", "),
            added.join(", "),
            self.frequency
        )
    }
}

fn merge_similarity(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, y) => x.or(y),
    }
}

#[derive(Serialize, Deserialize)]
struct WireFragment {
    removed: Vec<String>,
    added: Vec<String>,
    freq: u64,
    #[serde(default)]
    prov: Vec<Provenance>,
}

/// A deduplicated collection of fragments kept in canonical order:
/// method count ascending, frequency descending, content key ascending.
#[derive(Debug, Clone, Default)]
pub struct FragmentSet {
    fragments: Vec<Fragment>,
}

impl FragmentSet {
    pub fn new() -> Self {
        FragmentSet::default()
    }

    /// Deduplicate: fragments with identical content merge, frequencies sum,
    /// provenance concatenates. The result is canonically sorted.
    pub fn from_fragments(fragments: impl IntoIterator<Item = Fragment>) -> Self {
        let mut set = FragmentSet::new();
        for fragment in fragments {
            set.insert_merge(fragment);
        }
        set.sort_canonical();
        set
    }

    /// Insert a fragment, merging with an existing one of identical content.
    pub fn insert_merge(&mut self, fragment: Fragment) {
        if let Some(existing) = self
            .fragments
            .iter_mut()
            .find(|f| f.same_content(&fragment))
        {
            existing.frequency += fragment.frequency;
            existing.provenance.extend(fragment.provenance);
            existing.similarity = merge_similarity(existing.similarity, fragment.similarity);
        } else {
            self.fragments.push(fragment);
        }
    }

    pub fn sort_canonical(&mut self) {
        self.fragments.sort_by_cached_key(|f| {
            (
                f.method_count(),
                std::cmp::Reverse(f.frequency),
                f.content_key(),
            )
        });
    }

    pub fn len(&self) -> usize {
        self.fragments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fragments.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Fragment> {
        self.fragments.iter()
    }

    pub fn fragments(&self) -> &[Fragment] {
        &self.fragments
    }

    pub fn into_fragments(self) -> Vec<Fragment> {
        self.fragments
    }

    pub fn total_frequency(&self) -> u64 {
        self.fragments.iter().map(|f| f.frequency).sum()
    }

    /// Sum over fragments of their method counts; the engine's progress
    /// measure strictly decreases on every intersection step.
    pub fn method_mass(&self) -> usize {
        self.fragments.iter().map(|f| f.method_count()).sum()
    }

    /// First pair (by sorted position, outer then inner) with a non-null
    /// component-wise intersection.
    pub fn first_intersecting_pair(&self) -> Option<(usize, usize)> {
        for i in 0..self.fragments.len() {
            for j in (i + 1)..self.fragments.len() {
                if self.fragments[i].intersect(&self.fragments[j]).is_some() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Replace fragments `i` and `j` by their intersection and surviving
    /// residuals, merging content duplicates. Panics if the pair does not
    /// intersect; callers check first.
    pub fn apply_intersection(&mut self, i: usize, j: usize) {
        assert_ne!(i, j);
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        let f2 = self.fragments.remove(hi);
        let f1 = self.fragments.remove(lo);
        let iset = f1
            .intersect(&f2)
            .expect("apply_intersection called on a non-intersecting pair");
        if let Some(residual) = f1.subtract(&iset) {
            self.insert_merge(residual);
        }
        if let Some(residual) = f2.subtract(&iset) {
            self.insert_merge(residual);
        }
        self.insert_merge(iset);
        self.sort_canonical();
    }
}

impl IntoIterator for FragmentSet {
    type Item = Fragment;
    type IntoIter = std::vec::IntoIter<Fragment>;

    fn into_iter(self) -> Self::IntoIter {
        self.fragments.into_iter()
    }
}

/// Read a fragments file, enforcing fragment invariants per line.
pub fn read_fragments_file(path: &Path) -> Result<Vec<Fragment>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut fragments = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fragment = Fragment::from_json_line(trimmed).map_err(|e| Error::FragmentFile {
            path: path.to_path_buf(),
            line: idx + 1,
            detail: e.to_string(),
        })?;
        fragments.push(fragment);
    }
    Ok(fragments)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn src(names: &[&str]) -> Vec<MethodRef> {
        names
            .iter()
            .map(|n| MethodRef::parse(Side::Source, n).unwrap())
            .collect()
    }

    fn dst(names: &[&str]) -> Vec<MethodRef> {
        names
            .iter()
            .map(|n| MethodRef::parse(Side::Target, n).unwrap())
            .collect()
    }

    fn frag(removed: &[&str], added: &[&str], freq: u64) -> Fragment {
        Fragment::new(src(removed), dst(added), freq).unwrap()
    }

    #[test]
    fn rejects_one_sided_fragments() {
        assert!(Fragment::new(src(&["put/2"]), dst(&[]), 1).is_err());
        assert!(Fragment::new(src(&[]), dst(&["add/2"]), 1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = frag(&["put/2"], &["addProperty/2", "toJson/1"], 3)
            .with_provenance(vec![Provenance::new("p", "c", "f.java", 0)]);
        let line = f.to_json_line();
        assert!(line.contains("\"removed\":[\"put/2\"]"));
        let back = Fragment::from_json_line(&line).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn rejects_added_only_line() {
        let line = r#"{"removed":[],"added":["add/2"],"freq":1,"prov":[]}"#;
        assert!(Fragment::from_json_line(line).is_err());
    }

    #[test]
    fn dedup_merges_identical_content() {
        let set = FragmentSet::from_fragments(vec![
            frag(&["put/2"], &["addProperty/2"], 1)
                .with_provenance(vec![Provenance::new("a", "c1", "f", 0)]),
            frag(&["put/2"], &["addProperty/2"], 1)
                .with_provenance(vec![Provenance::new("b", "c2", "g", 1)]),
        ]);
        assert_eq!(set.len(), 1);
        assert_eq!(set.fragments()[0].frequency, 2);
        assert_eq!(set.fragments()[0].provenance.len(), 2);
    }

    #[test]
    fn dedup_empty_input() {
        let set = FragmentSet::from_fragments(Vec::<Fragment>::new());
        assert!(set.is_empty());
    }

    #[test]
    fn dedup_keeps_distinct_fragments_apart() {
        // Four distinct fragments each seen once keep frequency one.
        let set = FragmentSet::from_fragments(vec![
            frag(&["get/1"], &["getAsLong/0"], 1),
            frag(&["toJsonString/0", "has/1"], &["toString/0", "has/1"], 1),
            frag(&["getString/1", "keys/0"], &["getAsString/0", "keySet/0"], 1),
            frag(
                &["get/1", "toJsonString/0", "length/0"],
                &["getAsLong/0", "toString/0", "size/0"],
                1,
            ),
        ]);
        assert_eq!(set.len(), 4);
        assert!(set.iter().all(|f| f.frequency == 1));
    }

    #[test]
    fn canonical_order_counts_then_frequency() {
        let set = FragmentSet::from_fragments(vec![
            frag(&["a/0", "b/0"], &["x/0", "y/0"], 1),
            frag(&["c/0"], &["z/0"], 1),
            frag(&["d/0"], &["w/0"], 3),
        ]);
        let counts: Vec<(usize, u64)> = set
            .iter()
            .map(|f| (f.method_count(), f.frequency))
            .collect();
        assert_eq!(counts, vec![(2, 3), (2, 1), (4, 1)]);
    }

    #[test]
    fn intersection_requires_both_sides() {
        let a = frag(&["put/2"], &["addProperty/2"], 1);
        let b = frag(&["put/2"], &["add/2"], 1);
        assert!(a.intersect(&b).is_none());
        let c = frag(&["isEmpty/0"], &["addProperty/2"], 1);
        assert!(a.intersect(&c).is_none());
        let d = frag(&["put/2", "isEmpty/0"], &["addProperty/2", "isJsonNull/0"], 2);
        let iset = a.intersect(&d).unwrap();
        assert_eq!(iset.frequency, 3);
        assert_eq!(iset.method_count(), 2);
    }
}

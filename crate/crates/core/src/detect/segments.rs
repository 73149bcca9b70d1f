//! Segment detection: find the commit span in which a project migrated from
//! one library to another.
//!
//! A segment ends at the earliest commit after which no Java file in the
//! project references the retired library any more — removing the dependency
//! from the manifest is not enough, calls may outlive it. The segment starts
//! at the earliest commit (scanning back from the end through the span where
//! the library was still referenced) whose diff witnesses an actual
//! replacement fragment.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::catalog::{ApiIndex, LibraryRef};
use crate::corpus::git::GitRepo;
use crate::corpus::index::ProjectIndex;
use crate::detect::calls::{extract_imports, strip_noise};
use crate::detect::fragments::commit_fragments;
use crate::error::{Error, Result};
use crate::fragment::Fragment;

/// An ordered pair of libraries: the retired one and its replacement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MigrationRule {
    pub source: LibraryRef,
    pub target: LibraryRef,
}

impl MigrationRule {
    pub fn new(source: LibraryRef, target: LibraryRef) -> Result<MigrationRule> {
        if source.key() == target.key() {
            return Err(Error::Config(format!(
                "migration rule maps {source} onto itself"
            )));
        }
        Ok(MigrationRule { source, target })
    }
}

impl std::fmt::Display for MigrationRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} -> {}", self.source, self.target)
    }
}

/// The migration period of one project under one rule.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Segment {
    pub project: String,
    pub rule: MigrationRule,
    pub start_commit: String,
    pub end_commit: String,
    /// Last declared manifest versions at the segment end; "unknown" when the
    /// manifests never stated one.
    pub source_version: String,
    pub target_version: String,
}

/// Detect every disjoint migration segment of `src.library -> dst.library`
/// in one project. Projects where the two libraries never co-occur in the
/// dependency-change stream yield an empty list.
pub fn detect_segments(
    repo: &GitRepo,
    index: &ProjectIndex,
    src: &ApiIndex,
    dst: &ApiIndex,
) -> Result<Vec<Segment>> {
    let rule = MigrationRule::new(src.library.clone(), dst.library.clone())?;
    let in_stream = |lib: &LibraryRef| {
        index
            .dependency_changes
            .iter()
            .any(|c| (c.group_id.as_str(), c.artifact_id.as_str()) == lib.key())
    };
    if !in_stream(&rule.source) || !in_stream(&rule.target) {
        return Ok(Vec::new());
    }

    // Per-commit: does any Java file still reference the retired library?
    // Blob contents are immutable, so the answer is memoized by object id.
    let mut blob_memo: HashMap<String, bool> = HashMap::new();
    let mut refs = Vec::with_capacity(index.commits.len());
    for commit in &index.commits {
        let mut any = false;
        for (oid, path) in repo.ls_tree(&commit.hash)? {
            if !path.ends_with(".java") {
                continue;
            }
            let hit = match blob_memo.get(&oid) {
                Some(&hit) => hit,
                None => {
                    let hit = match repo.cat_blob(&oid) {
                        Ok(text) => file_references(&text, &rule.source),
                        Err(err) => {
                            eprintln!("warning: unreadable blob {oid} ({path}): {err}");
                            false
                        }
                    };
                    blob_memo.insert(oid, hit);
                    hit
                }
            };
            if hit {
                any = true;
                break;
            }
        }
        refs.push(any);
    }

    // Each maximal run of referencing commits that is followed by a
    // non-referencing commit is a candidate window; a run still open at HEAD
    // is an unfinished migration and produces nothing.
    let mut segments = Vec::new();
    let mut i = 0;
    while i < refs.len() {
        if !refs[i] {
            i += 1;
            continue;
        }
        let run_start = i;
        while i < refs.len() && refs[i] {
            i += 1;
        }
        let Some(end_pos) = (i < refs.len()).then_some(i) else {
            break;
        };
        // Earliest commit in the window whose diff witnesses a replacement.
        let mut start = None;
        for commit in &index.commits[run_start..=end_pos] {
            if !commit_fragments(repo, &index.name, commit, src, dst)?.is_empty() {
                start = Some(commit.hash.clone());
                break;
            }
        }
        let end_commit = &index.commits[end_pos];
        match start {
            Some(start_commit) => {
                let version = |lib: &LibraryRef| {
                    index
                        .version_at(end_pos, &lib.group_id, &lib.artifact_id)
                        .unwrap_or_else(|| "unknown".to_string())
                };
                segments.push(Segment {
                    project: index.name.clone(),
                    rule: rule.clone(),
                    start_commit,
                    end_commit: end_commit.hash.clone(),
                    source_version: version(&rule.source),
                    target_version: version(&rule.target),
                });
            }
            None => {
                eprintln!(
                    "warning: {}: window ending at {} has no replacement fragment; segment dropped",
                    index.name, end_commit.hash
                );
            }
        }
    }
    Ok(segments)
}

/// Every fragment witnessed by the segment's commits (start..=end).
pub fn extract_fragments(
    repo: &GitRepo,
    index: &ProjectIndex,
    segment: &Segment,
    src: &ApiIndex,
    dst: &ApiIndex,
) -> Result<Vec<Fragment>> {
    let missing = |hash: &str| Error::CorruptIndex {
        project: index.name.clone(),
        detail: format!("segment commit {hash} not in index"),
    };
    let start = index
        .position(&segment.start_commit)
        .ok_or_else(|| missing(&segment.start_commit))?;
    let end = index
        .position(&segment.end_commit)
        .ok_or_else(|| missing(&segment.end_commit))?;
    if start > end {
        return Err(Error::CorruptIndex {
            project: index.name.clone(),
            detail: format!(
                "segment start {} comes after end {}",
                segment.start_commit, segment.end_commit
            ),
        });
    }
    let mut fragments = Vec::new();
    for commit in &index.commits[start..=end] {
        fragments.extend(commit_fragments(repo, &index.name, commit, src, dst)?);
    }
    Ok(fragments)
}

/// Whether a compilation unit references the library: by import, or by a
/// fully qualified use of one of its packages.
fn file_references(text: &str, library: &LibraryRef) -> bool {
    let cleaned = strip_noise(text);
    if extract_imports(&cleaned)
        .iter()
        .any(|i| library.matches_import(i))
    {
        return true;
    }
    library
        .package_prefixes
        .iter()
        .any(|prefix| contains_qualified(&cleaned, prefix))
}

/// Substring search for `prefix.` at a non-identifier boundary.
fn contains_qualified(text: &str, prefix: &str) -> bool {
    let needle = format!("{prefix}.");
    let bytes = text.as_bytes();
    let mut from = 0;
    while let Some(pos) = text[from..].find(&needle) {
        let abs = from + pos;
        let boundary = abs == 0 || {
            let b = bytes[abs - 1];
            !(b.is_ascii_alphanumeric() || b == b'_' || b == b'$' || b == b'.')
        };
        if boundary {
            return true;
        }
        from = abs + 1;
    }
    false
}

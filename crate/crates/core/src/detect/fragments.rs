//! Fragment extraction: turn the unified diffs of segment commits into
//! fragments — hunks that remove source-library calls and add target-library
//! calls in the same place.

use crate::catalog::ApiIndex;
use crate::corpus::git::GitRepo;
use crate::corpus::index::IndexedCommit;
use crate::detect::calls::{extract_calls, extract_imports};
use crate::error::Result;
use crate::fragment::{Fragment, Provenance};
use crate::method::Side;

/// One hunk of a unified diff, reduced to its changed lines.
#[derive(Debug, Default, Clone)]
pub struct DiffHunk {
    pub removed: Vec<String>,
    pub added: Vec<String>,
}

/// Split unified-diff text into hunks, dropping context lines and headers.
pub fn parse_hunks(diff: &str) -> Vec<DiffHunk> {
    let mut hunks = Vec::new();
    let mut current: Option<DiffHunk> = None;
    for line in diff.lines() {
        if line.starts_with("diff ") {
            // Next file: close any open hunk, skip its header block.
            if let Some(h) = current.take() {
                hunks.push(h);
            }
        } else if line.starts_with("@@") {
            if let Some(h) = current.take() {
                hunks.push(h);
            }
            current = Some(DiffHunk::default());
        } else if let Some(hunk) = current.as_mut() {
            if let Some(text) = line.strip_prefix('-') {
                hunk.removed.push(text.to_string());
            } else if let Some(text) = line.strip_prefix('+') {
                hunk.added.push(text.to_string());
            }
            // Context lines and "\ No newline at end of file" are dropped.
        }
    }
    if let Some(h) = current.take() {
        hunks.push(h);
    }
    hunks
}

/// Extract all fragments one commit contributes: for every changed Java file,
/// diff against the parent and keep each hunk that removes source-library
/// calls and adds target-library calls.
///
/// The removed side is gated by the file's imports *before* the commit, the
/// added side by its imports *after* — each side is matched against the state
/// of the file it was actually part of. Unreadable file content is skipped
/// with a warning; mining must survive odd blobs.
pub fn commit_fragments(
    repo: &GitRepo,
    project: &str,
    commit: &IndexedCommit,
    src: &ApiIndex,
    dst: &ApiIndex,
) -> Result<Vec<Fragment>> {
    let base = commit.diff_base();
    let mut fragments = Vec::new();
    for file in &commit.files {
        if !file.path.ends_with(".java") && !file.old_path.ends_with(".java") {
            continue;
        }
        let mut paths = vec![file.old_path.as_str()];
        if file.path != file.old_path {
            paths.push(file.path.as_str());
        }
        let diff = match repo.diff_file(base, &commit.hash, &paths) {
            Ok(diff) => diff,
            Err(err) => {
                eprintln!("warning: skipping {}: {err}", file.path);
                continue;
            }
        };
        let old_imports = match repo.show_file(base, &file.old_path) {
            Ok(text) => text.as_deref().map(extract_imports).unwrap_or_default(),
            Err(err) => {
                eprintln!("warning: skipping {}: {err}", file.old_path);
                continue;
            }
        };
        let new_imports = match repo.show_file(&commit.hash, &file.path) {
            Ok(text) => text.as_deref().map(extract_imports).unwrap_or_default(),
            Err(err) => {
                eprintln!("warning: skipping {}: {err}", file.path);
                continue;
            }
        };
        for (hunk_idx, hunk) in parse_hunks(&diff).into_iter().enumerate() {
            let removed = extract_calls(&hunk.removed.join("\n"), &old_imports, src, Side::Source);
            let added = extract_calls(&hunk.added.join("\n"), &new_imports, dst, Side::Target);
            if removed.is_empty() || added.is_empty() {
                continue;
            }
            let fragment = Fragment::new(removed, added, 1)?.with_provenance(vec![
                Provenance::new(project, commit.hash.clone(), file.path.clone(), hunk_idx as u32),
            ]);
            fragments.push(fragment);
        }
    }
    Ok(fragments)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hunk_parser_separates_sides() {
        let diff = "diff --git a/F.java b/F.java\n\
                    index 111..222 100644\n\
                    --- a/F.java\n\
                    +++ b/F.java\n\
                    @@ -1,4 +1,4 @@\n \
                     context\n\
                    -removed one\n\
                    +added one\n \
                     more context\n\
                    @@ -10,2 +10,3 @@\n\
                    -removed two\n\
                    +added two\n\
                    +added three\n";
        let hunks = parse_hunks(diff);
        assert_eq!(hunks.len(), 2);
        assert_eq!(hunks[0].removed, vec!["removed one"]);
        assert_eq!(hunks[0].added, vec!["added one"]);
        assert_eq!(hunks[1].added.len(), 2);
    }

    #[test]
    fn file_headers_are_not_change_lines() {
        let diff = "diff --git a/F.java b/F.java\n\
                    --- a/F.java\n\
                    +++ b/F.java\n\
                    @@ -1 +1 @@\n\
                    -old\n\
                    +new\n";
        let hunks = parse_hunks(diff);
        assert_eq!(hunks.len(), 1);
        assert_eq!(hunks[0].removed, vec!["old"]);
        assert_eq!(hunks[0].added, vec!["new"]);
    }

    #[test]
    fn empty_diff_has_no_hunks() {
        assert!(parse_hunks("").is_empty());
    }
}

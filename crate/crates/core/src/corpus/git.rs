//! Thin wrapper over the `git` binary. The miner only needs log, tree, blob
//! and diff access, and shelling out keeps the diffs identical to what the
//! unified-diff tooling produces.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The well-known SHA-1 empty tree; diffing a root commit against it yields
/// the commit's full content as additions.
pub const EMPTY_TREE: &str = "4b825dc642cb6eb9a060e54bf8d69288fbee4904";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CommitRecord {
    pub hash: String,
    pub parents: Vec<String>,
    /// Author date, ISO-8601.
    pub date: String,
    pub author: String,
    pub subject: String,
}

impl CommitRecord {
    /// The diff base: first parent, or the empty tree for a root commit.
    pub fn diff_base(&self) -> &str {
        self.parents.first().map(String::as_str).unwrap_or(EMPTY_TREE)
    }
}

/// One entry of a commit's change list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChangedFile {
    pub status: char,
    /// Previous path for renames; equals `path` otherwise.
    pub old_path: String,
    pub path: String,
}

pub struct GitRepo {
    path: PathBuf,
}

impl GitRepo {
    pub fn open(path: &Path) -> Result<GitRepo> {
        let repo = GitRepo {
            path: path.to_path_buf(),
        };
        if !path.is_dir() {
            return Err(Error::NotARepository {
                path: path.to_path_buf(),
            });
        }
        match repo.try_run(&["rev-parse", "--git-dir"]) {
            Ok(Some(_)) => Ok(repo),
            _ => Err(Error::NotARepository {
                path: path.to_path_buf(),
            }),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn command(&self, args: &[&str]) -> Command {
        let mut cmd = Command::new("git");
        cmd.arg("-C").arg(&self.path);
        // Keep output stable regardless of the user's git configuration.
        cmd.args(["-c", "core.quotepath=false", "-c", "diff.renames=true"]);
        cmd.args(args);
        cmd
    }

    /// Run git, treating a nonzero exit as an object-store error.
    fn run(&self, args: &[&str]) -> Result<String> {
        self.try_run(args)?.ok_or_else(|| Error::ObjectStore {
            path: self.path.clone(),
            detail: format!("git {} failed", args.join(" ")),
        })
    }

    /// Run git; `Ok(None)` when git exits nonzero (e.g. path absent at rev).
    fn try_run(&self, args: &[&str]) -> Result<Option<String>> {
        let output = self
            .command(args)
            .output()
            .map_err(|e| Error::io(&self.path, e))?;
        if !output.status.success() {
            return Ok(None);
        }
        String::from_utf8(output.stdout)
            .map(Some)
            .map_err(|e| Error::ObjectStore {
                path: self.path.clone(),
                detail: format!("git {} produced non-UTF-8 output: {e}", args.join(" ")),
            })
    }

    /// Full history, oldest first, in topological order. A repository with no
    /// commits yields an empty list.
    pub fn log(&self) -> Result<Vec<CommitRecord>> {
        let raw = match self.try_run(&[
            "log",
            "--reverse",
            "--topo-order",
            "--format=%H%x1f%P%x1f%aI%x1f%an%x1f%s",
        ])? {
            Some(raw) => raw,
            // `git log` fails on a repository with no commits; distinguish
            // that from a broken object store by probing HEAD.
            None if self.try_run(&["rev-parse", "HEAD"])?.is_none() => return Ok(Vec::new()),
            None => {
                return Err(Error::ObjectStore {
                    path: self.path.clone(),
                    detail: "git log failed".to_string(),
                })
            }
        };
        let mut commits = Vec::new();
        for line in raw.lines() {
            let fields: Vec<&str> = line.split('\u{1f}').collect();
            if fields.len() != 5 {
                return Err(Error::ObjectStore {
                    path: self.path.clone(),
                    detail: format!("unexpected log line: {line:?}"),
                });
            }
            commits.push(CommitRecord {
                hash: fields[0].to_string(),
                parents: fields[1].split_whitespace().map(str::to_string).collect(),
                date: fields[2].to_string(),
                author: fields[3].to_string(),
                subject: fields[4].to_string(),
            });
        }
        Ok(commits)
    }

    /// Files changed by a commit relative to `base`, with rename detection.
    pub fn changed_files(&self, base: &str, commit: &str) -> Result<Vec<ChangedFile>> {
        let raw = self.run(&["diff-tree", "-r", "--no-commit-id", "--name-status", "-M", base, commit])?;
        let mut files = Vec::new();
        for line in raw.lines() {
            let mut parts = line.split('\t');
            let Some(status_field) = parts.next() else {
                continue;
            };
            let status = status_field.chars().next().unwrap_or('?');
            let first = parts.next().unwrap_or("").to_string();
            match parts.next() {
                Some(renamed_to) => files.push(ChangedFile {
                    status,
                    old_path: first,
                    path: renamed_to.to_string(),
                }),
                None => files.push(ChangedFile {
                    status,
                    old_path: first.clone(),
                    path: first,
                }),
            }
        }
        Ok(files)
    }

    /// `(blob oid, path)` for every file in the commit's tree.
    pub fn ls_tree(&self, commit: &str) -> Result<Vec<(String, String)>> {
        let raw = self.run(&["ls-tree", "-r", commit])?;
        let mut entries = Vec::new();
        for line in raw.lines() {
            // <mode> <type> <oid>\t<path>
            let Some((meta, path)) = line.split_once('\t') else {
                continue;
            };
            let fields: Vec<&str> = meta.split_whitespace().collect();
            if fields.len() == 3 && fields[1] == "blob" {
                entries.push((fields[2].to_string(), path.to_string()));
            }
        }
        Ok(entries)
    }

    pub fn cat_blob(&self, oid: &str) -> Result<String> {
        self.run(&["cat-file", "blob", oid])
    }

    /// File content at a revision; `None` when the path does not exist there.
    pub fn show_file(&self, commit: &str, path: &str) -> Result<Option<String>> {
        self.try_run(&["show", &format!("{commit}:{path}")])
    }

    /// Unified diff (3 context lines, renames followed) for one file between
    /// two revisions.
    pub fn diff_file(&self, base: &str, commit: &str, paths: &[&str]) -> Result<String> {
        let mut args = vec!["diff", "-U3", "-M", base, commit, "--"];
        args.extend_from_slice(paths);
        Ok(self.try_run(&args)?.unwrap_or_default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Build a tiny repo: two commits touching one file.
    fn scratch_repo() -> (tempfile::TempDir, GitRepo) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path();
        let sh = |args: &[&str]| {
            let status = Command::new("git")
                .arg("-C")
                .arg(path)
                .args(args)
                .output()
                .unwrap();
            assert!(status.status.success(), "git {args:?} failed");
        };
        sh(&["init", "-q", "-b", "main"]);
        sh(&["config", "user.email", "test@example.com"]);
        sh(&["config", "user.name", "test"]);
        std::fs::write(path.join("a.txt"), "one\n").unwrap();
        sh(&["add", "."]);
        sh(&["commit", "-q", "-m", "first"]);
        std::fs::write(path.join("a.txt"), "one\ntwo\n").unwrap();
        sh(&["add", "."]);
        sh(&["commit", "-q", "-m", "second"]);
        let repo = GitRepo::open(path).unwrap();
        (dir, repo)
    }

    #[test]
    fn open_rejects_non_repo() {
        let dir = tempfile::tempdir().unwrap();
        assert!(GitRepo::open(dir.path()).is_err());
        assert!(GitRepo::open(Path::new("/nonexistent/nowhere")).is_err());
    }

    #[test]
    fn log_is_oldest_first() {
        let (_dir, repo) = scratch_repo();
        let log = repo.log().unwrap();
        assert_eq!(log.len(), 2);
        assert_eq!(log[0].subject, "first");
        assert_eq!(log[0].author, "test");
        assert!(log[0].parents.is_empty());
        assert_eq!(log[1].parents, vec![log[0].hash.clone()]);
        assert_eq!(log[0].diff_base(), EMPTY_TREE);
    }

    #[test]
    fn empty_repository_has_no_commits() {
        let dir = tempfile::tempdir().unwrap();
        let status = Command::new("git")
            .arg("-C")
            .arg(dir.path())
            .args(["init", "-q"])
            .output()
            .unwrap();
        assert!(status.status.success());
        let repo = GitRepo::open(dir.path()).unwrap();
        assert!(repo.log().unwrap().is_empty());
    }

    #[test]
    fn merge_commit_records_both_parents() {
        let (dir, repo) = scratch_repo();
        let path = dir.path();
        let sh = |args: &[&str]| {
            let out = Command::new("git").arg("-C").arg(path).args(args).output().unwrap();
            assert!(out.status.success(), "git {args:?} failed");
        };
        sh(&["checkout", "-q", "-b", "side", "HEAD~1"]);
        std::fs::write(path.join("b.txt"), "side\n").unwrap();
        sh(&["add", "."]);
        sh(&["commit", "-q", "-m", "side work"]);
        sh(&["checkout", "-q", "main"]);
        sh(&["merge", "-q", "--no-ff", "-m", "merge side", "side"]);
        let log = repo.log().unwrap();
        let merge = log.iter().find(|c| c.subject == "merge side").unwrap();
        assert_eq!(merge.parents.len(), 2);
        assert_eq!(log.len(), 4);
    }

    #[test]
    fn changed_files_and_diff() {
        let (_dir, repo) = scratch_repo();
        let log = repo.log().unwrap();
        let second = &log[1];
        let changed = repo.changed_files(second.diff_base(), &second.hash).unwrap();
        assert_eq!(changed.len(), 1);
        assert_eq!(changed[0].path, "a.txt");
        assert_eq!(changed[0].status, 'M');
        let diff = repo
            .diff_file(second.diff_base(), &second.hash, &["a.txt"])
            .unwrap();
        assert!(diff.contains("+two"));
        assert!(repo.show_file(&second.hash, "missing.txt").unwrap().is_none());
        let tree = repo.ls_tree(&second.hash).unwrap();
        assert_eq!(tree.len(), 1);
        let blob = repo.cat_blob(&tree[0].0).unwrap();
        assert_eq!(blob, "one\ntwo\n");
    }
}

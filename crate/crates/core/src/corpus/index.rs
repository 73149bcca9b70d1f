//! Per-project history index: one linear pass over a repository recording
//! commit metadata, changed files, and manifest (pom.xml) dependency events.
//! Mining and detection both start from this index instead of re-walking git.

use std::path::{Path, PathBuf};

use chrono::DateTime;
use serde::{Deserialize, Serialize};

use crate::corpus::git::{ChangedFile, GitRepo, EMPTY_TREE};
use crate::corpus::pom::{by_key, parse_pom, Dependency};
use crate::error::{Error, Result};
use crate::util::write_atomic;

/// A commit as stored in the index: log metadata plus its change list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndexedCommit {
    pub hash: String,
    pub parents: Vec<String>,
    /// Author date, ISO-8601.
    pub date: String,
    pub author: String,
    pub subject: String,
    pub files: Vec<ChangedFile>,
}

impl IndexedCommit {
    /// The diff base: first parent, or the empty tree for a root commit.
    pub fn diff_base(&self) -> &str {
        self.parents.first().map(String::as_str).unwrap_or(EMPTY_TREE)
    }
}

/// What happened to one dependency in one commit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DependencyAction {
    Added,
    Removed,
    VersionChanged,
}

/// One manifest event: a library added, removed, or re-versioned by a commit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependencyChange {
    pub commit: String,
    pub group_id: String,
    pub artifact_id: String,
    pub action: DependencyAction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub old_version: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub new_version: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectIndex {
    pub name: String,
    pub repo_path: String,
    pub head: String,
    pub commits: Vec<IndexedCommit>,
    pub dependency_changes: Vec<DependencyChange>,
    /// Non-fatal oddities observed while scanning (e.g. clock skew).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Diff two declared-dependency states into per-library events.
pub fn extract_dependency_changes(
    old: &[Dependency],
    new: &[Dependency],
    commit: &str,
) -> Vec<DependencyChange> {
    let old_map = by_key(old);
    let new_map = by_key(new);
    let mut changes = Vec::new();
    for (key, version) in &new_map {
        match old_map.get(key) {
            None => changes.push(DependencyChange {
                commit: commit.to_string(),
                group_id: key.0.clone(),
                artifact_id: key.1.clone(),
                action: DependencyAction::Added,
                old_version: None,
                new_version: version.clone(),
            }),
            Some(old_version) if old_version != version => changes.push(DependencyChange {
                commit: commit.to_string(),
                group_id: key.0.clone(),
                artifact_id: key.1.clone(),
                action: DependencyAction::VersionChanged,
                old_version: old_version.clone(),
                new_version: version.clone(),
            }),
            Some(_) => {}
        }
    }
    for (key, version) in &old_map {
        if !new_map.contains_key(key) {
            changes.push(DependencyChange {
                commit: commit.to_string(),
                group_id: key.0.clone(),
                artifact_id: key.1.clone(),
                action: DependencyAction::Removed,
                old_version: version.clone(),
                new_version: None,
            });
        }
    }
    changes
}

impl ProjectIndex {
    /// Walk the full history once and record everything the detector needs.
    pub fn build(repo: &GitRepo, name: &str) -> Result<ProjectIndex> {
        let log = repo.log()?;
        let head = log.last().map(|c| c.hash.clone()).unwrap_or_default();
        let mut commits = Vec::with_capacity(log.len());
        let mut dependency_changes = Vec::new();
        for record in log {
            let files = repo.changed_files(record.diff_base(), &record.hash)?;
            // Union manifest state across every pom the commit touched
            // (multi-module builds change several at once).
            let mut old_deps = Vec::new();
            let mut new_deps = Vec::new();
            let mut touched = false;
            for file in &files {
                if !is_pom(&file.path) && !is_pom(&file.old_path) {
                    continue;
                }
                touched = true;
                if let Some(text) = repo.show_file(record.diff_base(), &file.old_path)? {
                    old_deps.extend(parse_pom(&text));
                }
                if let Some(text) = repo.show_file(&record.hash, &file.path)? {
                    new_deps.extend(parse_pom(&text));
                }
            }
            if touched {
                dependency_changes.extend(extract_dependency_changes(
                    &old_deps,
                    &new_deps,
                    &record.hash,
                ));
            }
            commits.push(IndexedCommit {
                hash: record.hash,
                parents: record.parents,
                date: record.date,
                author: record.author,
                subject: record.subject,
                files,
            });
        }
        let warnings = clock_skew_warnings(&commits);
        Ok(ProjectIndex {
            name: name.to_string(),
            repo_path: repo.path().display().to_string(),
            head,
            commits,
            dependency_changes,
            warnings,
        })
    }

    /// Position of a commit in the indexed history.
    pub fn position(&self, hash: &str) -> Option<usize> {
        self.commits.iter().position(|c| c.hash == hash)
    }

    /// Last declared version of a dependency at or before a history position,
    /// replaying the dependency-change stream.
    pub fn version_at(&self, position: usize, group_id: &str, artifact_id: &str) -> Option<String> {
        let mut version = None;
        for change in &self.dependency_changes {
            if change.group_id != group_id || change.artifact_id != artifact_id {
                continue;
            }
            let Some(pos) = self.position(&change.commit) else {
                continue;
            };
            if pos > position {
                continue;
            }
            match change.action {
                DependencyAction::Added | DependencyAction::VersionChanged => {
                    if change.new_version.is_some() {
                        version = change.new_version.clone();
                    }
                }
                DependencyAction::Removed => {}
            }
        }
        version
    }

    pub fn index_path(workdir: &Path, project: &str) -> PathBuf {
        workdir.join("index").join(project).join("index.json")
    }

    /// Serialize to `<workdir>/index/<project>/index.json`. The output is
    /// byte-identical across runs for an unchanged repository.
    pub fn write(&self, workdir: &Path) -> Result<PathBuf> {
        let path = Self::index_path(workdir, &self.name);
        let mut body = serde_json::to_string_pretty(self)?;
        body.push('\n');
        write_atomic(&path, &body)?;
        Ok(path)
    }

    pub fn load(workdir: &Path, project: &str) -> Result<ProjectIndex> {
        let path = Self::index_path(workdir, project);
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::CorruptIndex {
            project: project.to_string(),
            detail: e.to_string(),
        })
    }
}

/// First-parent timestamp regressions, recorded but not fatal.
fn clock_skew_warnings(commits: &[IndexedCommit]) -> Vec<String> {
    let stamps: std::collections::HashMap<&str, i64> = commits
        .iter()
        .filter_map(|c| {
            DateTime::parse_from_rfc3339(&c.date)
                .ok()
                .map(|t| (c.hash.as_str(), t.timestamp()))
        })
        .collect();
    let mut warnings = Vec::new();
    for commit in commits {
        let (Some(own), Some(parent)) = (
            stamps.get(commit.hash.as_str()),
            commit.parents.first().and_then(|p| stamps.get(p.as_str())),
        ) else {
            continue;
        };
        if own < parent {
            warnings.push(format!(
                "commit {} predates its first parent (clock skew)",
                commit.hash
            ));
        }
    }
    warnings
}

fn is_pom(path: &str) -> bool {
    path == "pom.xml" || path.ends_with("/pom.xml")
}

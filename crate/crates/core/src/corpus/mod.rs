//! Repository access and history indexing: a thin git wrapper, Maven
//! manifest parsing, and the per-project index the detector consumes.

pub mod git;
pub mod index;
pub mod pom;

pub use git::{ChangedFile, CommitRecord, GitRepo, EMPTY_TREE};
pub use index::{
    extract_dependency_changes, DependencyAction, DependencyChange, IndexedCommit, ProjectIndex,
};
pub use pom::{parse_pom, Dependency};

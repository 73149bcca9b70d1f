//! Migration detection: locate per-project migration segments and extract
//! replacement fragments from the unified diffs inside them.

pub mod calls;
pub mod fragments;
pub mod segments;

pub use calls::{extract_calls, extract_imports, strip_noise};
pub use fragments::{commit_fragments, parse_hunks, DiffHunk};
pub use segments::{detect_segments, extract_fragments, MigrationRule, Segment};

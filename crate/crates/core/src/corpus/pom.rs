//! Maven manifest parsing. Only the dependency list matters for migration
//! mining, so everything else in the POM is ignored.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// One `<dependency>` from a pom.xml.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dependency {
    pub group_id: String,
    pub artifact_id: String,
    /// Absent when the POM inherits the version (parent, BOM, property we
    /// cannot resolve).
    pub version: Option<String>,
}

impl Dependency {
    /// Identity of the dependency irrespective of version.
    pub fn key(&self) -> (&str, &str) {
        (&self.group_id, &self.artifact_id)
    }
}

/// Extract declared dependencies from pom.xml text.
///
/// Malformed XML yields an empty list rather than an error: a repository's
/// history routinely contains commits with broken manifests, and skipping
/// them is the only sane recovery. `<dependencyManagement>` blocks are
/// skipped — they pin versions without declaring use.
pub fn parse_pom(text: &str) -> Vec<Dependency> {
    let doc = match roxmltree::Document::parse(text) {
        Ok(doc) => doc,
        Err(_) => return Vec::new(),
    };
    let mut deps = Vec::new();
    for node in doc.descendants().filter(|n| n.has_tag_name("dependency")) {
        if node
            .ancestors()
            .any(|a| a.has_tag_name("dependencyManagement"))
        {
            continue;
        }
        let field = |tag: &str| -> Option<String> {
            node.children()
                .find(|c| c.has_tag_name(tag))
                .and_then(|c| c.text())
                .map(|t| t.trim().to_string())
                .filter(|t| !t.is_empty())
        };
        let (Some(group_id), Some(artifact_id)) = (field("groupId"), field("artifactId")) else {
            continue;
        };
        deps.push(Dependency {
            group_id,
            artifact_id,
            version: field("version"),
        });
    }
    deps
}

/// Dependency lists keyed by identity, for diffing two manifest states.
pub fn by_key(deps: &[Dependency]) -> BTreeMap<(String, String), Option<String>> {
    deps.iter()
        .map(|d| {
            (
                (d.group_id.clone(), d.artifact_id.clone()),
                d.version.clone(),
            )
        })
        .collect()
}

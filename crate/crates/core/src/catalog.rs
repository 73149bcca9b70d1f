//! API documentation catalogs: one method signature and its description per
//! line, used to score description similarity between candidate methods.
//!
//! Catalog format:
//!
//! ```text
//! # comment or header
//! put(String,Object)|Put a key/value pair in the object.
//! ```
//!
//! The part before the first `|` is a typed signature; the rest is the
//! description (may be empty). Overloads that share a name and arity are
//! merged, keeping the longest description, because downstream lookups key
//! on name and arity only.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::method::{MethodRef, Side};

/// Identity of a library within a migration rule.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct LibraryRef {
    pub group_id: String,
    pub artifact_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<String>,
    /// Java package prefixes whose imports mark a file as using this library.
    pub package_prefixes: Vec<String>,
}

impl LibraryRef {
    /// Library identity irrespective of version.
    pub fn key(&self) -> (&str, &str) {
        (&self.group_id, &self.artifact_id)
    }

    /// Whether an import path (e.g. `org.json.JSONObject` or `org.json.*`)
    /// falls under one of this library's package prefixes.
    pub fn matches_import(&self, import_path: &str) -> bool {
        self.package_prefixes.iter().any(|prefix| {
            import_path == prefix || import_path.strip_prefix(prefix.as_str()).is_some_and(|rest| rest.starts_with('.'))
        })
    }
}

impl std::fmt::Display for LibraryRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.group_id, self.artifact_id)?;
        if let Some(v) = &self.version {
            write!(f, "@{v}")?;
        }
        Ok(())
    }
}

/// A library's catalog together with the library it documents; the unit the
/// detector and the similarity engine consume.
#[derive(Debug, Clone)]
pub struct ApiIndex {
    pub library: LibraryRef,
    pub catalog: Catalog,
}

impl ApiIndex {
    pub fn load(library: LibraryRef, path: &Path) -> Result<ApiIndex> {
        Ok(ApiIndex {
            library,
            catalog: load_catalog(path)?,
        })
    }

    /// Whether any of the file's imports belongs to this library.
    pub fn imports_match(&self, imports: &[String]) -> bool {
        imports.iter().any(|i| self.library.matches_import(i))
    }
}

/// One documented method.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub param_types: Vec<String>,
    pub description: String,
}

impl CatalogEntry {
    pub fn arity(&self) -> usize {
        self.param_types.len()
    }
}

/// A library's documented API, keyed by method name and arity.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    entries: BTreeMap<(String, usize), CatalogEntry>,
}

impl Catalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, name: &str, arity: usize) -> Option<&CatalogEntry> {
        self.entries.get(&(name.to_string(), arity))
    }

    pub fn contains(&self, name: &str, arity: usize) -> bool {
        self.entries.contains_key(&(name.to_string(), arity))
    }

    /// Description for a method reference, if the catalog documents it.
    pub fn description_for(&self, method: &MethodRef) -> Option<&str> {
        let (name, arity) = method.key();
        self.lookup(name, arity).map(|e| e.description.as_str())
    }

    pub fn entries(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.values()
    }

    /// Non-empty descriptions, in deterministic (name, arity) order. This is
    /// the catalog's contribution to the similarity corpus.
    pub fn descriptions(&self) -> impl Iterator<Item = &str> {
        self.entries
            .values()
            .map(|e| e.description.as_str())
            .filter(|d| !d.is_empty())
    }

    /// All entries as method references for the given side.
    pub fn methods(&self, side: Side) -> Vec<MethodRef> {
        self.entries
            .values()
            .map(|e| MethodRef::new(side, &e.name, e.arity()))
            .collect()
    }

    fn insert(&mut self, entry: CatalogEntry) {
        let key = (entry.name.clone(), entry.arity());
        match self.entries.get_mut(&key) {
            Some(existing) => {
                // Overload collapsed to one row; keep the more informative text.
                if entry.description.len() > existing.description.len() {
                    *existing = entry;
                }
            }
            None => {
                self.entries.insert(key, entry);
            }
        }
    }
}

/// Parse catalog text. `origin` appears in errors (a path or a label).
pub fn parse_catalog(text: &str, origin: &Path) -> Result<Catalog> {
    let mut catalog = Catalog::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let entry = parse_entry(line).map_err(|detail| Error::Catalog {
            path: origin.to_path_buf(),
            line: idx + 1,
            detail,
        })?;
        catalog.insert(entry);
    }
    Ok(catalog)
}

pub fn load_catalog(path: &Path) -> Result<Catalog> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let catalog = parse_catalog(&text, path)?;
    if catalog.is_empty() {
        // Curated inputs are usually non-empty, but an empty catalog is not
        // corrupt — warn and continue with an empty index.
        eprintln!("warning: catalog {} has no entries", path.display());
    }
    Ok(catalog)
}

fn parse_entry(line: &str) -> std::result::Result<CatalogEntry, String> {
    let (signature, description) = match line.split_once('|') {
        Some((s, d)) => (s.trim(), d.trim()),
        None => (line, ""),
    };
    // Reuse the method grammar: catalogs require the typed form.
    let method = MethodRef::parse(Side::Source, signature)
        .map_err(|e| format!("bad signature {signature:?}: {e}"))?;
    let param_types = method
        .param_types
        .clone()
        .ok_or_else(|| format!("signature {signature:?} must list parameter types in parentheses"))?;
    Ok(CatalogEntry {
        name: method.name,
        param_types,
        description: description.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Catalog {
        parse_catalog(text, Path::new("<test>")).unwrap()
    }

    #[test]
    fn parses_a_small_catalog() {
        let catalog = parse(
            "# header\n\
             get(Object)|Returns the value mapped by name.\n\
             put(String,Object)|Put a key/value pair in the object.\n\
             put(String,int)|Put a key/int pair in the object.\n\
             toString()|Encodes this object as a compact JSON string.\n\
             has(String)|Returns true if this object has a mapping for name.\n\
             remove(String)|Removes the named mapping if it exists.\n\
             length()|Returns the number of name/value mappings.\n\
             keys()|Returns an iterator of the String names in this object.\n\
             isNull(String)|Returns true if there is no value or the value is NULL.\n",
        );
        // Nine lines, but the two put/2 overloads collapse to one entry.
        assert_eq!(catalog.len(), 8);
        assert!(catalog.contains("get", 1));
        assert!(catalog.contains("put", 2));
        assert_eq!(
            catalog.lookup("put", 2).unwrap().description,
            "Put a key/value pair in the object."
        );
        assert!(catalog.lookup("missing", 0).is_none());
    }

    #[test]
    fn merge_keeps_longest_description() {
        let catalog = parse(
            "add(String)|Add.\n\
             add(CharSequence)|Adds the given element to this collection.\n",
        );
        assert_eq!(catalog.len(), 1);
        assert_eq!(
            catalog.lookup("add", 1).unwrap().description,
            "Adds the given element to this collection."
        );
    }

    #[test]
    fn untyped_signature_is_rejected() {
        let err = parse_catalog("get/1|Gets a value.", Path::new("cat")).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("cat:1:"), "{msg}");
    }

    #[test]
    fn empty_description_allowed_but_excluded_from_corpus() {
        let catalog = parse("get(Object)|\nput(String,Object)|Put a pair.\n");
        assert_eq!(catalog.len(), 2);
        assert_eq!(catalog.descriptions().count(), 1);
    }

    #[test]
    fn empty_catalog_is_empty_not_an_error() {
        let catalog = parse("# nothing here\n\n");
        assert!(catalog.is_empty());
    }

    #[test]
    fn library_import_matching() {
        let lib = LibraryRef {
            group_id: "org.json".into(),
            artifact_id: "json".into(),
            version: None,
            package_prefixes: vec!["org.json".into()],
        };
        assert!(lib.matches_import("org.json.JSONObject"));
        assert!(lib.matches_import("org.json.*"));
        assert!(lib.matches_import("org.json"));
        assert!(!lib.matches_import("org.jsonschema.Validator"));
        assert_eq!(lib.to_string(), "org.json:json");
    }
}

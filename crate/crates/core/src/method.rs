//! Method identities.
//!
//! A [`MethodRef`] is the atom every mapping is built from: a method name and
//! arity tagged with the library side it belongs to. Parameter types are
//! optional; call sites extracted from diffs never know them, catalogs may.
//!
//! Text encoding, used in fragment files, mapping reports and ground-truth
//! files: `name/arity` when parameter types are unknown, `name(T1,T2)` when
//! they are known. `getAsLong/0` and `getString(String)` are both valid.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which library of a migration rule a method belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Source,
    Target,
}

impl Side {
    pub fn label(self) -> &'static str {
        match self {
            Side::Source => "source",
            Side::Target => "target",
        }
    }
}

/// One API method identity.
///
/// Equality and ordering are over (side, name, arity, param types when
/// present), which keeps comparisons total and deterministic. Overloads that
/// share an arity collapse to the same reference unless parameter types are
/// spelled out.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MethodRef {
    pub side: Side,
    pub name: String,
    pub arity: usize,
    pub param_types: Option<Vec<String>>,
}

impl MethodRef {
    pub fn new(side: Side, name: impl Into<String>, arity: usize) -> Self {
        MethodRef {
            side,
            name: name.into(),
            arity,
            param_types: None,
        }
    }

    pub fn with_params(side: Side, name: impl Into<String>, params: Vec<String>) -> Self {
        MethodRef {
            side,
            name: name.into(),
            arity: params.len(),
            param_types: Some(params),
        }
    }

    /// Lookup key used by API catalogs: parameter types do not participate.
    pub fn key(&self) -> (&str, usize) {
        (&self.name, self.arity)
    }

    /// Canonical text encoding, `name/arity` or `name(T1,T2)`.
    pub fn encode(&self) -> String {
        match &self.param_types {
            Some(params) => format!("{}({})", self.name, params.join(",")),
            None => format!("{}/{}", self.name, self.arity),
        }
    }

    /// Parse the canonical encoding back into a reference.
    pub fn parse(side: Side, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::MethodEncoding(text.to_string()));
        }
        if let Some(open) = text.find('(') {
            let name = &text[..open];
            let rest = &text[open + 1..];
            let close = rest
                .rfind(')')
                .ok_or_else(|| Error::MethodEncoding(text.to_string()))?;
            if !valid_identifier(name) || !rest[close + 1..].trim().is_empty() {
                return Err(Error::MethodEncoding(text.to_string()));
            }
            let inner = rest[..close].trim();
            let params: Vec<String> = if inner.is_empty() {
                Vec::new()
            } else {
                inner.split(',').map(|p| p.trim().to_string()).collect()
            };
            if params.iter().any(|p| p.is_empty()) {
                return Err(Error::MethodEncoding(text.to_string()));
            }
            return Ok(MethodRef::with_params(side, name, params));
        }
        let (name, arity) = text
            .split_once('/')
            .ok_or_else(|| Error::MethodEncoding(text.to_string()))?;
        if !valid_identifier(name) {
            return Err(Error::MethodEncoding(text.to_string()));
        }
        let arity: usize = arity
            .parse()
            .map_err(|_| Error::MethodEncoding(text.to_string()))?;
        Ok(MethodRef::new(side, name, arity))
    }
}

impl fmt::Display for MethodRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encode())
    }
}

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' || c == '$' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_' || c == '$')
}

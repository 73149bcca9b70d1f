//! Lexical extraction of Java method invocations from source text.
//!
//! This is deliberately a scanner, not a parser: subject projects are never
//! compiled, so calls are recognized as `identifier(...)` patterns after
//! stripping comments and string literals, then gated by the library's API
//! catalog (name + arity must exist) and by the file's imports (they must
//! intersect the library's package prefixes). Constructor calls
//! `new Type(...)` surface as invocations named after the type. The result is
//! best-effort by design — exactly the fidelity a diff-hunk witness needs.

use std::collections::BTreeSet;

use crate::catalog::ApiIndex;
use crate::method::{MethodRef, Side};

/// Java keywords that can precede `(` without being a method name.
const CALL_KEYWORDS: &[&str] = &[
    "if", "for", "while", "switch", "catch", "return", "new", "this", "super",
    "synchronized", "assert", "do", "else", "case", "throw", "instanceof", "try",
];

/// Tokens after which `name(` is a call even though a word precedes it.
const CALL_PRECEDERS: &[&str] = &["return", "new", "throw", "case", "else", "do", "assert"];

/// Replace comments and string/char literal contents with spaces, keeping
/// everything else byte-for-byte. Works across lines (block comments carry).
pub fn strip_noise(text: &str) -> String {
    #[derive(PartialEq)]
    enum State {
        Code,
        LineComment,
        BlockComment,
        Str,
        Chr,
    }
    let mut out = String::with_capacity(text.len());
    let mut state = State::Code;
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match state {
            State::Code => match c {
                '/' if chars.peek() == Some(&'/') => {
                    chars.next();
                    out.push_str("  ");
                    state = State::LineComment;
                }
                '/' if chars.peek() == Some(&'*') => {
                    chars.next();
                    out.push_str("  ");
                    state = State::BlockComment;
                }
                '"' => {
                    out.push('"');
                    state = State::Str;
                }
                '\'' => {
                    out.push('\'');
                    state = State::Chr;
                }
                _ => out.push(c),
            },
            State::LineComment => {
                if c == '\n' {
                    out.push('\n');
                    state = State::Code;
                } else {
                    out.push(' ');
                }
            }
            State::BlockComment => {
                if c == '*' && chars.peek() == Some(&'/') {
                    chars.next();
                    out.push_str("  ");
                    state = State::Code;
                } else {
                    out.push(if c == '\n' { '\n' } else { ' ' });
                }
            }
            State::Str => match c {
                '\\' => {
                    chars.next();
                    out.push_str("  ");
                }
                '"' => {
                    out.push('"');
                    state = State::Code;
                }
                // Literal cut off by a diff boundary: don't blank the rest.
                '\n' => {
                    out.push('\n');
                    state = State::Code;
                }
                _ => out.push(' '),
            },
            State::Chr => match c {
                '\\' => {
                    chars.next();
                    out.push_str("  ");
                }
                '\'' => {
                    out.push('\'');
                    state = State::Code;
                }
                '\n' => {
                    out.push('\n');
                    state = State::Code;
                }
                _ => out.push(' '),
            },
        }
    }
    out
}

/// Import paths declared by a compilation unit (`.*` wildcards kept,
/// `static` dropped).
pub fn extract_imports(text: &str) -> Vec<String> {
    let cleaned = strip_noise(text);
    let mut imports = Vec::new();
    for line in cleaned.lines() {
        let line = line.trim();
        let Some(rest) = line.strip_prefix("import ") else {
            continue;
        };
        let Some(path) = rest.split(';').next() else {
            continue;
        };
        let path = path.trim().strip_prefix("static ").unwrap_or(path.trim()).trim();
        if !path.is_empty() {
            imports.push(path.to_string());
        }
    }
    imports
}

/// Every syntactic invocation in `text` whose (name, arity) exists in the
/// library's catalog, provided the file's imports intersect the library's
/// package prefixes. Nested calls are all found: `foo(bar(1), 2)` yields both
/// `foo/2` and `bar/1`.
pub fn extract_calls(
    text: &str,
    imports: &[String],
    index: &ApiIndex,
    side: Side,
) -> BTreeSet<MethodRef> {
    let mut calls = BTreeSet::new();
    if !index.imports_match(imports) {
        return calls;
    }
    let cleaned = strip_noise(text);
    let bytes = cleaned.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if !is_ident_start(bytes[i]) || (i > 0 && is_ident_char(bytes[i - 1])) {
            i += 1;
            continue;
        }
        let start = i;
        while i < bytes.len() && is_ident_char(bytes[i]) {
            i += 1;
        }
        let name = &cleaned[start..i];
        // A call requires `(` as the next non-space character on this line.
        let mut j = i;
        while j < bytes.len() && (bytes[j] == b' ' || bytes[j] == b'\t') {
            j += 1;
        }
        if j >= bytes.len() || bytes[j] != b'(' {
            continue;
        }
        if CALL_KEYWORDS.contains(&name) || looks_like_declaration(&cleaned, start) {
            continue;
        }
        if let Some(arity) = count_arity(bytes, j) {
            if index.catalog.contains(name, arity) {
                calls.insert(MethodRef::new(side, name, arity));
            }
        }
        // Resume just past `(` so calls nested in the argument list are seen.
        i = j + 1;
    }
    calls
}

/// Heuristic declaration filter: `void put(String k)` must not read as a call
/// to put/1. A preceding identifier-like token (a type or modifier) marks a
/// declaration unless it is a keyword that legitimately precedes a call.
fn looks_like_declaration(text: &str, name_start: usize) -> bool {
    let before = text[..name_start].trim_end();
    let Some(last) = before.chars().last() else {
        return false;
    };
    if !is_ident_char(last as u8) {
        // Preceded by punctuation: `.foo(`, `=foo(`, `(foo(`, `@Anno(` is
        // handled by the annotation char itself never being a call name.
        return last == '@';
    }
    let token_start = before
        .rfind(|c: char| !is_ident_char(c as u8))
        .map(|p| p + 1)
        .unwrap_or(0);
    let token = &before[token_start..];
    !CALL_PRECEDERS.contains(&token)
}

/// Count top-level commas between a `(` at `open` and its matching `)`.
/// Returns `None` when the text ends before the parenthesis closes.
fn count_arity(bytes: &[u8], open: usize) -> Option<usize> {
    let mut depth = 1usize;
    let mut commas = 0usize;
    let mut content = false;
    let mut i = open + 1;
    while i < bytes.len() {
        match bytes[i] {
            b'(' | b'[' | b'{' => depth += 1,
            b')' | b']' | b'}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(if content { commas + 1 } else { 0 });
                }
            }
            b',' if depth == 1 => {
                commas += 1;
                content = true;
            }
            c if !c.is_ascii_whitespace() => content = true,
            _ => {}
        }
        i += 1;
    }
    None
}

fn is_ident_start(b: u8) -> bool {
    b.is_ascii_alphabetic() || b == b'_' || b == b'$'
}

fn is_ident_char(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_' || b == b'$'
}

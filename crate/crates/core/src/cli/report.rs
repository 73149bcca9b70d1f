//! Report plumbing: provenance headers, atomic writes, and the frequency
//! histogram the detect command prints.
//!
//! Every text report starts with `#` comment lines recording the tool
//! version, a hash of the configuration, the seed (when the command is
//! seeded), and the stopword-list version. A timestamp line is appended
//! unless suppressed — it is the only permitted source of nondeterminism in
//! any output file.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::fragment::FragmentSet;
use crate::simdoc::STOPWORDS_VERSION;
use crate::util::write_atomic;

pub const TOOL_NAME: &str = "migmap";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Provenance stamped onto every report.
#[derive(Debug, Clone, Copy)]
pub struct ReportMeta {
    pub config_hash: u64,
    pub seed: Option<u64>,
    /// Suppress the timestamp line for byte-identical reruns.
    pub timestamp: bool,
}

impl ReportMeta {
    pub fn header_lines(&self) -> Vec<String> {
        let mut lines = vec![
            format!("# {TOOL_NAME} {TOOL_VERSION}"),
            format!("# config: {:016x}", self.config_hash),
            match self.seed {
                Some(seed) => format!("# seed: {seed}"),
                None => "# seed: none".to_string(),
            },
            format!("# stopwords: {STOPWORDS_VERSION}"),
        ];
        if self.timestamp {
            lines.push(format!(
                "# generated: {}",
                chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ")
            ));
        }
        lines
    }

    /// The same provenance as a JSON-embeddable object.
    pub fn json_meta(&self) -> JsonMeta {
        JsonMeta {
            tool: TOOL_NAME,
            version: TOOL_VERSION,
            config: format!("{:016x}", self.config_hash),
            seed: self.seed,
            stopwords: STOPWORDS_VERSION,
            generated: self
                .timestamp
                .then(|| chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ").to_string()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct JsonMeta {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub stopwords: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated: Option<String>,
}

/// Write a `#`-headed text report atomically. `extra_header` lines are
/// emitted verbatim after the standard provenance block.
pub fn write_text_report(
    path: &Path,
    meta: &ReportMeta,
    extra_header: &[String],
    body: &str,
) -> Result<()> {
    let mut text = String::new();
    for line in meta.header_lines() {
        text.push_str(&line);
        text.push('\n');
    }
    for line in extra_header {
        text.push_str(line);
        text.push('\n');
    }
    text.push_str(body);
    if !text.ends_with('\n') {
        text.push('\n');
    }
    write_atomic(path, &text)
}

/// Quote a CSV cell per RFC 4180 when it contains a delimiter or quote.
pub fn csv_cell(value: &str) -> String {
    if value.contains(',') || value.contains('"') || value.contains('\n') {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

/// Fixed-precision float for CSV cells; full precision lives in the JSON.
pub fn csv_float(value: f64) -> String {
    format!("{value:.6}")
}

/// `frequency -> number of distinct fragments` histogram, rendered one
/// `  freq: count` line per row.
pub fn frequency_histogram(set: &FragmentSet) -> String {
    let mut histogram: BTreeMap<u64, usize> = BTreeMap::new();
    for fragment in set.iter() {
        *histogram.entry(fragment.frequency).or_default() += 1;
    }
    let mut out = String::from("frequency histogram (frequency: fragments):\n");
    if histogram.is_empty() {
        out.push_str("  (empty)\n");
    }
    for (freq, count) in histogram {
        out.push_str(&format!("  {freq}: {count}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fragment::Fragment;
    use crate::method::{MethodRef, Side};

    #[test]
    fn header_without_timestamp_is_stable() {
        let meta = ReportMeta {
            config_hash: 0xabcd,
            seed: Some(17),
            timestamp: false,
        };
        let lines = meta.header_lines();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("# migmap "));
        assert_eq!(lines[1], "# config: 000000000000abcd");
        assert_eq!(lines[2], "# seed: 17");
        assert!(lines[3].starts_with("# stopwords: "));
    }

    #[test]
    fn timestamp_line_is_optional() {
        let meta = ReportMeta {
            config_hash: 0,
            seed: None,
            timestamp: true,
        };
        assert!(meta
            .header_lines()
            .iter()
            .any(|l| l.starts_with("# generated: ")));
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_cell("plain"), "plain");
        assert_eq!(csv_cell("a,b"), "\"a,b\"");
        assert_eq!(csv_cell("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn histogram_groups_by_frequency() {
        let mk = |name: &str, freq: u64| {
            Fragment::new(
                [MethodRef::new(Side::Source, name, 0)],
                [MethodRef::new(Side::Target, "x", 0)],
                freq,
            )
            .unwrap()
        };
        let set = FragmentSet::from_fragments([mk("a", 1), mk("b", 1), mk("c", 3)]);
        let text = frequency_histogram(&set);
        assert!(text.contains("  1: 2\n"));
        assert!(text.contains("  3: 1\n"));
    }
}

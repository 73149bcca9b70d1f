//! Accuracy metrics: TPR (recall against the expected pool), precision, and
//! f-measure, under exact-set mapping identity.

use std::collections::BTreeSet;

use serde::Serialize;

use super::truth::GroundTruth;
use crate::mapping::Mapping;

/// Scores for one approach on one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalReport {
    /// Correctly extracted mappings.
    pub vx: u64,
    /// Expected mappings.
    pub ux: u64,
    /// Distinct mappings produced.
    pub generated: u64,
    pub tpr: f64,
    pub precision: f64,
    pub fmeasure: f64,
    /// Set when the approach produced nothing; precision is then defined as 0
    /// rather than 0/0.
    pub empty_output: bool,
}

/// 2PR/(P+R), or 0 when the denominator vanishes.
pub fn fmeasure(precision: f64, recall: f64) -> f64 {
    let denom = precision + recall;
    if denom == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / denom
    }
}

/// Match generated mappings against the expected pool on exact
/// (removed, added) set equality and compute all three metrics.
pub fn score(generated: &[Mapping], truth: &GroundTruth) -> EvalReport {
    // Mappings are identified by content; duplicates count once.
    let distinct: BTreeSet<_> = generated.iter().map(|m| (&m.removed, &m.added)).collect();
    let vx = distinct
        .iter()
        .filter(|(r, a)| truth.contains(r, a))
        .count() as u64;
    let ux = truth.len() as u64;
    let n_generated = distinct.len() as u64;

    let tpr = if ux == 0 { 0.0 } else { vx as f64 / ux as f64 };
    let empty_output = n_generated == 0;
    let precision = if empty_output {
        0.0
    } else {
        vx as f64 / n_generated as f64
    };
    EvalReport {
        vx,
        ux,
        generated: n_generated,
        tpr,
        precision,
        fmeasure: fmeasure(precision, tpr),
        empty_output,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::method::{MethodRef, Side};

    fn mapping(removed: &[&str], added: &[&str]) -> Mapping {
        Mapping {
            removed: removed
                .iter()
                .map(|m| MethodRef::parse(Side::Source, m).unwrap())
                .collect(),
            added: added
                .iter()
                .map(|m| MethodRef::parse(Side::Target, m).unwrap())
                .collect(),
            support: 1,
            similarity: None,
            resolved: true,
        }
    }

    fn truth(lines: &str) -> GroundTruth {
        super::super::truth::parse_truth(lines, std::path::Path::new("<test>")).unwrap()
    }

    #[test]
    fn perfect_output_scores_one() {
        let t = truth("a/0;x/0\nb/0;y/0\n");
        let generated = vec![mapping(&["a/0"], &["x/0"]), mapping(&["b/0"], &["y/0"])];
        let report = score(&generated, &t);
        assert_eq!(report.vx, 2);
        assert_eq!(report.tpr, 1.0);
        assert_eq!(report.precision, 1.0);
        assert_eq!(report.fmeasure, 1.0);
    }

    #[test]
    fn half_recall_full_precision() {
        // Vx=1, Ux=2, generated=1: tpr 0.5, precision 1, f = 2/3.
        let t = truth("a/0;x/0\nb/0;y/0\n");
        let generated = vec![mapping(&["a/0"], &["x/0"])];
        let report = score(&generated, &t);
        assert!((report.tpr - 0.5).abs() < 1e-12);
        assert!((report.precision - 1.0).abs() < 1e-12);
        assert!((report.fmeasure - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn empty_output_is_flagged_zero() {
        let t = truth("a/0;x/0\n");
        let report = score(&[], &t);
        assert!(report.empty_output);
        assert_eq!(report.precision, 0.0);
        assert_eq!(report.tpr, 0.0);
        assert_eq!(report.fmeasure, 0.0);
    }

    #[test]
    fn partial_mapping_is_not_a_match() {
        // {a,b}->{x} expected; emitting only {a}->{x} is wrong.
        let t = truth("a/0,b/0;x/0\n");
        let generated = vec![mapping(&["a/0"], &["x/0"])];
        let report = score(&generated, &t);
        assert_eq!(report.vx, 0);
        assert_eq!(report.fmeasure, 0.0);
    }

    #[test]
    fn duplicates_count_once() {
        let t = truth("a/0;x/0\n");
        let generated = vec![mapping(&["a/0"], &["x/0"]), mapping(&["a/0"], &["x/0"])];
        let report = score(&generated, &t);
        assert_eq!(report.generated, 1);
        assert_eq!(report.precision, 1.0);
    }

    #[test]
    fn fmeasure_identities() {
        assert_eq!(fmeasure(0.0, 0.0), 0.0);
        for x in [0.1, 0.5, 0.9, 1.0] {
            assert!((fmeasure(x, x) - x).abs() < 1e-12);
        }
        assert!((fmeasure(0.3, 0.7) - fmeasure(0.7, 0.3)).abs() < 1e-12);
    }
}

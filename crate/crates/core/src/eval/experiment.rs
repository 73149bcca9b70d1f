//! The randomized-fragment experiment grid: for every (setting, fragment
//! size, fragment count) cell, synthesize fragments 30 times, run the
//! substitution engine and the three baselines, and aggregate f-measures
//! into plot-ready curves.

use serde::Serialize;

use super::metrics::{score, EvalReport};
use super::synth::{synthesize_fragments, Setting};
use super::truth::GroundTruth;
use crate::baselines::{
    fc_doc_invocations, fc_mappings, fs_mappings, mc_doc_invocations, mc_mappings,
};
use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::fragment::FragmentSet;
use crate::mapping::{substitution, LdScorer};
use crate::simdoc::VectorSpace;
use crate::util::fnv1a64;

pub const APPROACHES: [&str; 4] = ["SA", "FC", "MC", "FS"];

/// Grid description; the defaults reproduce the full evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub settings: Vec<Setting>,
    pub max_methods: Vec<usize>,
    pub counts: Vec<usize>,
    pub runs: u32,
    pub seed: u64,
    pub fc_threshold: u64,
    pub fs_threshold: f64,
    pub ld_floor: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            settings: vec![Setting::A, Setting::B, Setting::C],
            max_methods: vec![5, 10, 20],
            counts: vec![5, 11, 21, 51, 101, 201, 501, 1001, 1401],
            runs: 30,
            seed: 17,
            fc_threshold: 2,
            fs_threshold: 0.5,
            ld_floor: 0.5,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.settings.is_empty() || self.max_methods.is_empty() || self.counts.is_empty() {
            return Err(Error::Config(
                "experiment grid needs at least one setting, size, and count".to_string(),
            ));
        }
        if self.runs < 1 {
            return Err(Error::Config("runs must be at least 1".to_string()));
        }
        if let Some(&bad) = self.counts.iter().find(|c| !(5..=1500).contains(*c)) {
            return Err(Error::Config(format!(
                "fragment count {bad} outside the supported 5..=1500 range"
            )));
        }
        if let Some(&bad) = self.max_methods.iter().find(|m| **m < 2) {
            return Err(Error::Config(format!(
                "max_methods {bad} cannot hold a mapping"
            )));
        }
        Ok(())
    }
}

/// One plotted point: mean f-measure of one approach in one cell.
#[derive(Debug, Clone, Serialize)]
pub struct CurveRow {
    pub setting: Setting,
    pub max_methods: usize,
    pub fragment_count: usize,
    pub approach: &'static str,
    pub mean_fmeasure: f64,
    pub stddev: f64,
}

/// Documentation-lookup totals over a cell's runs (setting C only).
#[derive(Debug, Clone, Serialize)]
pub struct LdCountRow {
    pub setting: Setting,
    pub max_methods: usize,
    pub fragment_count: usize,
    pub sa: u64,
    pub fc: u64,
    pub mc: u64,
}

/// Per-approach averages at the largest fragment count of a (setting, size)
/// slice — the asymptotic regime the comparison table quotes.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub setting: Setting,
    pub max_methods: usize,
    pub approach: &'static str,
    pub tpr: f64,
    pub precision: f64,
    pub fmeasure: f64,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ExperimentOutput {
    pub curves: Vec<CurveRow>,
    pub ld_counts: Vec<LdCountRow>,
    pub summary: Vec<SummaryRow>,
}

/// Per-run seed: a stable fingerprint of (base seed, cell, run index), so
/// cells are independent and any single run can be reproduced in isolation.
pub fn derive_run_seed(
    base: u64,
    setting: Setting,
    max_methods: usize,
    count: usize,
    run: u32,
) -> u64 {
    let mut bytes = Vec::with_capacity(29);
    bytes.extend_from_slice(&base.to_le_bytes());
    bytes.push(setting.as_str().as_bytes()[0]);
    bytes.extend_from_slice(&(max_methods as u64).to_le_bytes());
    bytes.extend_from_slice(&(count as u64).to_le_bytes());
    bytes.extend_from_slice(&run.to_le_bytes());
    fnv1a64(&bytes)
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn stddev(xs: &[f64], mu: f64) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let var = xs.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / (xs.len() - 1) as f64;
    var.sqrt()
}

/// Run the whole grid. `source`/`target` are the catalogs behind the truth
/// pool; FS maps between them and setting C scores descriptions from them.
pub fn run_experiment(
    config: &ExperimentConfig,
    pool: &GroundTruth,
    source: &Catalog,
    target: &Catalog,
) -> Result<ExperimentOutput> {
    config.validate()?;
    if pool.is_empty() {
        return Err(Error::Config("ground-truth pool is empty".to_string()));
    }
    let space = VectorSpace::build(source.descriptions().chain(target.descriptions()));
    let fs_generated = fs_mappings(source, target, config.fs_threshold);

    let mut output = ExperimentOutput::default();
    for &setting in &config.settings {
        let truth_eff = setting.effective_truth(pool);
        if truth_eff.is_empty() {
            return Err(Error::Config(format!(
                "pool has no mappings usable in setting {setting}"
            )));
        }
        // FS ignores fragments, so its report is constant across the grid.
        let fs_report = score(&fs_generated, &truth_eff);

        for &max_methods in &config.max_methods {
            for &count in &config.counts {
                let mut reports: [Vec<EvalReport>; 4] = Default::default();
                let mut ld_totals = (0u64, 0u64, 0u64); // SA, FC, MC

                for run in 0..config.runs {
                    let seed = derive_run_seed(config.seed, setting, max_methods, count, run);
                    let fragments =
                        synthesize_fragments(pool, setting, max_methods, count, seed)?;

                    let sa_out = if setting.ld_enabled() {
                        let mut scorer =
                            LdScorer::with_space(space.clone(), source, target, config.ld_floor);
                        let out = substitution(&fragments, Some(&mut scorer))?;
                        ld_totals.0 += scorer.invocations();
                        out
                    } else {
                        substitution(&fragments, None)?
                    };

                    let set = FragmentSet::from_fragments(fragments);
                    let fc_generated = fc_mappings(&set, config.fc_threshold);
                    let mc_generated = mc_mappings(&set);
                    if setting.ld_enabled() {
                        ld_totals.1 += fc_doc_invocations(&set, &fc_generated);
                        ld_totals.2 += mc_doc_invocations(&set);
                    }

                    reports[0].push(score(&sa_out.mappings, &truth_eff));
                    reports[1].push(score(&fc_generated, &truth_eff));
                    reports[2].push(score(&mc_generated, &truth_eff));
                    reports[3].push(fs_report);
                }

                for (i, approach) in APPROACHES.iter().enumerate() {
                    let fs: Vec<f64> = reports[i].iter().map(|r| r.fmeasure).collect();
                    let mu = mean(&fs);
                    output.curves.push(CurveRow {
                        setting,
                        max_methods,
                        fragment_count: count,
                        approach,
                        mean_fmeasure: mu,
                        stddev: stddev(&fs, mu),
                    });
                }
                if setting.ld_enabled() {
                    output.ld_counts.push(LdCountRow {
                        setting,
                        max_methods,
                        fragment_count: count,
                        sa: ld_totals.0,
                        fc: ld_totals.1,
                        mc: ld_totals.2,
                    });
                }
                if Some(&count) == config.counts.last() {
                    for (i, approach) in APPROACHES.iter().enumerate() {
                        output.summary.push(SummaryRow {
                            setting,
                            max_methods,
                            approach,
                            tpr: mean(&reports[i].iter().map(|r| r.tpr).collect::<Vec<_>>()),
                            precision: mean(
                                &reports[i].iter().map(|r| r.precision).collect::<Vec<_>>(),
                            ),
                            fmeasure: mean(
                                &reports[i].iter().map(|r| r.fmeasure).collect::<Vec<_>>(),
                            ),
                        });
                    }
                }
            }
        }
    }
    Ok(output)
}

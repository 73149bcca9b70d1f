//! Evaluation harness: ground-truth pools, accuracy metrics, the synthetic
//! fragment generator, and the experiment grid comparing the substitution
//! engine against the baselines.

mod experiment;
mod metrics;
mod synth;
mod truth;

pub use experiment::{
    run_experiment, CurveRow, ExperimentConfig, ExperimentOutput, LdCountRow, SummaryRow,
};
pub use metrics::{fmeasure, score, EvalReport};
pub use synth::{synthesize_fragments, Setting};
pub use truth::{load_truth, parse_truth, GroundTruth};

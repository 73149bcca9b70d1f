//! Command-line orchestration: declarative configuration, the four commands
//! (mine, detect, map, eval), and report emission.

pub mod commands;
pub mod config;
pub mod report;

pub use commands::{cmd_detect, cmd_eval, cmd_map, cmd_mine, load_config, Overrides};
pub use config::{LibraryConfig, RuleConfig, RunConfig, Thresholds};
pub use report::{frequency_histogram, ReportMeta, TOOL_NAME, TOOL_VERSION};

//! `migmap` — mine library migrations from git histories and map replaced
//! API methods.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use migmap::cli::{cmd_detect, cmd_eval, cmd_map, cmd_mine, load_config, Overrides};

#[derive(Parser)]
#[command(
    name = "migmap",
    version,
    about = "Mine library migrations from git histories and map replaced API methods"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Run configuration (TOML).
    #[arg(long, default_value = "migmap.toml", global = false)]
    config: PathBuf,
    /// Override the configured work directory (indexes live here).
    #[arg(long)]
    workdir: Option<PathBuf>,
    /// Override the configured output directory (reports live here).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the experiment seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Omit the timestamp header line so reruns are byte-identical.
    #[arg(long)]
    no_timestamp: bool,
}

impl CommonArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            workdir: self.workdir.clone(),
            out: self.out.clone(),
            seed: self.seed,
            no_timestamp: self.no_timestamp,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Index every corpus repository: commits, changed files, manifest events.
    Mine {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Detect migration segments for a rule and extract its fragments.
    Detect {
        /// Rule to detect, as `<source>:<target>` library names.
        #[arg(long)]
        rule: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Turn a fragment file into method mappings.
    Map {
        /// JSON-lines fragment file (one fragment per line).
        #[arg(long)]
        fragments: PathBuf,
        /// Rule whose catalogs score description similarity.
        #[arg(long)]
        rule: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the synthetic evaluation grid and emit curve/summary reports.
    Eval {
        /// Run configuration (TOML); alias kept because eval is config-driven.
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn run(command: &Command) -> migmap::Result<()> {
    match command {
        Command::Mine { common } => {
            let config = load_config(&common.config, &common.overrides())?;
            cmd_mine(&config)
        }
        Command::Detect { rule, common } => {
            let overrides = common.overrides();
            let config = load_config(&common.config, &overrides)?;
            cmd_detect(&config, rule.as_deref(), &overrides)
        }
        Command::Map {
            fragments,
            rule,
            common,
        } => {
            let overrides = common.overrides();
            let config = load_config(&common.config, &overrides)?;
            cmd_map(&config, fragments, rule.as_deref(), &overrides)
        }
        Command::Eval { common } => {
            let overrides = common.overrides();
            let config = load_config(&common.config, &overrides)?;
            cmd_eval(&config, &overrides)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version are successful exits; anything else is a
            // usage error (exit 1 by this tool's convention).
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

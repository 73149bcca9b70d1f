//! The four commands: mine (index repositories), detect (segments and
//! fragments for one rule), map (fragments to method mappings), and eval
//! (the synthetic experiment grid).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::catalog::load_catalog;
use crate::cli::config::RunConfig;
use crate::cli::report::{
    csv_cell, csv_float, frequency_histogram, write_text_report, ReportMeta,
};
use crate::corpus::{GitRepo, ProjectIndex};
use crate::detect::{detect_segments, extract_fragments, Segment};
use crate::error::{Error, Result};
use crate::eval::{load_truth, run_experiment, ExperimentOutput};
use crate::fragment::{read_fragments_file, Fragment, FragmentSet};
use crate::mapping::{substitution, Cardinality, LdScorer};
use crate::util::write_atomic;

/// Flag overrides common to all commands.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub workdir: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub no_timestamp: bool,
}

impl Overrides {
    fn apply(&self, config: &mut RunConfig) {
        if let Some(workdir) = &self.workdir {
            config.workdir = workdir.clone();
        }
        if let Some(out) = &self.out {
            config.output = out.clone();
        }
    }

    fn meta(&self, config: &RunConfig, seed: Option<u64>) -> ReportMeta {
        ReportMeta {
            config_hash: config.config_hash,
            seed,
            timestamp: !self.no_timestamp,
        }
    }
}

pub fn load_config(path: &Path, overrides: &Overrides) -> Result<RunConfig> {
    let mut config = RunConfig::load(path)?;
    overrides.apply(&mut config);
    Ok(config)
}

/// Scan every repository in the corpus manifest into a per-project index.
/// Individual failures are logged and skipped; only a completely failed
/// corpus is an error.
pub fn cmd_mine(config: &RunConfig) -> Result<()> {
    let manifest = config.corpus.as_ref().ok_or_else(|| {
        Error::Usage("config has no corpus manifest; set `corpus = \"<file>\"`".to_string())
    })?;
    let text = std::fs::read_to_string(manifest).map_err(|e| Error::io(manifest, e))?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    let repos: Vec<PathBuf> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let p = Path::new(l);
            if p.is_absolute() {
                p.to_path_buf()
            } else {
                base.join(p)
            }
        })
        .collect();
    if repos.is_empty() {
        return Err(Error::Usage(format!(
            "corpus manifest {} is empty; list one repository path per line",
            manifest.display()
        )));
    }

    let mut indexed = 0usize;
    let mut commits = 0usize;
    let mut events = 0usize;
    for repo_path in &repos {
        let name = project_name(repo_path);
        let outcome = GitRepo::open(repo_path)
            .and_then(|repo| ProjectIndex::build(&repo, &name))
            .and_then(|index| index.write(&config.workdir).map(|_| index));
        match outcome {
            Ok(index) => {
                for warning in &index.warnings {
                    eprintln!("warning: {}: {warning}", index.name);
                }
                println!(
                    "indexed {}: {} commits, {} manifest events",
                    index.name,
                    index.commits.len(),
                    index.dependency_changes.len()
                );
                indexed += 1;
                commits += index.commits.len();
                events += index.dependency_changes.len();
            }
            Err(err) => eprintln!("warning: skipping {}: {err}", repo_path.display()),
        }
    }
    if indexed == 0 {
        return Err(Error::Corpus(format!(
            "none of the {} corpus repositories could be indexed",
            repos.len()
        )));
    }
    println!(
        "mined {indexed} of {} projects: {commits} commits, {events} manifest events",
        repos.len()
    );
    Ok(())
}

/// Directory name of the repository, without a `.git` suffix.
fn project_name(path: &Path) -> String {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "project".to_string());
    name.strip_suffix(".git").unwrap_or(&name).to_string()
}

/// All indexed project names under the workdir, sorted for determinism.
fn project_names(workdir: &Path) -> Result<Vec<String>> {
    let dir = workdir.join("index");
    let entries = std::fs::read_dir(&dir).map_err(|_| {
        Error::Corpus(format!(
            "no project indexes under {}; run `mine` first",
            dir.display()
        ))
    })?;
    let mut names = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(&dir, e))?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if ProjectIndex::index_path(workdir, &name).is_file() {
            names.push(name);
        }
    }
    names.sort();
    if names.is_empty() {
        return Err(Error::Corpus(format!(
            "no project indexes under {}; run `mine` first",
            dir.display()
        )));
    }
    Ok(names)
}

/// Detect segments for one rule across all indexed projects and write the
/// segments report plus the JSON-lines fragment file.
pub fn cmd_detect(config: &RunConfig, rule_arg: Option<&str>, overrides: &Overrides) -> Result<()> {
    let rule = config.resolve_rule(rule_arg)?;
    let (migration, src, dst) = config.rule_indexes(rule)?;
    let mut segments: Vec<Segment> = Vec::new();
    let mut occurrences: Vec<Fragment> = Vec::new();
    for name in project_names(&config.workdir)? {
        let index = ProjectIndex::load(&config.workdir, &name)?;
        let repo = GitRepo::open(Path::new(&index.repo_path))?;
        for segment in detect_segments(&repo, &index, &src, &dst)? {
            occurrences.extend(extract_fragments(&repo, &index, &segment, &src, &dst)?);
            segments.push(segment);
        }
    }
    let set = FragmentSet::from_fragments(occurrences.clone());

    let meta = overrides.meta(config, None);
    let stem = format!("{}-{}", rule.source, rule.target);
    let segments_path = config.output.join(format!("{stem}.segments.csv"));
    let mut body = String::from(
        "project,rule,start_commit,end_commit,source_version,target_version\n",
    );
    for s in &segments {
        writeln!(
            body,
            "{},{},{},{},{},{}",
            csv_cell(&s.project),
            csv_cell(&s.rule.to_string()),
            s.start_commit,
            s.end_commit,
            csv_cell(&s.source_version),
            csv_cell(&s.target_version)
        )
        .expect("write to string");
    }
    write_text_report(&segments_path, &meta, &[], &body)?;

    let fragments_path = config.output.join(format!("{stem}.fragments.jsonl"));
    let mut body = String::new();
    for fragment in set.iter() {
        body.push_str(&fragment.to_json_line());
        body.push('\n');
    }
    write_text_report(&fragments_path, &meta, &[], &body)?;

    println!(
        "rule {migration}: {} segment(s), {} fragment occurrence(s), {} distinct",
        segments.len(),
        occurrences.len(),
        set.len()
    );
    print!("{}", frequency_histogram(&set));
    println!("segments report: {}", segments_path.display());
    println!("fragment file: {}", fragments_path.display());
    Ok(())
}

/// Run the substitution engine over a fragment file and write the mapping
/// report (JSON lines plus a CSV summary).
pub fn cmd_map(
    config: &RunConfig,
    fragments_path: &Path,
    rule_arg: Option<&str>,
    overrides: &Overrides,
) -> Result<()> {
    let rule = config.resolve_rule(rule_arg)?;
    let (_, src, dst) = config.rule_indexes(rule)?;
    let fragments = read_fragments_file(fragments_path)?;
    let mut scorer = LdScorer::new(&src.catalog, &dst.catalog, config.thresholds.ld_floor);
    let outcome = substitution(&fragments, Some(&mut scorer))?;

    let meta = overrides.meta(config, None);
    let stats_header = vec![
        format!("# fragments: {}", fragments.len()),
        format!("# intersections: {}", outcome.stats.intersections),
        format!("# ld_born: {}", outcome.stats.ld_born),
        format!("# ld_invocations: {}", outcome.stats.doc_invocations),
    ];

    let jsonl_path = config.output.join("mappings.jsonl");
    let mut body = String::new();
    for mapping in &outcome.mappings {
        body.push_str(&mapping.to_json_line());
        body.push('\n');
    }
    write_text_report(&jsonl_path, &meta, &stats_header, &body)?;

    let csv_path = config.output.join("mappings.csv");
    let mut body = String::from("removed,added,cardinality,support,similarity,resolved\n");
    for m in &outcome.mappings {
        let removed: Vec<String> = m.removed.iter().map(|r| r.encode()).collect();
        let added: Vec<String> = m.added.iter().map(|a| a.encode()).collect();
        writeln!(
            body,
            "{},{},{},{},{},{}",
            csv_cell(&removed.join(",")),
            csv_cell(&added.join(",")),
            m.cardinality(),
            m.support,
            m.similarity.map(csv_float).unwrap_or_default(),
            m.resolved
        )
        .expect("write to string");
    }
    write_text_report(&csv_path, &meta, &stats_header, &body)?;

    let count_of = |c: Cardinality| {
        outcome
            .mappings
            .iter()
            .filter(|m| m.cardinality() == c)
            .count()
    };
    println!(
        "{} mapping(s): {} one-to-one, {} one-to-many, {} many-to-many ({} unresolved)",
        outcome.mappings.len(),
        count_of(Cardinality::OneToOne),
        count_of(Cardinality::OneToMany),
        count_of(Cardinality::ManyToMany),
        outcome.mappings.iter().filter(|m| !m.resolved).count()
    );
    println!(
        "documentation lookups: {} (fragments {}, intersections {}, splits {})",
        outcome.stats.doc_invocations,
        fragments.len(),
        outcome.stats.intersections,
        outcome.stats.ld_born
    );
    println!("mapping report: {} and {}", jsonl_path.display(), csv_path.display());
    Ok(())
}

/// Run the full experiment grid and write curve, lookup-count, and summary
/// reports.
pub fn cmd_eval(config: &RunConfig, overrides: &Overrides) -> Result<()> {
    let experiment = config.experiment_config(overrides.seed)?;
    let section = config.experiment.as_ref().expect("validated by experiment_config");
    let pool = load_truth(&section.truth)?;
    let source = load_catalog(&section.source_catalog)?;
    let target = load_catalog(&section.target_catalog)?;
    let output = run_experiment(&experiment, &pool, &source, &target)?;

    let meta = overrides.meta(config, Some(experiment.seed));
    let mut extra = vec![format!(
        "# grid: {} settings x {} sizes x {} counts x {} runs",
        experiment.settings.len(),
        experiment.max_methods.len(),
        experiment.counts.len(),
        experiment.runs
    )];
    if experiment.runs == 1 {
        extra.push("# low-confidence: single run per cell".to_string());
    }

    write_curves_csv(config, &meta, &extra, &output)?;
    write_curves_json(config, &meta, &extra, &output)?;
    write_ld_counts_csv(config, &meta, &extra, &output)?;
    write_summary_csv(config, &meta, &extra, &output)?;
    print_summary_table(&output);
    println!(
        "evaluation reports written under {}",
        config.output.display()
    );
    Ok(())
}

fn write_curves_csv(
    config: &RunConfig,
    meta: &ReportMeta,
    extra: &[String],
    output: &ExperimentOutput,
) -> Result<()> {
    let mut body =
        String::from("setting,max_methods,fragment_count,approach,mean_fmeasure,stddev\n");
    for row in &output.curves {
        writeln!(
            body,
            "{},{},{},{},{},{}",
            row.setting,
            row.max_methods,
            row.fragment_count,
            row.approach,
            csv_float(row.mean_fmeasure),
            csv_float(row.stddev)
        )
        .expect("write to string");
    }
    write_text_report(&config.output.join("curves.csv"), meta, extra, &body)
}

fn write_curves_json(
    config: &RunConfig,
    meta: &ReportMeta,
    extra: &[String],
    output: &ExperimentOutput,
) -> Result<()> {
    // JSON cannot carry `#` comments; the same provenance goes in `meta`.
    #[derive(serde::Serialize)]
    struct Doc<'a> {
        meta: crate::cli::report::JsonMeta,
        low_confidence: bool,
        #[serde(flatten)]
        output: &'a ExperimentOutput,
    }
    let doc = Doc {
        meta: meta.json_meta(),
        low_confidence: extra.iter().any(|l| l.starts_with("# low-confidence")),
        output,
    };
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    write_atomic(&config.output.join("curves.json"), &text)
}

fn write_ld_counts_csv(
    config: &RunConfig,
    meta: &ReportMeta,
    extra: &[String],
    output: &ExperimentOutput,
) -> Result<()> {
    let mut body = String::from("setting,max_methods,fragment_count,sa,fc,mc\n");
    for row in &output.ld_counts {
        writeln!(
            body,
            "{},{},{},{},{},{}",
            row.setting, row.max_methods, row.fragment_count, row.sa, row.fc, row.mc
        )
        .expect("write to string");
    }
    write_text_report(&config.output.join("ld_counts.csv"), meta, extra, &body)
}

fn write_summary_csv(
    config: &RunConfig,
    meta: &ReportMeta,
    extra: &[String],
    output: &ExperimentOutput,
) -> Result<()> {
    let mut body = String::from("setting,max_methods,approach,tpr,precision,fmeasure\n");
    for row in &output.summary {
        writeln!(
            body,
            "{},{},{},{},{},{}",
            row.setting,
            row.max_methods,
            row.approach,
            csv_float(row.tpr),
            csv_float(row.precision),
            csv_float(row.fmeasure)
        )
        .expect("write to string");
    }
    write_text_report(&config.output.join("summary.csv"), meta, extra, &body)
}

fn print_summary_table(output: &ExperimentOutput) {
    let mut last_block = None;
    for row in &output.summary {
        let block = (row.setting, row.max_methods);
        if last_block != Some(block) {
            println!(
                "setting {}, fragments of up to {} methods:",
                row.setting, row.max_methods
            );
            println!("  {:<10} {:>8} {:>10} {:>10}", "approach", "TPR", "precision", "f-measure");
            last_block = Some(block);
        }
        println!(
            "  {:<10} {:>8.3} {:>10.3} {:>10.3}",
            row.approach, row.tpr, row.precision, row.fmeasure
        );
    }
}

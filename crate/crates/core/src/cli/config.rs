//! Declarative run configuration: one TOML file names the corpus, the
//! libraries with their catalogs, the migration rules, thresholds, and the
//! evaluation experiment. Commands apply flag overrides on top.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::catalog::{ApiIndex, LibraryRef};
use crate::detect::MigrationRule;
use crate::error::{Error, Result};
use crate::eval::{ExperimentConfig, Setting};

/// Decision thresholds shared by the baselines and the splitter.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    /// Minimum accumulated frequency for the frequency baseline.
    #[serde(default = "default_fc")]
    pub fc: u64,
    /// Minimum signature similarity for the signature baseline.
    #[serde(default = "default_fs")]
    pub fs: f64,
    /// Acceptance floor for description-similarity splits when no resolved
    /// one-to-one fragments exist yet.
    #[serde(default = "default_ld_floor")]
    pub ld_floor: f64,
}

fn default_fc() -> u64 {
    2
}
fn default_fs() -> f64 {
    0.5
}
fn default_ld_floor() -> f64 {
    0.5
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            fc: default_fc(),
            fs: default_fs(),
            ld_floor: default_ld_floor(),
        }
    }
}

/// One library declaration: identity, import prefixes, catalog file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LibraryConfig {
    pub name: String,
    pub group: String,
    pub artifact: String,
    #[serde(default)]
    pub version: Option<String>,
    pub prefixes: Vec<String>,
    pub catalog: PathBuf,
}

impl LibraryConfig {
    pub fn library_ref(&self) -> LibraryRef {
        LibraryRef {
            group_id: self.group.clone(),
            artifact_id: self.artifact.clone(),
            version: self.version.clone(),
            package_prefixes: self.prefixes.clone(),
        }
    }
}

/// A migration rule by library name.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleConfig {
    pub source: String,
    pub target: String,
}

/// The `[experiment]` section driving the evaluation harness.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    /// Ground-truth mapping pool (`removed;added` per line).
    pub truth: PathBuf,
    /// Catalogs for the pool's two synthetic libraries.
    pub source_catalog: PathBuf,
    pub target_catalog: PathBuf,
    #[serde(default)]
    pub settings: Option<Vec<String>>,
    #[serde(default)]
    pub max_methods: Option<Vec<usize>>,
    #[serde(default)]
    pub counts: Option<Vec<usize>>,
    #[serde(default)]
    pub runs: Option<u32>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    corpus: Option<PathBuf>,
    #[serde(default = "default_workdir")]
    workdir: PathBuf,
    #[serde(default = "default_output")]
    output: PathBuf,
    #[serde(default)]
    thresholds: Thresholds,
    #[serde(default)]
    libraries: Vec<LibraryConfig>,
    #[serde(default)]
    rules: Vec<RuleConfig>,
    #[serde(default)]
    experiment: Option<ExperimentSection>,
}

fn default_workdir() -> PathBuf {
    PathBuf::from("work")
}
fn default_output() -> PathBuf {
    PathBuf::from("out")
}

/// A loaded, validated configuration with paths resolved relative to the
/// config file's directory.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub workdir: PathBuf,
    pub output: PathBuf,
    pub thresholds: Thresholds,
    pub libraries: BTreeMap<String, LibraryConfig>,
    pub rules: Vec<RuleConfig>,
    pub experiment: Option<ExperimentSection>,
    /// FNV-1a hash of the config file bytes, for report provenance.
    pub config_hash: u64,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let raw: RawConfig = toml::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let resolve = |p: &Path| -> PathBuf {
            if p.is_absolute() {
                p.to_path_buf()
            } else {
                base.join(p)
            }
        };

        let mut libraries = BTreeMap::new();
        for mut lib in raw.libraries {
            lib.catalog = resolve(&lib.catalog);
            if !lib.catalog.is_file() {
                return Err(Error::Config(format!(
                    "library {}: catalog {} does not exist",
                    lib.name,
                    lib.catalog.display()
                )));
            }
            if lib.prefixes.is_empty() {
                return Err(Error::Config(format!(
                    "library {}: at least one package prefix is required",
                    lib.name
                )));
            }
            if libraries.insert(lib.name.clone(), lib).is_some() {
                return Err(Error::Config("duplicate library name".to_string()));
            }
        }
        for rule in &raw.rules {
            for name in [&rule.source, &rule.target] {
                if !libraries.contains_key(name) {
                    return Err(Error::Config(format!(
                        "rule {}:{} references undeclared library {name}",
                        rule.source, rule.target
                    )));
                }
            }
        }
        let mut experiment = raw.experiment;
        if let Some(exp) = experiment.as_mut() {
            exp.truth = resolve(&exp.truth);
            exp.source_catalog = resolve(&exp.source_catalog);
            exp.target_catalog = resolve(&exp.target_catalog);
            for p in [&exp.truth, &exp.source_catalog, &exp.target_catalog] {
                if !p.is_file() {
                    return Err(Error::Config(format!(
                        "experiment input {} does not exist",
                        p.display()
                    )));
                }
            }
        }
        Ok(RunConfig {
            corpus: raw.corpus.map(|p| resolve(&p)),
            workdir: resolve(&raw.workdir),
            output: resolve(&raw.output),
            thresholds: raw.thresholds,
            libraries,
            rules: raw.rules,
            experiment,
            config_hash: crate::util::fnv1a64(text.as_bytes()),
        })
    }

    /// Resolve a `src:dst` rule argument (by library name) against the
    /// declared rules, falling back to the sole declared rule when omitted.
    pub fn resolve_rule(&self, arg: Option<&str>) -> Result<&RuleConfig> {
        match arg {
            Some(spec) => {
                let (src, dst) = spec.split_once(':').ok_or_else(|| {
                    Error::Usage(format!("rule {spec:?} must have the form <source>:<target>"))
                })?;
                self.rules
                    .iter()
                    .find(|r| r.source == src && r.target == dst)
                    .ok_or_else(|| {
                        Error::Config(format!("rule {src}:{dst} is not declared in the config"))
                    })
            }
            None if self.rules.len() == 1 => Ok(&self.rules[0]),
            None if self.rules.is_empty() => {
                Err(Error::Config("no rules declared in the config".to_string()))
            }
            None => Err(Error::Usage(
                "several rules are declared; pick one with --rule <source>:<target>".to_string(),
            )),
        }
    }

    /// Load both API indexes of a rule.
    pub fn rule_indexes(&self, rule: &RuleConfig) -> Result<(MigrationRule, ApiIndex, ApiIndex)> {
        let src_lib = &self.libraries[&rule.source];
        let dst_lib = &self.libraries[&rule.target];
        let migration = MigrationRule::new(src_lib.library_ref(), dst_lib.library_ref())?;
        let src = ApiIndex::load(migration.source.clone(), &src_lib.catalog)?;
        let dst = ApiIndex::load(migration.target.clone(), &dst_lib.catalog)?;
        Ok((migration, src, dst))
    }

    /// Materialize the experiment grid, applying config defaults and an
    /// optional seed override.
    pub fn experiment_config(&self, seed_override: Option<u64>) -> Result<ExperimentConfig> {
        let section = self.experiment.as_ref().ok_or_else(|| {
            Error::Config("config has no [experiment] section".to_string())
        })?;
        let mut config = ExperimentConfig::default();
        if let Some(settings) = &section.settings {
            config.settings = settings
                .iter()
                .map(|s| s.parse::<Setting>())
                .collect::<Result<Vec<_>>>()?;
        }
        if let Some(mm) = &section.max_methods {
            config.max_methods = mm.clone();
        }
        if let Some(counts) = &section.counts {
            config.counts = counts.clone();
        }
        if let Some(runs) = section.runs {
            config.runs = runs;
        }
        if let Some(seed) = section.seed {
            config.seed = seed;
        }
        if let Some(seed) = seed_override {
            config.seed = seed;
        }
        config.fc_threshold = self.thresholds.fc;
        config.fs_threshold = self.thresholds.fs;
        config.ld_floor = self.thresholds.ld_floor;
        config.validate()?;
        Ok(config)
    }
}

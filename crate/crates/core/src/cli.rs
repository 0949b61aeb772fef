//! The `research-excellence` command line: `validate`, `compute`,
//! `analyze` and `generate`.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage error, 3 data error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::artifact::{read_rows, write_rows, TableFormat};
use crate::corpus::{
    load_corpus, read_corpus_unchecked, validate_corpus, Corpus, DisciplinePolicy, IngestConfig,
    LoadError, Rank, Window,
};
use crate::excellence::{read_rankings, write_rankings, HcaSet, ThresholdTable};
use crate::indicators::BaselineTable;
use crate::pipeline::{analyze, compute, Analysis, AnalysisOptions, Thresholds};
use crate::report::ReportFormat;
use crate::syngen::{generate_corpus, write_generated, GenConfig, PUBLICATIONS_FILE, RESEARCHERS_FILE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const RUN_CONFIG_FILE: &str = "run.json";

/// One run's inputs, thresholds and outputs. Relative paths are resolved
/// against the directory holding the config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub researchers: PathBuf,
    pub publications: PathBuf,
    pub window: Window,
    #[serde(default)]
    pub weighting: DisciplinePolicy,
    #[serde(default)]
    pub thresholds: Thresholds,
    /// External `year,category,mean_citations,n_cited` table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baselines: Option<PathBuf>,
    /// External `year,category,min_citations_inclusive` table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hca_thresholds: Option<PathBuf>,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    #[serde(default)]
    pub format: ReportFormat,
    #[serde(default)]
    pub analysis: AnalysisOptions,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

impl RunConfig {
    pub fn new(researchers: impl Into<PathBuf>, publications: impl Into<PathBuf>, window: Window) -> Self {
        Self {
            researchers: researchers.into(),
            publications: publications.into(),
            window,
            weighting: DisciplinePolicy::default(),
            thresholds: Thresholds::default(),
            baselines: None,
            hca_thresholds: None,
            out_dir: default_out_dir(),
            format: ReportFormat::default(),
            analysis: AnalysisOptions::default(),
        }
    }

    fn resolve(&mut self, base: &Path) {
        let join = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        join(&mut self.researchers);
        join(&mut self.publications);
        join(&mut self.out_dir);
        if let Some(p) = self.baselines.as_mut() {
            join(p);
        }
        if let Some(p) = self.hca_thresholds.as_mut() {
            join(p);
        }
    }

    fn ingest(&self) -> IngestConfig {
        IngestConfig {
            window: self.window,
            policy: self.weighting.clone(),
        }
    }
}

/// Artifact file names and provenance written by `compute`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    /// SHA-256 over the config file and every input file, in a fixed order.
    pub config_hash: String,
    pub artifacts: BTreeMap<String, String>,
    pub counts: BTreeMap<String, usize>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Invalid(String),
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Data(_) => EXIT_DATA,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Invalid(m) | CliError::Data(m) => m,
        }
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Invalid { report } => CliError::Invalid(report.to_string()),
            // referential and window failures are violations found early
            e @ (LoadError::DuplicateResearcher { .. }
            | LoadError::UnknownResearcher { .. }
            | LoadError::YearOutsideWindow { .. }) => CliError::Invalid(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

fn data(e: impl std::fmt::Display) -> CliError {
    CliError::Data(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "research-excellence", version, about = "Productivity and highly-cited article analytics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a corpus and print every violation.
    Validate(RunArgs),
    /// Compute baselines, FSS, rankings and highly-cited articles.
    Compute(RunArgs),
    /// Produce report tables from computed artifacts.
    Analyze(AnalyzeArgs),
    /// Write a synthetic corpus with its ground truth.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// JSON run config.
    #[arg(long)]
    pub config: PathBuf,
    /// csv, json or markdown.
    #[arg(long)]
    pub format: Option<ReportFormat>,
    /// Output directory, overriding the config.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Comma-separated analyses, or `all`.
    #[arg(long, default_value = "all")]
    pub which: String,
    /// Restrict the case-control analysis to one rank.
    #[arg(long)]
    pub rank: Option<Rank>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// JSON generator config; built-in defaults when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Validate(a) => cmd_validate(&a),
        Command::Compute(a) => cmd_compute(&a).map(|_| ()),
        Command::Analyze(a) => cmd_analyze(&a).map(|_| ()),
        Command::Generate(a) => cmd_generate(&a).map(|_| ()),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message().trim_end());
            e.exit_code()
        }
    }
}

pub fn load_run_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let mut config: RunConfig =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    config.thresholds.check().map_err(CliError::Usage)?;
    config.resolve(path.parent().unwrap_or(Path::new(".")));
    Ok(config)
}

fn run_config(args: &RunArgs) -> Result<RunConfig, CliError> {
    let mut config = load_run_config(&args.config)?;
    if let Some(format) = args.format {
        config.format = format;
    }
    if let Some(out) = &args.out {
        config.out_dir = out.clone();
    }
    Ok(config)
}

/// Prints the validation report; fails with exit 1 when it is not empty.
pub fn cmd_validate(args: &RunArgs) -> Result<(), CliError> {
    let config = run_config(args)?;
    let corpus = read_corpus_unchecked(&config.researchers, &config.publications, &config.ingest())?;
    let report = validate_corpus(&corpus);
    match config.format {
        ReportFormat::Json => println!("{}", serde_json::to_string_pretty(&report).expect("report serializes")),
        _ => {
            for v in &report.violations {
                println!("{v}");
            }
            println!("{} violation(s)", report.len());
        }
    }
    if report.is_empty() {
        Ok(())
    } else {
        Err(CliError::Invalid(format!("{} violation(s) found", report.len())))
    }
}

fn artifact_format(format: ReportFormat) -> TableFormat {
    match format {
        ReportFormat::Json => TableFormat::Json,
        ReportFormat::Csv | ReportFormat::Markdown => TableFormat::Csv,
    }
}

fn config_hash(config_path: &Path, config: &RunConfig) -> Result<String, CliError> {
    let mut hasher = Sha256::new();
    let mut inputs = vec![config_path, config.researchers.as_path(), config.publications.as_path()];
    inputs.extend(config.baselines.as_deref());
    inputs.extend(config.hca_thresholds.as_deref());
    for path in inputs {
        let bytes = fs::read(path).map_err(|e| data(format!("{}: {e}", path.display())))?;
        hasher.update((bytes.len() as u64).to_le_bytes());
        hasher.update(&bytes);
    }
    Ok(hex::encode(hasher.finalize()))
}

#[derive(Serialize, Deserialize)]
struct HcaRow {
    publication_id: String,
}

const ARTIFACTS: [&str; 5] = ["baselines", "fss", "rankings", "hca_thresholds", "hcas"];

fn load_inputs(config: &RunConfig) -> Result<Corpus, CliError> {
    Ok(load_corpus(&config.researchers, &config.publications, &config.ingest())?)
}

/// Writes every artifact plus `manifest.json` into the output directory and
/// returns the manifest path.
pub fn cmd_compute(args: &RunArgs) -> Result<PathBuf, CliError> {
    let config = run_config(args)?;
    let corpus = load_inputs(&config)?;
    let baselines = config
        .baselines
        .as_deref()
        .map(BaselineTable::read)
        .transpose()
        .map_err(data)?;
    let thresholds = config
        .hca_thresholds
        .as_deref()
        .map(ThresholdTable::read)
        .transpose()
        .map_err(data)?;
    let computed = compute(&corpus, &config.thresholds, baselines, thresholds.as_ref()).map_err(data)?;

    let dir = &config.out_dir;
    fs::create_dir_all(dir).map_err(|e| data(format!("{}: {e}", dir.display())))?;
    let ext = artifact_format(config.format).extension();
    let artifacts: BTreeMap<String, String> = ARTIFACTS
        .iter()
        .map(|name| (name.to_string(), format!("{name}.{ext}")))
        .collect();
    let path = |name: &str| dir.join(&artifacts[name]);

    computed.baselines.write(&path("baselines")).map_err(data)?;
    write_rows(&path("fss"), &computed.fss).map_err(data)?;
    write_rankings(&path("rankings"), &computed.rankings).map_err(data)?;
    computed.hcas.thresholds.write(&path("hca_thresholds")).map_err(data)?;
    let hca_rows: Vec<HcaRow> = computed
        .hcas
        .publications
        .iter()
        .map(|id| HcaRow { publication_id: id.clone() })
        .collect();
    write_rows(&path("hcas"), &hca_rows).map_err(data)?;

    let counts = BTreeMap::from([
        ("researchers".to_string(), corpus.researchers().len()),
        ("publications".to_string(), corpus.publications().len()),
        ("eligible_fields".to_string(), computed.eligible_fields.len()),
        ("ranked_researchers".to_string(), computed.fss.len()),
        (
            "top_scientists".to_string(),
            computed.rankings.iter().map(|r| r.top_scientists().count()).sum(),
        ),
        ("hcas".to_string(), computed.hcas.len()),
    ]);
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config_hash: config_hash(&args.config, &config)?,
        artifacts,
        counts,
    };
    let manifest_path = dir.join(MANIFEST_FILE);
    let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    json.push('\n');
    fs::write(&manifest_path, json).map_err(|e| data(format!("{}: {e}", manifest_path.display())))?;
    Ok(manifest_path)
}

fn parse_which(which: &str) -> Result<Vec<Analysis>, CliError> {
    if which.trim() == "all" {
        return Ok(Analysis::ALL.to_vec());
    }
    let mut out = Vec::new();
    for name in which.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let a: Analysis = name.parse().map_err(|e: String| {
            CliError::Usage(format!("{e}; expected `all` or a list of overlap, producers, correlation, distribution, case_control"))
        })?;
        if !out.contains(&a) {
            out.push(a);
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("--which lists no analysis".into()));
    }
    Ok(out)
}

fn missing_artifact(path: &Path, config: &Path) -> CliError {
    CliError::Data(format!(
        "{} not found; run `research-excellence compute --config {}` first",
        path.display(),
        config.display()
    ))
}

/// Writes one report file per requested analysis and returns their paths.
pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<Vec<PathBuf>, CliError> {
    let mut config = run_config(&args.run)?;
    let which = parse_which(&args.which)?;
    if let Some(rank) = args.rank {
        if rank == Rank::Unspecified {
            return Err(CliError::Usage("--rank must be assistant, associate or full".into()));
        }
        config.analysis.ranks = vec![rank];
    }

    let dir = &config.out_dir;
    let manifest_path = dir.join(MANIFEST_FILE);
    if !manifest_path.exists() {
        return Err(missing_artifact(&manifest_path, &args.run.config));
    }
    let manifest: Manifest = serde_json::from_str(&fs::read_to_string(&manifest_path).map_err(data)?)
        .map_err(|e| data(format!("{}: {e}", manifest_path.display())))?;
    let artifact = |name: &str| -> Result<PathBuf, CliError> {
        let file = manifest
            .artifacts
            .get(name)
            .ok_or_else(|| missing_artifact(&dir.join(name), &args.run.config))?;
        let path = dir.join(file);
        if path.exists() {
            Ok(path)
        } else {
            Err(missing_artifact(&path, &args.run.config))
        }
    };
    let rankings = read_rankings(&artifact("rankings")?).map_err(data)?;
    let thresholds = ThresholdTable::read(&artifact("hca_thresholds")?).map_err(data)?;
    let hca_rows: Vec<HcaRow> = read_rows(&artifact("hcas")?).map_err(data)?;
    let hcas = HcaSet {
        publications: hca_rows.into_iter().map(|r| r.publication_id).collect(),
        thresholds,
    };
    let corpus = load_inputs(&config)?;

    let tables = analyze(&corpus, &rankings, &hcas, &which, &config.analysis).map_err(data)?;
    let mut written = Vec::new();
    for (analysis, table) in tables {
        let path = dir.join(format!("{analysis}.{}", config.format.extension()));
        fs::write(&path, table.render(config.format)).map_err(|e| data(format!("{}: {e}", path.display())))?;
        written.push(path);
    }
    Ok(written)
}

/// Writes the synthetic corpus, its ground truth and a ready-to-use
/// `run.json` into the output directory.
pub fn cmd_generate(args: &GenerateArgs) -> Result<PathBuf, CliError> {
    let mut config = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<GenConfig>(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => GenConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let (corpus, truth) = generate_corpus(&config).map_err(|e| CliError::Usage(e.to_string()))?;
    write_generated(&args.out, &corpus, &truth).map_err(data)?;

    let mut run = RunConfig::new(RESEARCHERS_FILE, PUBLICATIONS_FILE, corpus.window());
    run.weighting = corpus.discipline_policy().clone();
    let path = args.out.join(RUN_CONFIG_FILE);
    let mut json = serde_json::to_string_pretty(&run).expect("run config serializes");
    json.push('\n');
    fs::write(&path, json).map_err(|e| data(format!("{}: {e}", path.display())))?;
    Ok(path)
}

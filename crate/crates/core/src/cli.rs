//! Command implementations behind the `fairgauge` binary.
//!
//! Each command is a plain function from its argument struct to a
//! [`Failure`]-typed result, so the commands can be driven from code as
//! well as from the command line. Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | I/O error, unreadable input, schema mismatch, malformed report |
//! | 2 | validation failure (bad labels, no predictions, invalid plan or spec) |
//! | 3 | the predictor failed on some replicate |
//!
//! Every command writes a `manifest.json` (or `<output>.manifest.json` for
//! single-file outputs) with the resolved configuration, the SHA-256 of each
//! input file, the master seed, the toolkit version and a timestamp. Only
//! the timestamp differs between two runs with the same inputs.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::canonical::{self, format_cell};
use crate::data::{load_dataset, load_records, validate, AuditDataset, Format, Schema, Severity, Vocabulary};
use crate::debias::{self, DebiasConfig, DebiasReport, HerReading};
use crate::error::Error;
use crate::metrics::{GapTable, MetricKind, Tally};
use crate::render;
use crate::sampler::{
    run_plan_with, IdentityPredictor, Predictor, SamplingPlan, SubprocessPredictor,
};
use crate::stats::{build_report, filter_classes, Exclusion, FilterRule, ReplicateResult, ReportOptions, TTestVariant};
use crate::synth::{self, OraclePredictor, PopulationSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_PREDICTOR: i32 = 3;

pub const SEED_ENV: &str = "FAIRGAUGE_SEED";

/// A command failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Failure {}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. }
        | Error::Parse { .. }
        | Error::MissingColumn { .. }
        | Error::MissingField { .. }
        | Error::InvalidSchema(_)
        | Error::MalformedReport(_)
        | Error::Json(_)
        | Error::Csv(_) => EXIT_IO,
        Error::Predictor { .. } => EXIT_PREDICTOR,
        _ => EXIT_VALIDATION,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

pub type CmdResult<T> = std::result::Result<T, Failure>;

/// An ordered pair of group labels written `g,h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPair(pub String, pub String);

impl FromStr for GroupPair {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.split(',').map(str::trim).collect::<Vec<_>>().as_slice() {
            [g, h] if !g.is_empty() && !h.is_empty() && g != h => Ok(GroupPair(g.to_string(), h.to_string())),
            _ => Err(format!("expected two distinct group labels `g,h`, got `{s}`")),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fairgauge", version, about = "Group fairness audits and their sampling variance")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gap tables, support counts and accuracy for one predicted dataset.
    Audit(AuditArgs),
    /// Replicate plan over one or more dataset variants, then the summary report.
    Plan(PlanArgs),
    /// Gender-indicator and first-name substitution over a dataset's text.
    Debias(DebiasArgs),
    /// Draw a synthetic dataset and write its exact metric values.
    Simulate(SimulateArgs),
    /// SVG boxplots and heat tables from a report.
    Render(RenderArgs),
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct InputArgs {
    /// Column mapping, e.g. `group=gender,true_class=title,predicted_class=pred`.
    #[arg(long)]
    pub schema: Option<String>,
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_parser = parse_format)]
    pub format: Option<Format>,
}

fn parse_format(s: &str) -> Result<Format, String> {
    match s {
        "csv" => Ok(Format::Csv),
        "jsonl" => Ok(Format::Jsonl),
        _ => Err(format!("unknown format `{s}` (csv or jsonl)")),
    }
}

impl InputArgs {
    fn schema(&self) -> CmdResult<Schema> {
        Ok(match &self.schema {
            Some(s) => Schema::parse_mapping(s)?,
            None => Schema::default(),
        })
    }

    fn format(&self, path: &Path) -> CmdResult<Format> {
        self.format.or_else(|| Format::from_path(path)).ok_or_else(|| Failure {
            code: EXIT_IO,
            message: format!("{}: cannot infer format from extension; pass --format", path.display()),
        })
    }
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct AuditArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[command(flatten)]
    pub input: InputArgs,
    /// Ordered group pair; the gap is first minus second. Defaults to the
    /// two groups of a two-group dataset.
    #[arg(long)]
    pub groups: Option<GroupPair>,
    /// `any-prediction` or `min-preds=K`.
    #[arg(long, default_value = "any-prediction", value_parser = parse_filter)]
    pub filter: FilterRule,
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_filter(s: &str) -> Result<FilterRule, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_variant(s: &str) -> Result<TTestVariant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct PlanArgs {
    /// Source dataset; repeat once per variant (e.g. original and debiased).
    #[arg(long = "dataset", required = true)]
    pub datasets: Vec<PathBuf>,
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub groups: Option<GroupPair>,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value = "any-prediction", value_parser = parse_filter)]
    pub filter: FilterRule,
    /// `student` (pooled variance) or `welch`.
    #[arg(long, default_value = "student", value_parser = parse_variant)]
    pub t_test: TTestVariant,
    /// Sampling plan JSON: sizes, replicates_per_size, split_ratio, master_seed.
    #[arg(long)]
    pub plan: PathBuf,
    /// Shell command run once per replicate as
    /// `<cmd> TRAIN TEST PREDICTIONS_OUT SEED`.
    #[arg(long, conflicts_with = "builtin")]
    pub predictor_cmd: Option<String>,
    /// In-process predictor: `identity`, or `oracle=SPEC` where SPEC is a
    /// bundled spec name or a spec file.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Overrides the plan's master seed (and FAIRGAUGE_SEED).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    #[serde(skip)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct DebiasArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[command(flatten)]
    pub input: InputArgs,
    /// Gender the indicators are mapped to (`m` or `f`).
    #[arg(long)]
    pub target: String,
    /// JSON object replacing the default indicator map.
    #[arg(long)]
    pub indicator_map: Option<PathBuf>,
    /// First-name list, one per line; `#` starts a comment.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    #[arg(long, default_value = debias::DEFAULT_NEUTRAL_NAME)]
    pub neutral_name: String,
    /// Reading of `her` for a male target: `possessive` (his) or `objective` (him).
    #[arg(long, default_value = "possessive", value_parser = parse_her)]
    pub her: HerReading,
    /// Output JSONL; the report goes to `<stem>.report.json` beside it.
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_her(s: &str) -> Result<HerReading, String> {
    match s {
        "possessive" => Ok(HerReading::Possessive),
        "objective" => Ok(HerReading::Objective),
        _ => Err(format!("unknown reading `{s}` (possessive or objective)")),
    }
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SimulateArgs {
    /// Bundled spec name (`surgeon`, `reference`) or a spec JSON file.
    #[arg(long)]
    pub spec: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output JSONL; exact metric values go to `<stem>.true_metrics.csv`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct RenderArgs {
    #[arg(long)]
    pub report: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    /// Input path → lowercase hex SHA-256 of its bytes.
    pub input_digests: BTreeMap<String, String>,
    pub master_seed: Option<u64>,
    pub toolkit_version: String,
    pub timestamp: String,
}

impl RunManifest {
    fn new<C: Serialize>(command: &str, config: &C, inputs: &[&Path], master_seed: Option<u64>) -> CmdResult<Self> {
        let mut input_digests = BTreeMap::new();
        for path in inputs {
            input_digests.insert(path.display().to_string(), file_digest(path)?);
        }
        Ok(Self {
            command: command.to_owned(),
            config: serde_json::to_value(config).map_err(Error::from)?,
            input_digests,
            master_seed,
            toolkit_version: env!("CARGO_PKG_VERSION").to_owned(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        })
    }

    pub fn load(path: &Path) -> crate::Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

pub fn file_digest(path: &Path) -> CmdResult<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn create_dir(path: &Path) -> CmdResult<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e).into())
}

fn write_text(path: &Path, text: &str) -> CmdResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        create_dir(parent)?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e).into())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CmdResult<()> {
    write_text(path, &canonical::to_string(value)?)
}

/// `dir/name.ext` → `dir/name.<suffix>`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn resolve_groups(ds: &AuditDataset, requested: Option<&GroupPair>) -> CmdResult<(String, String)> {
    match requested {
        Some(GroupPair(g, h)) => {
            ds.group_id(g)?;
            ds.group_id(h)?;
            Ok((g.clone(), h.clone()))
        }
        None => match ds.groups().labels() {
            [g, h] => Ok((g.clone(), h.clone())),
            labels => Err(Failure::validation(format!(
                "dataset has {} groups; choose two with --groups g,h",
                labels.len()
            ))),
        },
    }
}

fn seed_from_env() -> CmdResult<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::validation(format!("{SEED_ENV}=`{v}` is not an unsigned integer"))),
        Err(_) => Ok(None),
    }
}

/// Gap table, supports and performance of one predicted dataset, as written
/// to `audit.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditSummary {
    pub dataset: String,
    pub records: usize,
    pub predicted: usize,
    pub filter: FilterRule,
    pub classes: Vec<String>,
    pub excluded: Vec<Exclusion>,
    pub gaps: GapTable,
    pub accuracy: Option<f64>,
    pub f1: BTreeMap<String, Option<f64>>,
    pub warnings: Vec<String>,
}

pub fn audit(args: &AuditArgs) -> CmdResult<AuditSummary> {
    let schema = args.input.schema()?;
    let ds = load_dataset(&args.dataset, args.input.format(&args.dataset)?, &schema)?;
    if ds.predicted_count() == 0 {
        let column = schema.predicted_class.as_deref().unwrap_or("predicted_class");
        return Err(Failure::validation(format!(
            "{}: no record has a prediction; is the predicted column `{column}` present?",
            args.dataset.display()
        )));
    }
    let report = validate(&ds);
    if let Some(issue) = report.issues.iter().find(|i| i.severity == Severity::Error) {
        return Err(Failure::validation(issue.to_string()));
    }
    let (g, h) = resolve_groups(&ds, args.groups.as_ref())?;
    let gaps = GapTable::compute(&ds, &g, &h)?;
    let filter = filter_classes(&[&gaps], args.filter)?;
    let tally = Tally::new(&ds);
    let summary = AuditSummary {
        dataset: ds.name().to_owned(),
        records: ds.len(),
        predicted: ds.predicted_count(),
        filter: args.filter,
        classes: filter.retained,
        excluded: filter.excluded,
        accuracy: tally.accuracy(),
        f1: ds.class_ids().map(|y| (ds.class_label(y).to_owned(), tally.f1(y))).collect(),
        gaps,
        warnings: report.issues.iter().map(ToString::to_string).collect(),
    };

    create_dir(&args.out)?;
    write_json(&args.out.join("audit.json"), &summary)?;
    write_audit_tables(&summary, &args.out)?;
    let manifest = RunManifest::new("audit", args, &[&args.dataset], None)?;
    write_json(&args.out.join("manifest.json"), &manifest)?;
    Ok(summary)
}

/// `gaps.csv`, `supports.csv` and `performance.csv`.
fn write_audit_tables(s: &AuditSummary, dir: &Path) -> crate::Result<()> {
    let (g, h) = &s.gaps.groups;
    let mut w = csv::Writer::from_path(dir.join("gaps.csv"))?;
    w.write_record([
        "metric".to_owned(),
        "class".to_owned(),
        format!("{g}_numerator"),
        format!("{g}_denominator"),
        format!("{g}_value"),
        format!("{h}_numerator"),
        format!("{h}_denominator"),
        format!("{h}_value"),
        "gap".to_owned(),
    ])?;
    for r in &s.gaps.rows {
        w.write_record([
            r.metric.to_string(),
            r.class.clone(),
            r.first.numerator.to_string(),
            r.first.denominator.to_string(),
            format_cell(r.first.value()),
            r.second.numerator.to_string(),
            r.second.denominator.to_string(),
            format_cell(r.second.value()),
            format_cell(r.gap()),
        ])?;
    }
    w.flush().map_err(|e| Error::io(dir, e))?;

    let mut w = csv::Writer::from_path(dir.join("supports.csv"))?;
    w.write_record(["group", "class", "n_gp", "n_tpr", "n_pp", "information_loss"])?;
    for (side, group) in [g, h].into_iter().enumerate() {
        for (class, c) in s.gaps.classes.iter().zip(&s.gaps.supports[side]) {
            w.write_record([
                group.clone(),
                class.clone(),
                c.n_gp.to_string(),
                c.n_tpr.to_string(),
                c.n_pp.to_string(),
                format_cell(c.information_loss()),
            ])?;
        }
    }
    w.flush().map_err(|e| Error::io(dir, e))?;

    let mut w = csv::Writer::from_path(dir.join("performance.csv"))?;
    w.write_record(["measure", "class", "value"])?;
    w.write_record(["accuracy", "", &format_cell(s.accuracy)])?;
    for (class, f1) in &s.f1 {
        w.write_record(["f1", class, &format_cell(*f1)])?;
    }
    w.flush().map_err(|e| Error::io(dir, e))?;
    Ok(())
}

/// What `plan` wrote.
#[derive(Clone, Debug)]
pub struct PlanOutcome {
    pub report: crate::stats::SummaryReport,
    pub replicate_files: Vec<PathBuf>,
    pub master_seed: u64,
}

enum Builtin {
    Identity,
    Oracle(Box<OraclePredictor>),
}

/// A bundled spec name or a path to a spec file.
pub fn resolve_spec(name_or_path: &str) -> CmdResult<(PopulationSpec, Option<PathBuf>)> {
    if let Some(spec) = synth::bundled(name_or_path) {
        return Ok((spec, None));
    }
    let path = PathBuf::from(name_or_path);
    if !path.exists() {
        return Err(Failure {
            code: EXIT_IO,
            message: format!("`{name_or_path}` is neither a bundled spec (surgeon, reference) nor a file"),
        });
    }
    Ok((PopulationSpec::load(&path)?, Some(path)))
}

/// Variant names are dataset file stems, made unique with a numeric suffix.
fn variant_names(paths: &[PathBuf]) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    for p in paths {
        let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "dataset".into());
        let mut name = stem.clone();
        let mut k = 2;
        while names.contains(&name) {
            name = format!("{stem}-{k}");
            k += 1;
        }
        names.push(name);
    }
    names
}

/// Reloads every variant against the union of their vocabularies so their
/// gap tables line up.
fn harmonize(datasets: Vec<AuditDataset>) -> CmdResult<Vec<AuditDataset>> {
    let mut groups = Vocabulary::new();
    let mut classes = Vocabulary::new();
    for ds in &datasets {
        for l in ds.groups().labels() {
            groups.intern(l);
        }
        for l in ds.classes().labels() {
            classes.intern(l);
        }
    }
    datasets
        .iter()
        .map(|ds| {
            AuditDataset::with_vocabularies(ds.name(), groups.clone(), classes.clone(), ds.to_labeled())
                .map_err(Failure::from)
        })
        .collect()
}

pub fn plan(args: &PlanArgs) -> CmdResult<PlanOutcome> {
    match args.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Failure::validation(format!("cannot start {n} worker threads: {e}")))?;
            pool.install(|| plan_in_pool(args))
        }
        None => plan_in_pool(args),
    }
}

fn plan_in_pool(args: &PlanArgs) -> CmdResult<PlanOutcome> {
    let mut sampling = SamplingPlan::load(&args.plan).map_err(|e| match e {
        Error::Json(j) => Failure::validation(format!("{}: {j}", args.plan.display())),
        other => other.into(),
    })?;
    if let Some(seed) = args.seed.or(seed_from_env()?) {
        sampling.master_seed = seed;
    }

    let mut inputs: Vec<PathBuf> = args.datasets.clone();
    inputs.push(args.plan.clone());
    let builtin = match (&args.predictor_cmd, args.builtin.as_deref()) {
        (Some(_), _) => None,
        (None, Some("identity")) => Some(Builtin::Identity),
        (None, Some(b)) if b.starts_with("oracle=") => {
            let (spec, path) = resolve_spec(&b["oracle=".len()..])?;
            let oracle = OraclePredictor::new(&spec)?;
            inputs.extend(path);
            Some(Builtin::Oracle(Box::new(oracle)))
        }
        (None, Some(b)) => return Err(Failure::validation(format!("unknown built-in predictor `{b}`"))),
        (None, None) => {
            return Err(Failure::validation("no predictor: pass --predictor-cmd or --builtin"));
        }
    };

    let schema = args.input.schema()?;
    let mut datasets = Vec::new();
    for path in &args.datasets {
        datasets.push(load_dataset(path, args.input.format(path)?, &schema)?);
    }
    let datasets = harmonize(datasets)?;
    let (g, h) = resolve_groups(&datasets[0], args.groups.as_ref())?;
    for ds in &datasets {
        sampling.validate(ds.len())?;
    }

    let names = variant_names(&args.datasets);
    let mut results = Vec::new();
    let mut replicate_files = Vec::new();
    for (name, ds) in names.iter().zip(&datasets) {
        let command;
        let predictor: &dyn Predictor = match (&builtin, &args.predictor_cmd) {
            (Some(Builtin::Identity), _) => &IdentityPredictor,
            (Some(Builtin::Oracle(o)), _) => o.as_ref(),
            (None, Some(cmd)) => {
                command = SubprocessPredictor::new(cmd.clone(), args.out.join("work").join(name));
                &command
            }
            (None, None) => unreachable!("predictor resolved above"),
        };
        let outcomes = run_plan_with(&sampling, ds, predictor, |handle| {
            ReplicateResult::from_handle(name, &handle, (&g, &h))
        })?;
        let dir = args.out.join("replicates").join(name);
        create_dir(&dir)?;
        for outcome in outcomes {
            let result = outcome??;
            let file = dir.join(format!("size{}_rep{:03}.json", result.size, result.index));
            write_json(&file, &result)?;
            replicate_files.push(file);
            results.push(result);
        }
    }

    let opts = ReportOptions {
        alpha: args.alpha,
        rule: args.filter,
        variant: args.t_test,
    };
    let report = build_report(&results, opts)?;
    write_text(&args.out.join("report.json"), &report.to_canonical_json()?)?;
    report.write_csv_tables(&args.out.join("tables"))?;
    let inputs: Vec<&Path> = inputs.iter().map(PathBuf::as_path).collect();
    let manifest = RunManifest::new("plan", args, &inputs, Some(sampling.master_seed))?;
    write_json(&args.out.join("manifest.json"), &manifest)?;
    Ok(PlanOutcome {
        report,
        replicate_files,
        master_seed: sampling.master_seed,
    })
}

pub fn debias_cmd(args: &DebiasArgs) -> CmdResult<DebiasReport> {
    let schema = args.input.schema()?;
    let ds = load_records(&args.dataset, args.input.format(&args.dataset)?, &schema)?;
    let mut config = DebiasConfig::for_target(&args.target)?.with_her_reading(args.her)?;
    if let Some(path) = &args.indicator_map {
        config = config.with_indicator_map(debias::load_indicator_map(path)?)?;
    }
    if let Some(path) = &args.lexicon {
        config = config.with_lexicon(debias::load_lexicon(path)?);
    }
    config = config.with_neutral_name(&args.neutral_name)?;

    let (out, report) = debias::neutralize_dataset(&ds, &config);
    if let Some(parent) = args.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        create_dir(parent)?;
    }
    out.save_jsonl(&args.out)?;
    write_json(&sibling(&args.out, "report.json"), &report)?;
    let mut inputs: Vec<&Path> = vec![&args.dataset];
    inputs.extend(args.indicator_map.as_deref());
    inputs.extend(args.lexicon.as_deref());
    let manifest = RunManifest::new("debias", args, &inputs, None)?;
    write_json(&sibling(&args.out, "manifest.json"), &manifest)?;
    Ok(report)
}

pub fn simulate(args: &SimulateArgs) -> CmdResult<AuditDataset> {
    let (spec, spec_path) = resolve_spec(&args.spec)?;
    let truth = synth::true_metrics(&spec)?;
    let seed = args.seed.or(seed_from_env()?).unwrap_or(0);
    let ds = synth::generate(&spec, args.n, seed)?;
    if let Some(parent) = args.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        create_dir(parent)?;
    }
    ds.save_jsonl(&args.out)?;

    write_truth(&truth, &args.out)?;

    let inputs: Vec<&Path> = spec_path.as_deref().into_iter().collect();
    let manifest = RunManifest::new("simulate", args, &inputs, Some(seed))?;
    write_json(&sibling(&args.out, "manifest.json"), &manifest)?;
    Ok(ds)
}

/// `<stem>.true_metrics.csv` (per group) and `<stem>.true_gaps.csv` (every
/// ordered group pair) beside the generated dataset.
fn write_truth(truth: &synth::TrueMetrics, out: &Path) -> crate::Result<()> {
    let path = sibling(out, "true_metrics.csv");
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(["metric", "group", "class", "value"])?;
    for row in truth.rows() {
        w.write_record([row.metric.to_string(), row.group, row.class, format_cell(row.value)])?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;

    let path = sibling(out, "true_gaps.csv");
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(["metric", "first", "second", "class", "gap"])?;
    for kind in MetricKind::ALL {
        for g in &truth.groups {
            for h in truth.groups.iter().filter(|h| *h != g) {
                for y in &truth.classes {
                    w.write_record([
                        kind.to_string(),
                        g.clone(),
                        h.clone(),
                        y.clone(),
                        format_cell(truth.gap(kind, g, h, y)),
                    ])?;
                }
            }
        }
    }
    w.flush().map_err(|e| Error::io(&path, e))
}

pub fn render_cmd(args: &RenderArgs) -> CmdResult<Vec<PathBuf>> {
    let text = fs::read_to_string(&args.report).map_err(|e| Error::io(&args.report, e))?;
    let report = crate::stats::SummaryReport::from_json(&text)?;
    let written = render::render_report(&report, &args.out)?;
    let manifest = RunManifest::new("render", args, &[&args.report], None)?;
    write_json(&args.out.join("manifest.json"), &manifest)?;
    Ok(written)
}

/// Runs a parsed command line and returns the process exit code, printing
/// a one-line summary to stdout or the failure to stderr.
pub fn run(cli: Cli) -> i32 {
    let outcome: CmdResult<String> = match &cli.command {
        Command::Audit(a) => audit(a).map(|s| {
            format!(
                "audited {} records ({} predicted); {} classes retained, {} excluded; wrote {}",
                s.records,
                s.predicted,
                s.classes.len(),
                s.excluded.len(),
                a.out.display()
            )
        }),
        Command::Plan(a) => plan(a).map(|o| {
            format!(
                "{} replicates, master seed {}; wrote {}",
                o.replicate_files.len(),
                o.master_seed,
                a.out.join("report.json").display()
            )
        }),
        Command::Debias(a) => debias_cmd(a).map(|r| {
            format!(
                "replaced {} indicators and {} names; {} records without text; wrote {}",
                r.replaced_indicator_count,
                r.replaced_name_count,
                r.records_without_text.len(),
                a.out.display()
            )
        }),
        Command::Simulate(a) => {
            simulate(a).map(|ds| format!("generated {} records; wrote {}", ds.len(), a.out.display()))
        }
        Command::Render(a) => render_cmd(a).map(|files| format!("wrote {} SVG files", files.len())),
    };
    match outcome {
        Ok(line) => {
            println!("{line}");
            EXIT_OK
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_pairs() {
        assert_eq!("M,F".parse::<GroupPair>().unwrap(), GroupPair("M".into(), "F".into()));
        assert_eq!(" M , F ".parse::<GroupPair>().unwrap(), GroupPair("M".into(), "F".into()));
        assert!("M".parse::<GroupPair>().is_err());
        assert!("M,M".parse::<GroupPair>().is_err());
        assert!("M,F,X".parse::<GroupPair>().is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::NoPredictions), EXIT_VALIDATION);
        assert_eq!(exit_code(&Error::MalformedReport("x".into())), EXIT_IO);
        assert_eq!(
            exit_code(&Error::Predictor {
                size: 1,
                index: 0,
                message: String::new()
            }),
            EXIT_PREDICTOR
        );
    }

    #[test]
    fn siblings() {
        assert_eq!(sibling(Path::new("out/x.jsonl"), "report.json"), Path::new("out/x.report.json"));
        assert_eq!(sibling(Path::new("x"), "manifest.json"), Path::new("x.manifest.json"));
    }

    #[test]
    fn variant_names_are_unique() {
        let names = variant_names(&["a/bios.csv".into(), "b/bios.csv".into(), "c/neutral.csv".into()]);
        assert_eq!(names, ["bios", "bios-2", "neutral"]);
    }
}

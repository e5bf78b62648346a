// SPDX-License-Identifier: Apache-2.0

//! Command-line front end. Settings resolve as flag, then config file, then
//! built-in default; the worker count additionally falls back to
//! `GARGAML_WORKERS` before its default. Every command writes the settings it
//! ran with to `run.toml` next to its outputs.

use std::ffi::OsString;
use std::fs::{self, File};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eval::{
    benchmark, write_metrics, write_ranks, write_timings, BenchOptions, EvalRecord, Status, TimingRecord,
};
use crate::experiment::{evaluate_target, rank_reports, score_dataset, EvalConfig};
use crate::graph::Graph;
use crate::ingest::{
    aggregate_labels, load_transactions, parse_edge_list, write_edge_list, write_labels, write_pattern_labels,
    ColumnMap, PatternIndex, DEFAULT_CUTOFFS,
};
use crate::ml::Method;
use crate::pipeline::{prune, score_pruned_until, ScoreConfig};
use crate::scoring::{write_scores, Variant};
use crate::synthgen::{
    full_grid, generate_dataset, read_dataset, write_dataset, GenSpec, Model, PatternTag, META_FILE,
};
use crate::{Error, Result};

pub const WORKERS_ENV: &str = "GARGAML_WORKERS";
pub const RUN_FILE: &str = "run.toml";

#[derive(Debug, Parser)]
#[command(
    name = "gargaml",
    version,
    about = "Smurfing detection scores for transaction graphs"
)]
pub struct Cli {
    /// TOML file with default settings.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate synthetic datasets with injected patterns.
    Generate(GenerateArgs),
    /// Score every node of an edge list.
    Score(ScoreArgs),
    /// Train tree learners on scores and report hold-out metrics.
    TrainEval(TrainEvalArgs),
    /// Time the scoring pipeline.
    Benchmark(BenchmarkArgs),
    /// Turn a transaction export into an edge list and node labels.
    Ingest(IngestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Grid {
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantChoice {
    #[value(alias = "u")]
    Undirected,
    #[value(alias = "d")]
    Directed,
    Both,
}

impl VariantChoice {
    fn variants(self) -> Vec<Variant> {
        match self {
            VariantChoice::Undirected => vec![Variant::Undirected],
            VariantChoice::Directed => vec![Variant::Directed],
            VariantChoice::Both => Variant::ALL.to_vec(),
        }
    }
}

/// Flags shared by several commands. Unset flags fall through to the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    #[arg(long)]
    pub seed: Option<u64>,
    /// Scoring threads.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Datasets processed concurrently.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum, conflicts_with_all = ["model", "nodes", "m", "p"])]
    pub grid: Option<Grid>,
    /// ba, er or ws.
    #[arg(long, required_unless_present = "grid")]
    pub model: Option<String>,
    #[arg(long, required_unless_present = "grid")]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, default_value_t = 3)]
    pub patterns: usize,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Edge list (`src,dst`) or a dataset directory.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    pub variant: VariantChoice,
    #[arg(long)]
    pub resolution: Option<f64>,
    /// Score the graph as given, without community pruning.
    #[arg(long)]
    pub no_prune: bool,
    /// Output directory for `scores_<variant>.csv`.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct TrainEvalArgs {
    /// Dataset directories, or directories holding them.
    #[arg(long, required = true, num_args = 1..)]
    pub datasets: Vec<PathBuf>,
    /// Methods such as `boost-undirected`; all six by default.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub methods: Vec<String>,
    /// Label columns or pattern tags to evaluate; every available one by default.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub targets: Vec<String>,
    #[arg(long)]
    pub resolution: Option<f64>,
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long)]
    pub train_fraction: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    /// Edge lists or dataset directories.
    #[arg(long, required = true, num_args = 1..)]
    pub graphs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "both")]
    pub variant: VariantChoice,
    /// Seconds per run; unlimited when unset.
    #[arg(long)]
    pub budget: Option<f64>,
    /// Worker counts to sweep; scores must agree across them.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub workers_sweep: Vec<usize>,
    #[arg(long)]
    pub resolution: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long)]
    pub transactions: PathBuf,
    /// Simulator patterns file assigning laundering rows to typologies.
    #[arg(long)]
    pub patterns: Option<PathBuf>,
    #[arg(long)]
    pub delimiter: Option<char>,
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    pub cutoffs: Vec<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

/// Everything a config file may set.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub jobs: Option<usize>,
    pub resolution: Option<f64>,
    pub threshold: Option<f64>,
    pub train_fraction: Option<f64>,
    pub budget: Option<f64>,
    pub cutoffs: Option<Vec<f64>>,
    pub delimiter: Option<char>,
    pub columns: Option<ColumnMap>,
}

impl Settings {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

/// Fully resolved settings as recorded in `run.toml`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resolved {
    pub seed: u64,
    pub workers: usize,
    pub jobs: usize,
    pub resolution: f64,
    pub threshold: f64,
    pub train_fraction: f64,
    /// Seconds; absent means unlimited.
    pub budget: Option<f64>,
    pub cutoffs: Vec<f64>,
    pub delimiter: char,
    pub columns: ColumnMap,
}

fn env_workers() -> Result<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Config(format!("{WORKERS_ENV}={v} is not a count"))),
        Err(_) => Ok(None),
    }
}

impl Resolved {
    pub fn resolve(flags: &Settings, file: &Settings) -> Result<Self> {
        let workers = match flags.workers.or(file.workers) {
            Some(w) => w,
            None => env_workers()?.unwrap_or(1),
        };
        let r = Resolved {
            seed: flags.seed.or(file.seed).unwrap_or(0),
            workers,
            jobs: flags.jobs.or(file.jobs).unwrap_or(1),
            resolution: flags.resolution.or(file.resolution).unwrap_or(10.0),
            threshold: flags.threshold.or(file.threshold).unwrap_or(0.5),
            train_fraction: flags.train_fraction.or(file.train_fraction).unwrap_or(0.7),
            budget: flags.budget.or(file.budget),
            cutoffs: flags
                .cutoffs
                .clone()
                .or_else(|| file.cutoffs.clone())
                .unwrap_or_else(|| DEFAULT_CUTOFFS.to_vec()),
            delimiter: flags.delimiter.or(file.delimiter).unwrap_or(','),
            columns: flags
                .columns
                .clone()
                .or_else(|| file.columns.clone())
                .unwrap_or_else(ColumnMap::amlsim),
        };
        if r.workers == 0 || r.jobs == 0 {
            return Err(Error::Config("workers and jobs must be at least 1".into()));
        }
        if !(r.resolution > 0.0) {
            return Err(Error::Config(format!("resolution {} must be positive", r.resolution)));
        }
        if r.budget.is_some_and(|b| !(b > 0.0)) {
            return Err(Error::Config("budget must be positive".into()));
        }
        if !r.delimiter.is_ascii() {
            return Err(Error::Config("delimiter must be a single ASCII character".into()));
        }
        Ok(r)
    }

    fn score_config(&self) -> ScoreConfig {
        ScoreConfig {
            resolution: self.resolution,
            seed: self.seed,
            workers: self.workers,
            no_prune: false,
        }
    }
}

#[derive(Debug, Serialize)]
struct RunRecord<'a, T: Serialize> {
    command: &'a str,
    settings: &'a Resolved,
    inputs: T,
}

fn write_run<T: Serialize>(dir: &Path, command: &str, settings: &Resolved, inputs: T) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let text = toml::to_string_pretty(&RunRecord {
        command,
        settings,
        inputs,
    })
    .map_err(|e| Error::Config(e.to_string()))?;
    let path = dir.join(RUN_FILE);
    fs::write(&path, text).map_err(|e| Error::io(&path, e))
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| Error::io(path, e))
}

fn pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("failed to build dataset thread pool")
}

/// Reads an edge list, or the `edges.csv` of a dataset directory.
pub fn load_graph(path: &Path) -> Result<(String, Graph)> {
    if path.is_dir() {
        if path.join(META_FILE).exists() {
            let ds = read_dataset(path)?;
            return Ok((ds.spec.name(), ds.graph));
        }
        return load_graph(&path.join("edges.csv")).map(|(_, g)| (dir_name(path), g));
    }
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let edges = parse_edge_list(file, path)?;
    let name = path
        .file_stem()
        .map_or_else(|| "graph".into(), |s| s.to_string_lossy().into_owned());
    Ok((name, Graph::from_edges(0, edges, true)))
}

fn dir_name(path: &Path) -> String {
    path.file_name()
        .map_or_else(|| "dataset".into(), |s| s.to_string_lossy().into_owned())
}

/// Exit status of a command: 0 on full success, 1 when some items failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Partial,
}

pub fn run(cli: Cli) -> Result<Outcome> {
    let file = match &cli.config {
        Some(path) => Settings::load(path)?,
        None => Settings::default(),
    };
    match cli.command {
        Command::Generate(a) => cmd_generate(a, &file),
        Command::Score(a) => cmd_score(a, &file),
        Command::TrainEval(a) => cmd_train_eval(a, &file),
        Command::Benchmark(a) => cmd_benchmark(a, &file),
        Command::Ingest(a) => cmd_ingest(a, &file),
    }
}

/// Parses `args` (program name first) and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(Outcome::Success) => 0,
        Ok(Outcome::Partial) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn common_flags(c: &Common) -> Settings {
    Settings {
        seed: c.seed,
        workers: c.workers,
        jobs: c.jobs,
        ..Settings::default()
    }
}

fn cmd_generate(a: GenerateArgs, file: &Settings) -> Result<Outcome> {
    let settings = Resolved::resolve(&common_flags(&a.common), file)?;
    let specs = match a.grid {
        Some(Grid::Full) => full_grid(settings.seed),
        None => {
            let model = Model::from_parts(a.model.as_deref().unwrap_or_default(), a.m, a.p)?;
            vec![GenSpec::new(
                model,
                a.nodes.unwrap_or_default(),
                a.patterns,
                settings.seed,
            )?]
        }
    };
    for s in &specs {
        s.validate()?;
    }
    #[derive(Serialize)]
    struct Inputs<'a> {
        datasets: &'a [GenSpec],
    }
    write_run(&a.out, "generate", &settings, Inputs { datasets: &specs })?;
    let results: Vec<(String, Result<()>)> = pool(settings.jobs).install(|| {
        specs
            .par_iter()
            .map(|spec| {
                let result = generate_dataset(spec).and_then(|ds| write_dataset(&a.out.join(spec.name()), &ds));
                (spec.name(), result)
            })
            .collect()
    });
    let mut failed = 0;
    for (name, r) in results {
        match r {
            Ok(()) => eprintln!("generated {name}"),
            Err(e) => {
                failed += 1;
                eprintln!("failed {name}: {e}");
            }
        }
    }
    Ok(if failed == 0 {
        Outcome::Success
    } else {
        Outcome::Partial
    })
}

fn cmd_score(a: ScoreArgs, file: &Settings) -> Result<Outcome> {
    let flags = Settings {
        resolution: a.resolution,
        ..common_flags(&a.common)
    };
    let settings = Resolved::resolve(&flags, file)?;
    let (_, g) = load_graph(&a.input)?;
    if g.node_count() == 0 {
        eprintln!("warning: {} has no edges; writing empty scores", a.input.display());
    }
    let mut cfg = settings.score_config();
    cfg.no_prune = a.no_prune;
    #[derive(Serialize)]
    struct Inputs<'a> {
        input: &'a Path,
        variant: VariantChoice,
        no_prune: bool,
    }
    let inputs = Inputs {
        input: &a.input,
        variant: a.variant,
        no_prune: a.no_prune,
    };
    write_run(&a.out, "score", &settings, inputs)?;
    let pruned = prune(&g, &cfg);
    eprintln!(
        "pruned {} -> {} edges in {:.3}s",
        g.edge_count(),
        pruned.graph.edge_count(),
        pruned.seconds
    );
    for variant in a.variant.variants() {
        let run = score_pruned_until(&pruned, variant, &cfg, None).expect("no deadline set");
        let path = a.out.join(format!("scores_{variant}.csv"));
        write_scores(create(&path)?, variant, &run.scores)?;
        eprintln!(
            "{variant}: {} nodes in {:.3}s -> {}",
            run.scores.len(),
            run.seconds,
            path.display()
        );
    }
    Ok(Outcome::Success)
}

/// Dataset directories named by `paths`, expanding parents of datasets.
fn dataset_dirs(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.join(META_FILE).exists() || p.join("labels.csv").exists() {
            out.push(p.clone());
            continue;
        }
        let mut children: Vec<PathBuf> = fs::read_dir(p)
            .map_err(|e| Error::io(p, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|c| c.join(META_FILE).exists() || c.join("labels.csv").exists())
            .collect();
        if children.is_empty() {
            return Err(Error::InvalidArgument(format!("{} holds no datasets", p.display())));
        }
        children.sort();
        out.extend(children);
    }
    Ok(out)
}

/// 0/1 columns of a `node_id`-keyed label file whose header passes `keep`.
fn read_label_columns(path: &Path, nodes: usize, keep: impl Fn(&str) -> bool) -> Result<Vec<(String, Vec<bool>)>> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    let columns: Vec<usize> = (1..headers.len()).filter(|&i| keep(&headers[i])).collect();
    let mut targets: Vec<(String, Vec<bool>)> = columns
        .iter()
        .map(|&i| (headers[i].to_owned(), vec![false; nodes]))
        .collect();
    for (line, row) in reader.records().enumerate() {
        let row = row?;
        let v: usize = row[0].parse().map_err(|_| Error::Parse {
            path: path.into(),
            line: line as u64 + 2,
            message: format!("bad node id `{}`", &row[0]),
        })?;
        if v >= nodes {
            continue;
        }
        for (t, &i) in targets.iter_mut().zip(&columns) {
            t.1[v] = &row[i] == "1";
        }
    }
    Ok(targets)
}

/// Named binary labellings of a dataset.
fn dataset_targets(dir: &Path) -> Result<(String, Graph, Vec<(String, Vec<bool>)>)> {
    if dir.join(META_FILE).exists() {
        let ds = read_dataset(dir)?;
        let mut targets = vec![("laundering".to_owned(), ds.labels.clone())];
        for mode in PatternTag::MODES {
            targets.push((mode.as_str().to_owned(), ds.labels_for(mode)));
        }
        return Ok((ds.spec.name(), ds.graph, targets));
    }
    let (_, g) = load_graph(&dir.join("edges.csv"))?;
    let mut targets = read_label_columns(&dir.join("labels.csv"), g.node_count(), |h| h.starts_with("label_"))?;
    let patterns = dir.join("pattern_labels.csv");
    if patterns.exists() {
        targets.extend(read_label_columns(&patterns, g.node_count(), |h| h != "node_id")?);
    }
    Ok((dir_name(dir), g, targets))
}

#[derive(Debug, Serialize)]
struct Summary<'a> {
    datasets: usize,
    methods: Vec<String>,
    failures: Vec<String>,
    rankings: Vec<RankSummary<'a>>,
}

#[derive(Debug, Serialize)]
struct RankSummary<'a> {
    target: &'a str,
    metric: &'static str,
    report: &'a crate::eval::RankReport,
}

fn cmd_train_eval(a: TrainEvalArgs, file: &Settings) -> Result<Outcome> {
    let flags = Settings {
        resolution: a.resolution,
        threshold: a.threshold,
        train_fraction: a.train_fraction,
        ..common_flags(&a.common)
    };
    let settings = Resolved::resolve(&flags, file)?;
    let methods: Vec<Method> = if a.methods.is_empty() {
        Method::ALL.to_vec()
    } else {
        a.methods.iter().map(|m| m.parse()).collect::<Result<_>>()?
    };
    let dirs = dataset_dirs(&a.datasets)?;
    let cfg = EvalConfig {
        score: settings.score_config(),
        train_fraction: settings.train_fraction,
        threshold: settings.threshold,
        seed: settings.seed,
    };
    #[derive(Serialize)]
    struct Inputs<'a> {
        datasets: &'a [PathBuf],
        methods: Vec<String>,
        targets: &'a [String],
    }
    let inputs = Inputs {
        datasets: &dirs,
        methods: methods.iter().map(Method::name).collect(),
        targets: &a.targets,
    };
    write_run(&a.out, "train-eval", &settings, inputs)?;

    let results: Vec<(PathBuf, Result<Vec<EvalRecord>>)> = pool(settings.jobs).install(|| {
        dirs.par_iter()
            .map(|dir| {
                let result = dataset_targets(dir).map(|(name, g, targets)| {
                    let sg = score_dataset(&name, &g, &methods, &cfg.score);
                    targets
                        .iter()
                        .filter(|(t, _)| a.targets.is_empty() || a.targets.contains(t))
                        .flat_map(|(t, labels)| evaluate_target(&sg, t, labels, &methods, &cfg))
                        .collect()
                });
                (dir.clone(), result)
            })
            .collect()
    });
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (dir, r) in results {
        match r {
            Ok(rs) => {
                for rec in rs.iter().filter(|r| r.metrics.is_none()) {
                    eprintln!(
                        "{} / {} / {}: {}",
                        rec.dataset,
                        rec.target,
                        rec.method,
                        rec.note.as_deref().unwrap_or("undefined")
                    );
                }
                records.extend(rs);
            }
            Err(e) => {
                eprintln!("failed {}: {e}", dir.display());
                failures.push(format!("{}: {e}", dir.display()));
            }
        }
    }
    write_metrics(create(&a.out.join("metrics.csv"))?, &records)?;
    let reports = rank_reports(&records, &methods);
    for (target, metric, report) in &reports {
        let path = a.out.join(format!("ranks_{target}_{}.csv", metric.as_str()));
        write_ranks(create(&path)?, report)?;
    }
    let summary = Summary {
        datasets: dirs.len(),
        methods: methods.iter().map(Method::name).collect(),
        failures: failures.clone(),
        rankings: reports
            .iter()
            .map(|(target, metric, report)| RankSummary {
                target,
                metric: metric.as_str(),
                report,
            })
            .collect(),
    };
    let path = a.out.join("summary.json");
    fs::write(&path, serde_json::to_string_pretty(&summary)? + "\n").map_err(|e| Error::io(&path, e))?;
    Ok(if failures.is_empty() {
        Outcome::Success
    } else {
        Outcome::Partial
    })
}

fn cmd_benchmark(a: BenchmarkArgs, file: &Settings) -> Result<Outcome> {
    let flags = Settings {
        resolution: a.resolution,
        budget: a.budget,
        ..common_flags(&a.common)
    };
    let settings = Resolved::resolve(&flags, file)?;
    let sweep = if a.workers_sweep.is_empty() {
        vec![settings.workers]
    } else {
        a.workers_sweep.clone()
    };
    if sweep.contains(&0) {
        return Err(Error::Config("worker counts must be at least 1".into()));
    }
    #[derive(Serialize)]
    struct Inputs<'a> {
        graphs: &'a [PathBuf],
        variant: VariantChoice,
        workers_sweep: &'a [usize],
    }
    let inputs = Inputs {
        graphs: &a.graphs,
        variant: a.variant,
        workers_sweep: &sweep,
    };
    write_run(&a.out, "benchmark", &settings, inputs)?;
    let opts = BenchOptions {
        budget: settings.budget.map(Duration::from_secs_f64),
        memory_budget: None,
    };
    let mut records: Vec<TimingRecord> = Vec::new();
    let mut problems = 0;
    for path in &a.graphs {
        let (name, g) = match load_graph(path) {
            Ok(x) => x,
            Err(e) => {
                eprintln!("failed {}: {e}", path.display());
                problems += 1;
                continue;
            }
        };
        for variant in a.variant.variants() {
            let mut reference = None;
            for &workers in &sweep {
                let cfg = ScoreConfig {
                    workers,
                    ..settings.score_config()
                };
                let start = Instant::now();
                let (rec, scores) = benchmark(&g, &name, variant, &cfg, opts);
                eprintln!(
                    "{name} {} workers={workers}: {} in {:.3}s",
                    rec.method,
                    rec.status.as_str(),
                    start.elapsed().as_secs_f64()
                );
                if let Some(scores) = scores {
                    match &reference {
                        None => reference = Some(scores),
                        Some(r) if *r != scores => {
                            eprintln!("{name} {variant}: scores differ at workers={workers}");
                            problems += 1;
                        }
                        Some(_) => {}
                    }
                }
                records.push(rec);
            }
        }
    }
    write_timings(create(&a.out.join("timings.csv"))?, &records)?;
    let failed = records.iter().any(|r| r.status != Status::Ok);
    Ok(if problems == 0 && !failed {
        Outcome::Success
    } else {
        Outcome::Partial
    })
}

#[derive(Debug, Serialize)]
struct IngestSummary {
    accounts: usize,
    transactions: usize,
    laundering_transactions: usize,
    edges: usize,
    skipped_rows: usize,
    positive_rates: Vec<CutoffRate>,
}

#[derive(Debug, Serialize)]
struct CutoffRate {
    cutoff: f64,
    positive_rate: f64,
}

fn cmd_ingest(a: IngestArgs, file: &Settings) -> Result<Outcome> {
    let flags = Settings {
        delimiter: a.delimiter,
        cutoffs: (!a.cutoffs.is_empty()).then(|| a.cutoffs.clone()),
        ..Settings::default()
    };
    let settings = Resolved::resolve(&flags, file)?;
    let delimiter = settings.delimiter as u8;
    #[derive(Serialize)]
    struct Inputs<'a> {
        transactions: &'a Path,
        patterns: Option<&'a Path>,
    }
    let inputs = Inputs {
        transactions: &a.transactions,
        patterns: a.patterns.as_deref(),
    };
    write_run(&a.out, "ingest", &settings, inputs)?;
    let index = a
        .patterns
        .as_ref()
        .map(|p| PatternIndex::read(p, delimiter))
        .transpose()?;
    let tx = load_transactions(&a.transactions, &settings.columns, delimiter, index.as_ref())?;
    for skipped in tx.skipped.iter().take(20) {
        eprintln!(
            "{}:{}: skipped: {}",
            a.transactions.display(),
            skipped.line,
            skipped.message
        );
    }
    if tx.skipped.len() > 20 {
        eprintln!("... {} rows skipped in total", tx.skipped.len());
    }
    let labels = aggregate_labels(&tx.records, tx.node_count(), &settings.cutoffs)?;
    let g = tx.graph();
    let out = &a.out;
    let io = |path: PathBuf, r: std::io::Result<()>| r.map_err(|e| Error::io(path, e));
    let p = out.join("edges.csv");
    io(p.clone(), write_edge_list(create(&p)?, &g))?;
    let p = out.join("accounts.csv");
    io(p.clone(), tx.ids.write(create(&p)?))?;
    let p = out.join("labels.csv");
    io(p.clone(), write_labels(create(&p)?, &labels))?;
    if !labels.per_pattern.is_empty() {
        let p = out.join("pattern_labels.csv");
        io(p.clone(), write_pattern_labels(create(&p)?, &labels))?;
    }
    let summary = IngestSummary {
        accounts: tx.node_count(),
        transactions: tx.records.len(),
        laundering_transactions: tx.records.iter().filter(|r| r.is_laundering).count(),
        edges: g.edge_count(),
        skipped_rows: tx.skipped.len(),
        positive_rates: settings
            .cutoffs
            .iter()
            .enumerate()
            .map(|(k, &cutoff)| CutoffRate {
                cutoff,
                positive_rate: labels.positive_rate(k),
            })
            .collect(),
    };
    let p = out.join("summary.json");
    fs::write(&p, serde_json::to_string_pretty(&summary)? + "\n").map_err(|e| Error::io(&p, e))?;
    eprintln!(
        "{} accounts, {} transactions, {} skipped",
        summary.accounts, summary.transactions, summary.skipped_rows
    );
    Ok(if tx.skipped.is_empty() {
        Outcome::Success
    } else {
        Outcome::Partial
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_beat_file_beat_defaults() {
        let file = Settings {
            resolution: Some(2.0),
            threshold: Some(0.3),
            workers: Some(3),
            ..Settings::default()
        };
        let flags = Settings {
            resolution: Some(5.0),
            ..Settings::default()
        };
        let r = Resolved::resolve(&flags, &file).unwrap();
        assert_eq!((r.resolution, r.threshold, r.workers), (5.0, 0.3, 3));
        assert_eq!((r.train_fraction, r.budget), (0.7, None));
        let d = Resolved::resolve(&Settings::default(), &Settings::default()).unwrap();
        assert_eq!(d.resolution, 10.0);
        assert_eq!(d.threshold, 0.5);
    }

    #[test]
    fn config_file_rejects_unknown_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        fs::write(&path, "resolution = 3.0\nbogus = 1\n").unwrap();
        assert!(matches!(Settings::load(&path), Err(Error::Config(_))));
        fs::write(&path, "resolution = 3.0\n[columns]\nsrc = [0]\ndst = [1]\nlabel = 2\n").unwrap();
        let s = Settings::load(&path).unwrap();
        assert_eq!(s.columns.unwrap().label, 2);
    }

    #[test]
    fn bad_settings_are_rejected() {
        let bad = |s: Settings| Resolved::resolve(&s, &Settings::default()).is_err();
        assert!(bad(Settings {
            workers: Some(0),
            ..Settings::default()
        }));
        assert!(bad(Settings {
            resolution: Some(0.0),
            ..Settings::default()
        }));
        assert!(bad(Settings {
            budget: Some(-1.0),
            ..Settings::default()
        }));
    }
}

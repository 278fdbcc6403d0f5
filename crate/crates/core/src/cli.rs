//! Command-line front end shared by the `rvoronoi` binary and the tests.
//!
//! Every report is a JSON object `{"config", "payload", "timing"}`. The
//! `config` is the fully resolved [`RunConfig`]; feeding it back to
//! [`execute`] reproduces `payload` exactly. Wall-clock numbers live only in
//! `timing`.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::clustering::metric_relaxed_voronoi;
use crate::error::Error;
use crate::evaluation::{
    expected_stretch, minor_distortion, write_stretch_csv, EngineConfig, Instance, StretchOptions,
    DEFAULT_PAIR_SAMPLE,
};
use crate::generators::{
    complete_binary_tree, estimate_ddim, grid_metric, random_terminals, random_tree, Family,
    GeneratorSpec, TerminalRule, DEFAULT_WEIGHTS,
};
use crate::graph::WeightedGraph;
use crate::io::{parse_instance, write_instance};
use crate::magnitudes::{ExpScale, MagnitudePolicy, DEFAULT_C};
use crate::metric::{metric_from_graph, MetricSpace, TriangleCheck};
use crate::orderings::OrderingPolicy;
use crate::terminals::TerminalSet;
use crate::tree_fast::{spr_tree_with, RootedTree, SprTreeConfig};
use crate::validation::ValidationLevel;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("invariant violation: {0}")]
    Violation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Violation(_) => EXIT_VIOLATION,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidPartition(_) => CliError::Violation(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "rvoronoi", about = "Relaxed-Voronoi terminal clustering")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated instance in the plain-text graph format.
    Gen(GenArgs),
    /// Steiner point removal on a tree (distortion <= 8 with magnitude 3).
    SprTree(SprTreeArgs),
    /// Metric 0-extension: Gonzalez order with randomized magnitudes.
    M0e(StretchArgs),
    /// Connected metric 0-extension on a graph.
    ConnectedM0e(StretchArgs),
    /// Time the linear-time tree pipeline over a size sweep.
    Bench(BenchArgs),
}

#[derive(Debug, Args, Clone)]
pub struct InputArgs {
    /// Instance file in the plain-text graph format.
    #[arg(long, conflicts_with = "gen")]
    pub input: Option<PathBuf>,
    /// Generated instance: btree:<h>, tree:<n>, graph:<n>,<m> or grid:<side>.
    #[arg(long)]
    pub gen: Option<String>,
    /// Terminal rule for generated instances: leaves, random:<k>, list:<ids>.
    #[arg(long)]
    pub terminals: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Partition validation level (defaults to RV_VALIDATE, then `debug`).
    #[arg(long)]
    pub validate: Option<String>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value = "leaves")]
    pub terminals: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SprTreeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    /// Only `const:<R>` is meaningful here.
    #[arg(long, default_value = "const:3")]
    pub magnitude: String,
}

#[derive(Debug, Args)]
pub struct StretchArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// given, root:<id> or gonzalez[:<id>].
    #[arg(long)]
    pub order: Option<String>,
    /// const:<R>, dexp:<c>,<ddim> or klog:<c>.
    #[arg(long)]
    pub magnitude: Option<String>,
    /// Doubling dimension for the default dexp policy.
    #[arg(long)]
    pub ddim: Option<f64>,
    /// Estimate ddim of the terminal submetric when it is not supplied.
    #[arg(long)]
    pub estimate_ddim: bool,
    /// How `c·ddim` / `c·ln k` parameterizes the exponential: rate or mean.
    #[arg(long, default_value = "rate")]
    pub exp_scale: String,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = DEFAULT_PAIR_SAMPLE)]
    pub pairs: usize,
    /// Per-pair stretch table as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// `tree` (sizes are vertex counts) or `btree` (sizes are heights).
    #[arg(long, default_value = "tree")]
    pub family: String,
    #[arg(long, value_delimiter = ',', default_value = "250000,500000,1000000")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub runs: usize,
    /// Fraction of vertices used as terminals for random trees.
    #[arg(long, default_value_t = 0.1)]
    pub terminal_fraction: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputSource {
    File { path: PathBuf },
    Generated(GeneratorSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum RunCommand {
    SprTree {
        root: usize,
        magnitude: f64,
    },
    M0e {
        order: OrderingPolicy,
        magnitudes: MagnitudePolicy,
        trials: usize,
        pairs: usize,
    },
    ConnectedM0e {
        order: OrderingPolicy,
        magnitudes: MagnitudePolicy,
        trials: usize,
        pairs: usize,
    },
}

/// Fully resolved parameters of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: RunCommand,
    pub input: InputSource,
    pub seed: u64,
    pub validation: ValidationLevel,
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub config: RunConfig,
    pub payload: Value,
    pub timing: Value,
}

/// What the binary should print and the exit code it should return.
#[derive(Debug)]
pub struct Outcome {
    pub output: String,
    pub path: Option<PathBuf>,
    pub exit_code: i32,
}

fn input_err(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T, CliError> {
    s.parse().map_err(CliError::from)
}

fn resolve_input(args: &InputArgs, default_terminals: &str) -> Result<InputSource, CliError> {
    match (&args.input, &args.gen) {
        (Some(path), None) => {
            if args.terminals.is_some() {
                return Err(input_err("--terminals only applies to --gen"));
            }
            Ok(InputSource::File { path: path.clone() })
        }
        (None, Some(family)) => Ok(InputSource::Generated(GeneratorSpec {
            family: parse(family)?,
            terminals: parse(args.terminals.as_deref().unwrap_or(default_terminals))?,
            seed: args.seed,
        })),
        _ => Err(input_err("exactly one of --input or --gen is required")),
    }
}

fn resolve_validation(args: &InputArgs) -> Result<ValidationLevel, CliError> {
    match &args.validate {
        Some(v) => parse(v),
        None => Ok(ValidationLevel::from_env()),
    }
}

fn load_graph(source: &InputSource) -> Result<(WeightedGraph, TerminalSet), CliError> {
    match source {
        InputSource::File { path } => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| input_err(format!("cannot read {}: {e}", path.display())))?;
            Ok(parse_instance(&text)?)
        }
        InputSource::Generated(spec) => Ok(spec.generate()?),
    }
}

fn load_metric(source: &InputSource) -> Result<(MetricSpace, TerminalSet), CliError> {
    if let InputSource::Generated(GeneratorSpec { family: Family::Grid { side }, terminals, seed }) = source {
        let m = grid_metric(*side, 1.0)?;
        let g = crate::generators::grid_graph(*side)?;
        return Ok((m, terminals.pick(&g, *seed)?));
    }
    let (g, k) = load_graph(source)?;
    Ok((metric_from_graph(&g)?, k))
}

fn with_scale(policy: MagnitudePolicy, scale: ExpScale) -> MagnitudePolicy {
    match policy {
        MagnitudePolicy::DoublingExp { c, ddim, .. } => MagnitudePolicy::DoublingExp { c, ddim, scale },
        MagnitudePolicy::LogKExp { c, .. } => MagnitudePolicy::LogKExp { c, scale },
        constant => constant,
    }
}

/// Turns parsed arguments into a resolved [`RunConfig`]; `gen` and `bench`
/// are handled directly by [`run`].
pub fn resolve(command: &Command) -> Result<RunConfig, CliError> {
    match command {
        Command::SprTree(a) => {
            let magnitude = match parse::<MagnitudePolicy>(&a.magnitude)? {
                MagnitudePolicy::Constant { r } => r,
                other => return Err(input_err(format!("spr-tree needs a constant magnitude, got {other}"))),
            };
            Ok(RunConfig {
                command: RunCommand::SprTree { root: a.root, magnitude },
                input: resolve_input(&a.input, "leaves")?,
                seed: a.input.seed,
                validation: resolve_validation(&a.input)?,
                csv: None,
            })
        }
        Command::M0e(a) => {
            let input = resolve_input(&a.input, "random:16")?;
            let scale: ExpScale = parse(&a.exp_scale)?;
            let magnitudes = match (&a.magnitude, a.ddim) {
                (Some(m), _) => parse::<MagnitudePolicy>(m)?,
                (None, Some(ddim)) => MagnitudePolicy::doubling(DEFAULT_C, ddim),
                (None, None) if a.estimate_ddim => {
                    let (m, k) = load_metric(&input)?;
                    let sub = MetricSpace::from_fn(k.len(), TriangleCheck::Never, |i, j| {
                        m.dist(k.get(i), k.get(j))
                    })?;
                    let ddim = if k.len() < 2 { 1.0 } else { estimate_ddim(&sub)?.max(f64::MIN_POSITIVE) };
                    MagnitudePolicy::doubling(DEFAULT_C, ddim)
                }
                (None, None) => {
                    return Err(input_err("m0e needs --ddim, --magnitude dexp:<c>,<ddim> or --estimate-ddim"))
                }
            };
            let magnitudes = with_scale(magnitudes, scale);
            magnitudes.validate()?;
            Ok(RunConfig {
                command: RunCommand::M0e {
                    order: parse(a.order.as_deref().unwrap_or("gonzalez"))?,
                    magnitudes,
                    trials: a.trials,
                    pairs: a.pairs,
                },
                input,
                seed: a.input.seed,
                validation: resolve_validation(&a.input)?,
                csv: a.csv.clone(),
            })
        }
        Command::ConnectedM0e(a) => {
            let scale: ExpScale = parse(&a.exp_scale)?;
            let magnitudes = with_scale(parse(a.magnitude.as_deref().unwrap_or("klog:5"))?, scale);
            Ok(RunConfig {
                command: RunCommand::ConnectedM0e {
                    order: parse(a.order.as_deref().unwrap_or("given"))?,
                    magnitudes,
                    trials: a.trials,
                    pairs: a.pairs,
                },
                input: resolve_input(&a.input, "random:10")?,
                seed: a.input.seed,
                validation: match &a.input.validate {
                    Some(v) => parse(v)?,
                    None => ValidationLevel::Always,
                },
                csv: a.csv.clone(),
            })
        }
        Command::Gen(_) | Command::Bench(_) => Err(input_err("command has no run configuration")),
    }
}

/// Worst-case distortion bound `(R+1)²/(R-1)` for constant magnitude `R > 1`.
pub fn tree_distortion_bound(r: f64) -> f64 {
    if r > 1.0 {
        (r + 1.0).powi(2) / (r - 1.0)
    } else {
        f64::INFINITY
    }
}

/// Runs a resolved configuration. Bound violations are reported through
/// the returned exit code, with the report still produced.
pub fn execute(config: &RunConfig) -> Result<(Report, i32), CliError> {
    let started = Instant::now();
    let mut spr_ms = None;
    let (payload, exit_code) = match &config.command {
        RunCommand::SprTree { root, magnitude } => {
            let (g, k) = load_graph(&config.input)?;
            let tree = RootedTree::new(g, *root)?;
            let clustering_started = Instant::now();
            let out = spr_tree_with(&tree, &k, &SprTreeConfig { magnitude: *magnitude, validation: config.validation })?;
            let clustering_ms = clustering_started.elapsed().as_secs_f64() * 1e3;
            let distortion = minor_distortion(tree.graph(), &out.order, &out.minor)?;
            let bound = tree_distortion_bound(*magnitude);
            let violated = distortion.max_distortion > bound + 1e-9;
            let payload = json!({
                "n": tree.n(),
                "k": k.len(),
                "order": out.order,
                "clusters": out.partition.clusters,
                "minor": out.minor,
                "distortion": distortion,
                "bound": bound,
                "edge_touches": out.touches,
                "edge_touches_total": out.touches.total(),
            });
            spr_ms = Some(clustering_ms);
            (payload, if violated { EXIT_VIOLATION } else { EXIT_OK })
        }
        RunCommand::M0e { order, magnitudes, trials, pairs } => {
            let (m, k) = load_metric(&config.input)?;
            let pi = order.order_metric(&m, &k)?;
            let options = StretchOptions { trials: *trials, pair_sample: *pairs, seed: config.seed, validation: config.validation };
            let engine = EngineConfig { ordering: *order, magnitudes: *magnitudes };
            let instance = Instance::Metric { metric: m, terminals: k };
            let report = expected_stretch(&instance, &engine, &options)?;
            let mut payload = json!({ "order": pi, "magnitudes": magnitudes, "stretch": report });
            if magnitudes.is_deterministic() {
                if let Instance::Metric { metric, .. } = &instance {
                    let r = magnitudes.sample(pi.len(), config.seed)?;
                    payload["retraction"] = json!(metric_relaxed_voronoi(metric, &pi, &r)?.assignment);
                }
            }
            write_csv(config, &report)?;
            (payload, EXIT_OK)
        }
        RunCommand::ConnectedM0e { order, magnitudes, trials, pairs } => {
            let (g, k) = load_graph(&config.input)?;
            let pi = order.order_graph(&g, &k)?;
            let options = StretchOptions { trials: *trials, pair_sample: *pairs, seed: config.seed, validation: config.validation };
            let engine = EngineConfig { ordering: *order, magnitudes: *magnitudes };
            let report = expected_stretch(&Instance::Graph { graph: g, terminals: k }, &engine, &options)?;
            write_csv(config, &report)?;
            (json!({ "order": pi, "magnitudes": magnitudes, "stretch": report }), EXIT_OK)
        }
    };
    let mut timing = json!({ "wall_ms": started.elapsed().as_secs_f64() * 1e3 });
    if let Some(ms) = spr_ms {
        timing["spr_tree_ms"] = json!(ms);
    }
    Ok((Report { config: config.clone(), payload, timing }, exit_code))
}

fn write_csv(config: &RunConfig, report: &crate::evaluation::StretchReport) -> Result<(), CliError> {
    if let Some(path) = &config.csv {
        let file = std::fs::File::create(path)
            .map_err(|e| input_err(format!("cannot create {}: {e}", path.display())))?;
        write_stretch_csv(report, file).map_err(|e| input_err(format!("csv export failed: {e}")))?;
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub size: usize,
    pub n: usize,
    pub k: usize,
    pub mean_ms: f64,
    pub min_ms: f64,
    pub edge_touches: usize,
    pub touches_per_vertex: f64,
}

/// Times `spr_tree` (validation off) `runs` times per size. Each round
/// visits every size once, after one untimed warm-up per size.
pub fn bench(family: &str, sizes: &[usize], runs: usize, terminal_fraction: f64, seed: u64) -> Result<Value, CliError> {
    if runs == 0 {
        return Err(input_err("--runs must be positive"));
    }
    let config = SprTreeConfig { magnitude: 3.0, validation: ValidationLevel::Off };
    let mut instances = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let (tree, k) = match family {
            "tree" => {
                let g = random_tree(size, DEFAULT_WEIGHTS, seed)?;
                let k = ((size as f64 * terminal_fraction) as usize).clamp(1, size);
                (RootedTree::new(g, 0)?, random_terminals(size, k, seed)?)
            }
            "btree" => {
                let t = complete_binary_tree(size as u32)?;
                let leaves = crate::generators::binary_tree_leaves(size as u32);
                let n = t.n();
                (t, TerminalSet::new(leaves, n)?)
            }
            other => return Err(input_err(format!("unknown bench family `{other}`"))),
        };
        spr_tree_with(&tree, &k, &config)?;
        instances.push((tree, k));
    }
    let mut times = vec![Vec::with_capacity(runs); sizes.len()];
    let mut touches = vec![0; sizes.len()];
    for _ in 0..runs {
        for (i, (tree, k)) in instances.iter().enumerate() {
            let started = Instant::now();
            let out = spr_tree_with(tree, k, &config)?;
            times[i].push(started.elapsed().as_secs_f64() * 1e3);
            touches[i] = out.touches.total();
        }
    }
    let rows: Vec<BenchRow> = instances
        .iter()
        .enumerate()
        .map(|(i, (tree, k))| BenchRow {
            size: sizes[i],
            n: tree.n(),
            k: k.len(),
            mean_ms: times[i].iter().sum::<f64>() / runs as f64,
            min_ms: times[i].iter().copied().fold(f64::INFINITY, f64::min),
            edge_touches: touches[i],
            touches_per_vertex: touches[i] as f64 / tree.n() as f64,
        })
        .collect();
    let ratios: Vec<f64> = rows.windows(2).map(|w| w[1].mean_ms / w[0].mean_ms).collect();
    Ok(json!({
        "config": { "family": family, "sizes": sizes, "runs": runs, "terminal_fraction": terminal_fraction, "seed": seed },
        "rows": rows,
        "time_ratios": ratios,
    }))
}

/// Parses nothing; runs an already parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Gen(a) => {
            let spec = GeneratorSpec { family: parse(&a.family)?, terminals: parse::<TerminalRule>(&a.terminals)?, seed: a.seed };
            let (g, k) = spec.generate()?;
            Ok(Outcome { output: write_instance(&g, &k), path: a.output.clone(), exit_code: EXIT_OK })
        }
        Command::Bench(a) => {
            let value = bench(&a.family, &a.sizes, a.runs, a.terminal_fraction, a.seed)?;
            Ok(Outcome { output: pretty(&value)?, path: a.output.clone(), exit_code: EXIT_OK })
        }
        other => {
            let config = resolve(other)?;
            let (report, exit_code) = execute(&config)?;
            let path = match other {
                Command::SprTree(a) => a.input.output.clone(),
                Command::M0e(a) | Command::ConnectedM0e(a) => a.input.output.clone(),
                _ => None,
            };
            Ok(Outcome { output: pretty(&report)?, path, exit_code })
        }
    }
}

fn pretty<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| input_err(format!("cannot serialize report: {e}")))
}

//! `ccount`: ingest Turnstile update streams into Compressed Counting
//! sketches and query them.
//!
//! Input streams are JSONL, one `{"i": <u64>, "delta": <f64>}` per line.
//! Every command writes a single JSON document.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use ccount_core::applications::{gamma_shape_from_moment, gamma_shape_variance};
use ccount_core::bounds::{plan_samples, solve, Side, TailBoundReport, TailEstimator};
use ccount_core::estimators::estimate_sketch;
use ccount_core::log_functionals::{estimate_log_distance, estimate_log_norm};
use ccount_core::oracle::{exact_moment, replay, running_sum};
use ccount_core::{AlphaParam, EstimatorKind, ProjectionKind, Sketch, SketchConfig, StreamUpdate};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "ccount", version, about = "Compressed Counting sketches for Turnstile streams")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a sketch from a JSONL update stream.
    Sketch(SketchArgs),
    /// Estimate F_(α) from a sketch file.
    Estimate(EstimateArgs),
    /// Number of projections needed for an (ε, δ) guarantee.
    Plan(PlanArgs),
    /// Right and left tail-bound constants.
    Bounds(BoundsArgs),
    /// Sketch a stream and compare the estimate with the exact moment.
    Compare(CompareArgs),
    /// Logarithmic norm Σ log A[i] from a small-α skewed sketch.
    Lognorm(LogArgs),
    /// Logarithmic distance Σ log|A[i] − B[i]| from a symmetric sketch of A − B.
    Logdist(LogArgs),
    /// Gamma shape parameter from a mean αth moment.
    GammaShape(GammaArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Skewed,
    Symmetric,
}

impl From<KindArg> for ProjectionKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Skewed => ProjectionKind::Skewed,
            KindArg::Symmetric => ProjectionKind::Symmetric,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EstimatorArg {
    Gm,
    #[value(name = "gm_b")]
    GmB,
    Hm,
    #[value(name = "hm_c")]
    HmC,
    #[value(name = "sym_gm")]
    SymGm,
    Auto,
}

impl EstimatorArg {
    fn resolve(self, alpha: AlphaParam, kind: ProjectionKind) -> EstimatorKind {
        match self {
            EstimatorArg::Gm => EstimatorKind::Gm,
            EstimatorArg::GmB => EstimatorKind::GmB,
            EstimatorArg::Hm => EstimatorKind::Hm,
            EstimatorArg::HmC => EstimatorKind::HmC,
            EstimatorArg::SymGm => EstimatorKind::SymGm,
            EstimatorArg::Auto => EstimatorKind::recommended(alpha, kind),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TailArg {
    #[value(name = "gm_b")]
    GmB,
    Hm,
}

impl From<TailArg> for TailEstimator {
    fn from(t: TailArg) -> Self {
        match t {
            TailArg::GmB => TailEstimator::GmB,
            TailArg::Hm => TailEstimator::Hm,
        }
    }
}

#[derive(Debug, Args)]
pub struct StreamConfig {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 100)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = KindArg::Skewed)]
    pub kind: KindArg,
}

#[derive(Debug, Args)]
pub struct SketchArgs {
    /// JSONL update stream; stdin when omitted or `-`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub config: CounterConfig,
    /// Split the stream round-robin over this many sketches and merge them.
    #[arg(long, default_value_t = 1)]
    pub shards: usize,
}

#[derive(Debug, Args)]
pub struct CounterConfig {
    #[arg(long, required_unless_present = "counter")]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 100)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = KindArg::Skewed)]
    pub kind: KindArg,
    /// Output the plain running sum Σ delta (the first moment) instead of a sketch.
    #[arg(long)]
    pub counter: bool,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Sketch file written by `ccount sketch`.
    #[arg(long)]
    pub sketch: PathBuf,
    #[arg(long, value_enum, default_value_t = EstimatorArg::Auto)]
    pub estimator: EstimatorArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, value_enum, default_value_t = TailArg::GmB)]
    pub estimator: TailArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value_t = TailArg::GmB)]
    pub estimator: TailArg,
    /// Also report exp(−k ε²/G) for this many projections.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub config: StreamConfig,
    #[arg(long, value_enum, default_value_t = EstimatorArg::Auto)]
    pub estimator: EstimatorArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LogArgs {
    #[arg(long)]
    pub sketch: PathBuf,
    /// Number of nonzero entries D.
    #[arg(long)]
    pub dimension: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GammaArgs {
    /// Mean αth moment (1/D) Σ A[i]^α.
    #[arg(long)]
    pub moment: f64,
    #[arg(long)]
    pub alpha: f64,
    /// Sample size D, for the asymptotic variance of the shape estimate.
    #[arg(long)]
    pub dimension: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Error whose exit status is fixed: 2 bad input, 3 model violation,
/// 4 solver failure.
#[derive(Debug)]
pub struct ModelViolation;

impl std::fmt::Display for ModelViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("the replayed signal has negative entries")
    }
}

impl std::error::Error for ModelViolation {}

pub fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ModelViolation>().is_some() {
        return 3;
    }
    match err.downcast_ref::<ccount_core::Error>() {
        Some(ccount_core::Error::Solver(_)) => 4,
        Some(ccount_core::Error::ModelViolation(_)) => 3,
        _ => 2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateReport {
    pub estimate: f64,
    pub estimator: EstimatorKind,
    pub alpha: AlphaParam,
    pub k: usize,
    pub stderr: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundsReport {
    pub right: TailBoundReport,
    /// Absent when ε ≥ 1, where the left tail event is empty.
    pub left: Option<TailBoundReport>,
    pub k: Option<usize>,
    pub right_probability: Option<f64>,
    pub left_probability: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompareReport {
    pub exact: Option<f64>,
    pub estimate: Option<f64>,
    pub relative_error: Option<f64>,
    pub estimator: EstimatorKind,
    pub model_violation: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaReport {
    pub theta: f64,
    pub alpha: f64,
    pub variance: Option<f64>,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sketch(a) => {
            let updates = read_updates(a.input.as_deref())?;
            let text = if a.config.counter {
                json(&running_sum(updates))?
            } else {
                let c = &a.config;
                let alpha = c.alpha.ok_or_else(|| anyhow!("--alpha is required"))?;
                if alpha == 1.0 {
                    bail!(ccount_core::Error::Config(
                        "alpha = 1 needs no sketch: use --counter for the running sum".into()
                    ));
                }
                let config = SketchConfig::new(alpha, c.k, c.seed, c.kind.into())?;
                build_sketch(config, &updates, a.shards)?.to_json()
            };
            emit(a.out.as_deref(), &text)
        }
        Command::Estimate(a) => {
            let sketch = load_sketch(&a.sketch)?;
            emit(a.out.as_deref(), &json(&cmd_estimate(&sketch, a.estimator)?)?)
        }
        Command::Plan(a) => {
            let plan = plan_samples(AlphaParam::new(a.alpha)?, a.epsilon, a.delta, a.estimator.into())?;
            emit(a.out.as_deref(), &json(&plan)?)
        }
        Command::Bounds(a) => emit(a.out.as_deref(), &json(&cmd_bounds(a.alpha, a.epsilon, a.estimator, a.k)?)?),
        Command::Compare(a) => {
            let updates = read_updates(a.input.as_deref())?;
            let report = cmd_compare(&a.config, a.estimator, &updates)?;
            emit(a.out.as_deref(), &json(&report)?)?;
            if report.model_violation {
                return Err(ModelViolation.into());
            }
            Ok(())
        }
        Command::Lognorm(a) => {
            let est = estimate_log_norm(&load_sketch(&a.sketch)?, a.dimension)?;
            emit(a.out.as_deref(), &json(&est)?)
        }
        Command::Logdist(a) => {
            let est = estimate_log_distance(&load_sketch(&a.sketch)?, a.dimension)?;
            emit(a.out.as_deref(), &json(&est)?)
        }
        Command::GammaShape(a) => {
            let theta = gamma_shape_from_moment(a.moment, a.alpha)?;
            let variance = a.dimension.map(|d| gamma_shape_variance(theta, a.alpha, d)).transpose()?;
            emit(a.out.as_deref(), &json(&GammaReport { theta, alpha: a.alpha, variance })?)
        }
    }
}

pub fn cmd_estimate(sketch: &Sketch, estimator: EstimatorArg) -> Result<EstimateReport> {
    let kind = estimator.resolve(sketch.alpha(), sketch.config().kind);
    let e = estimate_sketch(sketch, kind)?;
    Ok(EstimateReport {
        estimate: e.value,
        estimator: e.estimator,
        alpha: e.alpha,
        k: e.k,
        stderr: e.asymptotic_stderr,
    })
}

pub fn cmd_bounds(alpha: f64, epsilon: f64, estimator: TailArg, k: Option<usize>) -> Result<BoundsReport> {
    let alpha = AlphaParam::new(alpha)?;
    let right = solve(alpha, epsilon, Side::Right, estimator.into())?;
    let left = if epsilon < 1.0 {
        Some(solve(alpha, epsilon, Side::Left, estimator.into())?)
    } else {
        None
    };
    Ok(BoundsReport {
        right,
        left,
        k,
        right_probability: k.map(|k| right.probability_bound(k)),
        left_probability: k.and_then(|k| left.map(|l| l.probability_bound(k))),
    })
}

pub fn cmd_compare(config: &StreamConfig, estimator: EstimatorArg, updates: &[StreamUpdate]) -> Result<CompareReport> {
    let sketch_config = SketchConfig::new(config.alpha, config.k, config.seed, config.kind.into())?;
    let kind = estimator.resolve(sketch_config.alpha, sketch_config.kind);
    let signal = replay(updates.iter().copied());
    let exact = match exact_moment(&signal, config.alpha) {
        Ok(v) => v,
        Err(ccount_core::Error::ModelViolation(msg)) => {
            eprintln!("warning: {msg}; the sketch estimate is not meaningful");
            return Ok(CompareReport {
                exact: None,
                estimate: None,
                relative_error: None,
                estimator: kind,
                model_violation: true,
            });
        }
        Err(e) => return Err(e.into()),
    };
    let sketch = build_sketch(sketch_config, updates, 1)?;
    let estimate = estimate_sketch(&sketch, kind)?.value;
    Ok(CompareReport {
        exact: Some(exact),
        estimate: Some(estimate),
        relative_error: Some((estimate - exact) / exact),
        estimator: kind,
        model_violation: false,
    })
}

/// Sketch of `updates`, ingested round-robin into `shards` sketches on
/// separate threads and merged.
pub fn build_sketch(config: SketchConfig, updates: &[StreamUpdate], shards: usize) -> Result<Sketch> {
    if shards == 0 {
        bail!(ccount_core::Error::Config("--shards must be at least 1".into()));
    }
    if shards == 1 {
        let mut s = Sketch::new(config)?;
        s.extend(updates.iter().copied())?;
        return Ok(s);
    }
    let parts = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..shards)
            .map(|shard| {
                scope.spawn(move || -> ccount_core::Result<Sketch> {
                    let mut s = Sketch::new(config)?;
                    s.extend(updates.iter().skip(shard).step_by(shards).copied())?;
                    Ok(s)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("ingestion thread panicked"))
            .collect::<ccount_core::Result<Vec<_>>>()
    })?;
    let mut it = parts.into_iter();
    let mut out = it.next().expect("at least one shard");
    for p in it {
        out.merge_from(&p)?;
    }
    Ok(out)
}

/// Parse a JSONL stream; blank lines are skipped.
pub fn parse_updates<R: BufRead>(reader: R) -> Result<Vec<StreamUpdate>> {
    let mut out = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line.with_context(|| format!("reading line {}", n + 1))?;
        if line.trim().is_empty() {
            continue;
        }
        let u: StreamUpdate = serde_json::from_str(&line)
            .map_err(|e| ccount_core::Error::Input(format!("line {}: {e}", n + 1)))?;
        if !u.increment.is_finite() {
            bail!(ccount_core::Error::Input(format!("line {}: delta is not finite", n + 1)));
        }
        out.push(u);
    }
    Ok(out)
}

fn read_updates(path: Option<&Path>) -> Result<Vec<StreamUpdate>> {
    match path {
        None => parse_updates(io::stdin().lock()),
        Some(p) if p.as_os_str() == "-" => parse_updates(io::stdin().lock()),
        Some(p) => {
            let f = File::open(p).map_err(|e| input_error(p, e))?;
            parse_updates(BufReader::new(f))
        }
    }
}

fn load_sketch(path: &Path) -> Result<Sketch> {
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| input_error(path, e))?;
    Ok(Sketch::from_json(&text)?)
}

fn input_error(path: &Path, e: io::Error) -> anyhow::Error {
    ccount_core::Error::Input(format!("{}: {e}", path.display())).into()
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string(value)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => {
            let f = File::create(p).map_err(|e| input_error(p, e))?;
            let mut w = BufWriter::new(f);
            writeln!(w, "{text}")?;
            w.flush()?;
        }
        None => {
            let mut w = io::stdout().lock();
            writeln!(w, "{text}")?;
        }
    }
    Ok(())
}

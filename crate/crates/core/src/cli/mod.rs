//! Command-line front end: CSV in, JSON/CSV/text and plot data out.

pub mod emit;
pub mod ingest;
pub mod plot;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::bootstrap::BootConfig;
use crate::classes::Hints;
use crate::error::{Error, ErrorKind, Result};
use crate::estimators::{MethodId, MethodSpec, SummaryFn, TieBreak};
use crate::metrics::{MetricId, MetricSpec, DEFAULT_MIN_CONSTRAIN};
use crate::pipeline::{run_analysis, run_multi, AnalysisRequest, AnalysisResult};
use crate::sample::Direction;
use crate::simlab;

pub use emit::{emit_result, Format, MissingCount, PredictorError, Report, RESULT_SCHEMA, SCHEMA_VERSION};
pub use ingest::{ingest_csv, IngestSpec, Ingested};
pub use plot::{export_plot_data, histogram_bins, DEFAULT_CONF_LEVEL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    match e.kind() {
        ErrorKind::Usage => EXIT_USAGE,
        ErrorKind::Data => EXIT_DATA,
        ErrorKind::Numeric => EXIT_NUMERIC,
        ErrorKind::Io => EXIT_IO,
    }
}

#[derive(Debug, Parser)]
#[command(name = "optcut", version, about = "Optimal cutpoints with bootstrap validation")]
#[command(args_conflicts_with_subcommands = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    #[command(flatten)]
    pub analyze: AnalyzeArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Method-comparison simulation and scaling benchmark.
    Simlab {
        #[command(subcommand)]
        command: simlab::cli::SimlabCommand,
    },
    /// Print the JSON schema of `--format json` output.
    Schema,
}

#[derive(Debug, Args, Clone)]
pub struct AnalyzeArgs {
    /// Input CSV with a header row; `-` or absent reads stdin.
    #[arg(long, short = 'i')]
    pub input: Option<PathBuf>,
    /// Predictor column; repeat for several. Absent: every numeric column.
    #[arg(long)]
    pub x: Vec<String>,
    /// Outcome column.
    #[arg(long)]
    pub class: Option<String>,
    #[arg(long)]
    pub subgroup: Option<String>,
    #[arg(long)]
    pub pos_class: Option<String>,
    #[arg(long)]
    pub neg_class: Option<String>,
    /// auto, ge (>=) or le (<=).
    #[arg(long, default_value = "auto")]
    pub direction: String,
    /// Detect direction and classes inside each subgroup.
    #[arg(long)]
    pub per_subgroup_direction: bool,

    #[arg(long, default_value = "empirical")]
    pub method: String,
    #[arg(long, default_value = "sum_sens_spec")]
    pub metric: String,
    /// Override the metric's optimisation sense (maximize or minimize).
    #[arg(long)]
    pub sense: Option<String>,
    #[arg(long)]
    pub cost_fp: Option<f64>,
    #[arg(long)]
    pub cost_fn: Option<f64>,
    #[arg(long)]
    pub utility_tp: Option<f64>,
    #[arg(long)]
    pub utility_tn: Option<f64>,
    /// Main metric of `metric_constrain`.
    #[arg(long)]
    pub main_metric: Option<String>,
    /// Constraining metric of the constrained metrics.
    #[arg(long)]
    pub constrain_metric: Option<String>,
    #[arg(long, default_value_t = DEFAULT_MIN_CONSTRAIN)]
    pub min_constrain: f64,

    /// Resamples of the boot_cut method.
    #[arg(long, default_value_t = crate::estimators::DEFAULT_BOOT_CUT)]
    pub boot_cut: usize,
    /// mean or median of the boot_cut resample cutpoints.
    #[arg(long, default_value = "mean")]
    pub summary_fn: String,
    #[arg(long)]
    pub manual_cutpoint: Option<f64>,
    /// all, median or mean.
    #[arg(long, default_value = "median")]
    pub tie_break: String,
    #[arg(long)]
    pub use_midpoints: bool,
    #[arg(long, default_value_t = crate::smoothers::DEFAULT_SPAR)]
    pub spar: f64,
    #[arg(long)]
    pub spline_knots: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub loess_degree: usize,
    #[arg(long, default_value_t = crate::smoothers::DEFAULT_BASIS_DIM)]
    pub gam_basis_dim: usize,
    #[arg(long, default_value_t = crate::estimators::DEFAULT_KERNEL_GRID)]
    pub kernel_grid: usize,

    /// Bootstrap validation repetitions; 0 disables validation.
    #[arg(long, default_value_t = 0)]
    pub boot_runs: usize,
    #[arg(long)]
    pub boot_stratify: bool,
    #[arg(long, default_value_t = 100)]
    pub seed: u64,
    /// Worker threads.
    #[arg(long, env = "OPTCUT_WORKERS")]
    pub parallel: Option<usize>,

    /// json, csv or text.
    #[arg(long, default_value = "text")]
    pub format: String,
    /// Output file; stdout when absent.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
    /// Directory for plot-ready CSV files.
    #[arg(long)]
    pub plot_dir: Option<PathBuf>,
    /// Level of the per-cutpoint bootstrap interval in the plot data.
    #[arg(long, default_value_t = DEFAULT_CONF_LEVEL)]
    pub conf_level: f64,
    /// Write bootstrap repetitions as JSON lines.
    #[arg(long)]
    pub boot_log: Option<PathBuf>,
}

fn parse_direction(s: &str) -> Result<Option<Direction>> {
    match s.trim().to_ascii_lowercase().as_str() {
        "auto" => Ok(None),
        other => other.parse().map(Some),
    }
}

fn parse_metric_id(s: &str) -> Result<MetricId> {
    s.parse()
}

impl AnalyzeArgs {
    pub fn metric_spec(&self) -> Result<MetricSpec> {
        let id = parse_metric_id(&self.metric)?;
        let mut spec = MetricSpec::new(id);
        if let Some(s) = &self.sense {
            spec = spec.with_sense(match s.as_str() {
                "maximize" | "max" => crate::metrics::Sense::Maximize,
                "minimize" | "min" => crate::metrics::Sense::Minimize,
                other => return Err(Error::InvalidArgument(format!("unknown sense '{other}'"))),
            });
        }
        if let (Some(fp), Some(fn_)) = (self.cost_fp, self.cost_fn) {
            spec = spec.with_costs(fp, fn_);
        } else if self.cost_fp.is_some() || self.cost_fn.is_some() {
            return Err(Error::MissingParameter(if self.cost_fp.is_some() { "cost_fn" } else { "cost_fp" }));
        }
        if let (Some(tp), Some(tn)) = (self.utility_tp, self.utility_tn) {
            spec = spec.with_utilities(tp, tn);
        }
        if let Some(c) = spec.constraint.as_mut() {
            if let Some(m) = &self.main_metric {
                c.main = parse_metric_id(m)?;
            }
            if let Some(m) = &self.constrain_metric {
                c.by = parse_metric_id(m)?;
            }
            c.min = self.min_constrain;
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn method_spec(&self) -> Result<MethodSpec> {
        let mut spec = MethodSpec::new(self.method.parse::<MethodId>()?);
        spec.boot_cut_count = self.boot_cut;
        spec.summary_fn = self.summary_fn.parse::<SummaryFn>()?;
        spec.manual_cutpoint = self.manual_cutpoint;
        spec.tie_break = self.tie_break.parse::<TieBreak>()?;
        spec.use_midpoints = self.use_midpoints;
        spec.smoother.spar = self.spar;
        spec.smoother.spline_knots = self.spline_knots;
        spec.smoother.loess_degree = self.loess_degree;
        spec.smoother.gam_basis_dim = self.gam_basis_dim;
        spec.kernel_grid = self.kernel_grid;
        spec.validate()?;
        Ok(spec)
    }

    pub fn request(&self) -> Result<AnalysisRequest> {
        let class = self.class.clone().ok_or(Error::MissingParameter("--class"))?;
        Ok(AnalysisRequest {
            predictor: self.x.first().cloned().unwrap_or_default(),
            class,
            subgroup: self.subgroup.clone(),
            hints: Hints {
                pos_class: self.pos_class.clone(),
                neg_class: self.neg_class.clone(),
                direction: parse_direction(&self.direction)?,
            },
            per_subgroup_direction: self.per_subgroup_direction,
            method: self.method_spec()?,
            metric: self.metric_spec()?,
            boot: BootConfig {
                boot_runs: self.boot_runs,
                stratified: self.boot_stratify,
                seed: self.seed,
                workers: None,
            },
            seed: self.seed,
        })
    }
}

fn io_err(path: &std::path::Path, e: io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

/// Run every requested predictor. A failure is fatal only when there is
/// a single predictor or every predictor failed.
pub fn analyze(args: &AnalyzeArgs, input: impl Read) -> Result<Report> {
    let req = args.request()?;
    let ingested = ingest_csv(input, &IngestSpec {
        x: args.x.clone(),
        class: req.class.clone(),
        subgroup: req.subgroup.clone(),
    })?;
    let data = &ingested.dataset;
    let outcomes: Vec<(String, Result<AnalysisResult>)> = match args.x.len() {
        0 => run_multi(data, &req)?.into_iter().map(|e| (e.predictor, e.result)).collect(),
        1 => return Ok(Report::new(vec![run_analysis(data, &req)?], vec![]).with_missing(&ingested.missing)),
        _ => args
            .x
            .iter()
            .map(|p| {
                let one = AnalysisRequest {
                    predictor: p.clone(),
                    ..req.clone()
                };
                (p.clone(), run_analysis(data, &one))
            })
            .collect(),
    };
    let mut analyses = Vec::new();
    let mut errors = Vec::new();
    let mut first = None;
    for (predictor, out) in outcomes {
        match out {
            Ok(a) => analyses.push(a),
            Err(e) => {
                errors.push(PredictorError {
                    predictor,
                    error: e.to_string(),
                });
                first.get_or_insert(e);
            }
        }
    }
    match (analyses.is_empty(), first) {
        (true, Some(e)) => Err(e),
        _ => Ok(Report::new(analyses, errors).with_missing(&ingested.missing)),
    }
}

fn write_boot_log(report: &Report, path: &std::path::Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path).map_err(|e| io_err(path, e))?);
    for a in &report.analyses {
        for rec in &a.records {
            let Some(run) = &rec.boot else { continue };
            let mut buf = Vec::new();
            run.write_log(&mut buf)?;
            for line in String::from_utf8_lossy(&buf).lines() {
                let mut v: serde_json::Value = serde_json::from_str(line).map_err(|e| Error::Io(e.to_string()))?;
                if let Some(obj) = v.as_object_mut() {
                    obj.insert("predictor".into(), rec.predictor.clone().into());
                    obj.insert("subgroup".into(), rec.subgroup.clone().into());
                }
                writeln!(out, "{v}")?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn run_analyze(
    args: &AnalyzeArgs,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<()> {
    let format: Format = args.format.parse()?;
    let mut input = Vec::new();
    match &args.input {
        Some(p) if p.as_os_str() != "-" => {
            File::open(p).and_then(|mut f| f.read_to_end(&mut input)).map_err(|e| io_err(p, e))?;
        }
        _ => {
            stdin.read_to_end(&mut input)?;
        }
    }
    let report = match args.parallel {
        Some(0) => return Err(Error::InvalidArgument("--parallel must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?
            .install(|| analyze(args, &input[..]))?,
        None => analyze(args, &input[..])?,
    };
    for m in &report.missing {
        writeln!(stderr, "warning: column '{}': {} missing value(s)", m.column, m.count)?;
    }
    match &args.output {
        Some(p) => {
            let mut f = BufWriter::new(File::create(p).map_err(|e| io_err(p, e))?);
            emit_result(&report, format, &mut f)?;
            f.flush()?;
        }
        None => emit_result(&report, format, &mut *stdout)?,
    }
    if let Some(dir) = &args.plot_dir {
        let metric = args.metric_spec()?;
        let several = report.analyses.len() > 1;
        for a in &report.analyses {
            let d = if several { dir.join(&a.predictor) } else { dir.clone() };
            export_plot_data(a, &metric, &d, args.conf_level)?;
        }
    }
    if let Some(p) = &args.boot_log {
        write_boot_log(&report, p)?;
    }
    Ok(())
}

fn dispatch(cli: Cli, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    match cli.command {
        Some(Command::Schema) => {
            stdout.write_all(RESULT_SCHEMA.as_bytes())?;
            Ok(())
        }
        Some(Command::Simlab { command }) => simlab::cli::run(command, stdout),
        None => run_analyze(&cli.analyze, stdin, stdout, stderr),
    }
}

/// Parse `args` and run; returns the process exit code.
pub fn main_with(
    args: impl IntoIterator<Item = impl Into<OsString> + Clone>,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli, stdin, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

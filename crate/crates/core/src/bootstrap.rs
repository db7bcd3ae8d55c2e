//! Bootstrap validation of a cutpoint method.
//!
//! Each repetition draws an in-bag resample of the full sample's size,
//! estimates a cutpoint on it, and scores that cutpoint on the in-bag rows
//! and on the rows never drawn (out-of-bag). Repetitions draw from their
//! own seed-derived streams, so the run does not depend on scheduling.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{estimate, MethodSpec};
use crate::metrics::{standard_metric_panel, MetricSpec};
use crate::rng;
use crate::roc::{auc, build_roc, ConfusionCounts};
use crate::sample::{Direction, Sample};
use crate::stats::{quantile_sorted, sorted, Distribution};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootConfig {
    pub boot_runs: usize,
    /// Resample within each class, keeping the class sizes.
    pub stratified: bool,
    pub seed: u64,
    /// Worker threads; None uses the ambient pool.
    pub workers: Option<usize>,
}

impl Default for BootConfig {
    fn default() -> Self {
        BootConfig {
            boot_runs: 0,
            stratified: false,
            seed: 100,
            workers: None,
        }
    }
}

/// Scores of a cutpoint on one set of rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepPanel {
    #[serde(rename = "AUC", with = "crate::serde_real")]
    pub auc: f64,
    #[serde(with = "crate::serde_real")]
    pub metric: f64,
    #[serde(with = "crate::serde_real")]
    pub accuracy: f64,
    #[serde(with = "crate::serde_real")]
    pub sensitivity: f64,
    #[serde(with = "crate::serde_real")]
    pub specificity: f64,
    #[serde(with = "crate::serde_real")]
    pub cohens_kappa: f64,
    #[serde(rename = "TP")]
    pub tp: u64,
    #[serde(rename = "FP")]
    pub fp: u64,
    #[serde(rename = "TN")]
    pub tn: u64,
    #[serde(rename = "FN")]
    pub fn_: u64,
}

impl RepPanel {
    /// Score `counts`; `auc` is supplied by the caller.
    pub fn new(counts: &ConfusionCounts, metric: &MetricSpec, auc: f64) -> Self {
        let std = standard_metric_panel(counts);
        RepPanel {
            auc,
            metric: metric.value(counts),
            accuracy: std.accuracy,
            sensitivity: std.sensitivity,
            specificity: std.specificity,
            cohens_kappa: std.cohens_kappa,
            tp: counts.tp,
            fp: counts.fp,
            tn: counts.tn,
            fn_: counts.fn_,
        }
    }

    pub fn counts(&self) -> ConfusionCounts {
        ConfusionCounts::new(self.tp, self.fp, self.tn, self.fn_)
    }

    fn missing() -> Self {
        RepPanel {
            auc: f64::NAN,
            metric: f64::NAN,
            accuracy: f64::NAN,
            sensitivity: f64::NAN,
            specificity: f64::NAN,
            cohens_kappa: f64::NAN,
            tp: 0,
            fp: 0,
            tn: 0,
            fn_: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootRepetition {
    pub index: usize,
    #[serde(with = "crate::serde_real")]
    pub in_bag_cutpoint: f64,
    #[serde(rename = "b")]
    pub in_bag: RepPanel,
    /// None when every row was drawn into the in-bag resample.
    #[serde(rename = "oob")]
    pub out_of_bag: Option<RepPanel>,
    /// Drawn row indices, in draw order.
    pub in_bag_rows: Vec<usize>,
}

impl BootRepetition {
    pub fn out_of_bag_rows(&self, n: usize) -> Vec<usize> {
        out_of_bag_rows(&self.in_bag_rows, n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootFailure {
    pub index: usize,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootRun {
    pub metric_name: String,
    pub repetitions: Vec<BootRepetition>,
    pub failures: Vec<BootFailure>,
}

fn out_of_bag_rows(in_bag: &[usize], n: usize) -> Vec<usize> {
    let mut drawn = vec![false; n];
    for &i in in_bag {
        drawn[i] = true;
    }
    (0..n).filter(|&i| !drawn[i]).collect()
}

fn draw(sample: &Sample, stratified: bool, rng: &mut rand_chacha::ChaCha8Rng) -> Result<Vec<usize>> {
    if !stratified {
        return crate::estimators::draw_two_class_resample(sample, rng);
    }
    let labels = sample.labels();
    let pos: Vec<usize> = (0..sample.len()).filter(|&i| labels[i]).collect();
    let neg: Vec<usize> = (0..sample.len()).filter(|&i| !labels[i]).collect();
    let mut idx = Vec::with_capacity(sample.len());
    for class in [&neg, &pos] {
        idx.extend((0..class.len()).map(|_| class[rng::index(rng, class.len())]));
    }
    Ok(idx)
}

/// Score `cutpoint` on `rows` of `sample`. AUC is NaN unless both classes
/// are present.
fn score(sample: &Sample, rows: &[usize], cutpoint: f64, direction: Direction, metric: &MetricSpec) -> RepPanel {
    let x = sample.predictor();
    let labels = sample.labels();
    let mut counts = ConfusionCounts::default();
    for &i in rows {
        match (direction.predicts_positive(x[i], cutpoint), labels[i]) {
            (true, true) => counts.tp += 1,
            (true, false) => counts.fp += 1,
            (false, false) => counts.tn += 1,
            (false, true) => counts.fn_ += 1,
        }
    }
    let area = match sample.subset(rows) {
        Ok(sub) => auc(&build_roc(&sub, direction)),
        Err(_) => f64::NAN,
    };
    RepPanel::new(&counts, metric, area)
}

/// Run one repetition from its drawn rows.
pub fn replay_repetition(
    sample: &Sample,
    direction: Direction,
    method: &MethodSpec,
    metric: &MetricSpec,
    seed: u64,
    index: usize,
    in_bag_rows: Vec<usize>,
) -> Result<BootRepetition> {
    let in_bag_sample = sample.subset(&in_bag_rows)?;
    let curve = build_roc(&in_bag_sample, direction);
    let est = estimate(&in_bag_sample, &curve, method, metric, rng::derive_seed(seed, index as u64))?;
    let c = est.optimal_cutpoint;
    let in_bag = RepPanel::new(&est.panel.counts(), metric, est.auc);
    let oob_rows = out_of_bag_rows(&in_bag_rows, sample.len());
    let out_of_bag = (!oob_rows.is_empty()).then(|| score(sample, &oob_rows, c, direction, metric));
    Ok(BootRepetition {
        index,
        in_bag_cutpoint: c,
        in_bag,
        out_of_bag,
        in_bag_rows,
    })
}

fn one_repetition(
    sample: &Sample,
    direction: Direction,
    method: &MethodSpec,
    metric: &MetricSpec,
    config: &BootConfig,
    index: usize,
) -> Result<BootRepetition> {
    let mut stream = rng::stream(config.seed, index as u64);
    let rows = draw(sample, config.stratified, &mut stream)?;
    replay_repetition(sample, direction, method, metric, config.seed, index, rows)
}

/// Run `config.boot_runs` repetitions. Failed repetitions are recorded and
/// left out of the repetition list.
pub fn run_bootstrap(
    sample: &Sample,
    direction: Direction,
    method: &MethodSpec,
    metric: &MetricSpec,
    config: &BootConfig,
) -> Result<BootRun> {
    if config.boot_runs == 0 {
        return Err(Error::InvalidArgument("boot_runs must be at least 1".into()));
    }
    method.validate()?;
    metric.validate()?;
    let work = || {
        (0..config.boot_runs)
            .into_par_iter()
            .map(|k| one_repetition(sample, direction, method, metric, config, k))
            .collect::<Vec<_>>()
    };
    let outcomes = match config.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?
            .install(work),
        None => work(),
    };
    let mut run = BootRun {
        metric_name: metric.name().to_string(),
        repetitions: Vec::with_capacity(config.boot_runs),
        failures: Vec::new(),
    };
    for (index, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(rep) => run.repetitions.push(rep),
            Err(e) => run.failures.push(BootFailure {
                index,
                error: e.to_string(),
            }),
        }
    }
    Ok(run)
}

/// Names of the summarised variables, in display order.
pub fn summary_variables(metric_name: &str) -> Vec<String> {
    let mut names = vec!["optimal_cutpoint".to_string()];
    for base in ["AUC", metric_name, "acc", "sensitivity", "specificity", "cohens_kappa"] {
        names.push(format!("{base}_b"));
        names.push(format!("{base}_oob"));
    }
    names
}

impl BootRun {
    /// Values of a summary variable across repetitions (NaN for missing).
    pub fn values(&self, variable: &str) -> Result<Vec<f64>> {
        if variable == "optimal_cutpoint" {
            return Ok(self.repetitions.iter().map(|r| r.in_bag_cutpoint).collect());
        }
        let (base, in_bag) = if let Some(b) = variable.strip_suffix("_b") {
            (b, true)
        } else if let Some(b) = variable.strip_suffix("_oob") {
            (b, false)
        } else {
            return Err(Error::UnknownVariable(variable.to_string()));
        };
        let pick: fn(&RepPanel) -> f64 = match base {
            "AUC" => |p| p.auc,
            "acc" | "accuracy" => |p| p.accuracy,
            "sensitivity" => |p| p.sensitivity,
            "specificity" => |p| p.specificity,
            "cohens_kappa" => |p| p.cohens_kappa,
            "TP" => |p| p.tp as f64,
            "FP" => |p| p.fp as f64,
            "TN" => |p| p.tn as f64,
            "FN" => |p| p.fn_ as f64,
            b if b == self.metric_name => |p| p.metric,
            _ => return Err(Error::UnknownVariable(variable.to_string())),
        };
        let missing = RepPanel::missing();
        Ok(self
            .repetitions
            .iter()
            .map(|r| {
                let panel = if in_bag {
                    &r.in_bag
                } else {
                    r.out_of_bag.as_ref().unwrap_or(&missing)
                };
                if !in_bag && r.out_of_bag.is_none() {
                    f64::NAN
                } else {
                    pick(panel)
                }
            })
            .collect())
    }

    /// One JSON object per line: repetitions, then failures.
    pub fn write_log(&self, mut out: impl Write) -> Result<()> {
        for rep in &self.repetitions {
            let line = serde_json::to_string(rep).map_err(|e| Error::Io(e.to_string()))?;
            writeln!(out, "{line}")?;
        }
        for f in &self.failures {
            let line = serde_json::to_string(f).map_err(|e| Error::Io(e.to_string()))?;
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub variable: String,
    #[serde(flatten)]
    pub distribution: Distribution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootSummary {
    pub boot_runs: usize,
    pub failed: usize,
    pub rows: Vec<SummaryRow>,
}

pub fn summarize_bootstrap(run: &BootRun) -> BootSummary {
    let rows = summary_variables(&run.metric_name)
        .into_iter()
        .map(|variable| {
            let values = run.values(&variable).expect("summary variables are known");
            SummaryRow {
                distribution: Distribution::of(&values),
                variable,
            }
        })
        .collect();
    BootSummary {
        boot_runs: run.repetitions.len() + run.failures.len(),
        failed: run.failures.len(),
        rows,
    }
}

/// Percentile interval at `alpha / 2` and `1 - alpha / 2` of a variable
/// given without its `_b`/`_oob` suffix. Missing values are skipped.
pub fn boot_ci(run: &BootRun, variable: &str, in_bag: bool, alpha: f64) -> Result<(f64, f64)> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let name = if variable == "optimal_cutpoint" {
        variable.to_string()
    } else {
        format!("{variable}{}", if in_bag { "_b" } else { "_oob" })
    };
    let values: Vec<f64> = run.values(&name)?.into_iter().filter(|v| !v.is_nan()).collect();
    Ok(percentile_interval(&values, alpha))
}

pub fn percentile_interval(values: &[f64], alpha: f64) -> (f64, f64) {
    let s = sorted(values);
    (quantile_sorted(&s, alpha / 2.0), quantile_sorted(&s, 1.0 - alpha / 2.0))
}

/// Frequency of each in-bag cutpoint, ascending.
pub fn cutpoint_distribution(run: &BootRun) -> Vec<(f64, usize)> {
    let cuts = sorted(&run.repetitions.iter().map(|r| r.in_bag_cutpoint).collect::<Vec<_>>());
    let mut table: Vec<(f64, usize)> = Vec::new();
    for c in cuts {
        match table.last_mut() {
            Some((v, n)) if *v == c || (v.is_nan() && c.is_nan()) => *n += 1,
            _ => table.push((c, 1)),
        }
    }
    table
}

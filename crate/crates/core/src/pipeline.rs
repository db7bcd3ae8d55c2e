//! Full analysis: class and direction resolution, subgroup split,
//! estimation, optional bootstrap validation and summaries.

use rayon::prelude::*;
use serde::Serialize;

use crate::bootstrap::{run_bootstrap, summarize_bootstrap, BootConfig, BootRun, BootSummary};
use crate::classes::{detect_direction_and_classes, ClassResolution, Hints};
use crate::error::{Error, Result};
use crate::estimators::{estimate, CutpointResult, MethodSpec};
use crate::metrics::MetricSpec;
use crate::roc::{build_roc, RocCurve};
use crate::serde_real::to_text;
use crate::stats::Distribution;

/// A named column of cells; `None` is a missing value.
#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub cells: Vec<Option<String>>,
}

/// Rectangular table of text cells with lazy numeric views.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    columns: Vec<Column>,
    n_rows: usize,
}

impl Dataset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_column(mut self, name: impl Into<String>, cells: Vec<Option<String>>) -> Result<Self> {
        self.push(name.into(), cells)?;
        Ok(self)
    }

    pub fn with_numeric(self, name: impl Into<String>, values: &[f64]) -> Result<Self> {
        let cells = values
            .iter()
            .map(|&v| (!v.is_nan()).then(|| format!("{v:?}")))
            .collect();
        self.with_column(name, cells)
    }

    pub fn with_text<S: AsRef<str>>(self, name: impl Into<String>, values: &[S]) -> Result<Self> {
        let cells = values.iter().map(|v| Some(v.as_ref().to_string())).collect();
        self.with_column(name, cells)
    }

    pub fn push(&mut self, name: String, cells: Vec<Option<String>>) -> Result<()> {
        if self.columns.iter().any(|c| c.name == name) {
            return Err(Error::Data(format!("duplicate column '{name}'")));
        }
        if !self.columns.is_empty() && cells.len() != self.n_rows {
            return Err(Error::Data(format!(
                "column '{name}' has {} rows, expected {}",
                cells.len(),
                self.n_rows
            )));
        }
        self.n_rows = cells.len();
        self.columns.push(Column { name, cells });
        Ok(())
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|c| c.name.as_str())
    }

    pub fn column(&self, name: &str) -> Result<&Column> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::Data(format!("no column named '{name}'")))
    }

    /// Numeric view; missing cells become NaN.
    pub fn numeric(&self, name: &str) -> Result<Vec<f64>> {
        let col = self.column(name)?;
        col.cells
            .iter()
            .enumerate()
            .map(|(row, cell)| match cell {
                None => Ok(f64::NAN),
                Some(s) => s.trim().parse::<f64>().map_err(|_| {
                    Error::Data(format!("row {}: column '{name}': cannot parse '{s}' as a number", row + 1))
                }),
            })
            .collect()
    }

    pub fn is_numeric(&self, name: &str) -> bool {
        self.numeric(name).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisRequest {
    pub predictor: String,
    pub class: String,
    pub subgroup: Option<String>,
    pub hints: Hints,
    /// Resolve direction and classes inside each subgroup.
    pub per_subgroup_direction: bool,
    pub method: MethodSpec,
    pub metric: MetricSpec,
    /// `boot.boot_runs == 0` skips validation.
    pub boot: BootConfig,
    /// Seed for resampling inside the method.
    pub seed: u64,
}

impl AnalysisRequest {
    pub fn new(predictor: impl Into<String>, class: impl Into<String>) -> Self {
        AnalysisRequest {
            predictor: predictor.into(),
            class: class.into(),
            subgroup: None,
            hints: Hints::default(),
            per_subgroup_direction: false,
            method: MethodSpec::default(),
            metric: MetricSpec::new(crate::metrics::MetricId::SumSensSpec),
            boot: BootConfig::default(),
            seed: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassSummary {
    /// "Overall" or a class label.
    pub data: String,
    #[serde(flatten)]
    pub distribution: Distribution,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisRecord {
    pub predictor: String,
    pub outcome: String,
    pub subgroup: Option<String>,
    pub resolution: ClassResolution,
    pub result: CutpointResult,
    pub predictor_summary: Vec<ClassSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boot_summary: Option<BootSummary>,
    #[serde(skip)]
    pub roc: RocCurve,
    #[serde(skip)]
    pub boot: Option<BootRun>,
    #[serde(skip)]
    pub sample: crate::sample::Sample,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubgroupFailure {
    pub subgroup: Option<String>,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisResult {
    pub predictor: String,
    pub outcome: String,
    pub subgroup_column: Option<String>,
    /// Rows dropped for a missing predictor, class or subgroup value.
    pub dropped_rows: usize,
    pub boot_runs: usize,
    pub records: Vec<AnalysisRecord>,
    pub failures: Vec<SubgroupFailure>,
}

struct Rows {
    x: Vec<f64>,
    labels: Vec<String>,
    group: Vec<Option<String>>,
    /// Per row with a class label: predictor is missing.
    na_x: Vec<(String, Option<String>)>,
    dropped: usize,
}

fn collect_rows(data: &Dataset, req: &AnalysisRequest) -> Result<Rows> {
    let x = data.numeric(&req.predictor)?;
    let class = &data.column(&req.class)?.cells;
    let group = match &req.subgroup {
        Some(g) => Some(&data.column(g)?.cells),
        None => None,
    };
    let mut rows = Rows {
        x: Vec::new(),
        labels: Vec::new(),
        group: Vec::new(),
        na_x: Vec::new(),
        dropped: 0,
    };
    for i in 0..data.n_rows() {
        let g = group.map(|g| g[i].clone());
        let (Some(label), true) = (&class[i], g.as_ref().is_none_or(|g| g.is_some())) else {
            rows.dropped += 1;
            continue;
        };
        let g = g.flatten();
        if x[i].is_nan() {
            rows.dropped += 1;
            rows.na_x.push((label.clone(), g));
            continue;
        }
        rows.x.push(x[i]);
        rows.labels.push(label.clone());
        rows.group.push(g);
    }
    Ok(rows)
}

fn predictor_summary(x: &[f64], labels: &[String], res: &ClassResolution, na: &[&String]) -> Vec<ClassSummary> {
    let na_of = |class: &str| na.iter().filter(|l| l.as_str() == class).count();
    let mut out = vec![ClassSummary {
        data: "Overall".into(),
        distribution: Distribution::with_missing(x, na.len()),
    }];
    let mut classes = [res.neg_class.clone(), res.pos_class.clone()];
    classes.sort();
    for class in classes {
        let v: Vec<f64> = x.iter().zip(labels).filter(|(_, l)| **l == class).map(|(&v, _)| v).collect();
        out.push(ClassSummary {
            distribution: Distribution::with_missing(&v, na_of(&class)),
            data: class,
        });
    }
    out
}

fn analyse_group(
    req: &AnalysisRequest,
    subgroup: Option<String>,
    x: Vec<f64>,
    labels: Vec<String>,
    na: Vec<&String>,
    global: Option<&ClassResolution>,
) -> Result<AnalysisRecord> {
    let resolution = match global {
        Some(r) => r.clone(),
        None => detect_direction_and_classes(&x, &labels, &req.hints)?,
    };
    let summary = predictor_summary(&x, &labels, &resolution, &na);
    let sample = resolution.apply(x, &labels)?;
    let roc = build_roc(&sample, resolution.direction);
    let result = estimate(&sample, &roc, &req.method, &req.metric, req.seed)?
        .with_classes(resolution.pos_class.clone(), resolution.neg_class.clone());
    let boot = if req.boot.boot_runs > 0 {
        Some(run_bootstrap(&sample, resolution.direction, &req.method, &req.metric, &req.boot)?)
    } else {
        None
    };
    Ok(AnalysisRecord {
        predictor: req.predictor.clone(),
        outcome: req.class.clone(),
        subgroup,
        resolution,
        result,
        predictor_summary: summary,
        boot_summary: boot.as_ref().map(summarize_bootstrap),
        roc,
        boot,
        sample,
    })
}

/// Run one predictor, split by subgroup when requested.
///
/// A subgroup that fails is recorded and the run continues; if every
/// subgroup fails the first error is returned.
pub fn run_analysis(data: &Dataset, req: &AnalysisRequest) -> Result<AnalysisResult> {
    let rows = collect_rows(data, req)?;
    if rows.x.is_empty() {
        return Err(Error::EmptySample);
    }
    let global = if req.subgroup.is_some() && req.per_subgroup_direction {
        None
    } else {
        Some(detect_direction_and_classes(&rows.x, &rows.labels, &req.hints)?)
    };

    let mut groups: Vec<Option<String>> = rows.group.clone();
    groups.sort();
    groups.dedup();
    let outcomes: Vec<(Option<String>, Result<AnalysisRecord>)> = groups
        .into_par_iter()
        .map(|g| {
            let idx: Vec<usize> = (0..rows.x.len()).filter(|&i| rows.group[i] == g).collect();
            let x = idx.iter().map(|&i| rows.x[i]).collect();
            let labels = idx.iter().map(|&i| rows.labels[i].clone()).collect();
            let na = rows.na_x.iter().filter(|(_, ng)| *ng == g).map(|(l, _)| l).collect();
            let out = analyse_group(req, g.clone(), x, labels, na, global.as_ref());
            (g, out)
        })
        .collect();

    let mut result = AnalysisResult {
        predictor: req.predictor.clone(),
        outcome: req.class.clone(),
        subgroup_column: req.subgroup.clone(),
        dropped_rows: rows.dropped,
        boot_runs: req.boot.boot_runs,
        records: Vec::new(),
        failures: Vec::new(),
    };
    let mut first_error = None;
    for (g, out) in outcomes {
        match out {
            Ok(r) => result.records.push(r),
            Err(e) => {
                result.failures.push(SubgroupFailure {
                    subgroup: g,
                    error: e.to_string(),
                });
                first_error.get_or_insert(e);
            }
        }
    }
    match (result.records.is_empty(), first_error) {
        (true, Some(e)) => Err(e),
        _ => Ok(result),
    }
}

/// Numeric columns other than the class and subgroup columns.
pub fn eligible_predictors(data: &Dataset, class: &str, subgroup: Option<&str>) -> Vec<String> {
    data.names()
        .filter(|&n| n != class && Some(n) != subgroup && data.is_numeric(n))
        .map(str::to_string)
        .collect()
}

#[derive(Debug)]
pub struct MultiEntry {
    pub predictor: String,
    pub result: Result<AnalysisResult>,
}

/// Run every eligible predictor; `req.predictor` is ignored. Failures stay
/// with their predictor.
pub fn run_multi(data: &Dataset, req: &AnalysisRequest) -> Result<Vec<MultiEntry>> {
    let predictors = eligible_predictors(data, &req.class, req.subgroup.as_deref());
    if predictors.is_empty() {
        return Err(Error::Data("no numeric predictor columns".into()));
    }
    Ok(predictors
        .into_par_iter()
        .map(|p| {
            let one = AnalysisRequest {
                predictor: p.clone(),
                ..req.clone()
            };
            MultiEntry {
                result: run_analysis(data, &one),
                predictor: p,
            }
        })
        .collect())
}

/// A printable table: header cells and rows of already formatted cells.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub title: Option<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn render(&self, out: &mut String) {
        if let Some(t) = &self.title {
            out.push_str(t);
            out.push('\n');
        }
        let mut width: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        for row in &self.rows {
            for (w, cell) in width.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let line = |cells: &[String], out: &mut String| {
            let parts: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{c:>w$}")).collect();
            out.push(' ');
            out.push_str(&parts.join(" "));
            out.push('\n');
        };
        line(&self.columns, out);
        for row in &self.rows {
            line(row, out);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryBlock {
    pub header: Vec<(String, String)>,
    pub tables: Vec<Table>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisSummary {
    pub blocks: Vec<SummaryBlock>,
}

impl AnalysisSummary {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                out.push_str("------------------------------------------------------------\n");
            }
            for (k, v) in &block.header {
                out.push_str(&format!("{k}: {v}\n"));
            }
            for t in &block.tables {
                out.push('\n');
                t.render(&mut out);
            }
        }
        out
    }
}

/// Format for printing: integers without decimals, otherwise 4 decimals
/// with trailing zeros trimmed.
pub fn fmt_num(v: f64) -> String {
    if !v.is_finite() {
        return to_text(v);
    }
    if v == v.trunc() && v.abs() < 1e15 {
        return format!("{}", v as i64);
    }
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn distribution_columns(first: &str) -> Vec<String> {
    [first, "Min.", "5%", "1st Qu.", "Median", "Mean", "3rd Qu.", "95%", "Max.", "SD", "NAs"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

fn distribution_row(name: &str, d: &Distribution) -> Vec<String> {
    let mut row = vec![name.to_string()];
    row.extend(d.as_array().iter().map(|&v| fmt_num(v)));
    row.push(d.missing.to_string());
    row
}

fn record_block(result: &AnalysisResult, rec: &AnalysisRecord) -> SummaryBlock {
    let r = &rec.result;
    let mut header = vec![
        ("Method".to_string(), r.method_name.clone()),
        ("Predictor".to_string(), rec.predictor.clone()),
        ("Outcome".to_string(), rec.outcome.clone()),
        ("Direction".to_string(), r.direction.symbol().to_string()),
    ];
    if let (Some(col), Some(g)) = (&result.subgroup_column, &rec.subgroup) {
        header.push(("Subgroup".to_string(), format!("{g} ({col})")));
    }
    if let Some(b) = &rec.boot_summary {
        header.push(("Nr. of bootstraps".to_string(), b.boot_runs.to_string()));
        if b.failed > 0 {
            header.push(("Failed bootstraps".to_string(), b.failed.to_string()));
        }
    }
    let p = &r.panel;
    let mut tables = vec![
        Table {
            title: None,
            columns: ["AUC", "n", "n_pos", "n_neg"].map(String::from).to_vec(),
            rows: vec![vec![fmt_num(r.auc), r.n.to_string(), r.n_pos.to_string(), r.n_neg.to_string()]],
        },
        Table {
            title: None,
            columns: vec![
                "optimal_cutpoint".into(),
                r.metric_name.clone(),
                "acc".into(),
                "sensitivity".into(),
                "specificity".into(),
                "tp".into(),
                "fn".into(),
                "fp".into(),
                "tn".into(),
            ],
            rows: vec![vec![
                fmt_num(r.optimal_cutpoint),
                fmt_num(r.method_metric_value),
                fmt_num(p.accuracy),
                fmt_num(p.sensitivity),
                fmt_num(p.specificity),
                p.tp.to_string(),
                p.fn_.to_string(),
                p.fp.to_string(),
                p.tn.to_string(),
            ]],
        },
    ];
    if r.tied_cutpoints.len() > 1 {
        tables.push(Table {
            title: Some("Tied cutpoints:".into()),
            columns: vec!["cutpoint".into()],
            rows: r.tied_cutpoints.iter().map(|&c| vec![fmt_num(c)]).collect(),
        });
    }
    tables.push(Table {
        title: Some("Predictor summary:".into()),
        columns: distribution_columns("Data"),
        rows: rec.predictor_summary.iter().map(|s| distribution_row(&s.data, &s.distribution)).collect(),
    });
    if let Some(b) = &rec.boot_summary {
        tables.push(Table {
            title: Some("Bootstrap summary:".into()),
            columns: distribution_columns("Variable"),
            rows: b.rows.iter().map(|s| distribution_row(&s.variable, &s.distribution)).collect(),
        });
    }
    SummaryBlock { header, tables }
}

/// One block per record, in subgroup order, then one per failed subgroup.
pub fn summarize_analysis(result: &AnalysisResult) -> AnalysisSummary {
    let mut blocks: Vec<SummaryBlock> = result.records.iter().map(|r| record_block(result, r)).collect();
    for f in &result.failures {
        blocks.push(SummaryBlock {
            header: vec![
                ("Subgroup".into(), f.subgroup.clone().unwrap_or_default()),
                ("Error".into(), f.error.clone()),
            ],
            tables: vec![],
        });
    }
    AnalysisSummary { blocks }
}

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pipeline::{summarize_analysis, AnalysisResult};
use crate::serde_real::to_text;

/// Version of the JSON result layout; bump on incompatible changes.
pub const SCHEMA_VERSION: &str = "1.0";

/// JSON schema of the emitted results.
pub const RESULT_SCHEMA: &str = include_str!("../../schema/result.schema.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" | "summary" => Ok(Format::Text),
            other => Err(Error::InvalidArgument(format!("unknown format '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictorError {
    pub predictor: String,
    pub error: String,
}

/// Missing cells of one input column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MissingCount {
    pub column: String,
    pub count: usize,
}

/// Everything one invocation produces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub analyses: Vec<AnalysisResult>,
    pub errors: Vec<PredictorError>,
    /// Columns read with missing cells; those rows are dropped.
    pub missing: Vec<MissingCount>,
}

impl Report {
    pub fn new(analyses: Vec<AnalysisResult>, errors: Vec<PredictorError>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            analyses,
            errors,
            missing: Vec::new(),
        }
    }

    pub fn with_missing(mut self, missing: &[(String, usize)]) -> Self {
        self.missing = missing
            .iter()
            .filter(|(_, n)| *n > 0)
            .map(|(column, count)| MissingCount {
                column: column.clone(),
                count: *count,
            })
            .collect();
        self
    }
}

pub const CSV_COLUMNS: [&str; 28] = [
    "predictor",
    "outcome",
    "subgroup",
    "method",
    "direction",
    "pos_class",
    "neg_class",
    "optimal_cutpoint",
    "metric",
    "metric_value",
    "acc",
    "sensitivity",
    "specificity",
    "youden",
    "ppv",
    "npv",
    "cohens_kappa",
    "tp",
    "fn",
    "fp",
    "tn",
    "AUC",
    "prevalence",
    "n",
    "n_pos",
    "n_neg",
    "tied_cutpoints",
    "boot_runs",
];

/// One row per (predictor, subgroup) record, cells as text.
pub fn flatten(report: &Report) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for a in &report.analyses {
        for rec in &a.records {
            let r = &rec.result;
            let p = &r.panel;
            let tied: Vec<String> = r.tied_cutpoints.iter().map(|&c| to_text(c)).collect();
            rows.push(vec![
                rec.predictor.clone(),
                rec.outcome.clone(),
                rec.subgroup.clone().unwrap_or_default(),
                r.method_name.clone(),
                r.direction.symbol().to_string(),
                r.pos_class.clone(),
                r.neg_class.clone(),
                to_text(r.optimal_cutpoint),
                r.metric_name.clone(),
                to_text(r.method_metric_value),
                to_text(p.accuracy),
                to_text(p.sensitivity),
                to_text(p.specificity),
                to_text(p.youden),
                to_text(p.ppv),
                to_text(p.npv),
                to_text(p.cohens_kappa),
                p.tp.to_string(),
                p.fn_.to_string(),
                p.fp.to_string(),
                p.tn.to_string(),
                to_text(r.auc),
                to_text(r.prevalence),
                r.n.to_string(),
                r.n_pos.to_string(),
                r.n_neg.to_string(),
                tied.join(";"),
                a.boot_runs.to_string(),
            ]);
        }
    }
    rows
}

pub fn emit_result(report: &Report, format: Format, mut out: impl Write) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, report).map_err(|e| Error::Io(e.to_string()))?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let io = |e: csv::Error| Error::Io(e.to_string());
            w.write_record(CSV_COLUMNS).map_err(io)?;
            for row in flatten(report) {
                w.write_record(&row).map_err(io)?;
            }
            w.flush()?;
        }
        Format::Text => {
            for (i, a) in report.analyses.iter().enumerate() {
                if i > 0 {
                    writeln!(out, "============================================================")?;
                }
                out.write_all(summarize_analysis(a).to_text().as_bytes())?;
            }
            for e in &report.errors {
                writeln!(out, "Predictor {}: {}", e.predictor, e.error)?;
            }
        }
    }
    Ok(())
}

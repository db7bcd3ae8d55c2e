//! Plot-ready data files. Nothing here renders images.

use std::fs;
use std::path::{Path, PathBuf};

use crate::bootstrap::percentile_interval;
use crate::error::{Error, Result};
use crate::metrics::MetricSpec;
use crate::pipeline::{AnalysisRecord, AnalysisResult};
use crate::roc::build_roc;
use crate::serde_real::to_text;
use crate::stats::{quantile_sorted, sorted};

pub const DEFAULT_CONF_LEVEL: f64 = 0.95;

pub const FILES: [&str; 5] = [
    "roc_points.csv",
    "metric_by_cutpoint.csv",
    "boot_cutpoints.csv",
    "boot_metric_oob.csv",
    "predictor_histogram.csv",
];

struct CsvOut {
    w: csv::Writer<fs::File>,
    subgroup: bool,
}

impl CsvOut {
    fn create(path: PathBuf, columns: &[&str], subgroup: bool) -> Result<Self> {
        let mut w = csv::Writer::from_path(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut header: Vec<&str> = Vec::new();
        if subgroup {
            header.push("subgroup");
        }
        header.extend_from_slice(columns);
        w.write_record(&header).map_err(|e| Error::Io(e.to_string()))?;
        Ok(CsvOut { w, subgroup })
    }

    fn row(&mut self, rec: &AnalysisRecord, cells: Vec<String>) -> Result<()> {
        let mut all = Vec::with_capacity(cells.len() + 1);
        if self.subgroup {
            all.push(rec.subgroup.clone().unwrap_or_default());
        }
        all.extend(cells);
        self.w.write_record(&all).map_err(|e| Error::Io(e.to_string()))
    }

    fn finish(mut self) -> Result<()> {
        self.w.flush()?;
        Ok(())
    }
}

/// Histogram bins `(lower, upper, count)` with half-open bins, the last
/// closed. Integer data gets unit bins, anything else Freedman-Diaconis.
pub fn histogram_bins(values: &[f64]) -> Vec<(f64, f64, usize)> {
    let s = sorted(values);
    let (Some(&lo), Some(&hi)) = (s.first(), s.last()) else {
        return Vec::new();
    };
    let width = if s.iter().all(|v| v.fract() == 0.0) {
        1.0
    } else {
        let iqr = quantile_sorted(&s, 0.75) - quantile_sorted(&s, 0.25);
        let fd = 2.0 * iqr / (s.len() as f64).cbrt();
        if fd > 0.0 {
            fd
        } else if hi > lo {
            (hi - lo) / (s.len() as f64).sqrt().ceil()
        } else {
            1.0
        }
    };
    let n_bins = (((hi - lo) / width).floor() as usize) + 1;
    let mut counts = vec![0usize; n_bins];
    for v in &s {
        let b = (((v - lo) / width).floor() as usize).min(n_bins - 1);
        counts[b] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(b, c)| (lo + b as f64 * width, lo + (b + 1) as f64 * width, c))
        .collect()
}

/// Metric value at every full-sample cutpoint on each repetition's
/// in-bag data. The in-bag curve classifies exactly like its nearest
/// in-bag cutpoint on the predicted-positive side.
fn in_bag_metric_at(rec: &AnalysisRecord, metric: &MetricSpec) -> Result<Vec<Vec<f64>>> {
    let Some(run) = &rec.boot else {
        return Ok(Vec::new());
    };
    let cuts = rec.roc.cutpoints();
    let mut per_cut = vec![Vec::with_capacity(run.repetitions.len()); cuts.len()];
    for rep in &run.repetitions {
        let in_bag = rec.sample.subset(&rep.in_bag_rows)?;
        let curve = build_roc(&in_bag, rec.roc.direction());
        for (slot, &c) in per_cut.iter_mut().zip(cuts) {
            slot.push(curve.counts_at(c).map_or(f64::NAN, |k| metric.value(&k)));
        }
    }
    Ok(per_cut)
}

/// Write the plot bundle for one analysis into `dir`.
pub fn export_plot_data(result: &AnalysisResult, metric: &MetricSpec, dir: &Path, conf_level: f64) -> Result<()> {
    if !(conf_level > 0.0 && conf_level < 1.0) {
        return Err(Error::InvalidArgument(format!("conf level must lie in (0, 1), got {conf_level}")));
    }
    fs::create_dir_all(dir)?;
    let sub = result.subgroup_column.is_some();
    let booted = result.records.iter().any(|r| r.boot.is_some());
    let path = |f: &str| dir.join(f);

    let mut roc = CsvOut::create(path(FILES[0]), &["cutpoint", "fpr", "tpr"], sub)?;
    let mut by_cut = if booted {
        CsvOut::create(path(FILES[1]), &["cutpoint", "metric", "ci_lower", "ci_upper"], sub)?
    } else {
        CsvOut::create(path(FILES[1]), &["cutpoint", "metric"], sub)?
    };
    let mut cuts = CsvOut::create(path(FILES[2]), &["repetition", "optimal_cutpoint"], sub)?;
    let mut oob = CsvOut::create(path(FILES[3]), &["repetition", "metric_b", "metric_oob"], sub)?;
    let mut hist = CsvOut::create(path(FILES[4]), &["class", "bin_lower", "bin_upper", "count"], sub)?;

    for rec in &result.records {
        let curve = &rec.roc;
        for i in 0..curve.len() {
            roc.row(rec, vec![to_text(curve.cutpoints()[i]), to_text(curve.fpr(i)), to_text(curve.tpr(i))])?;
        }

        let ci = in_bag_metric_at(rec, metric)?;
        for i in 0..curve.len() {
            let mut row = vec![to_text(curve.cutpoints()[i]), to_text(metric.value(&curve.counts(i)))];
            if booted {
                let present: Vec<f64> = ci.get(i).into_iter().flatten().copied().filter(|v| !v.is_nan()).collect();
                let (lo, hi) = if present.is_empty() {
                    (f64::NAN, f64::NAN)
                } else {
                    percentile_interval(&present, 1.0 - conf_level)
                };
                row.push(to_text(lo));
                row.push(to_text(hi));
            }
            by_cut.row(rec, row)?;
        }

        if let Some(run) = &rec.boot {
            for rep in &run.repetitions {
                cuts.row(rec, vec![rep.index.to_string(), to_text(rep.in_bag_cutpoint)])?;
                let oob_value = rep.out_of_bag.map_or(f64::NAN, |p| p.metric);
                oob.row(rec, vec![rep.index.to_string(), to_text(rep.in_bag.metric), to_text(oob_value)])?;
            }
        }

        let x = rec.sample.predictor();
        let labels = rec.sample.labels();
        for (class, positive) in [(&rec.resolution.neg_class, false), (&rec.resolution.pos_class, true)] {
            let v: Vec<f64> = x.iter().zip(labels).filter(|(_, &l)| l == positive).map(|(&v, _)| v).collect();
            for (lo, hi, count) in histogram_bins(&v) {
                hist.row(rec, vec![class.clone(), to_text(lo), to_text(hi), count.to_string()])?;
            }
        }
    }
    for w in [roc, by_cut, cuts, oob, hist] {
        w.finish()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_bins_have_unit_width() {
        let bins = histogram_bins(&[0.0, 1.0, 1.0, 3.0]);
        assert_eq!(bins, [(0.0, 1.0, 1), (1.0, 2.0, 2), (2.0, 3.0, 0), (3.0, 4.0, 1)]);
    }

    #[test]
    fn freedman_diaconis_covers_all() {
        let v: Vec<f64> = (0..100).map(|i| (i as f64 * 0.37).sin() * 3.1).collect();
        let bins = histogram_bins(&v);
        assert_eq!(bins.iter().map(|b| b.2).sum::<usize>(), 100);
        let s = sorted(&v);
        let iqr = quantile_sorted(&s, 0.75) - quantile_sorted(&s, 0.25);
        let w = bins[0].1 - bins[0].0;
        assert!((w - 2.0 * iqr / 100f64.cbrt()).abs() < 1e-12);
    }
}

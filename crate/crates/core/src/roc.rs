//! ROC construction by sorting and cumulative summation.
//!
//! A curve is stored in traversal order: the sentinel threshold first
//! (every observation predicted negative, the point (0,0)), then one point
//! per unique predictor value, ending at (1,1). Only the cumulative
//! true/false positive counts are stored; the remaining cells and the rates
//! are derived from the class totals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::{Direction, Sample};

/// The 2x2 confusion matrix at one cutpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn new(tp: u64, fp: u64, tn: u64, fn_: u64) -> Self {
        ConfusionCounts { tp, fp, tn, fn_ }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn positives(&self) -> u64 {
        self.tp + self.fn_
    }

    pub fn negatives(&self) -> u64 {
        self.fp + self.tn
    }

    /// Tally a sample classified at `cutpoint`.
    pub fn classify(sample: &Sample, cutpoint: f64, direction: Direction) -> Self {
        let mut c = ConfusionCounts::default();
        for (x, pos) in sample.iter() {
            match (direction.predicts_positive(x, cutpoint), pos) {
                (true, true) => c.tp += 1,
                (true, false) => c.fp += 1,
                (false, false) => c.tn += 1,
                (false, true) => c.fn_ += 1,
            }
        }
        c
    }
}

/// An empirical ROC curve.
#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    direction: Direction,
    cutpoints: Vec<f64>,
    tp: Vec<u64>,
    fp: Vec<u64>,
    n_pos: u64,
    n_neg: u64,
    metric_values: Option<Vec<f64>>,
}

/// Build the ROC curve of `sample` in `direction`.
///
/// Runs in O(n log n) time. Ties in the predictor collapse to one point.
pub fn build_roc(sample: &Sample, direction: Direction) -> RocCurve {
    // `+ 0.0` folds -0.0 into 0.0 so the two compare equal when grouping.
    let mut pairs: Vec<(f64, bool)> = sample.iter().map(|(x, p)| (x + 0.0, p)).collect();
    match direction {
        Direction::Ge => pairs.sort_unstable_by(|a, b| b.0.total_cmp(&a.0)),
        Direction::Le => pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0)),
    }

    let unique = 1 + pairs.windows(2).filter(|w| w[0].0 != w[1].0).count();
    let mut cutpoints = Vec::with_capacity(unique + 1);
    let mut tp = Vec::with_capacity(unique + 1);
    let mut fp = Vec::with_capacity(unique + 1);
    cutpoints.push(direction.sentinel());
    tp.push(0);
    fp.push(0);

    let (mut cum_tp, mut cum_fp) = (0u64, 0u64);
    let mut i = 0;
    while i < pairs.len() {
        let value = pairs[i].0;
        while i < pairs.len() && pairs[i].0 == value {
            if pairs[i].1 {
                cum_tp += 1;
            } else {
                cum_fp += 1;
            }
            i += 1;
        }
        cutpoints.push(value);
        tp.push(cum_tp);
        fp.push(cum_fp);
    }
    drop(pairs);

    RocCurve {
        direction,
        cutpoints,
        tp,
        fp,
        n_pos: cum_tp,
        n_neg: cum_fp,
        metric_values: None,
    }
}

impl RocCurve {
    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Candidate cutpoints in traversal order, sentinel first.
    pub fn cutpoints(&self) -> &[f64] {
        &self.cutpoints
    }

    pub fn len(&self) -> usize {
        self.cutpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cutpoints.is_empty()
    }

    pub fn n_pos(&self) -> u64 {
        self.n_pos
    }

    pub fn n_neg(&self) -> u64 {
        self.n_neg
    }

    pub fn counts(&self, i: usize) -> ConfusionCounts {
        ConfusionCounts {
            tp: self.tp[i],
            fp: self.fp[i],
            tn: self.n_neg - self.fp[i],
            fn_: self.n_pos - self.tp[i],
        }
    }

    pub fn iter_counts(&self) -> impl ExactSizeIterator<Item = ConfusionCounts> + '_ {
        (0..self.len()).map(|i| self.counts(i))
    }

    pub fn tpr(&self, i: usize) -> f64 {
        self.tp[i] as f64 / self.n_pos as f64
    }

    pub fn fpr(&self, i: usize) -> f64 {
        self.fp[i] as f64 / self.n_neg as f64
    }

    pub fn tnr(&self, i: usize) -> f64 {
        1.0 - self.fpr(i)
    }

    pub fn fnr(&self, i: usize) -> f64 {
        1.0 - self.tpr(i)
    }

    pub fn metric_values(&self) -> Option<&[f64]> {
        self.metric_values.as_deref()
    }

    pub fn set_metric_values(&mut self, values: Vec<f64>) -> Result<()> {
        if values.len() != self.len() {
            return Err(Error::InvalidArgument(format!(
                "metric vector has {} values for a curve with {} cutpoints",
                values.len(),
                self.len()
            )));
        }
        self.metric_values = Some(values);
        Ok(())
    }

    /// Exact position of a candidate cutpoint.
    pub fn index_of(&self, cutpoint: f64) -> Option<usize> {
        let i = self.position_at(cutpoint)?;
        (self.cutpoints[i] == cutpoint).then_some(i)
    }

    /// Curve index whose classification equals classifying at `cutpoint`.
    fn position_at(&self, cutpoint: f64) -> Option<usize> {
        if cutpoint.is_nan() {
            return None;
        }
        let dir = self.direction;
        // the sentinel satisfies the predicate for every non-NaN cutpoint
        let p = self.cutpoints.partition_point(|&v| dir.predicts_positive(v, cutpoint));
        Some(p - 1)
    }

    /// Confusion counts from applying `cutpoint` to the curve's data.
    ///
    /// Works for any real cutpoint, not only candidates.
    pub fn counts_at(&self, cutpoint: f64) -> Option<ConfusionCounts> {
        self.position_at(cutpoint).map(|i| self.counts(i))
    }

    /// Midpoint between candidate `i` and the next point in traversal order.
    ///
    /// For `>=` this is the next lower unique value, for `<=` the next
    /// higher one; the sentinel and the last candidate are returned as is.
    pub fn midpoint(&self, i: usize) -> f64 {
        if i == 0 || i + 1 >= self.len() {
            return self.cutpoints[i];
        }
        (self.cutpoints[i] + self.cutpoints[i + 1]) / 2.0
    }
}

/// Area under the curve by the trapezoidal rule.
///
/// Computed from integer counts, so it equals the Mann-Whitney statistic
/// with ties credited 1/2 exactly.
pub fn auc(curve: &RocCurve) -> f64 {
    let mut twice_area: u128 = 0;
    for i in 1..curve.len() {
        let dfp = (curve.fp[i] - curve.fp[i - 1]) as u128;
        twice_area += dfp * (curve.tp[i] + curve.tp[i - 1]) as u128;
    }
    twice_area as f64 / (2.0 * curve.n_pos as f64 * curve.n_neg as f64)
}

/// Midpoint of `chosen` and its neighbouring observed value.
///
/// `>=` pairs with the next lower value, `<=` with the next higher one,
/// which keeps the classification of every observation unchanged.
pub fn midpoint_cutpoint(chosen: f64, sample: &Sample, direction: Direction) -> Result<f64> {
    if !sample.predictor().contains(&chosen) {
        return Err(Error::NotACandidate(chosen));
    }
    let neighbour = match direction {
        Direction::Ge => sample
            .predictor()
            .iter()
            .copied()
            .filter(|&v| v < chosen)
            .max_by(f64::total_cmp),
        Direction::Le => sample
            .predictor()
            .iter()
            .copied()
            .filter(|&v| v > chosen)
            .min_by(f64::total_cmp),
    };
    Ok(neighbour.map_or(chosen, |n| (chosen + n) / 2.0))
}

use serde::{Deserialize, Serialize};

use super::{finish, Choice, CutpointResult, MethodId};
use crate::error::{Error, Result};
use crate::metrics::MetricSpec;
use crate::roc::RocCurve;
use crate::sample::{Direction, Sample};
use crate::special::normal_cdf;
use crate::stats::{mean, sd};

/// Relative gap between the class variances below which they are treated
/// as equal.
const EQUAL_VARIANCE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalParams {
    pub mu_neg: f64,
    pub sd_neg: f64,
    pub mu_pos: f64,
    pub sd_pos: f64,
}

impl NormalParams {
    pub fn from_sample(sample: &Sample) -> Result<Self> {
        let moments = |v: &[f64], class: &'static str| -> Result<(f64, f64)> {
            if v.len() < 2 {
                return Err(Error::ZeroVariance(class));
            }
            let s = sd(v);
            if !(s > 0.0) {
                return Err(Error::ZeroVariance(class));
            }
            Ok((mean(v), s))
        };
        let (mu_neg, sd_neg) = moments(&sample.negatives(), "negative")?;
        let (mu_pos, sd_pos) = moments(&sample.positives(), "positive")?;
        Ok(NormalParams {
            mu_neg,
            sd_neg,
            mu_pos,
            sd_pos,
        })
    }

    /// Population Youden index of cutpoint `c` in `direction`.
    pub fn youden(&self, c: f64, direction: Direction) -> f64 {
        let f_neg = normal_cdf((c - self.mu_neg) / self.sd_neg);
        let f_pos = normal_cdf((c - self.mu_pos) / self.sd_pos);
        match direction {
            Direction::Ge => f_neg - f_pos,
            Direction::Le => f_pos - f_neg,
        }
    }
}

/// Youden-optimal cutpoint under binormal class distributions.
///
/// Solves for the crossing of the two densities. Of the two roots, the one
/// between the class means is used; if neither or both lie there, the one
/// with the larger Youden index in `direction`.
pub fn normal_youden_cutpoint(p: &NormalParams, direction: Direction) -> f64 {
    let (vn, vp) = (p.sd_neg * p.sd_neg, p.sd_pos * p.sd_pos);
    let diff = vn - vp;
    if diff.abs() < EQUAL_VARIANCE_TOLERANCE * vn.max(vp) {
        return (p.mu_neg + p.mu_pos) / 2.0;
    }
    let d = p.mu_neg - p.mu_pos;
    let root = p.sd_neg * p.sd_pos * (d * d + diff * (vn / vp).ln()).sqrt();
    let base = p.mu_pos * vn - p.mu_neg * vp;
    let candidates = [(base - root) / diff, (base + root) / diff];
    let (lo, hi) = (p.mu_neg.min(p.mu_pos), p.mu_neg.max(p.mu_pos));
    let inside: Vec<f64> = candidates
        .iter()
        .copied()
        .filter(|c| (lo..=hi).contains(c))
        .collect();
    if inside.len() == 1 {
        return inside[0];
    }
    if p.youden(candidates[1], direction) > p.youden(candidates[0], direction) {
        candidates[1]
    } else {
        candidates[0]
    }
}

pub fn estimate_normal(sample: &Sample, curve: &RocCurve, metric: &MetricSpec) -> Result<CutpointResult> {
    let params = NormalParams::from_sample(sample)?;
    let c = normal_youden_cutpoint(&params, curve.direction());
    finish(MethodId::NormalYouden, curve, metric, Choice::single(c))
}

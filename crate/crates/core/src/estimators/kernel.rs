use super::{finish, Choice, CutpointResult, MethodId};
use crate::error::{Error, Result};
use crate::metrics::MetricSpec;
use crate::roc::RocCurve;
use crate::sample::{Direction, Sample};
use crate::smoothers::{kernel_cdf, rule_of_thumb_bandwidth};

pub const DEFAULT_KERNEL_GRID: usize = 512;

fn distinct_count(v: &[f64]) -> usize {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s.dedup();
    s.len()
}

/// Maximise the difference of the kernel-smoothed class distribution
/// functions over `grid_points` equally spaced values spanning
/// [min - h, max + h], h being the larger class bandwidth. The first grid
/// maximum wins.
pub fn kernel_youden_cutpoint(sample: &Sample, direction: Direction, grid_points: usize) -> Result<f64> {
    let (neg, pos) = (sample.negatives(), sample.positives());
    for v in [&neg, &pos] {
        let got = distinct_count(v);
        if got < 2 {
            return Err(Error::InsufficientSupport { needed: 2, got });
        }
    }
    let f_neg = kernel_cdf(&neg, rule_of_thumb_bandwidth(&neg)?)?;
    let g_pos = kernel_cdf(&pos, rule_of_thumb_bandwidth(&pos)?)?;
    let h = f_neg.bandwidth().max(g_pos.bandwidth());
    let x = sample.predictor();
    let lo = x.iter().copied().fold(f64::INFINITY, f64::min) - h;
    let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max) + h;
    let step = (hi - lo) / (grid_points - 1) as f64;
    let sign = match direction {
        Direction::Ge => 1.0,
        Direction::Le => -1.0,
    };
    let mut best = (f64::NEG_INFINITY, lo);
    for i in 0..grid_points {
        let c = lo + i as f64 * step;
        let j = sign * (f_neg.eval(c) - g_pos.eval(c));
        if j > best.0 {
            best = (j, c);
        }
    }
    Ok(best.1)
}

pub fn estimate_kernel(
    sample: &Sample,
    curve: &RocCurve,
    metric: &MetricSpec,
    grid_points: usize,
) -> Result<CutpointResult> {
    let c = kernel_youden_cutpoint(sample, curve.direction(), grid_points)?;
    finish(MethodId::KernelYouden, curve, metric, Choice::single(c))
}

use super::{finish, Choice, CutpointResult, MethodId, TieBreak};
use crate::error::Result;
use crate::metrics::{best_cutpoint_indices, evaluate_metric, MetricSpec, Sense};
use crate::roc::RocCurve;

/// Pick the best of `values` (aligned with the curve's cutpoints), resolve
/// ties and optionally move to midpoints. NaN values never win.
pub fn select_cutpoint(
    curve: &RocCurve,
    values: &[f64],
    sense: Sense,
    tie_break: TieBreak,
    use_midpoints: bool,
) -> Result<(f64, Vec<f64>, f64)> {
    let best = best_cutpoint_indices(values, sense)?;
    let value = values[best[0]];
    let tied: Vec<f64> = best
        .iter()
        .map(|&i| {
            if use_midpoints {
                curve.midpoint(i)
            } else {
                curve.cutpoints()[i]
            }
        })
        .collect();
    Ok((tie_break.resolve(&tied), tied, value))
}

/// Search all candidate cutpoints for the in-sample optimum.
pub fn estimate_empirical(
    curve: &RocCurve,
    metric: &MetricSpec,
    tie_break: TieBreak,
    use_midpoints: bool,
) -> Result<CutpointResult> {
    let values = evaluate_metric(metric, curve)?.values;
    let (cutpoint, tied, _) = select_cutpoint(curve, &values, metric.sense, tie_break, use_midpoints)?;
    finish(
        MethodId::Empirical,
        curve,
        metric,
        Choice {
            tied,
            ..Choice::single(cutpoint)
        },
    )
}

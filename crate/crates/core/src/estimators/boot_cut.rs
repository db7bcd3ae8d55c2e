use rayon::prelude::*;

use super::{empirical::select_cutpoint, finish, Choice, CutpointResult, MethodId, SummaryFn, TieBreak};
use crate::error::{Error, Result};
use crate::metrics::{evaluate_metric, MetricSpec};
use crate::rng;
use crate::roc::{build_roc, RocCurve};
use crate::sample::Sample;

/// Redraws allowed per resample when one class is missing.
pub const MAX_RESAMPLE_RETRIES: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct BootCutConfig {
    pub count: usize,
    pub summary_fn: SummaryFn,
    pub tie_break: TieBreak,
    pub use_midpoints: bool,
    pub seed: u64,
}

/// Draw a resample of `n` indices containing both classes, retrying up to
/// the budget. The retries continue on the same stream.
pub(crate) fn draw_two_class_resample(
    sample: &Sample,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<Vec<usize>> {
    let labels = sample.labels();
    for _ in 0..=MAX_RESAMPLE_RETRIES {
        let idx = rng::resample(rng, sample.len());
        let pos = idx.iter().filter(|&&i| labels[i]).count();
        if pos > 0 && pos < idx.len() {
            return Ok(idx);
        }
    }
    Err(Error::RetryBudgetExhausted(MAX_RESAMPLE_RETRIES))
}

/// Summarise the empirical optimum over bootstrap resamples.
///
/// The summary need not be an observed value; the panel comes from
/// classifying the full sample at it.
pub fn estimate_boot_cut(
    sample: &Sample,
    curve: &RocCurve,
    metric: &MetricSpec,
    config: &BootCutConfig,
) -> Result<CutpointResult> {
    let direction = curve.direction();
    let cutpoints: Vec<f64> = (0..config.count)
        .into_par_iter()
        .map(|k| {
            let mut stream = rng::stream(config.seed, k as u64);
            let idx = draw_two_class_resample(sample, &mut stream)?;
            let resample = sample.subset(&idx)?;
            let inner = build_roc(&resample, direction);
            let values = evaluate_metric(metric, &inner)?.values;
            let (c, _, _) =
                select_cutpoint(&inner, &values, metric.sense, config.tie_break, config.use_midpoints)?;
            Ok(c)
        })
        .collect::<Result<Vec<f64>>>()?;
    let cutpoint = config.summary_fn.apply(&cutpoints);
    finish(
        MethodId::BootCut,
        curve,
        metric,
        Choice {
            resample_cutpoints: Some(cutpoints),
            ..Choice::single(cutpoint)
        },
    )
}

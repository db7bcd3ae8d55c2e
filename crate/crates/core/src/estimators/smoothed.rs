use serde::{Deserialize, Serialize};

use super::{empirical::select_cutpoint, finish, Choice, CutpointResult, MethodId, TieBreak};
use crate::error::Result;
use crate::metrics::{best_cutpoint_indices, evaluate_metric, MetricSpec, Sense};
use crate::roc::RocCurve;
use crate::smoothers::{
    fit_loess_aicc, fit_penalized_spline_gcv, fit_smoothing_spline, Smoothing, SplineOptions,
    DEFAULT_BASIS_DIM, DEFAULT_SPAR,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Smoother {
    Gam,
    Spline,
    Loess,
}

impl Smoother {
    pub fn prefix(self) -> &'static str {
        match self {
            Smoother::Gam => "gam",
            Smoother::Spline => "spline",
            Smoother::Loess => "loess",
        }
    }

    pub fn method(self) -> MethodId {
        match self {
            Smoother::Gam => MethodId::GamSmooth,
            Smoother::Spline => MethodId::SplineSmooth,
            Smoother::Loess => MethodId::LoessSmooth,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmootherParams {
    pub spar: f64,
    pub spline_knots: Option<usize>,
    pub loess_degree: usize,
    pub gam_basis_dim: usize,
}

impl Default for SmootherParams {
    fn default() -> Self {
        SmootherParams {
            spar: DEFAULT_SPAR,
            spline_knots: None,
            loess_degree: 1,
            gam_basis_dim: DEFAULT_BASIS_DIM,
        }
    }
}

fn fitted_values(smoother: Smoother, params: &SmootherParams, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    Ok(match smoother {
        Smoother::Spline => fit_smoothing_spline(x, y, SplineOptions {
            smoothing: Smoothing::Spar(params.spar),
            knots: params.spline_knots,
        })?
        .fitted()
        .to_vec(),
        Smoother::Loess => fit_loess_aicc(x, y, params.loess_degree)?.fitted().to_vec(),
        Smoother::Gam => fit_penalized_spline_gcv(x, y, params.gam_basis_dim)?.fitted().to_vec(),
    })
}

/// Smooth `y` over `x` and return the index of the best fitted value
/// (lower-middle of ties in ascending x) and that fitted value.
pub fn select_smoothed(
    x: &[f64],
    y: &[f64],
    sense: Sense,
    smoother: Smoother,
    params: &SmootherParams,
) -> Result<(usize, f64)> {
    let fitted = fitted_values(smoother, params, x, y)?;
    let mut best = best_cutpoint_indices(&fitted, sense)?;
    best.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let i = best[(best.len() - 1) / 2];
    Ok((i, fitted[i]))
}

/// Smooth the metric over the candidate cutpoints (sentinel excluded) and
/// take the optimum of the fitted values.
pub fn estimate_smoothed(
    curve: &RocCurve,
    metric: &MetricSpec,
    smoother: Smoother,
    params: &SmootherParams,
    tie_break: TieBreak,
    use_midpoints: bool,
) -> Result<CutpointResult> {
    let values = evaluate_metric(metric, curve)?.values;
    let used: Vec<usize> = (1..curve.len()).filter(|&i| !values[i].is_nan()).collect();
    let x: Vec<f64> = used.iter().map(|&i| curve.cutpoints()[i]).collect();
    let y: Vec<f64> = used.iter().map(|&i| values[i]).collect();
    let fitted = fitted_values(smoother, params, &x, &y)?;

    let mut on_curve = vec![f64::NAN; curve.len()];
    for (&i, &f) in used.iter().zip(&fitted) {
        on_curve[i] = f;
    }
    let (cutpoint, tied, best) =
        select_cutpoint(curve, &on_curve, metric.sense, tie_break, use_midpoints)?;
    finish(
        smoother.method(),
        curve,
        metric,
        Choice {
            tied,
            metric_override: Some((format!("{}_{}", smoother.prefix(), metric.name()), best)),
            ..Choice::single(cutpoint)
        },
    )
}

//! Cutpoint estimation methods.
//!
//! Every method ends the same way: a chosen cutpoint is located on the
//! unsmoothed curve of the full sample, and the standard panel and the
//! requested metric are read off there. Only the smoothed methods report a
//! different main-metric value, the optimum of the fitted curve.

mod baseline;
mod boot_cut;
mod empirical;
mod kernel;
mod normal;
mod smoothed;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use baseline::{estimate_baseline, Baseline};
pub use boot_cut::{estimate_boot_cut, BootCutConfig, MAX_RESAMPLE_RETRIES};
pub(crate) use boot_cut::draw_two_class_resample;
pub use empirical::{estimate_empirical, select_cutpoint};
pub use kernel::{estimate_kernel, kernel_youden_cutpoint, DEFAULT_KERNEL_GRID};
pub use normal::{estimate_normal, normal_youden_cutpoint, NormalParams};
pub use smoothed::{estimate_smoothed, select_smoothed, Smoother, SmootherParams};

use crate::error::{Error, Result};
use crate::metrics::{standard_metric_panel, MetricSpec, Sense, StandardPanel};
use crate::roc::{auc, RocCurve};
use crate::sample::{Direction, Sample};

macro_rules! method_ids {
    ($($variant:ident => $name:literal),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum MethodId {
            $($variant),*
        }

        impl MethodId {
            pub const ALL: &'static [MethodId] = &[$(MethodId::$variant),*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(MethodId::$variant => $name),*
                }
            }
        }

        impl FromStr for MethodId {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok(MethodId::$variant),)*
                    _ => Err(Error::InvalidArgument(format!("unknown method '{s}'"))),
                }
            }
        }
    };
}

method_ids! {
    Empirical => "empirical",
    BootCut => "boot_cut",
    GamSmooth => "gam_smooth",
    SplineSmooth => "spline_smooth",
    LoessSmooth => "loess_smooth",
    NormalYouden => "normal_youden",
    KernelYouden => "kernel_youden",
    Mean => "mean",
    Median => "median",
    Manual => "manual",
}

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for MethodId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for MethodId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl MethodId {
    /// Conventional function-style name, e.g. `maximize_metric`.
    pub fn display_name(self, sense: Sense) -> String {
        let verb = sense.as_str();
        match self {
            MethodId::Empirical => format!("{verb}_metric"),
            MethodId::BootCut => format!("{verb}_boot_metric"),
            MethodId::GamSmooth => format!("{verb}_gam_metric"),
            MethodId::SplineSmooth => format!("{verb}_spline_metric"),
            MethodId::LoessSmooth => format!("{verb}_loess_metric"),
            MethodId::NormalYouden => "oc_youden_normal".into(),
            MethodId::KernelYouden => "oc_youden_kernel".into(),
            MethodId::Mean => "oc_mean".into(),
            MethodId::Median => "oc_median".into(),
            MethodId::Manual => "oc_manual".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TieBreak {
    /// Report every tied cutpoint; the median one is used for the panel.
    All,
    /// Lower-middle tied cutpoint in ascending order.
    #[default]
    Median,
    Mean,
}

impl FromStr for TieBreak {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(TieBreak::All),
            "median" => Ok(TieBreak::Median),
            "mean" => Ok(TieBreak::Mean),
            _ => Err(Error::InvalidArgument(format!("unknown tie-break rule '{s}'"))),
        }
    }
}

impl TieBreak {
    /// Resolve a non-empty set of tied cutpoints to one value.
    pub fn resolve(self, tied: &[f64]) -> f64 {
        let mut v = tied.to_vec();
        v.sort_by(f64::total_cmp);
        match self {
            TieBreak::All | TieBreak::Median => v[(v.len() - 1) / 2],
            TieBreak::Mean => v.iter().sum::<f64>() / v.len() as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SummaryFn {
    #[default]
    Mean,
    Median,
}

impl SummaryFn {
    pub fn apply(self, values: &[f64]) -> f64 {
        match self {
            SummaryFn::Mean => crate::stats::mean(values),
            SummaryFn::Median => crate::stats::median(values),
        }
    }
}

impl FromStr for SummaryFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean" => Ok(SummaryFn::Mean),
            "median" => Ok(SummaryFn::Median),
            _ => Err(Error::InvalidArgument(format!("unknown summary function '{s}'"))),
        }
    }
}

pub const DEFAULT_BOOT_CUT: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSpec {
    pub method: MethodId,
    pub boot_cut_count: usize,
    pub summary_fn: SummaryFn,
    pub manual_cutpoint: Option<f64>,
    pub tie_break: TieBreak,
    pub use_midpoints: bool,
    pub smoother: SmootherParams,
    pub kernel_grid: usize,
}

impl MethodSpec {
    pub fn new(method: MethodId) -> Self {
        MethodSpec {
            method,
            boot_cut_count: DEFAULT_BOOT_CUT,
            summary_fn: SummaryFn::default(),
            manual_cutpoint: None,
            tie_break: TieBreak::default(),
            use_midpoints: false,
            smoother: SmootherParams::default(),
            kernel_grid: DEFAULT_KERNEL_GRID,
        }
    }

    pub fn manual(cutpoint: f64) -> Self {
        MethodSpec {
            manual_cutpoint: Some(cutpoint),
            ..Self::new(MethodId::Manual)
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.method {
            MethodId::Manual => match self.manual_cutpoint {
                None => return Err(Error::MissingParameter("manual_cutpoint")),
                Some(c) if c.is_nan() => {
                    return Err(Error::InvalidArgument("manual cutpoint is NaN".into()))
                }
                _ => {}
            },
            MethodId::BootCut if self.boot_cut_count < 2 => {
                return Err(Error::InvalidArgument(format!(
                    "boot_cut needs at least 2 resamples, got {}",
                    self.boot_cut_count
                )))
            }
            MethodId::KernelYouden if self.kernel_grid < 2 => {
                return Err(Error::InvalidArgument("kernel grid needs at least 2 points".into()))
            }
            _ => {}
        }
        Ok(())
    }
}

impl Default for MethodSpec {
    fn default() -> Self {
        Self::new(MethodId::Empirical)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutpointResult {
    pub method: MethodId,
    pub method_name: String,
    #[serde(with = "crate::serde_real")]
    pub optimal_cutpoint: f64,
    #[serde(with = "crate::serde_real::vec")]
    pub tied_cutpoints: Vec<f64>,
    /// Main metric name, prefixed by the smoother for smoothed methods.
    pub metric_name: String,
    #[serde(with = "crate::serde_real")]
    pub method_metric_value: f64,
    pub panel: StandardPanel,
    pub auc: f64,
    pub prevalence: f64,
    pub direction: Direction,
    pub pos_class: String,
    pub neg_class: String,
    pub n: usize,
    pub n_pos: usize,
    pub n_neg: usize,
    /// Per-resample cutpoints of the boot_cut method, in resample order.
    #[serde(with = "crate::serde_real::opt_vec", skip_serializing_if = "Option::is_none", default)]
    pub resample_cutpoints: Option<Vec<f64>>,
}

impl CutpointResult {
    pub fn with_classes(mut self, pos: impl Into<String>, neg: impl Into<String>) -> Self {
        self.pos_class = pos.into();
        self.neg_class = neg.into();
        self
    }
}

/// A cutpoint choice before it is scored on the curve.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Choice {
    pub cutpoint: f64,
    pub tied: Vec<f64>,
    /// Replaces the curve's metric value (smoothed methods).
    pub metric_override: Option<(String, f64)>,
    pub resample_cutpoints: Option<Vec<f64>>,
}

impl Choice {
    pub(crate) fn single(cutpoint: f64) -> Self {
        Choice {
            cutpoint,
            tied: vec![cutpoint],
            metric_override: None,
            resample_cutpoints: None,
        }
    }
}

pub(crate) fn finish(
    method: MethodId,
    curve: &RocCurve,
    metric: &MetricSpec,
    choice: Choice,
) -> Result<CutpointResult> {
    let counts = curve
        .counts_at(choice.cutpoint)
        .ok_or_else(|| Error::InvalidArgument("cutpoint is NaN".into()))?;
    let (metric_name, value) = choice
        .metric_override
        .unwrap_or_else(|| (metric.name().to_string(), metric.value(&counts)));
    let n_pos = curve.n_pos() as usize;
    let n_neg = curve.n_neg() as usize;
    Ok(CutpointResult {
        method,
        method_name: method.display_name(metric.sense),
        optimal_cutpoint: choice.cutpoint,
        tied_cutpoints: choice.tied,
        metric_name,
        method_metric_value: value,
        panel: standard_metric_panel(&counts),
        auc: auc(curve),
        prevalence: n_pos as f64 / (n_pos + n_neg) as f64,
        direction: curve.direction(),
        pos_class: String::new(),
        neg_class: String::new(),
        n: n_pos + n_neg,
        n_pos,
        n_neg,
        resample_cutpoints: choice.resample_cutpoints,
    })
}

/// Run `method` on a sample whose curve in `direction` is `curve`.
///
/// `seed` feeds the resampling of boot_cut and is ignored otherwise.
pub fn estimate(
    sample: &Sample,
    curve: &RocCurve,
    method: &MethodSpec,
    metric: &MetricSpec,
    seed: u64,
) -> Result<CutpointResult> {
    method.validate()?;
    metric.validate()?;
    let name = method.method.as_str();
    let result = match method.method {
        MethodId::Empirical => {
            estimate_empirical(curve, metric, method.tie_break, method.use_midpoints)
        }
        MethodId::BootCut => estimate_boot_cut(
            sample,
            curve,
            metric,
            &BootCutConfig {
                count: method.boot_cut_count,
                summary_fn: method.summary_fn,
                tie_break: method.tie_break,
                use_midpoints: method.use_midpoints,
                seed,
            },
        ),
        MethodId::GamSmooth | MethodId::SplineSmooth | MethodId::LoessSmooth => {
            let smoother = match method.method {
                MethodId::GamSmooth => Smoother::Gam,
                MethodId::SplineSmooth => Smoother::Spline,
                _ => Smoother::Loess,
            };
            estimate_smoothed(
                curve,
                metric,
                smoother,
                &method.smoother,
                method.tie_break,
                method.use_midpoints,
            )
        }
        MethodId::NormalYouden => estimate_normal(sample, curve, metric),
        MethodId::KernelYouden => estimate_kernel(sample, curve, metric, method.kernel_grid),
        MethodId::Mean => estimate_baseline(sample, curve, metric, Baseline::Mean),
        MethodId::Median => estimate_baseline(sample, curve, metric, Baseline::Median),
        MethodId::Manual => estimate_baseline(
            sample,
            curve,
            metric,
            Baseline::Manual(method.manual_cutpoint.unwrap_or(f64::NAN)),
        ),
    };
    result.map_err(|e| match e {
        e @ Error::Method { .. } => e,
        e => e.in_method(name),
    })
}

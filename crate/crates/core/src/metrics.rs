//! Metrics computed from confusion counts.
//!
//! Every metric is a pure function of one [`ConfusionCounts`]; evaluating a
//! metric over a curve simply maps it over the curve's points. Divisions by
//! zero produce NaN (or an IEEE infinity where the numerator is non-zero),
//! and NaN never wins an optimization.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma_ur;

use crate::error::{Error, Result};
use crate::roc::{ConfusionCounts, RocCurve};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Maximize,
    Minimize,
}

impl Sense {
    /// Is `a` strictly better than `b`?
    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Sense::Maximize => a > b,
            Sense::Minimize => a < b,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sense::Maximize => "maximize",
            Sense::Minimize => "minimize",
        }
    }
}

impl FromStr for Sense {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "maximize" | "max" => Ok(Sense::Maximize),
            "minimize" | "min" => Ok(Sense::Minimize),
            other => Err(Error::InvalidArgument(format!("unknown optimization sense '{other}'"))),
        }
    }
}

macro_rules! metric_ids {
    ($( $variant:ident => $name:literal, $sense:ident; )*) => {
        /// The metric catalog.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum MetricId {
            $( $variant, )*
        }

        impl MetricId {
            pub const ALL: &'static [MetricId] = &[$( MetricId::$variant, )*];

            /// Stable identifier used on the command line and in output.
            pub fn name(self) -> &'static str {
                match self {
                    $( MetricId::$variant => $name, )*
                }
            }

            pub fn default_sense(self) -> Sense {
                match self {
                    $( MetricId::$variant => Sense::$sense, )*
                }
            }
        }

        impl FromStr for MetricId {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $( $name => Ok(MetricId::$variant), )*
                    "recall" => Ok(MetricId::Sensitivity),
                    "precision" => Ok(MetricId::Ppv),
                    "f1_score" => Ok(MetricId::F1Score),
                    "acc" => Ok(MetricId::Accuracy),
                    other => Err(Error::InvalidArgument(format!("unknown metric '{other}'"))),
                }
            }
        }
    };
}

metric_ids! {
    Tp => "tp", Maximize;
    Fp => "fp", Minimize;
    Tn => "tn", Maximize;
    Fn => "fn", Minimize;
    Tpr => "tpr", Maximize;
    Fpr => "fpr", Minimize;
    Tnr => "tnr", Maximize;
    Fnr => "fnr", Minimize;
    Plr => "plr", Maximize;
    Nlr => "nlr", Minimize;
    Accuracy => "accuracy", Maximize;
    Sensitivity => "sensitivity", Maximize;
    Specificity => "specificity", Maximize;
    SumSensSpec => "sum_sens_spec", Maximize;
    Youden => "youden", Maximize;
    AbsDSensSpec => "abs_d_sens_spec", Minimize;
    ProdSensSpec => "prod_sens_spec", Maximize;
    Ppv => "ppv", Maximize;
    Npv => "npv", Maximize;
    SumPpvNpv => "sum_ppv_npv", Maximize;
    AbsDPpvNpv => "abs_d_ppv_npv", Minimize;
    ProdPpvNpv => "prod_ppv_npv", Maximize;
    MetricConstrain => "metric_constrain", Maximize;
    SensConstrain => "sens_constrain", Maximize;
    SpecConstrain => "spec_constrain", Maximize;
    AccConstrain => "acc_constrain", Maximize;
    Roc01 => "roc01", Minimize;
    F1Score => "F1_score", Maximize;
    CohensKappa => "cohens_kappa", Maximize;
    PChisquared => "p_chisquared", Minimize;
    OddsRatio => "odds_ratio", Maximize;
    RiskRatio => "risk_ratio", Maximize;
    MisclassificationCost => "misclassification_cost", Minimize;
    TotalUtility => "total_utility", Maximize;
    FalseOmissionRate => "false_omission_rate", Minimize;
    FalseDiscoveryRate => "false_discovery_rate", Minimize;
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for MetricId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for MetricId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl MetricId {
    fn is_constrained(self) -> bool {
        matches!(
            self,
            MetricId::MetricConstrain
                | MetricId::SensConstrain
                | MetricId::SpecConstrain
                | MetricId::AccConstrain
        )
    }
}

/// Cost and utility weights for the cost/utility metrics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Weights {
    pub cost_fp: Option<f64>,
    pub cost_fn: Option<f64>,
    pub utility_tp: Option<f64>,
    pub utility_tn: Option<f64>,
}

/// `main` is zeroed wherever `by` falls below `min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub main: MetricId,
    pub by: MetricId,
    pub min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSpec {
    pub id: MetricId,
    pub sense: Sense,
    pub weights: Weights,
    pub constraint: Option<Constraint>,
}

pub const DEFAULT_MIN_CONSTRAIN: f64 = 0.5;

impl MetricSpec {
    /// Spec with the metric's default sense and default constraint.
    pub fn new(id: MetricId) -> Self {
        let constraint = match id {
            MetricId::MetricConstrain | MetricId::SensConstrain => Some(Constraint {
                main: MetricId::Sensitivity,
                by: MetricId::Specificity,
                min: DEFAULT_MIN_CONSTRAIN,
            }),
            MetricId::SpecConstrain => Some(Constraint {
                main: MetricId::Specificity,
                by: MetricId::Sensitivity,
                min: DEFAULT_MIN_CONSTRAIN,
            }),
            MetricId::AccConstrain => Some(Constraint {
                main: MetricId::Accuracy,
                by: MetricId::Sensitivity,
                min: DEFAULT_MIN_CONSTRAIN,
            }),
            _ => None,
        };
        MetricSpec {
            id,
            sense: id.default_sense(),
            weights: Weights::default(),
            constraint,
        }
    }

    pub fn with_sense(mut self, sense: Sense) -> Self {
        self.sense = sense;
        self
    }

    pub fn with_costs(mut self, cost_fp: f64, cost_fn: f64) -> Self {
        self.weights.cost_fp = Some(cost_fp);
        self.weights.cost_fn = Some(cost_fn);
        self
    }

    pub fn with_utilities(mut self, utility_tp: f64, utility_tn: f64) -> Self {
        self.weights.utility_tp = Some(utility_tp);
        self.weights.utility_tn = Some(utility_tn);
        self
    }

    pub fn with_min_constrain(mut self, min: f64) -> Self {
        if let Some(c) = self.constraint.as_mut() {
            c.min = min;
        }
        self
    }

    /// Main and constraining metric for `metric_constrain`.
    pub fn with_constraint(mut self, main: MetricId, by: MetricId, min: f64) -> Self {
        self.constraint = Some(Constraint { main, by, min });
        self
    }

    pub fn name(&self) -> &'static str {
        self.id.name()
    }

    pub fn validate(&self) -> Result<()> {
        let w = &self.weights;
        match self.id {
            MetricId::MisclassificationCost => {
                w.cost_fp.ok_or(Error::MissingParameter("cost_fp"))?;
                w.cost_fn.ok_or(Error::MissingParameter("cost_fn"))?;
            }
            MetricId::TotalUtility => {
                w.cost_fp.ok_or(Error::MissingParameter("cost_fp"))?;
                w.cost_fn.ok_or(Error::MissingParameter("cost_fn"))?;
                w.utility_tp.ok_or(Error::MissingParameter("utility_tp"))?;
                w.utility_tn.ok_or(Error::MissingParameter("utility_tn"))?;
            }
            _ => {}
        }
        if self.id.is_constrained() {
            let c = self.constraint.ok_or(Error::MissingParameter("constrain_metric"))?;
            if c.main.is_constrained() || c.by.is_constrained() {
                return Err(Error::InvalidArgument(
                    "constrained metrics cannot be nested".into(),
                ));
            }
            if !c.min.is_finite() {
                return Err(Error::InvalidArgument("min_constrain must be finite".into()));
            }
            let rate_like = |m: MetricId| {
                matches!(
                    m,
                    MetricId::Tpr
                        | MetricId::Fpr
                        | MetricId::Tnr
                        | MetricId::Fnr
                        | MetricId::Accuracy
                        | MetricId::Sensitivity
                        | MetricId::Specificity
                        | MetricId::Ppv
                        | MetricId::Npv
                )
            };
            if rate_like(c.by) && !(0.0..=1.0).contains(&c.min) {
                return Err(Error::InvalidArgument(format!(
                    "min_constrain {} outside [0, 1] for {}",
                    c.min, c.by
                )));
            }
        }
        Ok(())
    }

    /// Metric value at one set of counts.
    pub fn value(&self, c: &ConfusionCounts) -> f64 {
        if self.id.is_constrained() {
            let Some(k) = self.constraint else {
                return f64::NAN;
            };
            // NaN in the constraint counts as not met
            if raw_value(k.by, c, &self.weights) >= k.min {
                raw_value(k.main, c, &self.weights)
            } else {
                0.0
            }
        } else {
            raw_value(self.id, c, &self.weights)
        }
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    num / den
}

fn raw_value(id: MetricId, c: &ConfusionCounts, w: &Weights) -> f64 {
    let (tp, fp, tn, fn_) = (c.tp as f64, c.fp as f64, c.tn as f64, c.fn_ as f64);
    let tpr = ratio(tp, tp + fn_);
    let tnr = ratio(tn, tn + fp);
    let fpr = ratio(fp, fp + tn);
    let fnr = ratio(fn_, fn_ + tp);
    let ppv = ratio(tp, tp + fp);
    let npv = ratio(tn, tn + fn_);
    match id {
        MetricId::Tp => tp,
        MetricId::Fp => fp,
        MetricId::Tn => tn,
        MetricId::Fn => fn_,
        MetricId::Tpr | MetricId::Sensitivity => tpr,
        MetricId::Fpr => fpr,
        MetricId::Tnr | MetricId::Specificity => tnr,
        MetricId::Fnr => fnr,
        MetricId::Plr => ratio(tpr, fpr),
        MetricId::Nlr => ratio(fnr, tnr),
        MetricId::Accuracy => ratio(tp + tn, tp + fp + tn + fn_),
        MetricId::SumSensSpec => tpr + tnr,
        MetricId::Youden => tpr + tnr - 1.0,
        MetricId::AbsDSensSpec => (tpr - tnr).abs(),
        MetricId::ProdSensSpec => tpr * tnr,
        MetricId::Ppv => ppv,
        MetricId::Npv => npv,
        MetricId::SumPpvNpv => ppv + npv,
        MetricId::AbsDPpvNpv => (ppv - npv).abs(),
        MetricId::ProdPpvNpv => ppv * npv,
        MetricId::Roc01 => ((1.0 - tpr).powi(2) + (1.0 - tnr).powi(2)).sqrt(),
        MetricId::F1Score => ratio(2.0 * tp, 2.0 * tp + fp + fn_),
        MetricId::CohensKappa => cohens_kappa(c),
        MetricId::PChisquared => p_chisquared(c),
        MetricId::OddsRatio => ratio(ratio(tp, fp), ratio(fn_, tn)),
        MetricId::RiskRatio => ratio(tpr, fpr),
        MetricId::MisclassificationCost => {
            w.cost_fp.unwrap_or(f64::NAN) * fp + w.cost_fn.unwrap_or(f64::NAN) * fn_
        }
        MetricId::TotalUtility => {
            w.utility_tp.unwrap_or(f64::NAN) * tp + w.utility_tn.unwrap_or(f64::NAN) * tn
                - w.cost_fp.unwrap_or(f64::NAN) * fp
                - w.cost_fn.unwrap_or(f64::NAN) * fn_
        }
        MetricId::FalseOmissionRate => ratio(fn_, tn + fn_),
        MetricId::FalseDiscoveryRate => ratio(fp, tp + fp),
        MetricId::MetricConstrain
        | MetricId::SensConstrain
        | MetricId::SpecConstrain
        | MetricId::AccConstrain => f64::NAN,
    }
}

/// Cohen's kappa: observed agreement corrected for chance agreement.
pub fn cohens_kappa(c: &ConfusionCounts) -> f64 {
    let n = c.total() as f64;
    let (tp, fp, tn, fn_) = (c.tp as f64, c.fp as f64, c.tn as f64, c.fn_ as f64);
    let observed = (tp + tn) / n;
    let chance = ((tp + fn_) * (tp + fp) + (tn + fp) * (tn + fn_)) / (n * n);
    (observed - chance) / (1.0 - chance)
}

/// Pearson chi-squared statistic of the 2x2 table, without continuity correction.
pub fn chi_squared(c: &ConfusionCounts) -> f64 {
    let (tp, fp, tn, fn_) = (c.tp as f64, c.fp as f64, c.tn as f64, c.fn_ as f64);
    let n = tp + fp + tn + fn_;
    let det = tp * tn - fp * fn_;
    n * det * det / ((tp + fp) * (fn_ + tn) * (tp + fn_) * (fp + tn))
}

/// Upper-tail probability of the chi-squared statistic with one degree of freedom.
pub fn p_chisquared(c: &ConfusionCounts) -> f64 {
    let stat = chi_squared(c);
    if stat.is_nan() {
        return f64::NAN;
    }
    if stat <= 0.0 {
        return 1.0;
    }
    if stat.is_infinite() {
        return 0.0;
    }
    gamma_ur(0.5, stat / 2.0)
}

const TIE_ULPS: f64 = 8.0;

/// Metric values along a curve, one per cutpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricVector {
    pub metric_name: String,
    pub values: Vec<f64>,
}

impl MetricVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn evaluate_metric(spec: &MetricSpec, curve: &RocCurve) -> Result<MetricVector> {
    spec.validate()?;
    Ok(MetricVector {
        metric_name: spec.name().to_string(),
        values: curve.iter_counts().map(|c| spec.value(&c)).collect(),
    })
}

/// All indices attaining the optimum among non-NaN values.
///
/// Values within a few ulps of the optimum count as tied, so that equal
/// ratios summed in a different order still tie.
pub fn best_cutpoint_indices(values: &[f64], sense: Sense) -> Result<Vec<usize>> {
    let mut best: Option<f64> = None;
    for &v in values.iter().filter(|v| !v.is_nan()) {
        if best.is_none_or(|b| sense.better(v, b)) {
            best = Some(v);
        }
    }
    let best = best.ok_or(Error::MetricUndefined)?;
    let tol = TIE_ULPS * f64::EPSILON * best.abs().max(1.0);
    Ok(values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == best || (best.is_finite() && (v - best).abs() <= tol))
        .map(|(i, _)| i)
        .collect())
}

/// Standard metrics reported alongside every estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StandardPanel {
    pub accuracy: f64,
    pub sensitivity: f64,
    pub specificity: f64,
    pub youden: f64,
    pub ppv: f64,
    pub npv: f64,
    pub cohens_kappa: f64,
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

pub fn standard_metric_panel(c: &ConfusionCounts) -> StandardPanel {
    let none = Weights::default();
    StandardPanel {
        accuracy: raw_value(MetricId::Accuracy, c, &none),
        sensitivity: raw_value(MetricId::Sensitivity, c, &none),
        specificity: raw_value(MetricId::Specificity, c, &none),
        youden: raw_value(MetricId::Youden, c, &none),
        ppv: raw_value(MetricId::Ppv, c, &none),
        npv: raw_value(MetricId::Npv, c, &none),
        cohens_kappa: cohens_kappa(c),
        tp: c.tp,
        fp: c.fp,
        tn: c.tn,
        fn_: c.fn_,
    }
}

impl StandardPanel {
    pub fn counts(&self) -> ConfusionCounts {
        ConfusionCounts::new(self.tp, self.fp, self.tn, self.fn_)
    }
}

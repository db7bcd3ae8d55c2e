//! Optimal cutpoint estimation for dichotomizing a continuous predictor
//! against a binary outcome, with bootstrap validation of cutpoint
//! variability and out-of-sample performance.

pub mod bootstrap;
pub mod classes;
pub mod cli;
pub mod error;
pub mod estimators;
pub mod metrics;
pub mod pipeline;
pub mod rng;
pub mod roc;
pub mod sample;
pub mod serde_real;
pub mod simlab;
pub mod smoothers;
pub mod special;
pub mod stats;

pub use classes::{detect_direction_and_classes, ClassResolution, Hints};
pub use estimators::{estimate, CutpointResult, MethodId, MethodSpec, SummaryFn, TieBreak};
pub use error::{Error, ErrorKind, Result};
pub use metrics::{
    best_cutpoint_indices, evaluate_metric, standard_metric_panel, MetricId, MetricSpec,
    MetricVector, Sense, StandardPanel,
};
pub use roc::{auc, build_roc, midpoint_cutpoint, ConfusionCounts, RocCurve};
pub use sample::{Direction, Sample};

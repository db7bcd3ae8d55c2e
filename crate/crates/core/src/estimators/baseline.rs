use super::{finish, Choice, CutpointResult, MethodId};
use crate::error::Result;
use crate::metrics::MetricSpec;
use crate::roc::RocCurve;
use crate::sample::Sample;
use crate::stats::{mean, median};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Baseline {
    Mean,
    Median,
    Manual(f64),
}

/// Cutpoint at the pooled predictor mean or median, or a fixed value.
pub fn estimate_baseline(
    sample: &Sample,
    curve: &RocCurve,
    metric: &MetricSpec,
    baseline: Baseline,
) -> Result<CutpointResult> {
    let (method, c) = match baseline {
        Baseline::Mean => (MethodId::Mean, mean(sample.predictor())),
        Baseline::Median => (MethodId::Median, median(sample.predictor())),
        Baseline::Manual(c) => (MethodId::Manual, c),
    };
    finish(method, curve, metric, Choice::single(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::MetricId;
    use crate::roc::build_roc;
    use crate::sample::Direction;

    #[test]
    fn simple_values() {
        let s = Sample::new(vec![1.0, 2.0, 3.0, 10.0], vec![false, true, false, true]).unwrap();
        let curve = build_roc(&s, Direction::Ge);
        let spec = MetricSpec::new(MetricId::Youden);
        assert_eq!(estimate_baseline(&s, &curve, &spec, Baseline::Mean).unwrap().optimal_cutpoint, 4.0);
        assert_eq!(estimate_baseline(&s, &curve, &spec, Baseline::Median).unwrap().optimal_cutpoint, 2.5);
        let manual = estimate_baseline(&s, &curve, &spec, Baseline::Manual(3.0)).unwrap();
        assert_eq!(manual.optimal_cutpoint, 3.0);
        assert_eq!(manual.method_name, "oc_manual");
        assert_eq!((manual.panel.tp, manual.panel.fp), (1, 1));

        let three = Sample::new(vec![1.0, 2.0, 3.0], vec![false, true, true]).unwrap();
        let c3 = build_roc(&three, Direction::Ge);
        assert_eq!(estimate_baseline(&three, &c3, &spec, Baseline::Mean).unwrap().optimal_cutpoint, 2.0);
    }
}

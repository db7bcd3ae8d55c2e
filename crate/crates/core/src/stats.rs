//! Descriptive statistics shared across modules.

use serde::{Deserialize, Serialize};

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (n - 1 denominator). NaN for n < 2.
pub fn sd(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return f64::NAN;
    }
    let m = mean(values);
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    (ss / (n - 1) as f64).sqrt()
}

/// Type-7 (linear interpolation) quantile of already sorted data.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 0 {
        return f64::NAN;
    }
    let h = (n - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    let frac = h - lo as f64;
    if frac == 0.0 {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}

pub fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

pub fn quantile(values: &[f64], p: f64) -> f64 {
    quantile_sorted(&sorted(values), p)
}

/// Median; mean of the two central order statistics for even n.
pub fn median(values: &[f64]) -> f64 {
    quantile(values, 0.5)
}

/// Summary row as printed for predictor and bootstrap distributions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub min: f64,
    pub q05: f64,
    pub q25: f64,
    pub median: f64,
    pub mean: f64,
    pub q75: f64,
    pub q95: f64,
    pub max: f64,
    pub sd: f64,
    /// Entries excluded as missing.
    pub missing: usize,
}

impl Distribution {
    /// Summarise the finite values of `values`; NaN entries count as missing.
    pub fn of(values: &[f64]) -> Distribution {
        Self::with_missing(values, 0)
    }

    pub fn with_missing(values: &[f64], extra_missing: usize) -> Distribution {
        let present: Vec<f64> = values.iter().copied().filter(|v| !v.is_nan()).collect();
        let missing = values.len() - present.len() + extra_missing;
        let s = sorted(&present);
        let q = |p| quantile_sorted(&s, p);
        Distribution {
            min: s.first().copied().unwrap_or(f64::NAN),
            q05: q(0.05),
            q25: q(0.25),
            median: q(0.5),
            mean: if s.is_empty() { f64::NAN } else { mean(&s) },
            q75: q(0.75),
            q95: q(0.95),
            max: s.last().copied().unwrap_or(f64::NAN),
            sd: sd(&s),
            missing,
        }
    }

    pub fn as_array(&self) -> [f64; 9] {
        [
            self.min, self.q05, self.q25, self.median, self.mean, self.q75, self.q95, self.max,
            self.sd,
        ]
    }
}

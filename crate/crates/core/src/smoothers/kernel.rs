//! Gaussian-kernel smoothed distribution functions.

use crate::error::{Error, Result};
use crate::special::normal_cdf;
use crate::stats::{quantile_sorted, sd, sorted};

/// Rule-of-thumb bandwidth `0.9 * min(s, iqr / 1.34) * n^(-1/5)`.
///
/// `s` is the sample standard deviation and `iqr` uses type-7 quantiles.
/// When the interquartile range is zero but `s` is not, `s` alone is used.
pub fn rule_of_thumb_bandwidth(values: &[f64]) -> Result<f64> {
    let n = values.len();
    if n < 2 {
        return Err(Error::InsufficientSupport { needed: 2, got: n });
    }
    let s = sd(values);
    if s.is_nan() || s <= 0.0 {
        return Err(Error::DegenerateBandwidth);
    }
    let v = sorted(values);
    let iqr = quantile_sorted(&v, 0.75) - quantile_sorted(&v, 0.25);
    let spread = if iqr > 0.0 { s.min(iqr / 1.34) } else { s };
    Ok(0.9 * spread * (n as f64).powf(-0.2))
}

/// `F(t) = mean_i Phi((t - y_i) / h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelCdf {
    support: Vec<f64>,
    bandwidth: f64,
}

pub fn kernel_cdf(values: &[f64], bandwidth: f64) -> Result<KernelCdf> {
    if !(bandwidth > 0.0 && bandwidth.is_finite()) {
        return Err(Error::InvalidArgument(format!("bandwidth must be positive, got {bandwidth}")));
    }
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(KernelCdf {
        support: sorted(values),
        bandwidth,
    })
}

impl KernelCdf {
    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn eval(&self, t: f64) -> f64 {
        let h = self.bandwidth;
        let total: f64 = self.support.iter().map(|&y| normal_cdf((t - y) / h)).sum();
        total / self.support.len() as f64
    }
}

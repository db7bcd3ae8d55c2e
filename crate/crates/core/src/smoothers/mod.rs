//! Smoothing machinery used by the smoothed cutpoint estimators.

pub mod bspline;
pub mod gam;
pub mod kernel;
pub mod loess;
pub mod spline;

pub use gam::{fit_penalized_spline_gcv, PenalizedSplineFit, DEFAULT_BASIS_DIM};
pub use kernel::{kernel_cdf, rule_of_thumb_bandwidth, KernelCdf};
pub use loess::{fit_loess_aicc, LoessFit, SPAN_GRID_LEN};
pub use spline::{fit_smoothing_spline, Smoothing, SplineFit, SplineOptions, DEFAULT_SPAR};

use crate::error::{Error, Result};

/// Affine map of [lo, hi] onto [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Normalizer {
    lo: f64,
    scale: f64,
}

impl Normalizer {
    pub(crate) fn from_range(lo: f64, hi: f64) -> Self {
        let width = hi - lo;
        Normalizer {
            lo,
            scale: if width > 0.0 { 1.0 / width } else { 1.0 },
        }
    }

    pub(crate) fn apply(&self, v: f64) -> f64 {
        (v - self.lo) * self.scale
    }
}

/// Finite (x, y) pairs reduced to distinct sorted x, with y averaged and
/// the multiplicity kept as a weight.
#[derive(Debug, Clone)]
pub(crate) struct Collapsed {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub w: Vec<f64>,
    /// Sum of squares of y around its group mean.
    pub within_ss: f64,
    /// Number of finite rows used.
    pub n_used: usize,
    /// For each input row, the index of its distinct x (None if dropped).
    slot: Vec<Option<usize>>,
}

pub(crate) fn collapse_ties(x: &[f64], y: &[f64]) -> Result<Collapsed> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            predictor: x.len(),
            class: y.len(),
        });
    }
    let mut order: Vec<usize> = (0..x.len())
        .filter(|&i| x[i].is_finite() && y[i].is_finite())
        .collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));

    let mut out = Collapsed {
        x: Vec::new(),
        y: Vec::new(),
        w: Vec::new(),
        within_ss: 0.0,
        n_used: order.len(),
        slot: vec![None; x.len()],
    };
    let mut start = 0;
    while start < order.len() {
        let xv = x[order[start]];
        let mut end = start;
        while end < order.len() && x[order[end]] == xv {
            end += 1;
        }
        let group = &order[start..end];
        let m = group.iter().map(|&i| y[i]).sum::<f64>() / group.len() as f64;
        out.within_ss += group.iter().map(|&i| (y[i] - m) * (y[i] - m)).sum::<f64>();
        for &i in group {
            out.slot[i] = Some(out.x.len());
        }
        out.x.push(xv);
        out.y.push(m);
        out.w.push(group.len() as f64);
        start = end;
    }
    Ok(out)
}

impl Collapsed {
    /// Spread per-distinct-x values back to input order.
    pub(crate) fn expand(&self, values: &[f64]) -> Vec<f64> {
        self.slot
            .iter()
            .map(|s| s.map_or(f64::NAN, |k| values[k]))
            .collect()
    }
}

//! Local polynomial regression with the span chosen by corrected AIC.
//!
//! Each fitted value comes from a weighted least-squares polynomial of
//! degree 1 or 2 centred at the point, using the `floor(n * span)` nearest
//! neighbours with tricube weights. The span is chosen from
//! 0.20, 0.25, ..., 1.00 by minimising
//! `log(RSS / n) + 2 (tr(H) + 1) / (n - tr(H) - 2)`; the lowest span wins ties.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub const SPAN_GRID_LEN: usize = 17;

pub fn span_grid() -> impl Iterator<Item = f64> {
    (0..SPAN_GRID_LEN).map(|i| (20 + 5 * i) as f64 / 100.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpanCriterion {
    pub span: f64,
    /// Trace of the smoother matrix; NaN when the span was singular.
    pub trace: f64,
    pub rss: f64,
    /// +inf when singular or when the correction term is undefined.
    pub aicc: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoessFit {
    span: f64,
    degree: usize,
    fitted: Vec<f64>,
    criteria: Vec<SpanCriterion>,
}

impl LoessFit {
    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Fitted values in input order.
    pub fn fitted(&self) -> &[f64] {
        &self.fitted
    }

    /// Criterion at every grid span, in grid order.
    pub fn criteria(&self) -> &[SpanCriterion] {
        &self.criteria
    }

    pub fn aicc(&self) -> f64 {
        self.criteria
            .iter()
            .find(|c| c.span == self.span)
            .map_or(f64::NAN, |c| c.aicc)
    }
}

/// The corrected AIC from the residual sum of squares and smoother trace.
pub fn aicc(rss: f64, trace: f64, n: usize) -> f64 {
    let nf = n as f64;
    let denom = nf - trace - 2.0;
    if !(denom > 0.0) {
        return f64::INFINITY;
    }
    (rss / nf).ln() + 2.0 * (trace + 1.0) / denom
}

pub fn fit_loess_aicc(x: &[f64], y: &[f64], degree: usize) -> Result<LoessFit> {
    if !(1..=2).contains(&degree) {
        return Err(Error::InvalidArgument(format!("loess degree must be 1 or 2, got {degree}")));
    }
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            predictor: x.len(),
            class: y.len(),
        });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("loess input must be finite".into()));
    }
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let xs: Vec<f64> = order.iter().map(|&i| x[i]).collect();
    let ys: Vec<f64> = order.iter().map(|&i| y[i]).collect();
    let distinct = 1 + xs.windows(2).filter(|p| p[1] > p[0]).count();
    if xs.is_empty() || distinct < degree + 2 {
        return Err(Error::InsufficientSupport {
            needed: degree + 2,
            got: if xs.is_empty() { 0 } else { distinct },
        });
    }
    let n = xs.len();

    let mut criteria: Vec<SpanCriterion> = Vec::with_capacity(SPAN_GRID_LEN);
    let mut best: Option<(usize, Vec<f64>)> = None;
    for span in span_grid() {
        let crit = match local_fit(&xs, &ys, span, degree) {
            Some((fitted, trace)) => {
                let rss: f64 = fitted.iter().zip(&ys).map(|(f, v)| (v - f) * (v - f)).sum();
                let value = aicc(rss, trace, n);
                let current = best.as_ref().map_or(f64::INFINITY, |(k, _)| criteria[*k].aicc);
                if value < current {
                    best = Some((criteria.len(), fitted));
                }
                SpanCriterion {
                    span,
                    trace,
                    rss,
                    aicc: value,
                }
            }
            None => SpanCriterion {
                span,
                trace: f64::NAN,
                rss: f64::NAN,
                aicc: f64::INFINITY,
            },
        };
        criteria.push(crit);
    }
    let (k, fitted_sorted) = best.ok_or(Error::SingularFit)?;
    let mut fitted = vec![0.0; n];
    for (pos, &i) in order.iter().enumerate() {
        fitted[i] = fitted_sorted[pos];
    }
    Ok(LoessFit {
        span: criteria[k].span,
        degree,
        fitted,
        criteria,
    })
}

/// Fitted values at each (sorted) x and the smoother-matrix trace, or None
/// if some local fit is singular.
pub(crate) fn local_fit(xs: &[f64], ys: &[f64], span: f64, degree: usize) -> Option<(Vec<f64>, f64)> {
    let n = xs.len();
    let q = ((n as f64 * span).floor() as usize).clamp(1, n);
    let p = degree + 1;
    let mut fitted = Vec::with_capacity(n);
    let mut trace = 0.0;
    let mut left = 0usize;
    for i in 0..n {
        let xi = xs[i];
        while left + q < n && xs[left + q] - xi < xi - xs[left] {
            left += 1;
        }
        let dmax = (xi - xs[left]).max(xs[left + q - 1] - xi);

        let mut xtwx = DMatrix::<f64>::zeros(p, p);
        let mut xtwy = DVector::<f64>::zeros(p);
        let mut support = 0usize;
        let mut last_x = f64::NAN;
        for j in left..left + q {
            let d = xs[j] - xi;
            let w = if dmax > 0.0 {
                let r = (d.abs() / dmax).min(1.0);
                let t = 1.0 - r * r * r;
                t * t * t
            } else {
                1.0
            };
            if w <= 0.0 {
                continue;
            }
            if xs[j] != last_x {
                support += 1;
                last_x = xs[j];
            }
            let u = if dmax > 0.0 { d / dmax } else { 0.0 };
            let row = [1.0, u, u * u];
            for a in 0..p {
                xtwy[a] += w * row[a] * ys[j];
                for b in 0..p {
                    xtwx[(a, b)] += w * row[a] * row[b];
                }
            }
        }
        if support < p {
            return None;
        }
        let chol = xtwx.cholesky()?;
        let inv = chol.inverse();
        let beta = &inv * &xtwy;
        fitted.push(beta[0]);
        // the point's own weight is 1 and its design row is e0
        trace += inv[(0, 0)];
    }
    Some((fitted, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn grid_is_seventeen_spans() {
        let g: Vec<f64> = span_grid().collect();
        assert_eq!(g.len(), 17);
        assert_eq!(g[0], 0.2);
        assert_eq!(g[16], 1.0);
    }

    #[test]
    fn constant_response() {
        let x: Vec<f64> = (0..40).map(|i| i as f64 * 0.5).collect();
        let y = vec![3.25; 40];
        let fit = fit_loess_aicc(&x, &y, 1).unwrap();
        assert!(fit.fitted().iter().all(|v| (v - 3.25).abs() < 1e-12));
        for span in span_grid() {
            let (f, _) = local_fit(&x, &y, span, 2).unwrap();
            assert!(f.iter().all(|v| (v - 3.25).abs() < 1e-10));
        }
    }

    #[test]
    fn noisy_quadratic_prefers_wide_span() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x: Vec<f64> = (0..100).map(|i| i as f64 / 99.0).collect();
        let noise = Normal::new(0.0, 0.2).unwrap();
        let y: Vec<f64> = x
            .iter()
            .map(|v| 2.0 * (v - 0.4) * (v - 0.4) + noise.sample(&mut rng))
            .collect();
        let fit = fit_loess_aicc(&x, &y, 1).unwrap();
        assert!(fit.span() > 0.2, "span {}", fit.span());
    }

    #[test]
    fn selected_span_minimises_recomputed_criterion() {
        let x: Vec<f64> = (0..60).map(|i| (i as f64).powf(1.3)).collect();
        let y: Vec<f64> = x.iter().map(|v| (v / 30.0).sin() + 0.1 * (v * 7.0).cos()).collect();
        let fit = fit_loess_aicc(&x, &y, 1).unwrap();
        // recompute each trace from the explicit smoother matrix
        let n = x.len();
        let mut best = (f64::INFINITY, 0.0);
        for span in span_grid() {
            let mut h = DMatrix::<f64>::zeros(n, n);
            for k in 0..n {
                let mut e = vec![0.0; n];
                e[k] = 1.0;
                let (col, _) = local_fit(&x, &e, span, 1).unwrap();
                for i in 0..n {
                    h[(i, k)] = col[i];
                }
            }
            let f = &h * DVector::from_column_slice(&y);
            let rss: f64 = (0..n).map(|i| (y[i] - f[i]).powi(2)).sum();
            let value = (rss / n as f64).ln() + 2.0 * (h.trace() + 1.0) / (n as f64 - h.trace() - 2.0);
            if value < best.0 {
                best = (value, span);
            }
        }
        assert_eq!(fit.span(), best.1);
        assert!((fit.aicc() - best.0).abs() < 1e-9);
        assert!(fit.criteria().iter().all(|c| fit.aicc() <= c.aicc));
    }

    #[test]
    fn too_few_points() {
        assert!(matches!(
            fit_loess_aicc(&[1.0, 2.0], &[0.0, 1.0], 1),
            Err(Error::InsufficientSupport { .. })
        ));
    }
}

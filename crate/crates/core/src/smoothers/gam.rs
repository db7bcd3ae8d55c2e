//! Penalised cubic regression spline with the penalty chosen by
//! generalised cross-validation.
//!
//! The basis is a clamped cubic B-spline with equally spaced breakpoints on
//! x rescaled to [0, 1], penalised by `int f''^2`. The penalty weight
//! minimises `n * RSS / (n - edf)^2`, searched on a log grid relative to the
//! trace ratio of the two quadratic forms and refined by golden section.

use nalgebra::{DMatrix, DVector};

use super::bspline::CubicBasis;
use super::{collapse_ties, Collapsed, Normalizer};
use crate::error::{Error, Result};

pub const DEFAULT_BASIS_DIM: usize = 10;

const LOG_GRID_LO: f64 = -8.0;
const LOG_GRID_HI: f64 = 8.0;
const LOG_GRID_STEP: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct PenalizedSplineFit {
    basis: CubicBasis,
    norm: Normalizer,
    coef: Vec<f64>,
    lambda: f64,
    edf: f64,
    gcv: f64,
    fitted: Vec<f64>,
}

impl PenalizedSplineFit {
    pub fn basis_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Effective degrees of freedom, the trace of the smoother matrix.
    pub fn edf(&self) -> f64 {
        self.edf
    }

    pub fn gcv(&self) -> f64 {
        self.gcv
    }

    /// Fitted values in input order (NaN where the input row was dropped).
    pub fn fitted(&self) -> &[f64] {
        &self.fitted
    }

    pub fn eval(&self, t: f64) -> f64 {
        let u = self.norm.apply(t);
        if (0.0..=1.0).contains(&u) {
            return self.basis.evaluate(&self.coef, u);
        }
        let edge = u.clamp(0.0, 1.0);
        let (first, d) = self.basis.eval_derivs(edge);
        let value: f64 = (0..4).map(|j| d[0][j] * self.coef[first + j]).sum();
        let slope: f64 = (0..4).map(|j| d[1][j] * self.coef[first + j]).sum();
        value + slope * (u - edge)
    }
}

struct Problem {
    data: Collapsed,
    xs: Vec<f64>,
    basis: CubicBasis,
    gram: DMatrix<f64>,
    rhs: DVector<f64>,
    omega: DMatrix<f64>,
}

struct Trial {
    lambda: f64,
    coef: DVector<f64>,
    edf: f64,
    gcv: f64,
}

impl Problem {
    fn solve(&self, lambda: f64) -> Option<Trial> {
        let chol = (&self.gram + &self.omega * lambda).cholesky()?;
        let coef = chol.solve(&self.rhs);
        let edf = chol.solve(&self.gram).trace();
        let coef_slice = coef.as_slice();
        let rss = self.data.within_ss
            + self
                .xs
                .iter()
                .zip(&self.data.y)
                .zip(&self.data.w)
                .map(|((&u, &y), &w)| {
                    let r = y - self.basis.evaluate(coef_slice, u);
                    w * r * r
                })
                .sum::<f64>();
        let n = self.data.n_used as f64;
        let gcv = if n - edf > 0.0 {
            n * rss / ((n - edf) * (n - edf))
        } else {
            f64::INFINITY
        };
        Some(Trial {
            lambda,
            coef,
            edf,
            gcv: if gcv.is_nan() { f64::INFINITY } else { gcv },
        })
    }

    fn gcv_at(&self, log_rel: f64, scale: f64) -> f64 {
        self.solve(scale * 10f64.powf(log_rel))
            .map_or(f64::INFINITY, |t| t.gcv)
    }
}

/// Fit with at most `basis_dim` basis functions (reduced to the number of
/// distinct x). NaN rows are dropped.
pub fn fit_penalized_spline_gcv(x: &[f64], y: &[f64], basis_dim: usize) -> Result<PenalizedSplineFit> {
    let data = collapse_ties(x, y)?;
    let distinct = data.x.len();
    let k = basis_dim.min(distinct);
    if k < 4 {
        return Err(Error::RankDeficient(k));
    }
    let norm = Normalizer::from_range(data.x[0], data.x[distinct - 1]);
    let xs: Vec<f64> = data.x.iter().map(|&v| norm.apply(v)).collect();
    let basis = CubicBasis::uniform(0.0, 1.0, k);
    let (gram, rhs) = basis.normal_equations(&xs, &data.y, &data.w);
    let omega = basis.penalty();
    let scale = gram.trace() / omega.trace();
    let problem = Problem {
        data,
        xs,
        basis,
        gram,
        rhs,
        omega,
    };

    let steps = ((LOG_GRID_HI - LOG_GRID_LO) / LOG_GRID_STEP).round() as usize;
    let grid: Vec<f64> = (0..=steps)
        .map(|i| LOG_GRID_LO + i as f64 * LOG_GRID_STEP)
        .collect();
    let scores: Vec<f64> = grid.iter().map(|&g| problem.gcv_at(g, scale)).collect();
    let mut best = 0;
    for (i, s) in scores.iter().enumerate() {
        if *s < scores[best] {
            best = i;
        }
    }
    if !scores[best].is_finite() {
        return Err(Error::RankDeficient(k));
    }
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(steps)];
    let refined = golden_section(|g| problem.gcv_at(g, scale), lo, hi, 1e-6);
    let log_rel = if problem.gcv_at(refined, scale) < scores[best] {
        refined
    } else {
        grid[best]
    };
    let trial = problem
        .solve(scale * 10f64.powf(log_rel))
        .ok_or(Error::RankDeficient(k))?;

    let coef: Vec<f64> = trial.coef.iter().copied().collect();
    let unique_fit: Vec<f64> = problem.xs.iter().map(|&u| problem.basis.evaluate(&coef, u)).collect();
    let fitted = problem.data.expand(&unique_fit);
    Ok(PenalizedSplineFit {
        basis: problem.basis,
        norm,
        coef,
        lambda: trial.lambda,
        edf: trial.edf,
        gcv: trial.gcv,
        fitted,
    })
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

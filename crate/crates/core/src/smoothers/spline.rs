//! Cubic smoothing splines.
//!
//! Minimises `sum w_i (y_i - g(x_i))^2 + lambda * int g''(z)^2 dz` on
//! x rescaled to [0, 1]. With a knot at every distinct x the minimiser is a
//! natural cubic spline, found from a pentadiagonal system in the second
//! derivatives at the interior knots. With fewer knots the fit is a
//! penalised regression spline on a clamped cubic B-spline basis.
//!
//! `lambda` is set from a scale-free `spar` through
//! `lambda = r * 256^(3 * spar - 1)`, where `r = tr(B^T W B) / tr(Omega)`
//! for the B-spline basis on the fit's knots.

use super::bspline::CubicBasis;
use super::{collapse_ties, Normalizer};
use crate::error::{Error, Result};

pub const DEFAULT_SPAR: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Smoothing {
    /// Scale-free smoothing parameter.
    Spar(f64),
    /// Penalty weight on the [0, 1]-rescaled axis.
    Lambda(f64),
}

impl Default for Smoothing {
    fn default() -> Self {
        Smoothing::Spar(DEFAULT_SPAR)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SplineOptions {
    pub smoothing: Smoothing,
    /// Number of knots; defaults to the usual schedule in the number of
    /// distinct x (all of them below 50).
    pub knots: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
enum Representation {
    Natural {
        knots: Vec<f64>,
        values: Vec<f64>,
        second: Vec<f64>,
    },
    Regression {
        basis: CubicBasis,
        coef: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplineFit {
    lambda: f64,
    n_knots: usize,
    norm: Normalizer,
    repr: Representation,
    fitted: Vec<f64>,
    penalty: f64,
}

/// Number of knots used for `n` distinct x values.
pub fn default_knot_count(n: usize) -> usize {
    if n < 50 {
        return n;
    }
    let (a1, a2, a3, a4) = (50f64.log2(), 100f64.log2(), 140f64.log2(), 200f64.log2());
    let nf = n as f64;
    let k = if n < 200 {
        2f64.powf(a1 + (a2 - a1) * (nf - 50.0) / 150.0)
    } else if n < 800 {
        2f64.powf(a2 + (a3 - a2) * (nf - 200.0) / 600.0)
    } else if n < 3200 {
        2f64.powf(a3 + (a4 - a3) * (nf - 800.0) / 2400.0)
    } else {
        200.0 + (nf - 3200.0).powf(0.2)
    };
    // the small offset keeps exact powers of two from truncating downwards
    ((k + 1e-9).trunc() as usize).min(n)
}

/// Fit a smoothing spline of `y` on `x`. NaN rows are dropped.
pub fn fit_smoothing_spline(x: &[f64], y: &[f64], options: SplineOptions) -> Result<SplineFit> {
    let data = collapse_ties(x, y)?;
    let n = data.x.len();
    if n < 4 {
        return Err(Error::InsufficientSupport { needed: 4, got: n });
    }
    let norm = Normalizer::from_range(data.x[0], data.x[n - 1]);
    let xs: Vec<f64> = data.x.iter().map(|&v| norm.apply(v)).collect();

    let n_knots = options.knots.unwrap_or_else(|| default_knot_count(n)).clamp(4, n);
    let knot_x: Vec<f64> = if n_knots == n {
        xs.clone()
    } else {
        (0..n_knots)
            .map(|i| xs[((i * (n - 1)) as f64 / (n_knots - 1) as f64).round() as usize])
            .collect()
    };
    let basis = CubicBasis::clamped(&knot_x);

    let lambda = match options.smoothing {
        Smoothing::Lambda(l) => l,
        Smoothing::Spar(spar) => {
            let r = basis.design_trace(&xs, &data.w) / basis.penalty_trace();
            r * 256f64.powf(3.0 * spar - 1.0)
        }
    };
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("invalid smoothing penalty {lambda}")));
    }

    let (repr, fitted_unique, penalty) = if n_knots == n {
        let (values, second) = reinsch(&xs, &data.y, &data.w, lambda)?;
        let penalty = natural_penalty(&xs, &second);
        (
            Representation::Natural {
                knots: xs.clone(),
                values: values.clone(),
                second,
            },
            values,
            penalty,
        )
    } else {
        let (btb, bty) = basis.normal_equations(&xs, &data.y, &data.w);
        let omega = basis.penalty();
        let chol = (btb + &omega * lambda)
            .cholesky()
            .ok_or(Error::RankDeficient(basis.len()))?;
        let coef = chol.solve(&bty);
        let penalty = (coef.transpose() * &omega * &coef)[(0, 0)];
        let coef: Vec<f64> = coef.iter().copied().collect();
        let fitted: Vec<f64> = xs.iter().map(|&u| basis.evaluate(&coef, u)).collect();
        (Representation::Regression { basis, coef }, fitted, penalty)
    };

    let fitted = data.expand(&fitted_unique);
    Ok(SplineFit {
        lambda,
        n_knots,
        norm,
        repr,
        fitted,
        penalty,
    })
}

impl SplineFit {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn n_knots(&self) -> usize {
        self.n_knots
    }

    /// Fitted values in input order (NaN where the input row was dropped).
    pub fn fitted(&self) -> &[f64] {
        &self.fitted
    }

    /// `int g''^2` on the rescaled axis.
    pub fn roughness(&self) -> f64 {
        self.penalty
    }

    pub fn eval(&self, t: f64) -> f64 {
        let u = self.norm.apply(t);
        match &self.repr {
            Representation::Natural {
                knots,
                values,
                second,
            } => eval_natural(knots, values, second, u),
            Representation::Regression { basis, coef } => {
                if (0.0..=1.0).contains(&u) {
                    basis.evaluate(coef, u)
                } else {
                    // linear continuation beyond the boundary knots
                    let edge = u.clamp(0.0, 1.0);
                    let (first, d) = basis.eval_derivs(edge);
                    let value: f64 = (0..4).map(|j| d[0][j] * coef[first + j]).sum();
                    let slope: f64 = (0..4).map(|j| d[1][j] * coef[first + j]).sum();
                    value + slope * (u - edge)
                }
            }
        }
    }
}

/// Natural cubic smoothing spline with a knot at every (distinct, sorted)
/// x. Returns the fitted values and second derivatives at the knots.
fn reinsch(x: &[f64], y: &[f64], w: &[f64], lambda: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = x.len();
    let m = n - 2;
    let h: Vec<f64> = x.windows(2).map(|p| p[1] - p[0]).collect();
    // column j of Q has entries at rows j, j+1, j+2
    let q = |j: usize| -> [f64; 3] {
        [1.0 / h[j], -1.0 / h[j] - 1.0 / h[j + 1], 1.0 / h[j + 1]]
    };

    let mut band = vec![[0.0f64; 3]; m];
    for j in 0..m {
        band[j][0] = (h[j] + h[j + 1]) / 3.0;
        if j + 1 < m {
            band[j + 1][1] = h[j + 1] / 6.0;
        }
    }
    if lambda > 0.0 {
        for j in 0..m {
            let qj = q(j);
            for d in 0..3.min(m - j) {
                let qk = q(j + d);
                // rows shared by columns j and j+d: j+d .. j+2
                let mut s = 0.0;
                for row in (j + d)..=(j + 2) {
                    s += qj[row - j] * qk[row - j - d] / w[row];
                }
                band[j + d][d] += lambda * s;
            }
        }
    }

    let rhs: Vec<f64> = (0..m)
        .map(|j| {
            let qj = q(j);
            qj[0] * y[j] + qj[1] * y[j + 1] + qj[2] * y[j + 2]
        })
        .collect();
    let gamma = banded_cholesky_solve(band, rhs)?;

    let mut values = y.to_vec();
    if lambda > 0.0 {
        for j in 0..m {
            let qj = q(j);
            for r in 0..3 {
                values[j + r] -= lambda * qj[r] * gamma[j] / w[j + r];
            }
        }
    }
    let mut second = Vec::with_capacity(n);
    second.push(0.0);
    second.extend(gamma);
    second.push(0.0);
    Ok((values, second))
}

/// Solve `M z = rhs` for a symmetric positive definite matrix with two
/// sub-diagonals; `band[i][d]` holds `M[i][i - d]`.
fn banded_cholesky_solve(mut band: Vec<[f64; 3]>, mut rhs: Vec<f64>) -> Result<Vec<f64>> {
    let m = band.len();
    for i in 0..m {
        for d in (0..3).rev() {
            if d > i {
                continue;
            }
            let j = i - d;
            let mut s = band[i][d];
            for k in i.saturating_sub(2)..j {
                s -= band[i][i - k] * band[j][j - k];
            }
            if d == 0 {
                if s <= 0.0 || !s.is_finite() {
                    return Err(Error::RankDeficient(m));
                }
                band[i][0] = s.sqrt();
            } else {
                band[i][d] = s / band[j][0];
            }
        }
    }
    for i in 0..m {
        let mut s = rhs[i];
        for k in i.saturating_sub(2)..i {
            s -= band[i][i - k] * rhs[k];
        }
        rhs[i] = s / band[i][0];
    }
    for i in (0..m).rev() {
        let mut s = rhs[i];
        for k in (i + 1)..(i + 3).min(m) {
            s -= band[k][k - i] * rhs[k];
        }
        rhs[i] = s / band[i][0];
    }
    Ok(rhs)
}

/// `int g''^2` for a natural spline with knot second derivatives `second`.
fn natural_penalty(x: &[f64], second: &[f64]) -> f64 {
    x.windows(2)
        .zip(second.windows(2))
        .map(|(xp, gp)| {
            let h = xp[1] - xp[0];
            h / 3.0 * (gp[0] * gp[0] + gp[0] * gp[1] + gp[1] * gp[1])
        })
        .sum()
}

fn eval_natural(x: &[f64], g: &[f64], gamma: &[f64], t: f64) -> f64 {
    let n = x.len();
    if t <= x[0] || t >= x[n - 1] {
        // linear beyond the boundary knots
        let (i, edge) = if t <= x[0] { (0, x[0]) } else { (n - 2, x[n - 1]) };
        let h = x[i + 1] - x[i];
        let slope = (g[i + 1] - g[i]) / h - h / 6.0 * (2.0 * gamma[i] + gamma[i + 1])
            + if t >= x[n - 1] {
                h / 2.0 * (gamma[i] + gamma[i + 1])
            } else {
                0.0
            };
        let base = if t <= x[0] { g[0] } else { g[n - 1] };
        return base + slope * (t - edge);
    }
    let i = x.partition_point(|&v| v <= t) - 1;
    let h = x[i + 1] - x[i];
    let (a, b) = (t - x[i], x[i + 1] - t);
    (a * g[i + 1] + b * g[i]) / h
        - a * b / 6.0 * ((1.0 + a / h) * gamma[i + 1] + (1.0 + b / h) * gamma[i])
}

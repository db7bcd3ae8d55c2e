//! Clamped cubic B-spline bases and their integrated squared
//! second-derivative penalty.

use nalgebra::{DMatrix, DVector};

const DEGREE: usize = 3;

// Two-point Gauss-Legendre nodes on [0, 1]; exact for the products of the
// piecewise-linear second derivatives.
const GAUSS_NODES: [f64; 2] = [0.211_324_865_405_187_1, 0.788_675_134_594_812_9];

#[derive(Debug, Clone, PartialEq)]
pub struct CubicBasis {
    knots: Vec<f64>,
    breaks: Vec<f64>,
}

impl CubicBasis {
    /// Basis with the given strictly increasing breakpoints (ends included).
    pub fn clamped(breaks: &[f64]) -> Self {
        assert!(breaks.len() >= 2, "a cubic basis needs two breakpoints");
        let (first, last) = (breaks[0], breaks[breaks.len() - 1]);
        let mut knots = vec![first; DEGREE];
        knots.extend_from_slice(breaks);
        knots.extend(std::iter::repeat_n(last, DEGREE));
        CubicBasis {
            knots,
            breaks: breaks.to_vec(),
        }
    }

    /// `k` basis functions with equally spaced breakpoints on [lo, hi].
    pub fn uniform(lo: f64, hi: f64, k: usize) -> Self {
        assert!(k >= DEGREE + 1);
        let intervals = k - DEGREE;
        let breaks: Vec<f64> = (0..=intervals)
            .map(|i| lo + (hi - lo) * i as f64 / intervals as f64)
            .collect();
        Self::clamped(&breaks)
    }

    pub fn len(&self) -> usize {
        self.knots.len() - DEGREE - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn span(&self, u: f64) -> usize {
        let n = self.len();
        if u >= self.knots[n] {
            return n - 1;
        }
        if u <= self.knots[DEGREE] {
            return DEGREE;
        }
        // last index with knots[i] <= u, within [DEGREE, n - 1]
        let p = self.knots[DEGREE..=n].partition_point(|&k| k <= u);
        DEGREE + p - 1
    }

    /// Values and first two derivatives of the four non-zero basis
    /// functions at `u`, and the index of the first of them.
    pub fn eval_derivs(&self, u: f64) -> (usize, [[f64; 4]; 3]) {
        let s = self.span(u);
        (s - DEGREE, basis_derivs(&self.knots, s, u))
    }

    pub fn eval(&self, u: f64) -> (usize, [f64; 4]) {
        let (first, d) = self.eval_derivs(u);
        (first, d[0])
    }

    /// Dense design matrix, one row per point.
    pub fn design(&self, x: &[f64]) -> DMatrix<f64> {
        let mut b = DMatrix::zeros(x.len(), self.len());
        for (i, &u) in x.iter().enumerate() {
            let (first, v) = self.eval(u);
            for (j, vj) in v.iter().enumerate() {
                b[(i, first + j)] = *vj;
            }
        }
        b
    }

    /// Weighted Gram matrix `B^T W B` and `B^T W y`, accumulated row by row.
    pub fn normal_equations(&self, x: &[f64], y: &[f64], w: &[f64]) -> (DMatrix<f64>, DVector<f64>) {
        let k = self.len();
        let mut btb = DMatrix::zeros(k, k);
        let mut bty = DVector::zeros(k);
        for ((&u, &yi), &wi) in x.iter().zip(y).zip(w) {
            let (first, v) = self.eval(u);
            for a in 0..4 {
                bty[first + a] += wi * v[a] * yi;
                for b in 0..4 {
                    btb[(first + a, first + b)] += wi * v[a] * v[b];
                }
            }
        }
        (btb, bty)
    }

    /// Trace of `B^T W B`.
    pub fn design_trace(&self, x: &[f64], w: &[f64]) -> f64 {
        x.iter()
            .zip(w)
            .map(|(&u, &wi)| wi * self.eval(u).1.iter().map(|v| v * v).sum::<f64>())
            .sum()
    }

    fn for_each_penalty_node(&self, mut f: impl FnMut(usize, [f64; 4], f64)) {
        for win in self.breaks.windows(2) {
            let (a, b) = (win[0], win[1]);
            let h = b - a;
            if h <= 0.0 {
                continue;
            }
            for node in GAUSS_NODES {
                let (first, d) = self.eval_derivs(a + node * h);
                f(first, d[2], 0.5 * h);
            }
        }
    }

    /// The penalty matrix with entries `int B_i'' B_j''`.
    pub fn penalty(&self) -> DMatrix<f64> {
        let k = self.len();
        let mut s = DMatrix::zeros(k, k);
        self.for_each_penalty_node(|first, d2, weight| {
            for a in 0..4 {
                for b in 0..4 {
                    s[(first + a, first + b)] += weight * d2[a] * d2[b];
                }
            }
        });
        s
    }

    pub fn penalty_trace(&self) -> f64 {
        let mut tr = 0.0;
        self.for_each_penalty_node(|_, d2, weight| {
            tr += weight * d2.iter().map(|v| v * v).sum::<f64>();
        });
        tr
    }

    pub fn evaluate(&self, coef: &[f64], u: f64) -> f64 {
        let (first, v) = self.eval(u);
        v.iter().enumerate().map(|(j, vj)| vj * coef[first + j]).sum()
    }
}

/// Basis function values and derivatives up to order two (de Boor's
/// triangular scheme with derivative recurrences).
fn basis_derivs(knots: &[f64], span: usize, u: f64) -> [[f64; 4]; 3] {
    const P: usize = DEGREE;
    const ND: usize = 2;
    let mut ndu = [[0.0f64; P + 1]; P + 1];
    let mut left = [0.0f64; P + 1];
    let mut right = [0.0f64; P + 1];
    ndu[0][0] = 1.0;
    for j in 1..=P {
        left[j] = u - knots[span + 1 - j];
        right[j] = knots[span + j] - u;
        let mut saved = 0.0;
        for r in 0..j {
            ndu[j][r] = right[r + 1] + left[j - r];
            let temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }

    let mut ders = [[0.0f64; P + 1]; ND + 1];
    for j in 0..=P {
        ders[0][j] = ndu[j][P];
    }
    let mut a = [[0.0f64; P + 1]; 2];
    for r in 0..=P {
        let (mut s1, mut s2) = (0usize, 1usize);
        a[0][0] = 1.0;
        for k in 1..=ND {
            let mut d = 0.0;
            let rk = r as isize - k as isize;
            let pk = P - k;
            if r >= k {
                let rk = rk as usize;
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
                d = a[s2][0] * ndu[rk][pk];
            }
            let j1 = if rk >= -1 { 1 } else { (-rk) as usize };
            let j2 = if r as isize - 1 <= pk as isize { k - 1 } else { P - r };
            for j in j1..=j2 {
                let idx = (rk + j as isize) as usize;
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][idx];
                d += a[s2][j] * ndu[idx][pk];
            }
            if r <= pk {
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                d += a[s2][k] * ndu[r][pk];
            }
            ders[k][r] = d;
            std::mem::swap(&mut s1, &mut s2);
        }
    }
    let mut factor = P as f64;
    for (k, row) in ders.iter_mut().enumerate().skip(1) {
        for v in row.iter_mut() {
            *v *= factor;
        }
        factor *= (P - k) as f64;
    }
    ders
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_of_unity_and_derivatives() {
        let basis = CubicBasis::clamped(&[0.0, 0.1, 0.35, 0.5, 0.9, 1.0]);
        assert_eq!(basis.len(), 8);
        for i in 0..=100 {
            let u = i as f64 / 100.0;
            let (_, d) = basis.eval_derivs(u);
            assert!((d[0].iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(d[1].iter().sum::<f64>().abs() < 1e-9);
            assert!(d[2].iter().sum::<f64>().abs() < 1e-8);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let basis = CubicBasis::uniform(0.0, 1.0, 9);
        let coef: Vec<f64> = (0..9).map(|i| ((i * 7 % 5) as f64).sin()).collect();
        let f = |u: f64| basis.evaluate(&coef, u);
        for &u in &[0.13, 0.41, 0.77] {
            let eps = 1e-4;
            let (first, d) = basis.eval_derivs(u);
            let d2: f64 = (0..4).map(|j| d[2][j] * coef[first + j]).sum();
            let fd = (f(u + eps) - 2.0 * f(u) + f(u - eps)) / (eps * eps);
            assert!((d2 - fd).abs() < 1e-4 * (1.0 + d2.abs()), "{d2} vs {fd}");
        }
    }

    #[test]
    fn penalty_vanishes_on_linear_functions() {
        // the Greville abscissae give the coefficients of the identity
        let basis = CubicBasis::uniform(0.0, 1.0, 8);
        let k = &basis.knots;
        let coef: Vec<f64> = (0..basis.len())
            .map(|i| (k[i + 1] + k[i + 2] + k[i + 3]) / 3.0)
            .collect();
        for &u in &[0.0, 0.3, 0.99] {
            assert!((basis.evaluate(&coef, u) - u).abs() < 1e-12);
        }
        let s = basis.penalty();
        let c = DVector::from_vec(coef);
        assert!((c.transpose() * &s * &c)[(0, 0)].abs() < 1e-9);
        assert!((s.trace() - basis.penalty_trace()).abs() < 1e-9 * s.trace());
    }
}

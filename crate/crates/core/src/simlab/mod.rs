//! Method-comparison simulation and scaling benchmark.

pub mod cli;

use std::time::Instant;

use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Gamma as GammaDist, LogNormal as LogNormalDist, Normal as NormalDist};

use crate::error::{Error, Result};
use crate::estimators::{estimate, MethodId, MethodSpec};
use crate::metrics::{MetricId, MetricSpec};
use crate::rng;
use crate::roc::{auc, build_roc};
use crate::sample::{Direction, Sample};
use crate::stats::median;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Normal,
    Lognormal,
    Gamma,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Normal, Family::Lognormal, Family::Gamma];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Normal => "normal",
            Family::Lognormal => "lognormal",
            Family::Gamma => "gamma",
        }
    }

    fn control(self) -> Dist {
        match self {
            Family::Normal => Dist::Normal { mean: 100.0, sd: 10.0 },
            Family::Lognormal => Dist::Lognormal { mu: 2.5, sigma: 2.5 },
            Family::Gamma => Dist::Gamma { shape: 2.0, rate: 0.5 },
        }
    }

    fn experimental(self, level: usize) -> Dist {
        let i = level - 1;
        match self {
            Family::Normal => Dist::Normal {
                mean: [105.05, 110.49, 116.83, 125.63][i],
                sd: 10.0,
            },
            Family::Lognormal => Dist::Lognormal {
                mu: [2.76, 3.02, 3.34, 3.78][i],
                sigma: 2.5,
            },
            Family::Gamma => Dist::Gamma {
                shape: 2.0,
                rate: [0.344, 0.233, 0.143, 0.072][i],
            },
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s.trim())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown family '{s}'")))
    }
}

/// Nominal Youden separation of levels 1 to 4.
pub const LEVEL_LABELS: [f64; 4] = [0.2, 0.4, 0.6, 0.8];
pub const SIZES: [usize; 9] = [30, 50, 75, 100, 150, 250, 500, 750, 1000];
/// Desk-scale repetitions per scenario.
pub const DEFAULT_REPS: usize = 500;
pub const DEFAULT_TRUTH_GRID: usize = 2001;

/// A class-conditional distribution. Lognormal parameters are on the log
/// scale; gamma uses shape and rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Dist {
    Normal { mean: f64, sd: f64 },
    Lognormal { mu: f64, sigma: f64 },
    Gamma { shape: f64, rate: f64 },
}

impl Dist {
    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Dist::Normal { mean, sd } => NormalDist::new(mean, sd).unwrap().cdf(x),
            Dist::Lognormal { mu, sigma } => LogNormalDist::new(mu, sigma).unwrap().cdf(x),
            Dist::Gamma { shape, rate } => GammaDist::new(shape, rate).unwrap().cdf(x),
        }
    }

    pub fn quantile(&self, p: f64) -> f64 {
        match *self {
            Dist::Normal { mean, sd } => NormalDist::new(mean, sd).unwrap().inverse_cdf(p),
            Dist::Lognormal { mu, sigma } => LogNormalDist::new(mu, sigma).unwrap().inverse_cdf(p),
            Dist::Gamma { shape, rate } => GammaDist::new(shape, rate).unwrap().inverse_cdf(p),
        }
    }

    fn positive_support(&self) -> bool {
        !matches!(self, Dist::Normal { .. })
    }

    pub fn draw(&self, rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        match *self {
            Dist::Normal { mean, sd } => {
                let d = rand_distr::Normal::new(mean, sd).unwrap();
                (0..n).map(|_| d.sample(rng)).collect()
            }
            Dist::Lognormal { mu, sigma } => {
                let d = rand_distr::LogNormal::new(mu, sigma).unwrap();
                (0..n).map(|_| d.sample(rng)).collect()
            }
            Dist::Gamma { shape, rate } => {
                let d = rand_distr::Gamma::new(shape, 1.0 / rate).unwrap();
                (0..n).map(|_| d.sample(rng)).collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimScenario {
    pub id: usize,
    pub family: Family,
    /// Separation level, 1 to 4.
    pub level: usize,
    pub n: usize,
    /// Negative class.
    pub control: Dist,
    /// Positive class.
    pub experimental: Dist,
}

impl SimScenario {
    pub fn new(id: usize, family: Family, level: usize, n: usize) -> Result<Self> {
        if !(1..=4).contains(&level) {
            return Err(Error::InvalidArgument(format!("level must be 1 to 4, got {level}")));
        }
        if n < 4 {
            return Err(Error::InvalidArgument(format!("n must be at least 4, got {n}")));
        }
        Ok(SimScenario {
            id,
            family,
            level,
            n,
            control: family.control(),
            experimental: family.experimental(level),
        })
    }

    /// Population Youden index at `c`, positives above the cutpoint.
    pub fn youden(&self, c: f64) -> f64 {
        self.control.cdf(c) - self.experimental.cdf(c)
    }
}

/// The full grid: families x levels x sizes, ids in that order.
pub fn scenarios(families: &[Family], levels: &[usize], sizes: &[usize]) -> Result<Vec<SimScenario>> {
    let mut out = Vec::new();
    for &f in families {
        for &l in levels {
            for &n in sizes {
                out.push(SimScenario::new(out.len(), f, l, n)?);
            }
        }
    }
    Ok(out)
}

pub fn all_scenarios() -> Vec<SimScenario> {
    scenarios(&Family::ALL, &[1, 2, 3, 4], &SIZES).expect("built-in grid is valid")
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-13 * (a.abs() + b.abs()).max(1e-300) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

/// Maximiser of the population Youden index: exact midpoint for equal
/// normal spreads, otherwise a dense grid refined by golden section.
pub fn true_optimal_cutpoint(s: &SimScenario, grid: usize) -> f64 {
    if let (Dist::Normal { mean: m0, sd: s0 }, Dist::Normal { mean: m1, sd: s1 }) = (s.control, s.experimental) {
        if s0 == s1 {
            return (m0 + m1) / 2.0;
        }
    }
    let grid = grid.max(3);
    // positive-support families are searched on the log scale
    let log = s.control.positive_support();
    let (to, from): (fn(f64) -> f64, fn(f64) -> f64) = if log { (f64::ln, f64::exp) } else { (|v| v, |v| v) };
    let p = 1e-9;
    let lo = to(s.control.quantile(p).min(s.experimental.quantile(p)));
    let hi = to(s.control.quantile(1.0 - p).max(s.experimental.quantile(1.0 - p)));
    let step = (hi - lo) / (grid - 1) as f64;
    let j = |t: f64| s.youden(from(t));
    let best = (0..grid)
        .map(|i| (i, j(lo + i as f64 * step)))
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let a = lo + best.0.saturating_sub(1) as f64 * step;
    let b = lo + (best.0 + 1).min(grid - 1) as f64 * step;
    from(golden_max(j, a, b))
}

/// Draw a scenario sample: `n / 2` negatives then the rest positives.
pub fn draw_sample(s: &SimScenario, rng: &mut ChaCha8Rng) -> Result<Sample> {
    let n_neg = s.n / 2;
    let mut x = s.control.draw(rng, n_neg);
    x.extend(s.experimental.draw(rng, s.n - n_neg));
    let labels = (0..s.n).map(|i| i >= n_neg).collect();
    Sample::new(x, labels)
}

/// The compared methods, all under the Youden metric.
pub fn default_methods() -> Vec<MethodSpec> {
    [
        MethodId::Empirical,
        MethodId::BootCut,
        MethodId::NormalYouden,
        MethodId::KernelYouden,
        MethodId::GamSmooth,
        MethodId::SplineSmooth,
        MethodId::LoessSmooth,
    ]
    .into_iter()
    .map(MethodSpec::new)
    .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimCell {
    pub scenario_id: usize,
    pub family: Family,
    pub level: usize,
    pub n: usize,
    pub method: MethodId,
    pub true_cutpoint: f64,
    /// Youden index the scenario actually achieves at its true cutpoint.
    pub achieved_youden: f64,
    /// Median absolute error over successful repetitions.
    pub mae: f64,
    pub succeeded: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub repetitions: usize,
    pub seed: u64,
    pub cells: Vec<SimCell>,
}

impl SimResult {
    pub fn cell(&self, scenario_id: usize, method: MethodId) -> Option<&SimCell> {
        self.cells.iter().find(|c| c.scenario_id == scenario_id && c.method == method)
    }

    pub fn write_csv(&self, out: impl std::io::Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record([
            "scenario_id", "family", "level", "separation", "n", "method", "true_cutpoint", "achieved_youden",
            "mae", "succeeded", "failed", "repetitions", "seed",
        ])
        .map_err(io)?;
        for c in &self.cells {
            w.write_record([
                c.scenario_id.to_string(),
                c.family.as_str().to_string(),
                c.level.to_string(),
                LEVEL_LABELS[c.level - 1].to_string(),
                c.n.to_string(),
                c.method.as_str().to_string(),
                c.true_cutpoint.to_string(),
                c.achieved_youden.to_string(),
                crate::serde_real::to_text(c.mae),
                c.succeeded.to_string(),
                c.failed.to_string(),
                self.repetitions.to_string(),
                self.seed.to_string(),
            ])
            .map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Every method sees the same draws within a repetition. Repetition `r`
/// of scenario `s` draws from stream `r` of a seed derived from `s.id`.
pub fn run_simulation(
    scenarios: &[SimScenario],
    methods: &[MethodSpec],
    repetitions: usize,
    seed: u64,
) -> Result<SimResult> {
    if repetitions == 0 {
        return Err(Error::InvalidArgument("repetitions must be at least 1".into()));
    }
    for m in methods {
        m.validate()?;
    }
    let metric = MetricSpec::new(MetricId::Youden);
    let mut cells = Vec::new();
    for s in scenarios {
        let truth = true_optimal_cutpoint(s, DEFAULT_TRUTH_GRID);
        let cell_seed = rng::derive_seed(seed, s.id as u64);
        let errors: Vec<Vec<Option<f64>>> = (0..repetitions)
            .into_par_iter()
            .map(|r| {
                let mut stream = rng::stream(cell_seed, r as u64);
                let Ok(sample) = draw_sample(s, &mut stream) else {
                    return vec![None; methods.len()];
                };
                let curve = build_roc(&sample, Direction::Ge);
                let inner = rng::derive_seed(cell_seed, r as u64);
                methods
                    .iter()
                    .map(|m| {
                        estimate(&sample, &curve, m, &metric, inner)
                            .ok()
                            .map(|e| (e.optimal_cutpoint - truth).abs())
                            .filter(|e| e.is_finite())
                    })
                    .collect()
            })
            .collect();
        for (k, m) in methods.iter().enumerate() {
            let ok: Vec<f64> = errors.iter().filter_map(|e| e[k]).collect();
            cells.push(SimCell {
                scenario_id: s.id,
                family: s.family,
                level: s.level,
                n: s.n,
                method: m.method,
                true_cutpoint: truth,
                achieved_youden: s.youden(truth),
                mae: if ok.is_empty() { f64::NAN } else { median(&ok) },
                succeeded: ok.len(),
                failed: repetitions - ok.len(),
            });
        }
    }
    Ok(SimResult {
        repetitions,
        seed,
        cells,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    /// Median seconds to build the ROC curve and its AUC.
    pub roc_only: f64,
    /// Median seconds for a full empirical estimate.
    pub full: f64,
}

/// Bytes per observation the ROC-only path may hold at its peak,
/// input sample included.
pub const ROC_BYTES_PER_OBS: usize = 64;

/// Normal predictor with a random half of positives, shifted by one.
pub fn bench_sample(n: usize, seed: u64) -> Result<Sample> {
    let mut r = rng::stream(seed, n as u64);
    let normal = rand_distr::StandardNormal;
    let labels: Vec<bool> = (0..n).map(|i| i % 2 == 1).collect();
    let x: Vec<f64> = labels
        .iter()
        .map(|&p| {
            let z: f64 = normal.sample(&mut r);
            z + if p { 1.0 } else { 0.0 }
        })
        .collect();
    Sample::new(x, labels)
}

fn median_time(reps: usize, mut f: impl FnMut()) -> f64 {
    let times: Vec<f64> = (0..reps.max(1))
        .map(|_| {
            let t = Instant::now();
            f();
            t.elapsed().as_secs_f64()
        })
        .collect();
    median(&times)
}

/// Time the ROC-only and full paths at each size. Sizes that fail to
/// allocate are skipped; the rest are still reported.
pub fn run_benchmark(sizes: &[usize], repetitions: usize, seed: u64) -> Result<Vec<BenchRow>> {
    if let Some(&n) = sizes.iter().find(|&&n| n < 100) {
        return Err(Error::InvalidArgument(format!("benchmark sizes must be at least 100, got {n}")));
    }
    let method = MethodSpec::new(MethodId::Empirical);
    let metric = MetricSpec::new(MetricId::SumSensSpec);
    let mut rows = Vec::new();
    for &n in sizes {
        let mut probe: Vec<u8> = Vec::new();
        if probe.try_reserve_exact(n.saturating_mul(ROC_BYTES_PER_OBS)).is_err() {
            continue;
        }
        drop(probe);
        let sample = bench_sample(n, seed)?;
        let roc_only = median_time(repetitions, || {
            let curve = build_roc(&sample, Direction::Ge);
            std::hint::black_box(auc(&curve));
        });
        let full = median_time(repetitions, || {
            let curve = build_roc(&sample, Direction::Ge);
            std::hint::black_box(estimate(&sample, &curve, &method, &metric, seed).ok());
        });
        rows.push(BenchRow { n, roc_only, full });
    }
    Ok(rows)
}

/// Least-squares slope of log time against log n.
pub fn log_log_slope(points: &[(usize, f64)]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|p| (p.0 as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.max(1e-12).ln()).collect();
    let (mx, my) = (crate::stats::mean(&xs), crate::stats::mean(&ys));
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_has_108_scenarios() {
        let all = all_scenarios();
        assert_eq!(all.len(), 108);
        assert!(all.iter().enumerate().all(|(i, s)| s.id == i));
    }

    #[test]
    fn equal_spread_normal_is_the_midpoint() {
        let s = SimScenario::new(0, Family::Normal, 2, 100).unwrap();
        assert_eq!(true_optimal_cutpoint(&s, 11), 105.245);
    }

    #[test]
    fn gamma_truth_matches_density_crossing() {
        // shape-2 densities cross where r0^2 exp(-r0 c) = r1^2 exp(-r1 c)
        let s = SimScenario::new(0, Family::Gamma, 2, 100).unwrap();
        let (r0, r1) = (0.5f64, 0.233f64);
        let exact = 2.0 * (r0 / r1).ln() / (r0 - r1);
        let coarse = true_optimal_cutpoint(&s, DEFAULT_TRUTH_GRID);
        let fine = true_optimal_cutpoint(&s, 2 * DEFAULT_TRUTH_GRID);
        assert!((coarse - exact).abs() < 1e-6, "{coarse} vs {exact}");
        assert!((coarse - fine).abs() < 1e-4);
    }

    #[test]
    fn lognormal_truth_is_the_exponentiated_log_midpoint() {
        let s = SimScenario::new(0, Family::Lognormal, 1, 100).unwrap();
        let exact = ((2.5f64 + 2.76) / 2.0).exp();
        let got = true_optimal_cutpoint(&s, DEFAULT_TRUTH_GRID);
        assert!((got / exact - 1.0).abs() < 1e-6, "{got} vs {exact}");
    }

    #[test]
    fn achieved_separation_is_reported() {
        for f in [Family::Normal, Family::Gamma] {
            for level in 1..=4 {
                let s = SimScenario::new(0, f, level, 100).unwrap();
                let j = s.youden(true_optimal_cutpoint(&s, DEFAULT_TRUTH_GRID));
                assert!((j - LEVEL_LABELS[level - 1]).abs() < 0.01, "{f:?} {level}: {j}");
            }
        }
        // a log-scale spread of 2.5 separates far less than the labels say
        let j: Vec<f64> = (1..=4)
            .map(|level| {
                let s = SimScenario::new(0, Family::Lognormal, level, 100).unwrap();
                s.youden(true_optimal_cutpoint(&s, DEFAULT_TRUTH_GRID))
            })
            .collect();
        assert!(j.windows(2).all(|w| w[0] < w[1]));
        assert!((j[3] - 0.202).abs() < 0.001, "{j:?}");
    }

    #[test]
    fn simulation_is_deterministic_and_total() {
        let sc = scenarios(&[Family::Normal], &[3], &[60]).unwrap();
        let methods = vec![MethodSpec::new(MethodId::Empirical), MethodSpec::new(MethodId::NormalYouden)];
        let a = run_simulation(&sc, &methods, 20, 5).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| run_simulation(&sc, &methods, 20, 5).unwrap());
        assert_eq!(a, b);
        assert!(a.cells.iter().all(|c| c.mae >= 0.0 && c.succeeded == 20));
    }

    #[test]
    fn identical_classes_still_complete() {
        let mut s = SimScenario::new(0, Family::Normal, 1, 40).unwrap();
        s.experimental = s.control;
        let r = run_simulation(&[s], &default_methods(), 5, 1).unwrap();
        assert_eq!(r.cells.len(), 7);
        assert!(r.cells.iter().all(|c| c.mae.is_nan() || c.mae.is_finite()));
    }

    #[test]
    fn slope_of_exact_power_law() {
        let pts: Vec<(usize, f64)> = [100usize, 1000, 10000].iter().map(|&n| (n, 3e-9 * n as f64)).collect();
        assert!((log_log_slope(&pts) - 1.0).abs() < 1e-12);
    }
}

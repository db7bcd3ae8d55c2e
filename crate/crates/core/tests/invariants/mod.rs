//! Property suites shared by the `properties` test target and the
//! acceptance runner. Each suite runs a fixed number of generated cases
//! from a deterministic seed.
#![allow(dead_code)]

use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRng, TestRunner};

use optcut::bootstrap::{replay_repetition, run_bootstrap, BootConfig};
use optcut::estimators::{
    estimate_baseline, estimate_empirical, kernel_youden_cutpoint, normal_youden_cutpoint, Baseline,
    NormalParams, DEFAULT_KERNEL_GRID,
};
use optcut::metrics::{best_cutpoint_indices, cohens_kappa, evaluate_metric, MetricId, MetricSpec, Sense};
use optcut::pipeline::{run_analysis, AnalysisRequest, Dataset};
use optcut::smoothers::{
    fit_loess_aicc, fit_penalized_spline_gcv, fit_smoothing_spline, kernel_cdf, rule_of_thumb_bandwidth,
    Smoothing, SplineOptions,
};
use optcut::{
    auc, build_roc, estimate, midpoint_cutpoint, ConfusionCounts, Direction, Hints, MethodId, MethodSpec, Sample,
    TieBreak,
};

use crate::common::{lower_middle, oracle_auc, oracle_best_sum_sens_spec, oracle_counts};

pub struct Suite {
    pub name: &'static str,
    pub cases: u32,
    pub run: fn(u32) -> Result<(), String>,
}

pub fn suites() -> Vec<Suite> {
    macro_rules! suite {
        ($f:ident, $n:expr) => {
            Suite {
                name: stringify!($f),
                cases: $n,
                run: $f,
            }
        };
    }
    vec![
        suite!(roc_matches_oracle, 1500),
        suite!(roc_rank_invariance, 1000),
        suite!(roc_direction_duality, 1000),
        suite!(counts_at_any_real, 1000),
        suite!(midpoint_keeps_classification, 1000),
        suite!(metric_identities, 1500),
        suite!(metric_argmax_agreement, 500),
        suite!(empirical_matches_oracle, 1000),
        suite!(scale_equivariance, 500),
        suite!(panel_consistency, 300),
        suite!(bootstrap_partition, 200),
        suite!(pipeline_subgroups, 150),
        suite!(pipeline_idempotent, 150),
        suite!(pipeline_hints_override, 150),
        suite!(kernel_cdf_monotone, 500),
        suite!(smoothers_scale_linear, 100),
        suite!(loess_selects_minimum, 100),
    ]
}

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let rng = TestRng::deterministic_rng(config.rng_algorithm);
    TestRunner::new_with_rng(config, rng)
}

/// Predictor and labels with at least one row of each class. Tie density
/// varies from heavy (few integer levels) to none (jittered values).
fn labelled(max_n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<bool>)> {
    (4usize..=max_n, 1u32..=25, 0u8..3).prop_flat_map(|(n, levels, kind)| {
        (vec(0..levels, n), vec(any::<bool>(), n), vec(-0.5f64..0.5, n)).prop_map(move |(v, mut pos, jit)| {
            pos[0] = true;
            pos[1] = false;
            let x = v
                .iter()
                .zip(&jit)
                .map(|(&k, &j)| match kind {
                    0 => k as f64,
                    1 => k as f64 + j,
                    _ => k as f64 * 0.25 - 3.0,
                })
                .collect();
            (x, pos)
        })
    })
}

fn sample((x, pos): &(Vec<f64>, Vec<bool>)) -> Sample {
    Sample::new(x.clone(), pos.clone()).unwrap()
}

fn tuple(c: &ConfusionCounts) -> (u64, u64, u64, u64) {
    (c.tp, c.fp, c.tn, c.fn_)
}

fn dir(ge: bool) -> Direction {
    if ge {
        Direction::Ge
    } else {
        Direction::Le
    }
}

pub fn roc_matches_oracle(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(labelled(80), any::<bool>()), |(data, ge)| {
            let s = sample(&data);
            let curve = build_roc(&s, dir(ge));
            let cuts = curve.cutpoints();
            prop_assert_eq!(cuts[0], dir(ge).sentinel());
            prop_assert_eq!(tuple(&curve.counts(0)), (0, 0, s.n_neg() as u64, s.n_pos() as u64));
            let last = curve.len() - 1;
            prop_assert_eq!(tuple(&curve.counts(last)), (s.n_pos() as u64, s.n_neg() as u64, 0, 0));
            for i in 0..curve.len() {
                prop_assert_eq!(tuple(&curve.counts(i)), oracle_counts(&data.0, &data.1, cuts[i], ge));
                if i > 0 {
                    prop_assert!(curve.tpr(i) >= curve.tpr(i - 1) && curve.fpr(i) >= curve.fpr(i - 1));
                }
            }
            prop_assert_eq!(auc(&curve), oracle_auc(&data.0, &data.1, ge));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn roc_rank_invariance(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&labelled(60), |data| {
            let s = sample(&data);
            // strictly increasing and exact on the generated values
            let t = s.map_predictor(|v| v * v * v + 8.0 * v).unwrap();
            let (a, b) = (build_roc(&s, Direction::Ge), build_roc(&t, Direction::Ge));
            prop_assert_eq!(a.len(), b.len());
            for i in 0..a.len() {
                prop_assert_eq!(tuple(&a.counts(i)), tuple(&b.counts(i)));
            }
            prop_assert_eq!(auc(&a), auc(&b));
            let spec = MetricSpec::new(MetricId::Youden);
            let ra = estimate_empirical(&a, &spec, TieBreak::Median, false).unwrap();
            let rb = estimate_empirical(&b, &spec, TieBreak::Median, false).unwrap();
            let c = ra.optimal_cutpoint;
            prop_assert_eq!(rb.optimal_cutpoint, c * c * c + 8.0 * c);
            prop_assert_eq!(ra.panel.counts(), rb.panel.counts());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn roc_direction_duality(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&labelled(80), |data| {
            let s = sample(&data);
            let neg = s.map_predictor(|v| -v).unwrap();
            let (le, ge_neg) = (build_roc(&s, Direction::Le), build_roc(&neg, Direction::Ge));
            prop_assert_eq!(auc(&le), auc(&ge_neg));
            for i in 1..le.len() {
                prop_assert_eq!(le.cutpoints()[i], -ge_neg.cutpoints()[i]);
                prop_assert_eq!(tuple(&le.counts(i)), tuple(&ge_neg.counts(i)));
            }
            let sum = auc(&le) + auc(&build_roc(&s, Direction::Ge));
            prop_assert!((sum - 1.0).abs() < 1e-12);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn counts_at_any_real(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(labelled(60), any::<bool>(), -8.0f64..30.0), |(data, ge, c)| {
            let curve = build_roc(&sample(&data), dir(ge));
            prop_assert_eq!(tuple(&curve.counts_at(c).unwrap()), oracle_counts(&data.0, &data.1, c, ge));
            prop_assert!(curve.counts_at(f64::NAN).is_none());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn midpoint_keeps_classification(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(labelled(40), any::<bool>()), |(data, ge)| {
            let s = sample(&data);
            let curve = build_roc(&s, dir(ge));
            for i in 1..curve.len() {
                let c = curve.cutpoints()[i];
                let m = midpoint_cutpoint(c, &s, dir(ge)).unwrap();
                prop_assert_eq!(
                    ConfusionCounts::classify(&s, m, dir(ge)),
                    ConfusionCounts::classify(&s, c, dir(ge))
                );
                prop_assert_eq!(tuple(&curve.counts_at(curve.midpoint(i)).unwrap()), tuple(&curve.counts(i)));
            }
            prop_assert!(midpoint_cutpoint(1e9, &s, dir(ge)).is_err());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn value(id: MetricId, c: &ConfusionCounts) -> f64 {
    MetricSpec::new(id).value(c)
}

pub fn metric_identities(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(0u64..60, 0u64..60, 0u64..60, 0u64..60), |(tp, fp, tn, fn_)| {
            prop_assume!(tp + fn_ > 0 && fp + tn > 0);
            let c = ConfusionCounts::new(tp, fp, tn, fn_);
            let (p, n) = ((tp + fn_) as f64, (fp + tn) as f64);
            let sens = tp as f64 / p;
            let spec = tn as f64 / n;
            prop_assert!((value(MetricId::Sensitivity, &c) - sens).abs() < 1e-15);
            prop_assert!((value(MetricId::Specificity, &c) - spec).abs() < 1e-15);
            prop_assert!((value(MetricId::Youden, &c) - (sens + spec - 1.0)).abs() < 1e-12);
            prop_assert!((value(MetricId::SumSensSpec, &c) - (sens + spec)).abs() < 1e-12);
            prop_assert!((value(MetricId::Accuracy, &c) - (tp + tn) as f64 / (p + n)).abs() < 1e-15);
            let roc01 = value(MetricId::Roc01, &c);
            prop_assert!((0.0..=2f64.sqrt() + 1e-12).contains(&roc01));
            let cost = MetricSpec::new(MetricId::MisclassificationCost).with_costs(1.0, 1.0).value(&c);
            prop_assert_eq!(cost, (fp + fn_) as f64);
            let k = cohens_kappa(&c);
            prop_assert!(k.is_nan() || (-1.0 - 1e-12..=1.0 + 1e-12).contains(&k));
            // agreement-based kappa cross-check
            let total = p + n;
            let pe = (p * (tp + fp) as f64 + n * (tn + fn_) as f64) / (total * total);
            let po = (tp + tn) as f64 / total;
            if pe < 1.0 {
                prop_assert!((k - (po - pe) / (1.0 - pe)).abs() < 1e-12);
            }
            let f1 = value(MetricId::F1Score, &c);
            prop_assert!(f1.is_nan() || (0.0..=1.0).contains(&f1));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn metric_argmax_agreement(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&labelled(80), |data| {
            let curve = build_roc(&sample(&data), Direction::Ge);
            let best = |spec: MetricSpec| {
                let v = evaluate_metric(&spec, &curve).unwrap().values;
                best_cutpoint_indices(&v, spec.sense).unwrap()
            };
            prop_assert_eq!(best(MetricSpec::new(MetricId::Youden)), best(MetricSpec::new(MetricId::SumSensSpec)));
            prop_assert_eq!(
                best(MetricSpec::new(MetricId::MisclassificationCost).with_costs(1.0, 1.0)),
                best(MetricSpec::new(MetricId::Accuracy))
            );
            prop_assert_eq!(MetricSpec::new(MetricId::MisclassificationCost).sense, Sense::Minimize);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn empirical_matches_oracle(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(labelled(120), any::<bool>()), |(data, ge)| {
            let curve = build_roc(&sample(&data), dir(ge));
            let r = estimate_empirical(&curve, &MetricSpec::new(MetricId::SumSensSpec), TieBreak::Median, false)
                .unwrap();
            let mut tied = oracle_best_sum_sens_spec(&data.0, &data.1, ge);
            let mut got = r.tied_cutpoints.clone();
            got.sort_by(f64::total_cmp);
            tied.sort_by(f64::total_cmp);
            prop_assert_eq!(&got, &tied);
            prop_assert_eq!(r.optimal_cutpoint, lower_middle(&tied));
            prop_assert_eq!(tuple(&r.panel.counts()), oracle_counts(&data.0, &data.1, r.optimal_cutpoint, ge));
            prop_assert_eq!(r.auc, oracle_auc(&data.0, &data.1, ge));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn scale_equivariance(cases: u32) -> Result<(), String> {
    let scales = prop::sample::select(vec![0.25, 0.5, 2.0, 4.0, 8.0]);
    runner(cases)
        .run(&(labelled(60), scales, -50i32..50, 0.1f64..20.0), |(data, two_pow, shift, a)| {
            let s = sample(&data);
            let spec = MetricSpec::new(MetricId::Youden);
            // powers of two keep every value exact
            let t = s.map_predictor(|v| v * two_pow).unwrap();
            let (cs, ct) = (build_roc(&s, Direction::Ge), build_roc(&t, Direction::Ge));
            let es = estimate_empirical(&cs, &spec, TieBreak::Median, false).unwrap();
            let et = estimate_empirical(&ct, &spec, TieBreak::Median, false).unwrap();
            prop_assert_eq!(et.optimal_cutpoint, es.optimal_cutpoint * two_pow);

            let b = shift as f64;
            let u = s.map_predictor(|v| a * v + b).unwrap();
            let cu = build_roc(&u, Direction::Ge);
            let close = |x: f64, y: f64| (x - y).abs() <= 1e-8 * (1.0 + y.abs());
            for baseline in [Baseline::Mean, Baseline::Median] {
                let x = estimate_baseline(&s, &cs, &spec, baseline).unwrap().optimal_cutpoint;
                let y = estimate_baseline(&u, &cu, &spec, baseline).unwrap().optimal_cutpoint;
                prop_assert!(close(y, a * x + b), "{:?}: {} vs {}", baseline, y, a * x + b);
            }
            if let (Ok(p), Ok(q)) = (NormalParams::from_sample(&s), NormalParams::from_sample(&u)) {
                let x = normal_youden_cutpoint(&p, Direction::Ge);
                let y = normal_youden_cutpoint(&q, Direction::Ge);
                prop_assert!(close(y, a * x + b), "normal: {} vs {}", y, a * x + b);
            }
            if let Ok(x) = kernel_youden_cutpoint(&s, Direction::Ge, DEFAULT_KERNEL_GRID) {
                let y = kernel_youden_cutpoint(&u, Direction::Ge, DEFAULT_KERNEL_GRID).unwrap();
                // flat maxima may tie to rounding, so compare the smoothed index
                let j = |c: f64| {
                    let (neg, pos) = (s.negatives(), s.positives());
                    let f = kernel_cdf(&neg, rule_of_thumb_bandwidth(&neg).unwrap()).unwrap();
                    let g = kernel_cdf(&pos, rule_of_thumb_bandwidth(&pos).unwrap()).unwrap();
                    f.eval(c) - g.eval(c)
                };
                prop_assert!((j(x) - j((y - b) / a)).abs() < 1e-9, "kernel: {} vs {}", y, a * x + b);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn panel_consistency(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(labelled(60), any::<bool>(), any::<u64>()), |(data, ge, seed)| {
            let s = sample(&data);
            let curve = build_roc(&s, dir(ge));
            let metric = MetricSpec::new(MetricId::Youden);
            for &id in MethodId::ALL {
                let mut m = MethodSpec::new(id);
                m.boot_cut_count = 8;
                m.manual_cutpoint = Some(data.0[0]);
                let Ok(r) = estimate(&s, &curve, &m, &metric, seed) else {
                    continue;
                };
                let k = oracle_counts(&data.0, &data.1, r.optimal_cutpoint, ge);
                prop_assert_eq!(tuple(&r.panel.counts()), k, "{}", id);
                prop_assert_eq!((r.n_pos, r.n_neg, r.n), (s.n_pos(), s.n_neg(), s.len()));
                prop_assert_eq!(r.auc, oracle_auc(&data.0, &data.1, ge));
                if r.metric_name == "youden" {
                    prop_assert_eq!(r.method_metric_value, metric.value(&r.panel.counts()));
                } else {
                    prop_assert!(r.metric_name.ends_with("_youden"), "{}", r.metric_name);
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn bootstrap_partition(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(labelled(50), any::<bool>(), any::<u64>()), |(data, stratified, seed)| {
            let s = sample(&data);
            let method = MethodSpec::new(MethodId::Empirical);
            let metric = MetricSpec::new(MetricId::SumSensSpec);
            let config = BootConfig {
                boot_runs: 4,
                stratified,
                seed,
                workers: None,
            };
            let run = run_bootstrap(&s, Direction::Ge, &method, &metric, &config).unwrap();
            prop_assert_eq!(run.repetitions.len() + run.failures.len(), 4);
            for rep in &run.repetitions {
                prop_assert_eq!(rep.in_bag_rows.len(), s.len());
                let oob = rep.out_of_bag_rows(s.len());
                for i in 0..s.len() {
                    prop_assert!(rep.in_bag_rows.contains(&i) != oob.contains(&i));
                }
                prop_assert_eq!(oob.is_empty(), rep.out_of_bag.is_none());
                if stratified {
                    let pos = rep.in_bag_rows.iter().filter(|&&i| s.labels()[i]).count();
                    prop_assert_eq!(pos, s.n_pos());
                }
                let again =
                    replay_repetition(&s, Direction::Ge, &method, &metric, seed, rep.index, rep.in_bag_rows.clone())
                        .unwrap();
                prop_assert_eq!(again.in_bag_cutpoint, rep.in_bag_cutpoint);
                prop_assert_eq!(again.in_bag.counts(), rep.in_bag.counts());
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn grouped() -> impl Strategy<Value = (Vec<f64>, Vec<bool>, Vec<u8>)> {
    labelled(60).prop_flat_map(|(x, pos)| {
        let n = x.len();
        (Just(x), Just(pos), vec(0u8..3, n))
    })
}

fn dataset(x: &[f64], pos: &[bool], group: &[u8]) -> Dataset {
    let labels: Vec<&str> = pos.iter().map(|&p| if p { "case" } else { "control" }).collect();
    let groups: Vec<String> = group.iter().map(|g| format!("g{g}")).collect();
    Dataset::new()
        .with_numeric("x", x)
        .unwrap()
        .with_text("y", &labels)
        .unwrap()
        .with_text("g", &groups)
        .unwrap()
}

pub fn pipeline_subgroups(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&grouped(), |(x, pos, group)| {
            let data = dataset(&x, &pos, &group);
            let mut req = AnalysisRequest::new("x", "y");
            req.subgroup = Some("g".into());
            let Ok(res) = run_analysis(&data, &req) else {
                return Ok(());
            };
            let names: Vec<String> = res.records.iter().map(|r| r.subgroup.clone().unwrap()).collect();
            prop_assert!(names.windows(2).all(|w| w[0] < w[1]));
            let mut present: Vec<String> = group.iter().map(|g| format!("g{g}")).collect();
            present.sort();
            present.dedup();
            prop_assert_eq!(res.records.len() + res.failures.len(), present.len());
            let direction = res.records[0].resolution.direction;
            for rec in &res.records {
                let g = rec.subgroup.as_deref().unwrap();
                let rows: Vec<usize> = (0..x.len()).filter(|&i| format!("g{}", group[i]) == g).collect();
                prop_assert_eq!(rec.result.n, rows.len());
                prop_assert_eq!(rec.resolution.direction, direction);
                let sx: Vec<f64> = rows.iter().map(|&i| x[i]).collect();
                let sp: Vec<bool> = rows.iter().map(|&i| pos[i] == (rec.resolution.pos_class == "case")).collect();
                let alone = Sample::new(sx, sp).unwrap();
                let curve = build_roc(&alone, direction);
                let r = estimate_empirical(&curve, &req.metric, TieBreak::Median, false).unwrap();
                prop_assert_eq!(r.optimal_cutpoint, rec.result.optimal_cutpoint);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn pipeline_idempotent(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(grouped(), any::<bool>()), |((x, pos, group), with_group)| {
            let data = dataset(&x, &pos, &group);
            let mut req = AnalysisRequest::new("x", "y");
            if with_group {
                req.subgroup = Some("g".into());
            }
            req.boot.boot_runs = 3;
            let json = |r: &optcut::pipeline::AnalysisResult| serde_json::to_string(r).unwrap();
            match (run_analysis(&data, &req), run_analysis(&data, &req)) {
                (Ok(a), Ok(b)) => prop_assert_eq!(json(&a), json(&b)),
                (Err(a), Err(b)) => prop_assert_eq!(a, b),
                _ => prop_assert!(false, "outcomes differ"),
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn pipeline_hints_override(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(labelled(60), any::<bool>(), any::<bool>()), |((x, pos), case_positive, ge)| {
            let data = dataset(&x, &pos, &vec![0; x.len()]);
            let mut req = AnalysisRequest::new("x", "y");
            let (p, n) = if case_positive { ("case", "control") } else { ("control", "case") };
            req.hints = Hints {
                pos_class: Some(p.into()),
                neg_class: None,
                direction: Some(dir(ge)),
            };
            let res = run_analysis(&data, &req).unwrap();
            let rec = &res.records[0];
            prop_assert_eq!(rec.resolution.pos_class.as_str(), p);
            prop_assert_eq!(rec.resolution.neg_class.as_str(), n);
            prop_assert_eq!(rec.resolution.direction, dir(ge));
            let truth: Vec<bool> = pos.iter().map(|&v| v == case_positive).collect();
            prop_assert_eq!(rec.result.auc, oracle_auc(&x, &truth, ge));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn kernel_cdf_monotone(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(vec(-10.0f64..10.0, 2..60), vec(-15.0f64..15.0, 2..20)), |(v, mut at)| {
            let Ok(h) = rule_of_thumb_bandwidth(&v) else {
                return Ok(());
            };
            let cdf = kernel_cdf(&v, h).unwrap();
            at.sort_by(f64::total_cmp);
            let f: Vec<f64> = at.iter().map(|&t| cdf.eval(t)).collect();
            prop_assert!(f.iter().all(|p| (0.0..=1.0).contains(p)));
            prop_assert!(f.windows(2).all(|w| w[0] <= w[1] + 1e-15));
            prop_assert!(cdf.eval(-1e6) < 1e-12 && cdf.eval(1e6) > 1.0 - 1e-12);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn xy() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (12usize..40).prop_flat_map(|n| (Just((0..n).map(|i| i as f64).collect::<Vec<f64>>()), vec(-3.0f64..3.0, n)))
}

pub fn smoothers_scale_linear(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(xy(), 0.2f64..5.0), |((x, y), a)| {
            let ay: Vec<f64> = y.iter().map(|v| a * v).collect();
            let check = |f: &[f64], g: &[f64]| f.iter().zip(g).all(|(p, q)| (a * p - q).abs() < 1e-7 * (1.0 + q.abs()));
            let opts = || SplineOptions {
                smoothing: Smoothing::Spar(0.5),
                knots: None,
            };
            let s1 = fit_smoothing_spline(&x, &y, opts()).unwrap();
            let s2 = fit_smoothing_spline(&x, &ay, opts()).unwrap();
            prop_assert!(check(s1.fitted(), s2.fitted()), "spline");
            let l1 = fit_loess_aicc(&x, &y, 1).unwrap();
            let l2 = fit_loess_aicc(&x, &ay, 1).unwrap();
            prop_assert_eq!(l1.span(), l2.span());
            prop_assert!(check(l1.fitted(), l2.fitted()), "loess");
            let g1 = fit_penalized_spline_gcv(&x, &y, 10).unwrap();
            let g2 = fit_penalized_spline_gcv(&x, &ay, 10).unwrap();
            prop_assert!(g1.fitted().iter().zip(g2.fitted()).all(|(p, q)| (a * p - q).abs() < 1e-4 * (1.0 + q.abs())), "gam");
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn loess_selects_minimum(cases: u32) -> Result<(), String> {
    runner(cases)
        .run(&(xy(), 1usize..=2), |((x, y), degree)| {
            let fit = fit_loess_aicc(&x, &y, degree).unwrap();
            prop_assert!(fit.criteria().iter().all(|c| fit.aicc() <= c.aicc));
            let chosen = fit.criteria().iter().find(|c| c.span == fit.span()).unwrap();
            prop_assert_eq!(chosen.aicc, fit.aicc());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

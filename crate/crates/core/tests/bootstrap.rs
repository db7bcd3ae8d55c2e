use optcut::bootstrap::{boot_ci, run_bootstrap, summarize_bootstrap, summary_variables, BootConfig};
use optcut::metrics::{MetricId, MetricSpec};
use optcut::{Direction, MethodId, MethodSpec, Sample};

fn sample(n: usize) -> Sample {
    let x: Vec<f64> = (0..n).map(|i| ((i * 37) % 101) as f64 / 10.0).collect();
    let labels = x.iter().enumerate().map(|(i, v)| v + (i % 7) as f64 > 8.0).collect();
    Sample::new(x, labels).unwrap()
}

fn type7(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let (lo, frac) = (h.floor() as usize, h - h.floor());
    if lo + 1 < sorted.len() {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    } else {
        sorted[lo]
    }
}

#[test]
fn summary_rows_match_recomputed_statistics() {
    let s = sample(150);
    let metric = MetricSpec::new(MetricId::Youden);
    let config = BootConfig {
        boot_runs: 200,
        seed: 3,
        ..BootConfig::default()
    };
    let run = run_bootstrap(&s, Direction::Ge, &MethodSpec::new(MethodId::Empirical), &metric, &config).unwrap();
    let summary = summarize_bootstrap(&run);
    assert_eq!(summary.boot_runs, 200);
    let names: Vec<String> = summary.rows.iter().map(|r| r.variable.clone()).collect();
    assert_eq!(names, summary_variables("youden"));
    for row in &summary.rows {
        let values = run.values(&row.variable).unwrap();
        let mut v: Vec<f64> = values.iter().copied().filter(|x| !x.is_nan()).collect();
        v.sort_by(f64::total_cmp);
        let d = &row.distribution;
        assert_eq!(d.missing, values.len() - v.len());
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let sd = (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt();
        for (got, want) in [
            (d.min, v[0]),
            (d.q05, type7(&v, 0.05)),
            (d.median, type7(&v, 0.5)),
            (d.q95, type7(&v, 0.95)),
            (d.max, v[v.len() - 1]),
            (d.mean, mean),
            (d.sd, sd),
        ] {
            assert!((got - want).abs() < 1e-12, "{}: {got} vs {want}", row.variable);
        }
    }
    let (lo, hi) = boot_ci(&run, "youden", false, 0.1).unwrap();
    let mut oob = run.values("youden_oob").unwrap();
    oob.retain(|x| !x.is_nan());
    oob.sort_by(f64::total_cmp);
    assert_eq!((lo, hi), (type7(&oob, 0.05), type7(&oob, 0.95)));
    assert!(run.values("nonsense").is_err());
}

#[test]
fn log_is_stable_across_worker_counts_and_strata() {
    let s = sample(90);
    let metric = MetricSpec::new(MetricId::SumSensSpec);
    let method = MethodSpec::new(MethodId::BootCut);
    for stratified in [false, true] {
        let logs: Vec<Vec<u8>> = [1, 2, 5]
            .into_iter()
            .map(|w| {
                let config = BootConfig {
                    boot_runs: 30,
                    stratified,
                    seed: 8,
                    workers: Some(w),
                };
                let mut buf = Vec::new();
                run_bootstrap(&s, Direction::Ge, &method, &metric, &config).unwrap().write_log(&mut buf).unwrap();
                buf
            })
            .collect();
        assert_eq!(logs[0], logs[1]);
        assert_eq!(logs[0], logs[2]);
        assert_eq!(String::from_utf8_lossy(&logs[0]).lines().count(), 30);
    }
}

#[test]
fn oob_coverage_and_optimism_at_moderate_scale() {
    let s = sample(300);
    let metric = MetricSpec::new(MetricId::SumSensSpec);
    let config = BootConfig {
        boot_runs: 300,
        seed: 21,
        ..BootConfig::default()
    };
    let run = run_bootstrap(&s, Direction::Ge, &MethodSpec::new(MethodId::Empirical), &metric, &config).unwrap();
    let coverage: f64 = run
        .repetitions
        .iter()
        .map(|r| {
            let mut rows = r.in_bag_rows.clone();
            rows.sort_unstable();
            rows.dedup();
            rows.len() as f64 / 300.0
        })
        .sum::<f64>()
        / 300.0;
    assert!((coverage - 0.632).abs() < 0.01, "{coverage}");
    let b: f64 = run.values("sum_sens_spec_b").unwrap().iter().sum();
    let oob: f64 = run.values("sum_sens_spec_oob").unwrap().iter().sum();
    assert!(b > oob);
}

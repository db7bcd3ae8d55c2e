//! Shared fixtures for the integration tests.
#![allow(dead_code)]

/// (value, negatives, positives) of a 532-row fixture shaped like a
/// screening-score study: integer scores 0 to 11, 36 positives.
pub const SCREENING_COUNTS: [(u32, usize, usize); 12] = [
    (0, 400, 2),
    (1, 28, 2),
    (2, 20, 2),
    (3, 16, 4),
    (4, 11, 4),
    (5, 8, 8),
    (6, 5, 6),
    (7, 3, 3),
    (8, 2, 2),
    (9, 1, 1),
    (10, 1, 1),
    (11, 1, 1),
];

pub struct Row {
    pub score: f64,
    pub age: f64,
    pub gender: &'static str,
    pub outcome: &'static str,
}

/// Rows of the screening fixture in a fixed interleaved order.
pub fn screening_rows() -> Vec<Row> {
    let mut rows = Vec::new();
    for &(v, neg, pos) in &SCREENING_COUNTS {
        for k in 0..neg + pos {
            rows.push((v, k < pos));
        }
    }
    let n = rows.len();
    // 263 is coprime with 532, so this is a permutation
    let order: Vec<usize> = (0..n).map(|i| (i * 263 + 17) % n).collect();
    order
        .into_iter()
        .enumerate()
        .map(|(i, j)| {
            let (v, pos) = rows[j];
            Row {
                score: v as f64,
                age: 18.0 + ((i * 37) % 61) as f64,
                gender: if (i * 7 + v as usize) % 19 < 5 { "male" } else { "female" },
                outcome: if pos { "yes" } else { "no" },
            }
        })
        .collect()
}

pub fn screening_csv() -> String {
    let mut s = String::from("score,age,gender,outcome\n");
    for r in screening_rows() {
        s.push_str(&format!("{},{},{},{}\n", r.score, r.age, r.gender, r.outcome));
    }
    s
}

/// Optional copy of the published study data (columns dsi, gender,
/// suicide, age), from `OPTCUT_SUICIDE_CSV` or tests/fixtures/suicide.csv.
pub fn published_fixture() -> Option<std::path::PathBuf> {
    if let Ok(p) = std::env::var("OPTCUT_SUICIDE_CSV") {
        let p = std::path::PathBuf::from(p);
        return p.exists().then_some(p);
    }
    let p = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/suicide.csv");
    p.exists().then_some(p)
}

/// Predicted positive under `>=` (ge) or `<=`.
fn predicts(x: f64, c: f64, ge: bool) -> bool {
    if ge {
        x >= c
    } else {
        x <= c
    }
}

/// (tp, fp, tn, fn) by direct classification.
pub fn oracle_counts(x: &[f64], pos: &[bool], c: f64, ge: bool) -> (u64, u64, u64, u64) {
    let mut k = (0, 0, 0, 0);
    for (&v, &p) in x.iter().zip(pos) {
        match (predicts(v, c, ge), p) {
            (true, true) => k.0 += 1,
            (true, false) => k.1 += 1,
            (false, false) => k.2 += 1,
            (false, true) => k.3 += 1,
        }
    }
    k
}

/// Pairwise AUC with ties credited one half, as the same exact ratio the
/// trapezoid produces.
pub fn oracle_auc(x: &[f64], pos: &[bool], ge: bool) -> f64 {
    let p: Vec<f64> = x.iter().zip(pos).filter(|t| *t.1).map(|t| *t.0).collect();
    let n: Vec<f64> = x.iter().zip(pos).filter(|t| !*t.1).map(|t| *t.0).collect();
    let mut twice: u128 = 0;
    for &a in &p {
        for &b in &n {
            let win = if ge { a > b } else { a < b };
            twice += if win { 2 } else if a == b { 1 } else { 0 };
        }
    }
    twice as f64 / (2.0 * p.len() as f64 * n.len() as f64)
}

/// Every candidate cutpoint (sentinel plus observed values) maximising
/// sensitivity + specificity, compared exactly in integers, ascending.
pub fn oracle_best_sum_sens_spec(x: &[f64], pos: &[bool], ge: bool) -> Vec<f64> {
    let np = pos.iter().filter(|&&p| p).count() as u64;
    let nn = pos.len() as u64 - np;
    let mut cands: Vec<f64> = x.to_vec();
    cands.push(if ge { f64::INFINITY } else { f64::NEG_INFINITY });
    cands.sort_by(f64::total_cmp);
    cands.dedup();
    let score = |c: f64| {
        let (tp, _, tn, _) = oracle_counts(x, pos, c, ge);
        tp * nn + tn * np
    };
    let best = cands.iter().map(|&c| score(c)).max().unwrap();
    cands.into_iter().filter(|&c| score(c) == best).collect()
}

/// Lower-middle element of an ascending list.
pub fn lower_middle(v: &[f64]) -> f64 {
    v[(v.len() - 1) / 2]
}

//! Resolution of positive/negative classes and ROC direction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::{Direction, Sample};
use crate::stats::median;

/// User-fixed parts of the class/direction resolution.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Hints {
    pub pos_class: Option<String>,
    pub neg_class: Option<String>,
    pub direction: Option<Direction>,
}

/// Where a resolved element came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Hint,
    Detected,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassResolution {
    pub direction: Direction,
    pub pos_class: String,
    pub neg_class: String,
    pub direction_source: Source,
    pub classes_source: Source,
}

impl ClassResolution {
    /// Binary sample for `labels` under this resolution.
    pub fn apply(&self, x: Vec<f64>, labels: &[impl AsRef<str>]) -> Result<Sample> {
        let mut positive = Vec::with_capacity(labels.len());
        for l in labels {
            let l = l.as_ref();
            if l == self.pos_class {
                positive.push(true);
            } else if l == self.neg_class {
                positive.push(false);
            } else {
                return Err(Error::UnknownClass(l.to_string()));
            }
        }
        Sample::new(x, positive)
    }
}

/// Distinct labels in first-appearance order.
pub fn distinct_labels(labels: &[impl AsRef<str>]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for l in labels {
        if !out.iter().any(|o| o == l.as_ref()) {
            out.push(l.as_ref().to_string());
            if out.len() > 2 {
                break;
            }
        }
    }
    out
}

/// Resolve direction and classes from the data, honouring any hints.
///
/// Without hints the class with the higher median predictor becomes the
/// positive class with direction `>=`. A hinted element is never changed.
pub fn detect_direction_and_classes(
    x: &[f64],
    labels: &[impl AsRef<str>],
    hints: &Hints,
) -> Result<ClassResolution> {
    let distinct = distinct_labels(labels);
    if distinct.len() != 2 {
        return Err(if distinct.len() < 2 {
            Error::DegenerateClasses
        } else {
            Error::ClassCount {
                found: count_distinct(labels),
            }
        });
    }
    for hint in [&hints.pos_class, &hints.neg_class].into_iter().flatten() {
        if !distinct.contains(hint) {
            return Err(Error::UnknownClass(hint.clone()));
        }
    }
    let other = |c: &str| distinct.iter().find(|d| *d != c).cloned().unwrap();

    let class_median = |class: &str| {
        let v: Vec<f64> = x
            .iter()
            .zip(labels)
            .filter(|(_, l)| l.as_ref() == class)
            .map(|(&v, _)| v)
            .collect();
        median(&v)
    };

    let classes_source = if hints.pos_class.is_some() || hints.neg_class.is_some() {
        Source::Hint
    } else {
        Source::Detected
    };
    let direction_source = if hints.direction.is_some() {
        Source::Hint
    } else {
        Source::Detected
    };

    let hinted = match (&hints.pos_class, &hints.neg_class) {
        (Some(p), Some(n)) if p == n => {
            return Err(Error::InvalidArgument(
                "positive and negative class must differ".into(),
            ))
        }
        (Some(p), Some(n)) => Some((p.clone(), n.clone())),
        (Some(p), None) => Some((p.clone(), other(p))),
        (None, Some(n)) => Some((other(n), n.clone())),
        (None, None) => None,
    };

    let (pos, neg, direction) = match (hinted, hints.direction) {
        (Some((p, n)), Some(dir)) => (p, n, dir),
        (Some((p, n)), None) => {
            let dir = direction_for(class_median(&p), class_median(&n))?;
            (p, n, dir)
        }
        (None, dir) => {
            // order-independent: compare by median, not by appearance
            let (a, b) = (&distinct[0], &distinct[1]);
            let (ma, mb) = (class_median(a), class_median(b));
            if ma == mb {
                return Err(Error::AmbiguousDirection);
            }
            let (high, low) = if ma > mb { (a, b) } else { (b, a) };
            match dir {
                None | Some(Direction::Ge) => (high.clone(), low.clone(), Direction::Ge),
                Some(Direction::Le) => (low.clone(), high.clone(), Direction::Le),
            }
        }
    };

    Ok(ClassResolution {
        direction,
        pos_class: pos,
        neg_class: neg,
        direction_source,
        classes_source,
    })
}

fn direction_for(pos_median: f64, neg_median: f64) -> Result<Direction> {
    if pos_median > neg_median {
        Ok(Direction::Ge)
    } else if pos_median < neg_median {
        Ok(Direction::Le)
    } else {
        Err(Error::AmbiguousDirection)
    }
}

fn count_distinct(labels: &[impl AsRef<str>]) -> usize {
    let mut seen: Vec<&str> = labels.iter().map(|l| l.as_ref()).collect();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

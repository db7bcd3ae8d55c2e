//! The unit of analysis: paired predictor values and resolved binary labels.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which side of a cutpoint is predicted positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// `x >= c` is predicted positive.
    #[serde(rename = ">=")]
    Ge,
    /// `x <= c` is predicted positive.
    #[serde(rename = "<=")]
    Le,
}

impl Direction {
    pub fn symbol(self) -> &'static str {
        match self {
            Direction::Ge => ">=",
            Direction::Le => "<=",
        }
    }

    pub fn flipped(self) -> Direction {
        match self {
            Direction::Ge => Direction::Le,
            Direction::Le => Direction::Ge,
        }
    }

    /// Threshold that classifies every observation negative.
    pub fn sentinel(self) -> f64 {
        match self {
            Direction::Ge => f64::INFINITY,
            Direction::Le => f64::NEG_INFINITY,
        }
    }

    #[inline]
    pub fn predicts_positive(self, x: f64, cutpoint: f64) -> bool {
        match self {
            Direction::Ge => x >= cutpoint,
            Direction::Le => x <= cutpoint,
        }
    }
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.symbol())
    }
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            ">=" | "ge" => Ok(Direction::Ge),
            "<=" | "le" => Ok(Direction::Le),
            other => Err(Error::InvalidArgument(format!("unknown direction '{other}'"))),
        }
    }
}

/// Predictor values with resolved class membership (`true` = positive).
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    x: Vec<f64>,
    positive: Vec<bool>,
    n_pos: usize,
}

impl Sample {
    pub fn new(x: Vec<f64>, positive: Vec<bool>) -> Result<Self> {
        if x.len() != positive.len() {
            return Err(Error::LengthMismatch {
                predictor: x.len(),
                class: positive.len(),
            });
        }
        if x.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(row) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinitePredictor { row });
        }
        let n_pos = positive.iter().filter(|&&p| p).count();
        if n_pos == 0 || n_pos == x.len() {
            return Err(Error::DegenerateClasses);
        }
        Ok(Sample { x, positive, n_pos })
    }

    /// Resample by row indices. Fails if the draw is missing a class.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let x = indices.iter().map(|&i| self.x[i]).collect();
        let positive = indices.iter().map(|&i| self.positive[i]).collect();
        Sample::new(x, positive)
    }

    pub fn predictor(&self) -> &[f64] {
        &self.x
    }

    pub fn labels(&self) -> &[bool] {
        &self.positive
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn n_pos(&self) -> usize {
        self.n_pos
    }

    pub fn n_neg(&self) -> usize {
        self.x.len() - self.n_pos
    }

    pub fn prevalence(&self) -> f64 {
        self.n_pos as f64 / self.x.len() as f64
    }

    pub fn positives(&self) -> Vec<f64> {
        self.class_values(true)
    }

    pub fn negatives(&self) -> Vec<f64> {
        self.class_values(false)
    }

    fn class_values(&self, class: bool) -> Vec<f64> {
        self.x
            .iter()
            .zip(&self.positive)
            .filter(|(_, &p)| p == class)
            .map(|(&v, _)| v)
            .collect()
    }

    /// Apply `f` to every predictor value, keeping labels.
    pub fn map_predictor(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Sample::new(self.x.iter().map(|&v| f(v)).collect(), self.positive.clone())
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, bool)> + '_ {
        self.x.iter().copied().zip(self.positive.iter().copied())
    }
}

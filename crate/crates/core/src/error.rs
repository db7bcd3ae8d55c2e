use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty sample")]
    EmptySample,
    #[error("degenerate classes: sample needs at least one positive and one negative observation")]
    DegenerateClasses,
    #[error("predictor and class vectors differ in length ({predictor} vs {class})")]
    LengthMismatch { predictor: usize, class: usize },
    #[error("non-finite predictor value at row {row}")]
    NonFinitePredictor { row: usize },
    #[error("ambiguous direction: both classes have the same median predictor value")]
    AmbiguousDirection,
    #[error("expected exactly two classes, found {found}")]
    ClassCount { found: usize },
    #[error("unknown class label '{0}'")]
    UnknownClass(String),
    #[error("cutpoint {0} is not a candidate cutpoint of the curve")]
    NotACandidate(f64),
    #[error("metric undefined everywhere")]
    MetricUndefined,
    #[error("missing parameter '{0}'")]
    MissingParameter(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("insufficient support: need at least {needed} distinct x values, got {got}")]
    InsufficientSupport { needed: usize, got: usize },
    #[error("degenerate bandwidth: predictor values have zero spread")]
    DegenerateBandwidth,
    #[error("zero variance in the {0} class")]
    ZeroVariance(&'static str),
    #[error("rank-deficient basis (dimension {0})")]
    RankDeficient(usize),
    #[error("local fit is singular for every candidate span")]
    SingularFit,
    #[error("resampling retry budget exhausted after {0} attempts")]
    RetryBudgetExhausted(usize),
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("{method}: {source}")]
    Method {
        method: &'static str,
        #[source]
        source: Box<Error>,
    },
    #[error("data error: {0}")]
    Data(String),
    #[error("i/o error: {0}")]
    Io(String),
}

/// Coarse failure classes, used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Data,
    Numeric,
    Io,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::EmptySample
            | Error::DegenerateClasses
            | Error::LengthMismatch { .. }
            | Error::NonFinitePredictor { .. }
            | Error::AmbiguousDirection
            | Error::ClassCount { .. }
            | Error::UnknownClass(_)
            | Error::Data(_) => ErrorKind::Data,
            Error::MissingParameter(_)
            | Error::InvalidArgument(_)
            | Error::UnknownVariable(_) => ErrorKind::Usage,
            Error::Io(_) => ErrorKind::Io,
            Error::Method { source, .. } => source.kind(),
            _ => ErrorKind::Numeric,
        }
    }

    pub(crate) fn in_method(self, method: &'static str) -> Error {
        Error::Method {
            method,
            source: Box::new(self),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

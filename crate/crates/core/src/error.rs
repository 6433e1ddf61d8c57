use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}: no data")]
    EmptyData(&'static str),

    #[error("value {value} at row {row} is not finite")]
    NonFinite { row: usize, value: f64 },

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("column {0:?} not found in header")]
    MissingColumn(String),

    #[error("row {row}: cannot parse {text:?} as a number")]
    BadNumber { row: usize, text: String },

    #[error("row {row}: empty group label")]
    EmptyGroup { row: usize },

    #[error("expected exactly two groups, found {found}")]
    GroupCount { found: usize },

    #[error("statistic {stat} cannot be computed on {shape}")]
    IncompatibleStatistic { stat: &'static str, shape: &'static str },

    #[error("correlation undefined: zero variance in {0}")]
    ZeroVariance(&'static str),

    #[error("need at least {needed} {what}, got {got}")]
    TooFew {
        what: &'static str,
        needed: usize,
        got: usize,
    },

    #[error("exact enumeration needs C({n}, {k}) = {count} assignments, above the limit of {limit}")]
    EnumerationTooLarge {
        n: usize,
        k: usize,
        count: u128,
        limit: u128,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("probability {0} must lie strictly between 0 and 1")]
    ProbabilityOutOfRange(f64),

    #[error("{0}")]
    DivisionByZero(&'static str),

    #[error("no hypothesis is consistent with the data (every prior x likelihood is zero)")]
    NoSurvivingWorlds,

    #[error("priors sum to {0}, not 1")]
    PriorsDoNotSumToOne(String),

    #[error("world tableau too large: {0} worlds exceeds the cap of {1}")]
    TableauTooLarge(String, u64),

    #[error("cannot parse {0:?} as an exact rational")]
    BadRational(String),

    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

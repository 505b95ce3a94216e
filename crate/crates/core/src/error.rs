//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by panel ingestion, estimation, and simulation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed row in {file} line {line}: {message}")]
    MalformedRow {
        file: String,
        line: u64,
        message: String,
    },

    #[error("duplicate record for security `{security_id}` on {date}")]
    DuplicateRecord { security_id: String, date: String },

    #[error("corporate action references unknown or unlisted security `{security_id}` on {date}")]
    UnknownActionTarget { security_id: String, date: String },

    #[error("invalid value for security `{security_id}` on {date}: {message}")]
    InvalidValue {
        security_id: String,
        date: String,
        message: String,
    },

    #[error("calendar is missing traded date {date}")]
    CalendarGap { date: String },

    #[error("price series for `{security_id}` has a gap inside its listing span at {date}")]
    SeriesGap { security_id: String, date: String },

    #[error("portfolio `{portfolio}` has no constituents on {date}")]
    EmptyConstituents { portfolio: String, date: String },

    #[error("missing risk-free rate on {date}")]
    MissingRate { date: String },

    #[error("series too short: need at least {need}, got {got}")]
    SeriesTooShort { need: usize, got: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("singular regression: {0}")]
    SingularRegression(String),

    #[error("nonstationary AR coefficients: {0}")]
    Nonstationary(String),

    #[error("head-observation covariance is numerically singular at t = {t}")]
    SingularHeadCovariance { t: usize },

    #[error("model domain exit: {0}")]
    DomainExit(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("csv error in {file}: {source}")]
    Csv {
        file: String,
        #[source]
        source: csv::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    // --- panel construction and access ---
    #[error("input file is empty or has no data rows")]
    EmptyFile,
    #[error("missing cell: unit {unit} has no observation for year {year}")]
    MissingCell { unit: String, year: i32 },
    #[error("duplicate row for unit {unit}, year {year}")]
    DuplicateRow { unit: String, year: i32 },
    #[error("cannot parse {value:?} as a number at row {row}, column {column}")]
    UnparsableNumber {
        row: usize,
        column: String,
        value: String,
    },
    #[error("column {0:?} not found in header")]
    MissingColumn(String),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("group {0:?} has no members")]
    EmptyGroup(String),
    #[error("degenerate split: no unit lies strictly above the median ({median})")]
    DegenerateSplit { median: f64 },

    // --- filtering ---
    #[error("series too short: need at least {min} observations, got {len}")]
    SeriesTooShort { len: usize, min: usize },
    #[error("non-finite value in input series{}", unit_suffix(.unit))]
    NonFiniteInput { unit: Option<String> },
    #[error("non-positive value in series{}; cannot take logs", unit_suffix(.unit))]
    NonPositiveLog { unit: Option<String> },

    // --- test statistics ---
    #[error("need at least {min} cross-sectional units, got {n}")]
    TooFewUnits { n: usize, min: usize },
    #[error("unit {0:?} has zero variance")]
    ZeroVarianceUnit(String),
    #[error("collinear regressors: {0}")]
    CollinearRegressors(String),
    #[error("insufficient degrees of freedom: {rows} usable rows for {cols} regressors")]
    InsufficientDegreesOfFreedom { rows: usize, cols: usize },
    #[error("degenerate residual variance for unit {0:?}")]
    DegenerateVariance(String),

    // --- least squares / estimation ---
    #[error("rank-deficient design: offending columns [{}]", .columns.join(", "))]
    RankDeficient { columns: Vec<String> },
    #[error("insufficient observations: {detail}")]
    InsufficientObservations { detail: String },
    #[error("units report different coefficient sets: {detail}")]
    InconsistentCoefficientSets { detail: String },
    #[error("estimation failed for {} unit(s):\n{}", .failures.len(),
            .failures.iter().map(|(u, e)| format!("  {u}: {e}")).collect::<Vec<_>>().join("\n"))]
    UnitFailures { failures: Vec<(String, Error)> },

    // --- sustainability ---
    #[error("non-stationary inertia: phi = {0} but the rule requires phi < 1")]
    NonStationaryInertia(f64),
    #[error("non-positive gross rate at step {step}: 1 + {rate} <= 0")]
    NonPositiveGrossRate { step: usize, rate: f64 },
    #[error("horizon must be at least 1")]
    HorizonZero,
    #[error("invalid fiscal rule: {0}")]
    InvalidRule(String),

    // --- configuration / plumbing ---
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn unit_suffix(unit: &Option<String>) -> String {
    match unit {
        Some(u) => format!(" (unit {u:?})"),
        None => String::new(),
    }
}

impl Error {
    /// Exit-code class for the command-line front end: configuration and
    /// input-validation problems map to 2, computation failures to 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::EmptyFile
            | Error::MissingCell { .. }
            | Error::DuplicateRow { .. }
            | Error::UnparsableNumber { .. }
            | Error::MissingColumn(_)
            | Error::UnknownVariable(_)
            | Error::InvalidConfig(_)
            | Error::Io { .. } => 2,
            _ => 3,
        }
    }

    pub(crate) fn with_unit(self, unit: &str) -> Error {
        match self {
            Error::NonFiniteInput { .. } => Error::NonFiniteInput {
                unit: Some(unit.to_string()),
            },
            Error::NonPositiveLog { .. } => Error::NonPositiveLog {
                unit: Some(unit.to_string()),
            },
            other => other,
        }
    }
}

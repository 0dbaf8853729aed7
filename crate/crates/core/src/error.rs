use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SchemaError {
    #[error("duplicate attribute name `{0}`")]
    DuplicateAttribute(String),
    #[error("{role} attribute `{name}` is not declared")]
    UnknownAttribute { role: &'static str, name: String },
    #[error("sensitive attribute `{0}` must be nominal")]
    SensitiveNotNominal(String),
    #[error("attribute `{0}` cannot be both label and sensitive attribute")]
    LabelIsSensitive(String),
    #[error("record is missing a value for `{0}`")]
    MissingValue(String),
    #[error("record has attribute `{0}` which is not in the schema")]
    UnexpectedAttribute(String),
    #[error("continuous attribute `{attribute}` has non-numeric value `{value}`")]
    NotANumber { attribute: String, value: String },
}

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("training weight must be positive and finite, got {0}")]
    InvalidWeight(f64),
    #[error("count shift would drive cell {cell} negative ({value})")]
    NegativeCell { cell: &'static str, value: f64 },
    #[error("count shift must conserve each sensitive group's total (imbalance {0})")]
    UnbalancedShift(f64),
    #[error("instance does not match the model layout: {0}")]
    Layout(String),
    #[error("unsupported snapshot version {0}")]
    SnapshotVersion(u32),
    #[error("malformed snapshot: {0}")]
    SnapshotFormat(String),
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse manifest {path}: {message}")]
    Manifest { path: PathBuf, message: String },
    #[error("invalid schema: {0}")]
    Schema(#[from] SchemaError),
    #[error("header of {path} has no column `{attribute}`")]
    MissingColumn { path: PathBuf, attribute: String },
    #[error("{path}: manifest without header cannot bind {expected} attributes to {found} columns")]
    ColumnCount { path: PathBuf, expected: usize, found: usize },
    #[error("{path}: malformed delimited text at row {row}: {message}")]
    Csv { path: PathBuf, row: usize, message: String },
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("stream is empty")]
    EmptyStream,
    #[error("shuffle count must be at least 1")]
    NoShuffles,
    #[error("row {row}: {source}")]
    Model {
        row: usize,
        #[source]
        source: ModelError,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
}

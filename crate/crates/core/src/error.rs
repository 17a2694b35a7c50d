use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid coordinate: lat {lat}, lon {lon}")]
    InvalidCoordinate { lat: f64, lon: f64 },

    #[error("{source_name}: zero valid rows ({malformed} malformed)")]
    ZeroValidRows { source_name: String, malformed: usize },

    #[error("{source_name}: missing column '{column}' in header")]
    MissingColumn { source_name: String, column: String },

    #[error("zip {zip}: conflicting coordinates ({first_lat}, {first_lon}) vs ({second_lat}, {second_lon})")]
    ConflictingZip {
        zip: String,
        first_lat: f64,
        first_lon: f64,
        second_lat: f64,
        second_lon: f64,
    },

    #[error("none of the {pairs} zip pairs could be resolved against the gazetteer")]
    NoResolvablePairs { pairs: usize },

    #[error("invalid distance value {value}: distances must be finite and non-negative")]
    InvalidDistance { value: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("expected link count {expected:.0} exceeds the cap of {cap}")]
    LinkCapExceeded { expected: f64, cap: usize },

    #[error("{file}: cannot parse a year from the file name")]
    FilenameYear { file: String },

    #[error("{file}:{line}: duplicate key {key}")]
    DuplicateKey { file: String, line: usize, key: String },

    #[error("{file}:{line}: unknown state code '{code}'")]
    UnknownState { file: String, line: usize, code: String },

    #[error("{file}:{line}: malformed year '{value}'")]
    MalformedYear { file: String, line: usize, value: String },

    #[error("{file}:{line}: malformed line: {reason}")]
    MalformedLine { file: String, line: usize, reason: String },

    #[error("no records left after restricting to years {start}..={end}")]
    EmptyPanel { start: i32, end: i32 },

    #[error("unknown state code '{0}'")]
    InvalidStateCode(String),

    #[error("adjacency override {file}:{line}: {reason}")]
    AdjacencyOverride { file: String, line: usize, reason: String },

    #[error("{name} ({sex}) in {year}: name not yet seeded in any state")]
    NotSeeded { name: String, sex: char, year: i32 },

    #[error("{name} ({sex}) in {year}: zero births across all states")]
    ZeroNameCount { name: String, sex: char, year: i32 },

    #[error("{name} ({sex}) in {year}: group A has zero total births")]
    ZeroGroupTotal { name: String, sex: char, year: i32 },

    #[error("no PEI points for year {0}")]
    EmptyYear(i32),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

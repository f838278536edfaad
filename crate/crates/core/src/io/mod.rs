//! File formats: the JSON geometry document, the TOML run configuration,
//! CSV tables and SVG rendering.

mod config;
mod document;
pub mod svg;
pub mod tables;

pub use config::{resolve_seed, CcmSection, DemandSection, RunConfig, StrataSection, SEED_ENV};
pub use document::{load_document, parse_document, Feature, FeatureId, GeoDocument, Geometry, CRS, SCHEMA_VERSION};

use std::path::PathBuf;

#[derive(thiserror::Error, Debug)]
pub enum IoError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("unknown schema_version {0:?}")]
    UnknownSchema(String),

    #[error("unsupported crs {0:?}, expected \"local-meters\"")]
    BadCrs(String),

    #[error("{collection} feature {id}: {reason}")]
    Feature { collection: &'static str, id: String, reason: String },

    #[error("invalid value for {key}: {reason}")]
    Config { key: String, reason: String },

    #[error("{0}")]
    Invalid(String),
}

impl IoError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        IoError::Io { path: path.into(), source }
    }

    /// True for failures reading or writing files, as opposed to bad content.
    pub fn is_io(&self) -> bool {
        matches!(self, IoError::Io { .. })
    }
}

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::features::FeatureGroup;
use crate::source::SourceId;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A record violates the corpus schema. `record` is its 0-based position in input order.
    InvalidRecord { record: usize, reason: String },
    DuplicateSentence { debate_id: String, index: usize },
    TooFewDebates { found: usize },
    EmptyTrainingSet,
    /// Sentences without a sidecar annotation.
    MissingAnnotations(Vec<(String, usize)>),
    UnexpectedAnnotation { debate_id: String, index: usize, reason: String },
    InvalidAnnotation { debate_id: String, index: usize, reason: String },
    MissingDependency { group: FeatureGroup, dependency: &'static str },
    DimensionMismatch { what: &'static str, expected: usize, found: usize },
    NonFinite { what: &'static str },
    UnknownTask(SourceId),
    InvalidConfig(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidRecord { record, reason } => {
                write!(f, "invalid record #{}: {}", record + 1, reason)
            }
            Error::DuplicateSentence { debate_id, index } => {
                write!(f, "duplicate sentence ({debate_id}, {index})")
            }
            Error::TooFewDebates { found } => {
                write!(f, "cross-validation needs at least 2 debates, found {found}")
            }
            Error::EmptyTrainingSet => f.write_str("training set is empty"),
            Error::MissingAnnotations(missing) => {
                write!(f, "{} sentence(s) lack annotations:", missing.len())?;
                for (d, i) in missing.iter().take(20) {
                    write!(f, " ({d}, {i})")?;
                }
                if missing.len() > 20 {
                    write!(f, " ...")?;
                }
                Ok(())
            }
            Error::UnexpectedAnnotation { debate_id, index, reason } => {
                write!(f, "annotation ({debate_id}, {index}): {reason}")
            }
            Error::InvalidAnnotation { debate_id, index, reason } => {
                write!(f, "invalid annotation ({debate_id}, {index}): {reason}")
            }
            Error::MissingDependency { group, dependency } => {
                write!(f, "feature group {group} requires {dependency}")
            }
            Error::DimensionMismatch { what, expected, found } => {
                write!(f, "{what}: expected length {expected}, found {found}")
            }
            Error::NonFinite { what } => write!(f, "non-finite value in {what}"),
            Error::UnknownTask(s) => write!(f, "network has no head for task {s}"),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

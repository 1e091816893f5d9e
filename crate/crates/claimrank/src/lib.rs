//! IO, experiment drivers and the command line around `claimrank-core`.

pub mod checkpoint;
pub mod cli;
pub mod config;
pub mod error;
pub mod experiment;
pub mod io;
pub mod report;
pub mod synth;

pub use claimrank_core as core;
pub use error::{Error, Result};

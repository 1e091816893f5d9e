//! Allocation-only core of the claimrank pipeline.
//!
//! Everything in this crate is pure computation over in-memory data: the
//! multi-source labelled corpus, per-sentence feature extraction, the
//! hard-parameter-sharing network with its training loop, and the ranking
//! metrics. File formats, the experiment grid and the command line live in
//! the `claimrank` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
mod math;
pub mod model;
pub mod source;
pub mod text;

pub use corpus::{Corpus, Debate, Fold, Labels, Sentence};
pub use error::{Error, Result};
pub use source::SourceId;

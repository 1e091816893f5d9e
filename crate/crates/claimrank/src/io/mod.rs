//! File formats: corpus and sidecar JSON Lines, lexicon lists.

mod corpus;
mod lexicon;
mod sidecar;

pub use corpus::{load_corpus, parse_corpus, write_corpus, CorpusRecord};
pub use lexicon::{load_lexicon, parse_lexicon};
pub use sidecar::{ingest_annotations, parse_sidecar, write_sidecar, SidecarRecord};

use std::path::Path;

use crate::error::{Error, Result};

pub(crate) fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::read(path, e))
}

/// Non-blank lines that are not `#` comments, with 1-based line numbers.
pub(crate) fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

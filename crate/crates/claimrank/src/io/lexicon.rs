use std::path::Path;

use claimrank_core::features::{Lexicon, LexiconKind};

use super::{data_lines, read_text};
use crate::error::{Error, Result};

/// One entry per line; `#` starts a comment line.
pub fn parse_lexicon(text: &str, name: &str, kind: LexiconKind) -> claimrank_core::Result<Lexicon> {
    Lexicon::new(name, kind, data_lines(text).map(|(_, l)| l.to_lowercase()))
}

pub fn load_lexicon(path: &Path, kind: LexiconKind) -> Result<Lexicon> {
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or(kind.name());
    parse_lexicon(&read_text(path)?, name, kind).map_err(|source| Error::Data { path: path.to_path_buf(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_are_ignored() {
        let lex = parse_lexicon("# hedges\nclaim\n\nAccording to\n", "h", LexiconKind::Assertive).unwrap();
        assert_eq!(lex.len(), 2);
        let toks: Vec<String> = ["according", "to", "the", "claim"].iter().map(|s| s.to_string()).collect();
        assert_eq!(lex.count_matches(&toks), 2);
    }

    #[test]
    fn empty_lexicon_is_an_error() {
        assert!(parse_lexicon("# nothing\n", "e", LexiconKind::Bias).is_err());
    }
}

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use claimrank_core::{Corpus, Error as CoreError, Labels, Sentence, SourceId};
use serde::{Deserialize, Serialize};

use super::{data_lines, read_text};
use crate::error::{Error, Result};

/// One line of a corpus file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusRecord {
    pub debate_id: String,
    pub index: i64,
    pub speaker: String,
    pub text: String,
    pub labels: BTreeMap<String, serde_json::Value>,
}

impl CorpusRecord {
    pub fn from_sentence(s: &Sentence) -> CorpusRecord {
        let labels = SourceId::REAL
            .iter()
            .map(|src| (src.code().to_string(), serde_json::Value::from(u8::from(s.labels.get(*src)))))
            .collect();
        CorpusRecord {
            debate_id: s.debate_id.clone(),
            index: s.index as i64,
            speaker: s.speaker.clone(),
            text: s.text.clone(),
            labels,
        }
    }

    fn labels(&self) -> std::result::Result<Labels, String> {
        let mut values = [0i64; 9];
        for key in self.labels.keys() {
            match SourceId::from_code(key) {
                Some(s) if s.is_real() && s.code() == key => {}
                _ => return Err(format!("unknown label key {key:?}")),
            }
        }
        for (slot, src) in values.iter_mut().zip(SourceId::REAL) {
            let v = self
                .labels
                .get(src.code())
                .ok_or_else(|| format!("labels must have exactly the 9 keys; {} is missing", src.code()))?;
            *slot = v
                .as_i64()
                .ok_or_else(|| format!("label {} must be 0 or 1, found {v}", src.code()))?;
        }
        Labels::try_from_values(&values)
    }
}

fn describe(r: &CorpusRecord) -> String {
    format!("record ({}, {})", r.debate_id, r.index)
}

/// Parses corpus JSON Lines; `path` only labels error messages.
pub fn parse_corpus(text: &str, path: &Path) -> Result<Corpus> {
    let mut sentences = Vec::new();
    let mut lines = Vec::new();
    for (line, raw) in data_lines(text) {
        let rec: CorpusRecord = serde_json::from_str(raw).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line,
            message: e.to_string(),
        })?;
        let invalid = |message: String| Error::Validation { path: path.to_path_buf(), line, message };
        if rec.index < 0 {
            return Err(invalid(format!("{}: index must be non-negative", describe(&rec))));
        }
        let labels = rec.labels().map_err(|m| invalid(format!("{}: {m}", describe(&rec))))?;
        sentences.push(Sentence {
            debate_id: rec.debate_id,
            index: rec.index as usize,
            speaker: rec.speaker,
            text: rec.text,
            labels,
        });
        lines.push(line);
    }
    let line_of = |debate_id: &str, index: usize| {
        sentences
            .iter()
            .zip(&lines)
            .filter(|(s, _)| s.debate_id == debate_id && s.index == index)
            .map(|(_, l)| *l)
            .last()
            .unwrap_or(0)
    };
    match Corpus::from_sentences(sentences.iter().cloned()) {
        Ok(c) => Ok(c),
        Err(e) => {
            let line = match &e {
                CoreError::InvalidRecord { record, .. } => lines.get(*record).copied().unwrap_or(0),
                CoreError::DuplicateSentence { debate_id, index } => line_of(debate_id, *index),
                _ => 0,
            };
            Err(Error::Validation { path: path.to_path_buf(), line, message: e.to_string() })
        }
    }
}

pub fn load_corpus(path: &Path) -> Result<Corpus> {
    parse_corpus(&read_text(path)?, path)
}

pub fn write_corpus(corpus: &Corpus, path: &Path) -> Result<()> {
    let mut out = Vec::new();
    for s in corpus.sentences() {
        serde_json::to_writer(&mut out, &CorpusRecord::from_sentence(s)).expect("in-memory write");
        out.push(b'\n');
    }
    std::fs::File::create(path)
        .and_then(|mut f| f.write_all(&out))
        .map_err(|e| Error::write(path, e))
}

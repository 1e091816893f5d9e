use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use claimrank_core::features::{Annotation, AnnotationRecord, AnnotationStore, DiscourseRelation, POS_TAGS};
use claimrank_core::Corpus;
use serde::{Deserialize, Serialize};

use super::{data_lines, read_text};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NerRecord {
    #[serde(rename = "PER")]
    pub per: u8,
    #[serde(rename = "ORG")]
    pub org: u8,
    #[serde(rename = "LOC")]
    pub loc: u8,
    #[serde(rename = "MISC")]
    pub misc: u8,
    pub count: u32,
}

/// One line of a sidecar annotation file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SidecarRecord {
    pub debate_id: String,
    pub index: i64,
    pub pos_counts: BTreeMap<String, u32>,
    pub ner: NerRecord,
    pub sentiment: f64,
    pub topics: Vec<f64>,
    pub embedding: Vec<f64>,
    pub discourse_prev: String,
    pub discourse_next: String,
}

impl SidecarRecord {
    pub fn from_annotation(rec: &AnnotationRecord) -> SidecarRecord {
        let a = &rec.annotation;
        let flag = |i: usize| u8::from(a.ner_flags[i]);
        SidecarRecord {
            debate_id: rec.debate_id.clone(),
            index: rec.index as i64,
            pos_counts: POS_TAGS
                .iter()
                .zip(a.pos_counts)
                .filter(|(_, n)| *n > 0)
                .map(|(t, n)| (t.to_string(), n))
                .collect(),
            ner: NerRecord { per: flag(0), org: flag(1), loc: flag(2), misc: flag(3), count: a.ner_count },
            sentiment: a.sentiment,
            topics: a.topics.clone(),
            embedding: a.embedding.clone(),
            discourse_prev: a.discourse_prev.label().to_string(),
            discourse_next: a.discourse_next.label().to_string(),
        }
    }

    pub fn to_annotation(&self) -> std::result::Result<AnnotationRecord, String> {
        if self.index < 0 {
            return Err("index must be non-negative".into());
        }
        let mut pos_counts = [0u32; 12];
        for (tag, n) in &self.pos_counts {
            let i = POS_TAGS
                .iter()
                .position(|t| t == tag)
                .ok_or_else(|| format!("unknown POS tag {tag:?}"))?;
            pos_counts[i] = *n;
        }
        let flags = [self.ner.per, self.ner.org, self.ner.loc, self.ner.misc];
        if flags.iter().any(|f| *f > 1) {
            return Err("NER flags must be 0 or 1".into());
        }
        let relation = |label: &str| {
            DiscourseRelation::from_label(label).ok_or_else(|| format!("unknown discourse relation {label:?}"))
        };
        Ok(AnnotationRecord {
            debate_id: self.debate_id.clone(),
            index: self.index as usize,
            annotation: Annotation {
                pos_counts,
                ner_flags: flags.map(|f| f == 1),
                ner_count: self.ner.count,
                sentiment: self.sentiment,
                topics: self.topics.clone(),
                embedding: self.embedding.clone(),
                discourse_prev: relation(&self.discourse_prev)?,
                discourse_next: relation(&self.discourse_next)?,
            },
        })
    }
}

/// Parses sidecar lines into records; header lines starting with `#` are skipped.
pub fn parse_sidecar(text: &str, path: &Path) -> Result<Vec<AnnotationRecord>> {
    data_lines(text)
        .map(|(line, raw)| {
            let rec: SidecarRecord = serde_json::from_str(raw).map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                line,
                message: e.to_string(),
            })?;
            rec.to_annotation().map_err(|m| Error::Validation {
                path: path.to_path_buf(),
                line,
                message: format!("record ({}, {}): {m}", rec.debate_id, rec.index),
            })
        })
        .collect()
}

/// Reads a sidecar file and checks it against `corpus`: one record per
/// sentence, consistent dimensions, normalized topics.
pub fn ingest_annotations(path: &Path, corpus: &Corpus) -> Result<AnnotationStore> {
    let records = parse_sidecar(&read_text(path)?, path)?;
    AnnotationStore::build(corpus, records).map_err(|source| Error::Data { path: path.to_path_buf(), source })
}

pub fn write_sidecar<'a, I>(records: I, header: &str, path: &Path) -> Result<()>
where
    I: IntoIterator<Item = &'a AnnotationRecord>,
{
    let mut out = Vec::new();
    for l in header.lines() {
        writeln!(out, "# {l}").expect("in-memory write");
    }
    for r in records {
        serde_json::to_writer(&mut out, &SidecarRecord::from_annotation(r)).expect("in-memory write");
        out.push(b'\n');
    }
    std::fs::write(path, out).map_err(|e| Error::write(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use claimrank_core::{Error as CoreError, Labels, Sentence};

    fn corpus() -> Corpus {
        Corpus::from_sentences((0..2).map(|i| Sentence {
            debate_id: "d".into(),
            index: i,
            speaker: "S".into(),
            text: "Text here.".into(),
            labels: Labels::default(),
        }))
        .unwrap()
    }

    fn record(index: usize, topics: &str) -> String {
        format!(
            r#"{{"debate_id":"d","index":{index},"pos_counts":{{"NOUN":2,"VERB":1}},"ner":{{"PER":1,"ORG":0,"LOC":0,"MISC":0,"count":1}},"sentiment":-0.25,"topics":{topics},"embedding":[0.5,-1.0,2.0],"discourse_prev":"none","discourse_next":"elaboration"}}"#
        )
    }

    fn write(dir: &tempfile::TempDir, body: &str) -> std::path::PathBuf {
        let p = dir.path().join("s.jsonl");
        std::fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn ingests_with_header() {
        let dir = tempfile::tempdir().unwrap();
        let body = format!("# annotator k=2 d=3\n{}\n{}\n", record(0, "[0.25,0.75]"), record(1, "[1.0,0.0]"));
        let store = ingest_annotations(&write(&dir, &body), &corpus()).unwrap();
        assert_eq!(store.topic_dim(), 2);
        assert_eq!(store.embedding_dim(), 3);
        let a = store.get(0);
        assert_eq!(a.pos_counts[0], 2);
        assert_eq!(a.ner_flags, [true, false, false, false]);
        assert_eq!(a.discourse_next, DiscourseRelation::Elaboration);
    }

    #[test]
    fn missing_sentence_is_listed() {
        let dir = tempfile::tempdir().unwrap();
        let err = ingest_annotations(&write(&dir, &record(0, "[0.5,0.5]")), &corpus()).unwrap_err();
        match err {
            Error::Data { source: CoreError::MissingAnnotations(m), .. } => assert_eq!(m, vec![("d".to_string(), 1)]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unnormalized_topics_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let body = format!("{}\n{}\n", record(0, "[0.5,0.6]"), record(1, "[0.5,0.5]"));
        assert!(matches!(ingest_annotations(&write(&dir, &body), &corpus()), Err(Error::Data { .. })));
    }

    #[test]
    fn unknown_tag_and_relation() {
        let bad_tag = record(0, "[1.0]").replace("\"VERB\"", "\"VB\"");
        assert!(matches!(parse_sidecar(&bad_tag, Path::new("s")), Err(Error::Validation { line: 1, .. })));
        let bad_rel = record(0, "[1.0]").replace("elaboration", "rhyme");
        assert!(matches!(parse_sidecar(&bad_rel, Path::new("s")), Err(Error::Validation { .. })));
        let bad_field = record(0, "[1.0]").replace("\"sentiment\"", "\"polarity\"");
        assert!(matches!(parse_sidecar(&bad_field, Path::new("s")), Err(Error::Parse { .. })));
    }

    #[test]
    fn write_then_ingest() {
        let dir = tempfile::tempdir().unwrap();
        let body = format!("{}\n{}\n", record(0, "[0.25,0.75]"), record(1, "[1.0,0.0]"));
        let records = parse_sidecar(&body, Path::new("s")).unwrap();
        let p = dir.path().join("out.jsonl");
        write_sidecar(&records, "k=2", &p).unwrap();
        assert_eq!(parse_sidecar(&std::fs::read_to_string(&p).unwrap(), &p).unwrap(), records);
    }
}

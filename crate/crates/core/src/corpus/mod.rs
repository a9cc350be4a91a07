//! Corpora of (document, gold) pairs: JSONL import/export, splitting and
//! synthetic generation.
//!
//! A corpus file holds one JSON object per line:
//!
//! ```text
//! {"id":"doc-1","raw_text":"...","gold":{...resume...},"profession":"Finance"}
//! ```
//!
//! `profession` is optional and only used for stratified splits.

mod split;
mod synth;
pub mod vocab;

use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::normalize::{normalize_fields, SkillOntology};
use crate::schema::{resume_from_value, ParsedResume, ResumeDocument};

pub use split::{split_corpus, Split, SplitSpec};
pub use synth::{
    generate_synthetic, synth_id, EdgeCase, EntryMeta, GenerationMetadata, Layout, SynthConfig,
    Transform,
};
pub use vocab::{default_professions, ProfessionTemplate};

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub document: ResumeDocument,
    pub gold: ParsedResume,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    pub entries: Vec<CorpusEntry>,
    pub profession_labels: BTreeMap<String, String>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn documents(&self) -> Vec<ResumeDocument> {
        self.entries.iter().map(|e| e.document.clone()).collect()
    }

    pub fn golds(&self) -> BTreeMap<String, ParsedResume> {
        self.entries
            .iter()
            .map(|e| (e.document.id.clone(), e.gold.clone()))
            .collect()
    }

    /// Entry subset by index, preserving the given order.
    pub(crate) fn select(&self, indices: &[usize]) -> Corpus {
        let entries: Vec<CorpusEntry> = indices.iter().map(|&i| self.entries[i].clone()).collect();
        let profession_labels = entries
            .iter()
            .filter_map(|e| {
                self.profession_labels
                    .get(&e.document.id)
                    .map(|p| (e.document.id.clone(), p.clone()))
            })
            .collect();
        Corpus {
            entries,
            profession_labels,
        }
    }
}

/// Reads a JSONL corpus, normalizing every gold. Blank lines are skipped.
pub fn load_corpus(path: impl AsRef<Path>, ontology: &SkillOntology) -> Result<Corpus> {
    let file = std::fs::File::open(path)?;
    read_corpus(BufReader::new(file), ontology)
}

pub fn read_corpus(reader: impl BufRead, ontology: &SkillOntology) -> Result<Corpus> {
    let mut corpus = Corpus::default();
    let mut seen = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |message: String| Error::CorpusLine {
            line: line_no,
            message,
        };
        let value: Value = serde_json::from_str(&line).map_err(|e| bad(format!("malformed JSON: {e}")))?;
        let id = match value.get("id") {
            Some(Value::String(s)) if !s.is_empty() => s.clone(),
            _ => return Err(bad("missing or empty string `id`".into())),
        };
        let raw_text = match value.get("raw_text") {
            Some(Value::String(s)) => s.clone(),
            _ => return Err(bad("missing string `raw_text`".into())),
        };
        let gold_value = value.get("gold").ok_or_else(|| bad("missing `gold`".into()))?;
        let (gold, _) = resume_from_value(gold_value).map_err(|e| bad(e.to_string()))?;
        if !seen.insert(id.clone()) {
            return Err(Error::DuplicateId(id));
        }
        if let Some(Value::String(p)) = value.get("profession") {
            corpus.profession_labels.insert(id.clone(), p.clone());
        }
        corpus.entries.push(CorpusEntry {
            document: ResumeDocument { id, raw_text },
            gold: normalize_fields(&gold, ontology),
        });
    }
    Ok(corpus)
}

#[derive(Serialize)]
struct Line<'a> {
    id: &'a str,
    raw_text: &'a str,
    gold: &'a ParsedResume,
    #[serde(skip_serializing_if = "Option::is_none")]
    profession: Option<&'a str>,
}

pub fn write_corpus(corpus: &Corpus, writer: impl Write) -> Result<()> {
    let mut w = BufWriter::new(writer);
    for e in &corpus.entries {
        let line = Line {
            id: &e.document.id,
            raw_text: &e.document.raw_text,
            gold: &e.gold,
            profession: corpus.profession_labels.get(&e.document.id).map(String::as_str),
        };
        serde_json::to_writer(&mut w, &line).map_err(std::io::Error::from)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_corpus(corpus: &Corpus, path: impl AsRef<Path>) -> Result<()> {
    write_corpus(corpus, std::fs::File::create(path)?)
}

//! Dataset files.
//!
//! Line form: `intent <TAB> annotated_text [<TAB> origin]`, `#` starts a
//! comment, blank lines are skipped. `#! name: ...` and `#! seed: ...` carry
//! set metadata. The optional origin column is omitted for original queries.
//!
//! Structured form: a JSON list of `{"intent", "text"[, "origin"]}` objects,
//! or `{"metadata": {...}, "queries": [...]}` when metadata is present.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{parse_annotated, CorpusError, Metadata, Origin, Query, TrainingSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetFormat {
    Tsv,
    Json,
}

impl DatasetFormat {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => DatasetFormat::Json,
            _ => DatasetFormat::Tsv,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonRecord {
    intent: String,
    text: String,
    #[serde(default, skip_serializing_if = "is_original")]
    origin: Origin,
}

fn is_original(o: &Origin) -> bool {
    *o == Origin::Original
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonDocument {
    List(Vec<JsonRecord>),
    Document {
        #[serde(default)]
        metadata: Metadata,
        queries: Vec<JsonRecord>,
    },
}

fn push_record(
    set: &mut TrainingSet,
    record: usize,
    intent: &str,
    markup: &str,
    origin: Origin,
) -> Result<(), CorpusError> {
    let (text, entities) = parse_annotated(markup).map_err(|source| CorpusError::Markup { record, source })?;
    let query = Query::new(text, intent.trim(), entities, origin).map_err(|e| CorpusError::Malformed {
        record,
        reason: e.to_string(),
    })?;
    if set.contains(&query.text, &query.intent) {
        return Err(CorpusError::Duplicate {
            record,
            text: query.text,
            intent: query.intent,
        });
    }
    set.insert(query)
}

/// Parses the line form. Records are numbered by 1-based line.
pub fn from_tsv_str(content: &str) -> Result<TrainingSet, CorpusError> {
    let mut set = TrainingSet::new();
    for (idx, line) in content.lines().enumerate() {
        let record = idx + 1;
        let line = line.strip_suffix('\r').unwrap_or(line);
        if let Some(directive) = line.strip_prefix("#!") {
            if let Some((key, value)) = directive.split_once(':') {
                let value = value.trim();
                match key.trim() {
                    "name" => set.metadata.name = Some(value.to_string()),
                    "seed" => {
                        set.metadata.seed = Some(value.parse().map_err(|_| CorpusError::Malformed {
                            record,
                            reason: format!("invalid seed {value:?}"),
                        })?)
                    }
                    _ => {}
                }
            }
            continue;
        }
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let intent = fields.next().unwrap_or_default();
        let Some(markup) = fields.next() else {
            return Err(CorpusError::Malformed {
                record,
                reason: "expected `intent<TAB>text`".into(),
            });
        };
        let origin = match fields.next() {
            None => Origin::Original,
            Some(o) => o.parse().map_err(|reason| CorpusError::Malformed { record, reason })?,
        };
        if fields.next().is_some() {
            return Err(CorpusError::Malformed {
                record,
                reason: "too many fields".into(),
            });
        }
        push_record(&mut set, record, intent, markup, origin)?;
    }
    if set.num_intents() == 0 {
        return Err(CorpusError::NoIntents);
    }
    Ok(set)
}

/// Parses the structured form. Records are numbered by 0-based list index.
pub fn from_json_str(content: &str) -> Result<TrainingSet, CorpusError> {
    let (metadata, records) = match serde_json::from_str(content)? {
        JsonDocument::List(records) => (Metadata::default(), records),
        JsonDocument::Document { metadata, queries } => (metadata, queries),
    };
    let mut set = TrainingSet::new().with_metadata(metadata);
    for (record, r) in records.iter().enumerate() {
        push_record(&mut set, record, &r.intent, &r.text, r.origin)?;
    }
    if set.num_intents() == 0 {
        return Err(CorpusError::NoIntents);
    }
    Ok(set)
}

fn markup_of(q: &Query) -> Result<String, CorpusError> {
    Ok(q.to_markup()?)
}

pub fn to_tsv_string(set: &TrainingSet) -> Result<String, CorpusError> {
    let mut out = String::new();
    if let Some(name) = &set.metadata.name {
        out.push_str(&format!("#! name: {name}\n"));
    }
    if let Some(seed) = set.metadata.seed {
        out.push_str(&format!("#! seed: {seed}\n"));
    }
    for (record, q) in set.iter().enumerate() {
        if q.text.contains(['\t', '\n', '\r']) || q.intent.contains(['\t', '\n', '\r']) {
            return Err(CorpusError::Malformed {
                record,
                reason: "tabs and line breaks cannot be written in the line form".into(),
            });
        }
        out.push_str(&q.intent);
        out.push('\t');
        out.push_str(&markup_of(q)?);
        if q.origin != Origin::Original {
            out.push('\t');
            out.push_str(&q.origin.to_string());
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn to_json_string(set: &TrainingSet) -> Result<String, CorpusError> {
    let records = set
        .iter()
        .map(|q| {
            Ok(JsonRecord {
                intent: q.intent.clone(),
                text: markup_of(q)?,
                origin: q.origin,
            })
        })
        .collect::<Result<Vec<_>, CorpusError>>()?;
    let doc = if set.metadata.is_empty() {
        JsonDocument::List(records)
    } else {
        JsonDocument::Document {
            metadata: set.metadata.clone(),
            queries: records,
        }
    };
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

/// Loads a dataset; `.json` files use the structured form, anything else the
/// line form.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<TrainingSet, CorpusError> {
    let path = path.as_ref();
    let content = fs::read_to_string(path)?;
    match DatasetFormat::from_path(path) {
        DatasetFormat::Json => from_json_str(&content),
        DatasetFormat::Tsv => from_tsv_str(&content),
    }
}

pub fn save_dataset(set: &TrainingSet, path: impl AsRef<Path>) -> Result<(), CorpusError> {
    let path = path.as_ref();
    let content = match DatasetFormat::from_path(path) {
        DatasetFormat::Json => to_json_string(set)?,
        DatasetFormat::Tsv => to_tsv_string(set)?,
    };
    fs::write(path, content)?;
    Ok(())
}

//! Training-set data model, entity markup, dataset files and sampling.

mod io;
mod markup;
mod split;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use io::{from_json_str, from_tsv_str, load_dataset, save_dataset, to_json_string, to_tsv_string, DatasetFormat};
pub use markup::{parse_annotated, render_annotated, validate_spans, MarkupError, SpanError};
pub use split::{ensure_disjoint, sample_scenario, stratified_split};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("record {record}: {source}")]
    Markup {
        record: usize,
        #[source]
        source: MarkupError,
    },
    #[error("record {record}: {reason}")]
    Malformed { record: usize, reason: String },
    #[error("record {record}: duplicate query {text:?} for intent {intent}")]
    Duplicate {
        record: usize,
        text: String,
        intent: String,
    },
    #[error("dataset has no intents")]
    NoIntents,
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("invalid spans: {0}")]
    Span(#[from] SpanError),
    #[error("duplicate query {text:?} for intent {intent}")]
    DuplicateQuery { text: String, intent: String },
    #[error("intents with too few queries (need {need}): {}", .intents.join(", "))]
    TooFewQueries { need: usize, intents: Vec<String> },
    #[error("test fraction must lie strictly between 0 and 1, got {0}")]
    InvalidFraction(f64),
    #[error("scenario size must be at least 1")]
    InvalidScenarioSize,
    #[error("query {text:?} of intent {intent} appears in both splits")]
    CrossSplitDuplicate { text: String, intent: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// An annotated entity inside a query's plain text.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EntitySpan {
    pub entity_type: String,
    pub value: String,
    /// Inclusive character offset.
    pub start: usize,
    /// Exclusive character offset.
    pub end: usize,
}

impl EntitySpan {
    pub fn overlaps(&self, start: usize, end: usize) -> bool {
        self.start < end && start < self.end
    }
}

/// Where a query came from.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Origin {
    #[default]
    Original,
    SynonymOnly,
    Paraphrased,
    HeldOutHuman,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Origin::Original => "original",
            Origin::SynonymOnly => "synonym",
            Origin::Paraphrased => "paraphrased",
            Origin::HeldOutHuman => "human",
        })
    }
}

impl FromStr for Origin {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "original" => Ok(Origin::Original),
            "synonym" => Ok(Origin::SynonymOnly),
            "paraphrased" => Ok(Origin::Paraphrased),
            "human" => Ok(Origin::HeldOutHuman),
            other => Err(format!("unknown origin {other:?}")),
        }
    }
}

/// One utterance with its intent label and entity spans.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Query {
    pub text: String,
    pub intent: String,
    pub entities: Vec<EntitySpan>,
    pub origin: Origin,
}

impl Query {
    pub fn new(
        text: impl Into<String>,
        intent: impl Into<String>,
        entities: Vec<EntitySpan>,
        origin: Origin,
    ) -> Result<Self, CorpusError> {
        let query = Query {
            text: text.into(),
            intent: intent.into(),
            entities,
            origin,
        };
        query.validate()?;
        Ok(query)
    }

    /// Builds an original query from inline markup.
    pub fn from_markup(intent: impl Into<String>, markup: &str) -> Result<Self, CorpusError> {
        let (text, entities) = parse_annotated(markup).map_err(|source| CorpusError::Markup { record: 0, source })?;
        Query::new(text, intent, entities, Origin::Original)
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.text.trim().is_empty() {
            return Err(CorpusError::InvalidQuery("empty text".into()));
        }
        if self.intent.trim().is_empty() {
            return Err(CorpusError::InvalidQuery(format!("empty intent for {:?}", self.text)));
        }
        validate_spans(&self.text, &self.entities)?;
        Ok(())
    }

    pub fn to_markup(&self) -> Result<String, SpanError> {
        render_annotated(&self.text, &self.entities)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Metadata {
    pub fn is_empty(&self) -> bool {
        self.name.is_none() && self.seed.is_none()
    }
}

/// Queries grouped by intent. Query order within an intent is preserved.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TrainingSet {
    intents: BTreeMap<String, Vec<Query>>,
    pub metadata: Metadata,
}

impl TrainingSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_queries(queries: impl IntoIterator<Item = Query>) -> Result<Self, CorpusError> {
        let mut set = TrainingSet::new();
        for q in queries {
            set.insert(q)?;
        }
        Ok(set)
    }

    /// Adds a query, rejecting invalid queries and duplicate `(text, intent)` pairs.
    pub fn insert(&mut self, query: Query) -> Result<(), CorpusError> {
        query.validate()?;
        if self.contains(&query.text, &query.intent) {
            return Err(CorpusError::DuplicateQuery {
                text: query.text,
                intent: query.intent,
            });
        }
        self.intents.entry(query.intent.clone()).or_default().push(query);
        Ok(())
    }

    pub fn contains(&self, text: &str, intent: &str) -> bool {
        self.intents
            .get(intent)
            .is_some_and(|qs| qs.iter().any(|q| q.text == text))
    }

    pub fn intent_names(&self) -> impl Iterator<Item = &str> {
        self.intents.keys().map(String::as_str)
    }

    pub fn intents(&self) -> impl Iterator<Item = (&str, &[Query])> {
        self.intents.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn queries(&self, intent: &str) -> &[Query] {
        self.intents.get(intent).map(Vec::as_slice).unwrap_or(&[])
    }

    /// All queries, intents in name order.
    pub fn iter(&self) -> impl Iterator<Item = &Query> {
        self.intents.values().flatten()
    }

    pub fn num_intents(&self) -> usize {
        self.intents.len()
    }

    pub fn len(&self) -> usize {
        self.intents.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn with_metadata(mut self, metadata: Metadata) -> Self {
        self.metadata = metadata;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_rejected() {
        let mut set = TrainingSet::new();
        set.insert(Query::from_markup("A", "hello").unwrap()).unwrap();
        assert!(matches!(
            set.insert(Query::from_markup("A", "hello").unwrap()),
            Err(CorpusError::DuplicateQuery { .. })
        ));
        set.insert(Query::from_markup("B", "hello").unwrap()).unwrap();
        assert_eq!(set.len(), 2);
    }

    #[test]
    fn query_invariants() {
        assert!(Query::new("  ", "A", vec![], Origin::Original).is_err());
        assert!(Query::new("x", "", vec![], Origin::Original).is_err());
    }
}

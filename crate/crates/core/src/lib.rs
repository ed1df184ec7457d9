//! Augmentation of intent-annotated chatbot training sets.
//!
//! The pipeline tokenizes and POS-tags each training query, swaps selected
//! tokens for embedding-space synonyms, optionally paraphrases the resulting
//! candidates, keeps the candidates that are furthest (by edit distance) from
//! the original training set, re-labels their entities and merges them back.
//!
//! The [`eval`] module holds a reference intent classifier and the experiment
//! harness used to measure what augmentation does to classification quality
//! and confidence.
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

pub mod augment;
pub mod cli;
pub mod corpus;
pub mod eval;
pub mod paraphrase;
pub mod seed;
pub mod textproc;
pub mod thesaurus;

pub use augment::{augment_dataset, AugmentConfig, CandidateQuery, ProvenanceReport};
pub use corpus::{EntitySpan, Origin, Query, TrainingSet};
pub use eval::{IntentModel, IntentPrediction, MetricsReport};
pub use paraphrase::{ParaphraseProvider, ParaphraseRequest, ParaphraseResult};
pub use textproc::{PosTag, Token};
pub use thesaurus::{EmbeddingTable, Thesaurus};

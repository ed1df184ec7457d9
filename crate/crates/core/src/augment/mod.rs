//! Synonym replacement, paraphrasing, diversity filtering, entity
//! re-labeling and merging.

mod diversity;
mod labeler;
mod replace;

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{CorpusError, Query, TrainingSet};
use crate::paraphrase::{paraphrase, ParaphraseProvider, ParaphraseRequest, ProviderError, MAX_RETURN};
use crate::textproc::{tag_pos, tokenize, LexiconTagger, PosTag, PosTagger};
use crate::thesaurus::{Thesaurus, DEFAULT_MIN_SIMILARITY, DEFAULT_SYNONYMS_PER_TOKEN};

pub use diversity::{diversity_rank, levenshtein, score_candidates, select_top};
pub use labeler::{entity_inventory, label_entities, Reject, RELATIVE_DATES};
pub use replace::replace_synonyms;

#[derive(Debug, Error)]
pub enum AugmentError {
    #[error("diversity reference set is empty")]
    EmptyReference,
    #[error("invalid augmentation config: {0}")]
    InvalidConfig(String),
    #[error("unknown intent {0}")]
    UnknownIntent(String),
    #[error("scenario is empty")]
    EmptyScenario,
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

/// Which queries a candidate's minimum distance is measured against.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReferenceScope {
    /// Every query of the input set.
    #[default]
    Scenario,
    /// Only queries of the candidate's own intent.
    Intent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentConfig {
    /// Accepted candidates per intent.
    pub n: usize,
    pub target_pos: BTreeSet<PosTag>,
    pub synonyms_per_token: usize,
    pub min_similarity: f64,
    pub max_candidates_per_query: usize,
    pub paraphrases_per_candidate: usize,
    pub reference_scope: ReferenceScope,
    /// Recorded in reports; the pipeline itself draws no random numbers.
    pub seed: u64,
}

impl Default for AugmentConfig {
    fn default() -> Self {
        AugmentConfig {
            n: 1,
            target_pos: BTreeSet::from([PosTag::Verb]),
            synonyms_per_token: DEFAULT_SYNONYMS_PER_TOKEN,
            min_similarity: DEFAULT_MIN_SIMILARITY,
            max_candidates_per_query: 64,
            paraphrases_per_candidate: MAX_RETURN,
            reference_scope: ReferenceScope::Scenario,
            seed: 0,
        }
    }
}

impl AugmentConfig {
    pub fn validate(&self) -> Result<(), AugmentError> {
        if self.n == 0 {
            return Err(AugmentError::InvalidConfig("n must be at least 1".into()));
        }
        if self.paraphrases_per_candidate > MAX_RETURN {
            return Err(AugmentError::InvalidConfig(format!(
                "paraphrases_per_candidate must be at most {MAX_RETURN}"
            )));
        }
        if self.synonyms_per_token == 0 {
            return Err(AugmentError::InvalidConfig(
                "synonyms_per_token must be at least 1".into(),
            ));
        }
        if !(-1.0..=1.0).contains(&self.min_similarity) {
            return Err(AugmentError::InvalidConfig("min_similarity must lie in [-1, 1]".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Replacement {
    pub token_index: usize,
    pub start: usize,
    pub end: usize,
    pub original: String,
    pub synonym: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    /// Position of the source query within its intent.
    pub source_index: usize,
    pub source_text: String,
    pub replacements: Vec<Replacement>,
    /// Set when the text came back from a paraphrase provider.
    pub provider: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateQuery {
    pub text: String,
    pub intent: String,
    pub derivation: Derivation,
    pub min_distance: Option<usize>,
}

/// Adds `accepted` to `original` under their intents. Copies of queries
/// already present are dropped with a warning.
pub fn merge(original: &TrainingSet, accepted: &[Query]) -> Result<TrainingSet, AugmentError> {
    if let Some(q) = accepted.iter().find(|q| original.queries(&q.intent).is_empty()) {
        return Err(AugmentError::UnknownIntent(q.intent.clone()));
    }
    let mut merged = original.clone();
    for q in accepted {
        if merged.contains(&q.text, &q.intent) {
            log::warn!("dropping duplicate query {:?} for intent {}", q.text, q.intent);
            continue;
        }
        merged.insert(q.clone())?;
    }
    Ok(merged)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "snake_case")]
pub enum CandidateStatus {
    Selected,
    Rejected(String),
    Discarded(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub text: String,
    pub derivation: Derivation,
    pub min_distance: Option<usize>,
    #[serde(flatten)]
    pub status: CandidateStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ProviderOutcome {
    Returned { input: String, count: usize },
    Failed { input: String, error: String },
    Skipped { input: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntentProvenance {
    pub intent: String,
    pub sources: Vec<String>,
    pub candidates: Vec<CandidateRecord>,
    pub provider_outcomes: Vec<ProviderOutcome>,
    pub accepted: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProvenanceReport {
    pub config: AugmentConfig,
    pub provider: String,
    pub intents: Vec<IntentProvenance>,
}

impl ProvenanceReport {
    pub fn total_candidates(&self) -> usize {
        self.intents.iter().map(|i| i.candidates.len()).sum()
    }

    pub fn provider_failures(&self) -> usize {
        self.intents
            .iter()
            .flat_map(|i| &i.provider_outcomes)
            .filter(|o| matches!(o, ProviderOutcome::Failed { .. }))
            .count()
    }

    pub fn accepted(&self) -> usize {
        self.intents.iter().map(|i| i.accepted).sum()
    }
}

struct IntentRun {
    provenance: IntentProvenance,
    accepted: Vec<Query>,
}

#[allow(clippy::too_many_arguments)]
fn augment_intent(
    intent: &str,
    queries: &[Query],
    reference: &[Query],
    tagger: &dyn PosTagger,
    thesaurus: &dyn Thesaurus,
    provider: &dyn ParaphraseProvider,
    provider_down: &AtomicBool,
    config: &AugmentConfig,
) -> Result<IntentRun, AugmentError> {
    let inventory = entity_inventory(queries);
    let mut pool: Vec<CandidateQuery> = Vec::new();
    let mut outcomes = Vec::new();

    for (idx, query) in queries.iter().enumerate() {
        let tokens = tag_pos(tagger, tokenize(&query.text, &query.entities));
        for candidate in replace_synonyms(query, idx, &tokens, thesaurus, config) {
            let paraphrases = if config.paraphrases_per_candidate == 0 {
                Vec::new()
            } else if provider_down.load(Ordering::Relaxed) {
                outcomes.push(ProviderOutcome::Skipped {
                    input: candidate.text.clone(),
                });
                Vec::new()
            } else {
                let result = ParaphraseRequest::new(candidate.text.clone(), config.paraphrases_per_candidate)
                    .and_then(|req| paraphrase(provider, &req));
                match result {
                    Ok(res) => {
                        outcomes.push(ProviderOutcome::Returned {
                            input: candidate.text.clone(),
                            count: res.paraphrases.len(),
                        });
                        res.paraphrases
                    }
                    Err(err) => {
                        if matches!(err, ProviderError::Unavailable { .. }) {
                            provider_down.store(true, Ordering::Relaxed);
                            log::warn!("{err}; continuing with synonym candidates only");
                        }
                        outcomes.push(ProviderOutcome::Failed {
                            input: candidate.text.clone(),
                            error: err.to_string(),
                        });
                        Vec::new()
                    }
                }
            };
            let derived: Vec<CandidateQuery> = paraphrases
                .into_iter()
                .map(|text| CandidateQuery {
                    text,
                    intent: candidate.intent.clone(),
                    derivation: Derivation {
                        provider: Some(provider.id().to_string()),
                        ..candidate.derivation.clone()
                    },
                    min_distance: None,
                })
                .collect();
            pool.push(candidate);
            pool.extend(derived);
        }
    }

    let mut records: Vec<CandidateRecord> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut unique = Vec::with_capacity(pool.len());
    for c in pool {
        if seen.insert(c.text.clone()) {
            unique.push(c);
        } else {
            records.push(CandidateRecord {
                text: c.text.clone(),
                derivation: c.derivation,
                min_distance: None,
                status: CandidateStatus::Discarded("duplicate candidate".into()),
            });
        }
    }

    let mut scored = unique;
    score_candidates(&mut scored, reference)?;
    for c in scored.iter().filter(|c| c.min_distance == Some(0)) {
        records.push(CandidateRecord {
            text: c.text.clone(),
            derivation: c.derivation.clone(),
            min_distance: c.min_distance,
            status: CandidateStatus::Discarded("identical to a training query".into()),
        });
    }
    let ranked = diversity_rank(scored, reference)?;

    let mut accepted = Vec::new();
    for c in ranked {
        let status = if accepted.len() >= config.n {
            CandidateStatus::Discarded("below the top N".into())
        } else {
            let source = &queries[c.derivation.source_index];
            match label_entities(&c, source, &inventory) {
                Ok(q) => {
                    accepted.push(q);
                    CandidateStatus::Selected
                }
                Err(reject) => CandidateStatus::Rejected(reject.to_string()),
            }
        };
        records.push(CandidateRecord {
            text: c.text,
            derivation: c.derivation,
            min_distance: c.min_distance,
            status,
        });
    }

    let note = accepted
        .is_empty()
        .then(|| "no candidate accepted; intent left unaugmented".to_string());
    Ok(IntentRun {
        provenance: IntentProvenance {
            intent: intent.to_string(),
            sources: queries.iter().map(|q| q.text.clone()).collect(),
            candidates: records,
            provider_outcomes: outcomes,
            accepted: accepted.len(),
            note,
        },
        accepted,
    })
}

/// Runs the full pipeline with the bundled POS tagger.
pub fn augment_dataset(
    scenario: &TrainingSet,
    thesaurus: &dyn Thesaurus,
    provider: &dyn ParaphraseProvider,
    config: &AugmentConfig,
) -> Result<(TrainingSet, ProvenanceReport), AugmentError> {
    augment_dataset_with_tagger(scenario, LexiconTagger::builtin(), thesaurus, provider, config)
}

/// Runs the full pipeline: per intent, generate synonym candidates, add their
/// paraphrases, rank the pool by distance to the reference set, label the
/// best `n` (promoting the next candidate when labeling fails) and merge.
///
/// Intents are processed in parallel; the result does not depend on
/// scheduling.
pub fn augment_dataset_with_tagger(
    scenario: &TrainingSet,
    tagger: &dyn PosTagger,
    thesaurus: &dyn Thesaurus,
    provider: &dyn ParaphraseProvider,
    config: &AugmentConfig,
) -> Result<(TrainingSet, ProvenanceReport), AugmentError> {
    config.validate()?;
    if scenario.is_empty() {
        return Err(AugmentError::EmptyScenario);
    }
    let all: Vec<Query> = scenario.iter().cloned().collect();
    let provider_down = AtomicBool::new(false);
    let intents: Vec<(&str, &[Query])> = scenario.intents().collect();

    let runs: Vec<IntentRun> = intents
        .par_iter()
        .map(|&(intent, queries)| {
            let reference = match config.reference_scope {
                ReferenceScope::Scenario => all.as_slice(),
                ReferenceScope::Intent => queries,
            };
            augment_intent(
                intent,
                queries,
                reference,
                tagger,
                thesaurus,
                provider,
                &provider_down,
                config,
            )
        })
        .collect::<Result<_, _>>()?;

    let accepted: Vec<Query> = runs.iter().flat_map(|r| r.accepted.iter().cloned()).collect();
    let augmented = merge(scenario, &accepted)?;
    let report = ProvenanceReport {
        config: config.clone(),
        provider: provider.id().to_string(),
        intents: runs.into_iter().map(|r| r.provenance).collect(),
    };
    Ok((augmented, report))
}

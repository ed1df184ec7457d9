//! Paraphrase providers and the post-processing shared by all of them.

mod remote;
mod rules;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use remote::{HealthStatus, RemoteProvider, RetryPolicy, PARAPHRASE_URL_ENV};
pub use rules::{rule_provider, RuleProvider};

/// Upper bound on paraphrases per request.
pub const MAX_RETURN: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProviderError {
    #[error("invalid paraphrase request: {0}")]
    InvalidRequest(String),
    #[error("paraphrase provider unavailable after {attempts} attempt(s): {last_error}")]
    Unavailable { attempts: u32, last_error: String },
    #[error("paraphrase provider protocol error: {0}")]
    Protocol(String),
    #[error("paraphrase provider rejected the request: {0}")]
    Rejected(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParaphraseRequest {
    pub text: String,
    pub num_return: usize,
}

impl ParaphraseRequest {
    pub fn new(text: impl Into<String>, num_return: usize) -> Result<Self, ProviderError> {
        let text = text.into();
        if text.trim().is_empty() {
            return Err(ProviderError::InvalidRequest("empty text".into()));
        }
        if !(1..=MAX_RETURN).contains(&num_return) {
            return Err(ProviderError::InvalidRequest(format!(
                "num_return must be in 1..={MAX_RETURN}, got {num_return}"
            )));
        }
        Ok(ParaphraseRequest { text, num_return })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParaphraseResult {
    pub paraphrases: Vec<String>,
    pub provider_id: String,
}

/// A source of raw paraphrases. Implementations must tolerate concurrent calls.
pub trait ParaphraseProvider: Send + Sync {
    fn id(&self) -> &str;

    /// Raw model output; [`paraphrase`] cleans it up.
    fn generate(&self, request: &ParaphraseRequest) -> Result<Vec<String>, ProviderError>;
}

/// Provider that never returns anything.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoProvider;

impl ParaphraseProvider for NoProvider {
    fn id(&self) -> &str {
        "none"
    }

    fn generate(&self, _request: &ParaphraseRequest) -> Result<Vec<String>, ProviderError> {
        Ok(Vec::new())
    }
}

/// Trimmed, non-empty, distinct, different from the input, at most
/// `num_return` long.
pub fn clean_paraphrases(input: &str, raw: Vec<String>, num_return: usize) -> Vec<String> {
    let input = input.trim();
    let mut out: Vec<String> = Vec::with_capacity(num_return);
    for p in raw {
        let p = p.trim();
        if p.is_empty() || p == input || out.iter().any(|o| o == p) {
            continue;
        }
        out.push(p.to_string());
        if out.len() == num_return.min(MAX_RETURN) {
            break;
        }
    }
    out
}

pub fn paraphrase(
    provider: &dyn ParaphraseProvider,
    request: &ParaphraseRequest,
) -> Result<ParaphraseResult, ProviderError> {
    let raw = provider.generate(request)?;
    Ok(ParaphraseResult {
        paraphrases: clean_paraphrases(&request.text, raw, request.num_return),
        provider_id: provider.id().to_string(),
    })
}

/// Fixed outputs per input text; anything else yields nothing.
#[derive(Debug, Clone, Default)]
pub struct ScriptedProvider {
    id: String,
    scripts: std::collections::HashMap<String, Vec<String>>,
}

impl ScriptedProvider {
    pub fn new(id: impl Into<String>) -> Self {
        ScriptedProvider {
            id: id.into(),
            scripts: Default::default(),
        }
    }

    pub fn with(mut self, input: &str, outputs: &[&str]) -> Self {
        self.scripts
            .insert(input.to_string(), outputs.iter().map(|s| s.to_string()).collect());
        self
    }
}

impl ParaphraseProvider for ScriptedProvider {
    fn id(&self) -> &str {
        &self.id
    }

    fn generate(&self, request: &ParaphraseRequest) -> Result<Vec<String>, ProviderError> {
        Ok(self.scripts.get(&request.text).cloned().unwrap_or_default())
    }
}

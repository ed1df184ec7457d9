//! Deterministic surface rewrites standing in for a paraphrase model.

use super::{clean_paraphrases, ParaphraseProvider, ParaphraseRequest, ParaphraseResult, ProviderError};

pub const RULE_PROVIDER_ID: &str = "rules";

fn strip_prefix_ci<'a>(text: &'a str, prefix: &str) -> Option<&'a str> {
    let head = text.get(..prefix.len())?;
    head.eq_ignore_ascii_case(prefix).then(|| &text[prefix.len()..])
}

fn trim_final_punct(s: &str) -> &str {
    s.trim_end().trim_end_matches(['.', '?', '!']).trim_end()
}

/// Lowercases the first letter unless the word looks like a name or acronym.
fn decapitalize(s: &str) -> String {
    let first_word = s.split_whitespace().next().unwrap_or("");
    let mut tail = first_word.chars().skip(1);
    let keep = first_word == "I" || tail.any(|c| c.is_uppercase());
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if !keep => c.to_lowercase().chain(chars).collect(),
        _ => s.to_string(),
    }
}

fn what_to_show_me(text: &str) -> Option<String> {
    let rest = strip_prefix_ci(text, "what ")?.strip_suffix('?')?.trim();
    (!rest.is_empty()).then(|| format!("Show me {rest}."))
}

fn how_can_i(text: &str) -> Option<String> {
    let rest = strip_prefix_ci(text, "how can i ")?.strip_suffix('?')?.trim();
    (!rest.is_empty()).then(|| format!("What is the way to {rest}?"))
}

fn show_me(text: &str) -> Option<String> {
    let rest = trim_final_punct(strip_prefix_ci(text, "show me ")?);
    (!rest.is_empty()).then(|| format!("Can you show {rest}?"))
}

fn please_tell_me(text: &str) -> Option<String> {
    let body = text.strip_suffix('?')?.trim();
    (!body.is_empty()).then(|| format!("Please tell me {}.", decapitalize(body)))
}

const TRANSFORMS: [fn(&str) -> Option<String>; 4] = [what_to_show_me, how_can_i, show_me, please_tell_me];

/// Applies the rewrites in order to `text`, keeping up to `num_return`
/// distinct outputs; inputs no rewrite applies to yield an empty list.
pub fn rule_provider(text: &str, num_return: usize) -> ParaphraseResult {
    let text = text.trim();
    let raw: Vec<String> = TRANSFORMS.iter().filter_map(|t| t(text)).collect();
    ParaphraseResult {
        paraphrases: clean_paraphrases(text, raw, num_return),
        provider_id: RULE_PROVIDER_ID.to_string(),
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RuleProvider;

impl ParaphraseProvider for RuleProvider {
    fn id(&self) -> &str {
        RULE_PROVIDER_ID
    }

    fn generate(&self, request: &ParaphraseRequest) -> Result<Vec<String>, ProviderError> {
        Ok(rule_provider(&request.text, request.num_return).paraphrases)
    }
}

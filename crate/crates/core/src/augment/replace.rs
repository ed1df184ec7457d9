//! Candidate generation by synonym replacement.

use super::{AugmentConfig, CandidateQuery, Derivation, Replacement};
use crate::corpus::Query;
use crate::textproc::Token;
use crate::thesaurus::Thesaurus;

/// Copies the casing of `original` onto `synonym`: `Cause` → `Induce`,
/// `CAUSE` → `INDUCE`.
fn match_case(original: &str, synonym: &str) -> String {
    let letters: Vec<char> = original.chars().filter(|c| c.is_alphabetic()).collect();
    if letters.len() > 1 && letters.iter().all(|c| c.is_uppercase()) {
        return synonym.to_uppercase();
    }
    match original.chars().next() {
        Some(c) if c.is_uppercase() => {
            let mut chars = synonym.chars();
            match chars.next() {
                Some(first) => first.to_uppercase().chain(chars).collect(),
                None => String::new(),
            }
        }
        _ => synonym.to_string(),
    }
}

/// Every combination of keep-or-swap across the replaceable tokens of
/// `query`, minus the all-keep combination.
///
/// A token is replaceable when its tag is in `config.target_pos` and it does
/// not touch an entity. Enumeration is mixed-radix with the leftmost token
/// varying slowest and "keep" as digit zero; the output is truncated to
/// `config.max_candidates_per_query`.
pub fn replace_synonyms(
    query: &Query,
    source_index: usize,
    tokens: &[Token],
    thesaurus: &dyn Thesaurus,
    config: &AugmentConfig,
) -> Vec<CandidateQuery> {
    let slots: Vec<(usize, &Token, Vec<String>)> = tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| config.target_pos.contains(&t.pos) && !t.inside_entity)
        .filter_map(|(i, t)| {
            let syns: Vec<String> = thesaurus
                .synonyms(&t.text, config.synonyms_per_token, config.min_similarity)
                .into_iter()
                .map(|c| match_case(&t.text, &c.word))
                .collect();
            (!syns.is_empty()).then_some((i, t, syns))
        })
        .collect();
    if slots.is_empty() {
        return Vec::new();
    }

    let chars: Vec<char> = query.text.chars().collect();
    let mut digits = vec![0usize; slots.len()];
    let mut out = Vec::new();
    loop {
        // Advance the rightmost digit first, so the leftmost varies slowest.
        let mut pos = slots.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] <= slots[pos].2.len() {
                break;
            }
            digits[pos] = 0;
        }
        if out.len() >= config.max_candidates_per_query {
            return out;
        }

        let mut text = String::with_capacity(query.text.len() + 8);
        let mut cursor = 0;
        let mut replacements = Vec::new();
        for (&digit, (token_index, token, syns)) in digits.iter().zip(&slots) {
            if digit == 0 {
                continue;
            }
            let synonym = &syns[digit - 1];
            text.extend(&chars[cursor..token.start]);
            text.push_str(synonym);
            cursor = token.end;
            replacements.push(Replacement {
                token_index: *token_index,
                start: token.start,
                end: token.end,
                original: token.text.clone(),
                synonym: synonym.clone(),
            });
        }
        text.extend(&chars[cursor..]);
        out.push(CandidateQuery {
            text,
            intent: query.intent.clone(),
            derivation: Derivation {
                source_index,
                source_text: query.text.clone(),
                replacements,
                provider: None,
            },
            min_distance: None,
        });
    }
}

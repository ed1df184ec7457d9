//! Entity re-labeling for generated candidates.

use regex::RegexBuilder;
use serde::{Deserialize, Serialize};

use super::CandidateQuery;
use crate::corpus::{EntitySpan, Origin, Query};

/// Relative expressions accepted for date-like entity types.
pub const RELATIVE_DATES: &[&str] = &["today", "yesterday", "last week", "last month"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reject {
    MissingEntity(String),
    OverlappingEntities,
}

impl std::fmt::Display for Reject {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Reject::MissingEntity(t) => write!(f, "missing entity {t}"),
            Reject::OverlappingEntities => f.write_str("overlapping entities"),
        }
    }
}

/// Distinct `(entity_type, value)` pairs across `queries`, first-seen order.
pub fn entity_inventory<'a>(queries: impl IntoIterator<Item = &'a Query>) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = Vec::new();
    for q in queries {
        for e in &q.entities {
            let pair = (e.entity_type.clone(), e.value.clone());
            if !out.contains(&pair) {
                out.push(pair);
            }
        }
    }
    out
}

fn is_date_type(entity_type: &str) -> bool {
    entity_type.to_ascii_lowercase().contains("date")
}

fn byte_to_char(text: &str, byte: usize) -> usize {
    text[..byte].chars().count()
}

/// Splits `value` at whitespace and lower-to-upper case boundaries:
/// `ConsumerRecords` → `Consumer`, `Records`.
fn segments(value: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut prev: Option<char> = None;
    for c in value.chars() {
        if c.is_whitespace() {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            prev = None;
            continue;
        }
        if let Some(p) = prev {
            if p.is_lowercase() && c.is_uppercase() && !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
        }
        cur.push(c);
        prev = Some(c);
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// All `(start, end)` char ranges where `value` matches, by the strategy:
/// 0 exact, 1 case-insensitive, 2 whitespace-tolerant.
fn matches(text: &str, value: &str, strategy: u8) -> Vec<(usize, usize)> {
    let pattern = match strategy {
        0 | 1 => regex::escape(value),
        _ => segments(value)
            .iter()
            .map(|s| regex::escape(s))
            .collect::<Vec<_>>()
            .join(r"\s*"),
    };
    if pattern.is_empty() {
        return Vec::new();
    }
    let Ok(re) = RegexBuilder::new(&pattern).case_insensitive(strategy > 0).build() else {
        return Vec::new();
    };
    re.find_iter(text)
        .map(|m| (byte_to_char(text, m.start()), byte_to_char(text, m.end())))
        .collect()
}

enum Located {
    Found(usize, usize),
    OnlyOverlapping,
    Missing,
}

fn locate(text: &str, values: &[&str], taken: &[EntitySpan]) -> Located {
    let mut overlapped = false;
    for strategy in 0..3 {
        for value in values {
            for (s, e) in matches(text, value, strategy) {
                if taken.iter().any(|t| t.overlaps(s, e)) {
                    overlapped = true;
                } else {
                    return Located::Found(s, e);
                }
            }
        }
    }
    if overlapped {
        Located::OnlyOverlapping
    } else {
        Located::Missing
    }
}

/// Finds every entity of `source` inside `candidate.text`.
///
/// Each source value is tried first, then the other inventory values of the
/// same type, with exact, case-insensitive and whitespace-tolerant matching
/// in that order. Date-like types also accept a few relative expressions.
pub fn label_entities(
    candidate: &CandidateQuery,
    source: &Query,
    inventory: &[(String, String)],
) -> Result<Query, Reject> {
    let text = &candidate.text;
    let chars: Vec<char> = text.chars().collect();
    let mut spans: Vec<EntitySpan> = Vec::new();

    for entity in &source.entities {
        let mut values: Vec<&str> = vec![entity.value.as_str()];
        values.extend(
            inventory
                .iter()
                .filter(|(t, v)| *t == entity.entity_type && *v != entity.value)
                .map(|(_, v)| v.as_str()),
        );
        let mut located = locate(text, &values, &spans);
        if !matches!(located, Located::Found(..)) && is_date_type(&entity.entity_type) {
            if let found @ Located::Found(..) = locate(text, RELATIVE_DATES, &spans) {
                located = found;
            }
        }
        match located {
            Located::Found(start, end) => spans.push(EntitySpan {
                entity_type: entity.entity_type.clone(),
                value: chars[start..end].iter().collect(),
                start,
                end,
            }),
            Located::OnlyOverlapping => return Err(Reject::OverlappingEntities),
            Located::Missing => return Err(Reject::MissingEntity(entity.entity_type.clone())),
        }
    }
    spans.sort_by_key(|s| s.start);

    let origin = if candidate.derivation.provider.is_some() {
        Origin::Paraphrased
    } else {
        Origin::SynonymOnly
    };
    Query::new(text.clone(), candidate.intent.clone(), spans, origin).map_err(|_| Reject::OverlappingEntities)
}

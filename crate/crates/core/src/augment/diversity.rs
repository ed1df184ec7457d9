//! Edit distance and the diversity filter.

use std::cmp::Reverse;

use super::{AugmentError, CandidateQuery};
use crate::corpus::Query;

/// Unit-cost Levenshtein distance over characters.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();

    let prefix = a.iter().zip(&b).take_while(|(x, y)| x == y).count();
    let (a, b) = (&a[prefix..], &b[prefix..]);
    let suffix = a.iter().rev().zip(b.iter().rev()).take_while(|(x, y)| x == y).count();
    let (a, b) = (&a[..a.len() - suffix], &b[..b.len() - suffix]);

    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if short.is_empty() {
        return long.len();
    }

    let mut row: Vec<usize> = (0..=short.len()).collect();
    for (i, &lc) in long.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, &sc) in short.iter().enumerate() {
            let above = row[j + 1];
            row[j + 1] = if lc == sc {
                diag
            } else {
                1 + diag.min(above).min(row[j])
            };
            diag = above;
        }
    }
    row[short.len()]
}

/// Sets every candidate's `min_distance` against `reference`.
pub fn score_candidates(candidates: &mut [CandidateQuery], reference: &[Query]) -> Result<(), AugmentError> {
    if reference.is_empty() {
        return Err(AugmentError::EmptyReference);
    }
    for c in candidates.iter_mut() {
        let d = reference
            .iter()
            .map(|r| levenshtein(&c.text, &r.text))
            .min()
            .unwrap_or(0);
        c.min_distance = Some(d);
    }
    Ok(())
}

/// Orders candidates by their minimum distance to `reference`, largest
/// first, dropping candidates that already occur in it. Ties go to the
/// earlier source query, then to the lexicographically smaller text.
pub fn diversity_rank(
    mut candidates: Vec<CandidateQuery>,
    reference: &[Query],
) -> Result<Vec<CandidateQuery>, AugmentError> {
    score_candidates(&mut candidates, reference)?;
    candidates.retain(|c| c.min_distance != Some(0));
    candidates.sort_by(|a, b| {
        (Reverse(a.min_distance), a.derivation.source_index, &a.text).cmp(&(
            Reverse(b.min_distance),
            b.derivation.source_index,
            &b.text,
        ))
    });
    Ok(candidates)
}

pub fn select_top(ranked: &[CandidateQuery], n: usize) -> Vec<CandidateQuery> {
    ranked.iter().take(n).cloned().collect()
}

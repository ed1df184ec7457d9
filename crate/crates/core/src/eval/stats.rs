//! Mann-Whitney U test and confidence summaries.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::classifier::IntentPrediction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MwuMode {
    Exact,
    Approx,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MannWhitney {
    /// U statistic of the first sample.
    pub u: f64,
    pub p_two_sided: f64,
    pub exact: bool,
}

/// Largest number of labelings enumerated for an exact test with ties.
const MAX_ENUMERATION: u64 = 2_000_000;

/// Midranks (1-based) of the pooled sample.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

fn tie_sizes(values: &[f64]) -> Vec<usize> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        out.push(j - i + 1);
        i = j + 1;
    }
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Number of ways to place `n` of `n + m` distinct ranks in the first sample
/// with U = u, for u in 0..=n*m: the coefficients of the Gaussian binomial
/// `[n+m choose n]_q`.
pub fn u_distribution(n: usize, m: usize) -> Vec<f64> {
    let max = n * m;
    let mut coeffs = vec![0i128; max + 1];
    coeffs[0] = 1;
    for i in 1..=n {
        // Multiply by (1 - q^(m+i)).
        let shift = m + i;
        for u in (shift..=max).rev() {
            coeffs[u] -= coeffs[u - shift];
        }
        // Divide by (1 - q^i).
        for u in i..=max {
            coeffs[u] += coeffs[u - i];
        }
    }
    coeffs.into_iter().map(|c| c as f64).collect()
}

fn exact_without_ties(u: f64, n: usize, m: usize) -> f64 {
    let counts = u_distribution(n, m);
    let total: f64 = counts.iter().sum();
    let nm = (n * m) as f64;
    let observed = (2.0 * u - nm).abs();
    let extreme: f64 = counts
        .iter()
        .enumerate()
        .filter(|(k, _)| (2.0 * *k as f64 - nm).abs() >= observed - 1e-9)
        .map(|(_, c)| c)
        .sum();
    (extreme / total).min(1.0)
}

/// Enumerates every split of the pooled ranks.
fn exact_by_enumeration(ranks: &[f64], n: usize, u_obs: f64) -> f64 {
    let m = ranks.len() - n;
    let nm = (n * m) as f64;
    let offset = (n * (n + 1)) as f64 / 2.0;
    let observed = (2.0 * u_obs - nm).abs();
    let mut total = 0u64;
    let mut extreme = 0u64;

    fn walk(ranks: &[f64], start: usize, left: usize, sum: f64, visit: &mut dyn FnMut(f64)) {
        if left == 0 {
            visit(sum);
            return;
        }
        for i in start..=ranks.len() - left {
            walk(ranks, i + 1, left - 1, sum + ranks[i], visit);
        }
    }

    walk(ranks, 0, n, 0.0, &mut |rank_sum| {
        let u = rank_sum - offset;
        total += 1;
        if (2.0 * u - nm).abs() >= observed - 1e-9 {
            extreme += 1;
        }
    });
    (extreme as f64 / total as f64).min(1.0)
}

fn approx(u: f64, n: usize, m: usize, ties: &[usize]) -> f64 {
    let (nf, mf) = (n as f64, m as f64);
    let big_n = nf + mf;
    let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>() / (big_n * (big_n - 1.0));
    let variance = nf * mf / 12.0 * ((big_n + 1.0) - tie_term);
    if variance <= 0.0 {
        return 1.0;
    }
    let deviation = ((u - nf * mf / 2.0).abs() - 0.5).max(0.0);
    let z = deviation / variance.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    (2.0 * normal.sf(z)).min(1.0)
}

/// Two-sided Mann-Whitney U test.
///
/// The p-value is the probability, under random relabeling of the pooled
/// sample, of a U at least as far from `n*m/2` as the observed one. `Auto`
/// is exact when there are no ties and `n*m <= 400`. `Exact` with ties
/// enumerates all labelings when that is feasible and falls back to the
/// normal approximation otherwise.
///
/// # Panics
///
/// Panics if either sample is empty.
pub fn mann_whitney_u(a: &[f64], b: &[f64], mode: MwuMode) -> MannWhitney {
    assert!(
        !a.is_empty() && !b.is_empty(),
        "Mann-Whitney needs two non-empty samples"
    );
    let (n, m) = (a.len(), b.len());
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    let rank_sum: f64 = ranks[..n].iter().sum();
    let u = rank_sum - (n * (n + 1)) as f64 / 2.0;
    let ties = tie_sizes(&pooled);
    let has_ties = ties.iter().any(|&t| t > 1);

    let (p, exact) = match mode {
        MwuMode::Approx => (approx(u, n, m, &ties), false),
        MwuMode::Auto if has_ties || n * m > 400 => (approx(u, n, m, &ties), false),
        MwuMode::Auto => (exact_without_ties(u, n, m), true),
        MwuMode::Exact if !has_ties => (exact_without_ties(u, n, m), true),
        MwuMode::Exact if binomial((n + m) as u64, n as u64) <= MAX_ENUMERATION => {
            (exact_by_enumeration(&ranks, n, u), true)
        }
        MwuMode::Exact => (approx(u, n, m, &ties), false),
    };
    MannWhitney {
        u,
        p_two_sided: p,
        exact,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn summarize(values: &[f64]) -> Option<Summary> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Some(Summary {
        median: quantile(&sorted, 0.5),
        q1: quantile(&sorted, 0.25),
        q3: quantile(&sorted, 0.75),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceSplit {
    pub correct: Vec<f64>,
    pub incorrect: Vec<f64>,
    pub correct_summary: Option<Summary>,
    pub incorrect_summary: Option<Summary>,
}

impl ConfidenceSplit {
    pub fn from_parts(correct: Vec<f64>, incorrect: Vec<f64>) -> Self {
        ConfidenceSplit {
            correct_summary: summarize(&correct),
            incorrect_summary: summarize(&incorrect),
            correct,
            incorrect,
        }
    }
}

/// Partitions prediction confidences by whether the predicted intent matches
/// the truth.
pub fn confidence_split<'a>(predictions: impl IntoIterator<Item = (&'a str, &'a IntentPrediction)>) -> ConfidenceSplit {
    let (mut correct, mut incorrect) = (Vec::new(), Vec::new());
    for (truth, p) in predictions {
        if p.intent == truth {
            correct.push(p.confidence);
        } else {
            incorrect.push(p.confidence);
        }
    }
    ConfidenceSplit::from_parts(correct, incorrect)
}

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CorpusError, Query, TrainingSet};

/// Picks `take` of `n` indices at random; returned sorted so the chosen
/// queries keep their file order.
fn choose_indices(n: usize, take: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let mut chosen = idx[..take].to_vec();
    chosen.sort_unstable();
    chosen
}

fn partition(queries: &[Query], chosen: &[usize]) -> (Vec<Query>, Vec<Query>) {
    let mut picked = Vec::with_capacity(chosen.len());
    let mut rest = Vec::with_capacity(queries.len() - chosen.len());
    for (i, q) in queries.iter().enumerate() {
        if chosen.binary_search(&i).is_ok() {
            picked.push(q.clone());
        } else {
            rest.push(q.clone());
        }
    }
    (picked, rest)
}

/// Test-side count for `n` queries: half-up rounding of `fraction * n`,
/// clamped so both sides keep at least one query.
fn test_count(n: usize, fraction: f64) -> usize {
    let raw = (fraction * n as f64 + 0.5).floor() as usize;
    raw.clamp(1, n - 1)
}

/// Per-intent random split into `(train, test)`.
pub fn stratified_split(
    set: &TrainingSet,
    test_fraction: f64,
    seed: u64,
) -> Result<(TrainingSet, TrainingSet), CorpusError> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(CorpusError::InvalidFraction(test_fraction));
    }
    let small: Vec<String> = set
        .intents()
        .filter(|(_, qs)| qs.len() < 2)
        .map(|(name, _)| name.to_string())
        .collect();
    if !small.is_empty() {
        return Err(CorpusError::TooFewQueries {
            need: 2,
            intents: small,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = TrainingSet::new().with_metadata(set.metadata.clone());
    let mut test = TrainingSet::new().with_metadata(set.metadata.clone());
    for (_, queries) in set.intents() {
        let chosen = choose_indices(queries.len(), test_count(queries.len(), test_fraction), &mut rng);
        let (test_qs, train_qs) = partition(queries, &chosen);
        for q in train_qs {
            train.insert(q)?;
        }
        for q in test_qs {
            test.insert(q)?;
        }
    }
    Ok((train, test))
}

/// Draws exactly `k` queries per intent. Returns `(scenario, held_out)`.
///
/// Every intent needs at least `k + 1` queries so that a held-out query is
/// left over for the human-augmentation arm.
pub fn sample_scenario(train: &TrainingSet, k: usize, seed: u64) -> Result<(TrainingSet, TrainingSet), CorpusError> {
    if k == 0 {
        return Err(CorpusError::InvalidScenarioSize);
    }
    let small: Vec<String> = train
        .intents()
        .filter(|(_, qs)| qs.len() < k + 1)
        .map(|(name, _)| name.to_string())
        .collect();
    if !small.is_empty() {
        return Err(CorpusError::TooFewQueries {
            need: k + 1,
            intents: small,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scenario = TrainingSet::new().with_metadata(train.metadata.clone());
    let mut held_out = TrainingSet::new().with_metadata(train.metadata.clone());
    for (_, queries) in train.intents() {
        let chosen = choose_indices(queries.len(), k, &mut rng);
        let (picked, rest) = partition(queries, &chosen);
        for q in picked {
            scenario.insert(q)?;
        }
        for q in rest {
            held_out.insert(q)?;
        }
    }
    Ok((scenario, held_out))
}

/// Fails if any `(text, intent)` pair occurs in both sets.
pub fn ensure_disjoint(train: &TrainingSet, test: &TrainingSet) -> Result<(), CorpusError> {
    match test.iter().find(|q| train.contains(&q.text, &q.intent)) {
        Some(q) => Err(CorpusError::CrossSplitDuplicate {
            text: q.text.clone(),
            intent: q.intent.clone(),
        }),
        None => Ok(()),
    }
}

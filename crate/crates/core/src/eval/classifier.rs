//! Nearest-centroid intent classifier over tf-idf features.
//!
//! Features are word unigrams and bigrams plus character 3- to 5-grams taken
//! inside space-padded words. Weights are raw term counts times the smoothed
//! idf `ln((1 + N) / (1 + df)) + 1`, and every training vector is scaled to
//! unit length before averaging into its intent's centroid. Scores are a
//! softmax over `cosine(query, centroid) / temperature`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::corpus::TrainingSet;

pub const DEFAULT_TEMPERATURE: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntentPrediction {
    pub intent: String,
    pub confidence: f64,
    pub scores: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntentModel {
    intents: Vec<String>,
    vocabulary: HashMap<String, usize>,
    idf: Vec<f64>,
    centroids: Vec<Vec<f64>>,
    centroid_norms: Vec<f64>,
    temperature: f64,
}

fn words(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Term counts for one text, sorted by feature string.
pub fn features(text: &str) -> BTreeMap<String, usize> {
    let words = words(text);
    let mut counts = BTreeMap::new();
    for w in &words {
        *counts.entry(format!("w:{w}")).or_insert(0) += 1;
    }
    for pair in words.windows(2) {
        *counts.entry(format!("b:{} {}", pair[0], pair[1])).or_insert(0) += 1;
    }
    for w in &words {
        let padded: Vec<char> = std::iter::once(' ')
            .chain(w.chars())
            .chain(std::iter::once(' '))
            .collect();
        for n in 3..=5 {
            for gram in padded.windows(n) {
                *counts
                    .entry(format!("c:{}", gram.iter().collect::<String>()))
                    .or_insert(0) += 1;
            }
        }
    }
    counts
}

impl IntentModel {
    pub fn intents(&self) -> &[String] {
        &self.intents
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn vocabulary_size(&self) -> usize {
        self.vocabulary.len()
    }

    fn vectorize(&self, text: &str) -> Vec<(usize, f64)> {
        features(text)
            .into_iter()
            .filter_map(|(f, count)| self.vocabulary.get(&f).map(|&i| (i, count as f64 * self.idf[i])))
            .collect()
    }

    /// Cosine similarity of `text` to each intent centroid, in intent order.
    pub fn similarities(&self, text: &str) -> Vec<f64> {
        let v = self.vectorize(text);
        let norm = v.iter().map(|(_, x)| x * x).sum::<f64>().sqrt();
        self.centroids
            .iter()
            .zip(&self.centroid_norms)
            .map(|(c, &cn)| {
                if norm == 0.0 || cn == 0.0 {
                    0.0
                } else {
                    v.iter().map(|&(i, x)| x * c[i]).sum::<f64>() / (norm * cn)
                }
            })
            .collect()
    }
}

pub fn train_classifier(set: &TrainingSet, temperature: f64) -> Result<IntentModel, EvalError> {
    if set.num_intents() < 2 {
        return Err(EvalError::TooFewIntents(set.num_intents()));
    }
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(EvalError::InvalidTemperature(temperature));
    }
    let intents: Vec<String> = set.intent_names().map(str::to_string).collect();
    let docs: Vec<(usize, BTreeMap<String, usize>)> = set
        .intents()
        .enumerate()
        .flat_map(|(i, (_, qs))| qs.iter().map(move |q| (i, features(&q.text))))
        .collect();

    // Vocabulary indices follow sorted feature order so training is reproducible.
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for (_, f) in &docs {
        for key in f.keys() {
            *df.entry(key.as_str()).or_insert(0) += 1;
        }
    }
    let n_docs = docs.len() as f64;
    let vocabulary: HashMap<String, usize> = df.keys().enumerate().map(|(i, k)| (k.to_string(), i)).collect();
    let idf: Vec<f64> = df
        .values()
        .map(|&d| ((1.0 + n_docs) / (1.0 + d as f64)).ln() + 1.0)
        .collect();

    let dim = vocabulary.len();
    let mut centroids = vec![vec![0.0; dim]; intents.len()];
    let mut counts = vec![0usize; intents.len()];
    for (intent, f) in &docs {
        let weighted: Vec<(usize, f64)> = f
            .iter()
            .map(|(k, &c)| {
                let i = vocabulary[k];
                (i, c as f64 * idf[i])
            })
            .collect();
        let norm = weighted.iter().map(|(_, x)| x * x).sum::<f64>().sqrt();
        counts[*intent] += 1;
        if norm > 0.0 {
            for (i, x) in weighted {
                centroids[*intent][i] += x / norm;
            }
        }
    }
    for (c, &n) in centroids.iter_mut().zip(&counts) {
        for x in c.iter_mut() {
            *x /= n as f64;
        }
    }
    let centroid_norms = centroids
        .iter()
        .map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();

    Ok(IntentModel {
        intents,
        vocabulary,
        idf,
        centroids,
        centroid_norms,
        temperature,
    })
}

pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&l| (l - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

pub fn predict(model: &IntentModel, text: &str) -> IntentPrediction {
    let logits: Vec<f64> = model
        .similarities(text)
        .into_iter()
        .map(|s| s / model.temperature)
        .collect();
    let probs = softmax(&logits);
    // Intents are sorted, so the first maximum is the lexicographically smallest.
    let (best, &confidence) = probs
        .iter()
        .enumerate()
        .fold((0, &probs[0]), |acc, (i, p)| if *p > *acc.1 { (i, p) } else { acc });
    IntentPrediction {
        intent: model.intents[best].clone(),
        confidence,
        scores: model.intents.iter().cloned().zip(probs.iter().copied()).collect(),
    }
}

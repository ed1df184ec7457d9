//! Word-embedding tables and synonym lookup by cosine similarity.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::augment::levenshtein;

pub const DEFAULT_SYNONYMS_PER_TOKEN: usize = 5;
pub const DEFAULT_MIN_SIMILARITY: f64 = 0.55;

#[derive(Debug, Error)]
pub enum ThesaurusError {
    #[error("embedding header: {0}")]
    Header(String),
    #[error("embedding record {record}: {reason}")]
    Record { record: usize, reason: String },
    #[error("expected {expected} vectors, found {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("cosine of a zero vector")]
    ZeroVector,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbeddingFormat {
    Text,
    Binary,
}

impl EmbeddingFormat {
    /// `.bin` means binary, anything else text.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("bin") => EmbeddingFormat::Binary,
            _ => EmbeddingFormat::Text,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynonymCandidate {
    pub word: String,
    pub similarity: f64,
}

/// Source of synonyms for a single word.
pub trait Thesaurus: Send + Sync {
    /// Up to `k` synonyms of `word`, most similar first. Unknown words yield
    /// an empty list.
    fn synonyms(&self, word: &str, k: usize, min_similarity: f64) -> Vec<SynonymCandidate>;
}

/// Dense vectors keyed by lowercased word.
#[derive(Debug, Clone)]
pub struct EmbeddingTable {
    dim: usize,
    words: Vec<String>,
    index: HashMap<String, usize>,
    data: Vec<f32>,
    norms: Vec<f64>,
}

fn parse_header(line: &str) -> Result<(usize, usize), ThesaurusError> {
    let mut parts = line.split_whitespace();
    let parse = |p: Option<&str>, what: &str| -> Result<usize, ThesaurusError> {
        p.ok_or_else(|| ThesaurusError::Header(format!("missing {what}")))?
            .parse()
            .map_err(|_| ThesaurusError::Header(format!("invalid {what}")))
    };
    let count = parse(parts.next(), "vocabulary size")?;
    let dim = parse(parts.next(), "dimension")?;
    if parts.next().is_some() {
        return Err(ThesaurusError::Header("trailing fields".into()));
    }
    if dim == 0 {
        return Err(ThesaurusError::Header("dimension must be positive".into()));
    }
    Ok((count, dim))
}

struct Builder {
    dim: usize,
    words: Vec<String>,
    index: HashMap<String, usize>,
    data: Vec<f32>,
    norms: Vec<f64>,
}

impl Builder {
    fn new(dim: usize, capacity: usize) -> Self {
        Builder {
            dim,
            words: Vec::with_capacity(capacity),
            index: HashMap::with_capacity(capacity),
            data: Vec::with_capacity(capacity.saturating_mul(dim)),
            norms: Vec::with_capacity(capacity),
        }
    }

    fn push(&mut self, record: usize, word: &str, vector: &[f32]) -> Result<(), ThesaurusError> {
        if let Some(pos) = vector.iter().position(|v| !v.is_finite()) {
            return Err(ThesaurusError::Record {
                record,
                reason: format!("non-finite component at position {pos}"),
            });
        }
        let key = word.to_lowercase();
        if key.is_empty() {
            return Err(ThesaurusError::Record {
                record,
                reason: "empty word".into(),
            });
        }
        if self.index.contains_key(&key) {
            return Err(ThesaurusError::Record {
                record,
                reason: format!("duplicate word {key:?} after lowercasing"),
            });
        }
        self.index.insert(key.clone(), self.words.len());
        self.words.push(key);
        self.norms
            .push(vector.iter().map(|&x| f64::from(x) * f64::from(x)).sum::<f64>().sqrt());
        self.data.extend_from_slice(vector);
        Ok(())
    }

    fn finish(self, expected: usize) -> Result<EmbeddingTable, ThesaurusError> {
        if self.words.len() != expected {
            return Err(ThesaurusError::CountMismatch {
                expected,
                found: self.words.len(),
            });
        }
        if self.words.is_empty() {
            return Err(ThesaurusError::Header("empty vocabulary".into()));
        }
        Ok(EmbeddingTable {
            dim: self.dim,
            words: self.words,
            index: self.index,
            data: self.data,
            norms: self.norms,
        })
    }
}

impl EmbeddingTable {
    /// Builds a table from in-memory `(word, vector)` pairs.
    pub fn from_pairs<I, S>(pairs: I) -> Result<Self, ThesaurusError>
    where
        I: IntoIterator<Item = (S, Vec<f32>)>,
        S: AsRef<str>,
    {
        let pairs: Vec<(S, Vec<f32>)> = pairs.into_iter().collect();
        let dim = pairs.first().map(|(_, v)| v.len()).unwrap_or(0);
        if dim == 0 {
            return Err(ThesaurusError::Header("empty vocabulary".into()));
        }
        let mut builder = Builder::new(dim, pairs.len());
        for (record, (word, vector)) in pairs.iter().enumerate() {
            if vector.len() != dim {
                return Err(ThesaurusError::DimensionMismatch(dim, vector.len()));
            }
            builder.push(record + 1, word.as_ref(), vector)?;
        }
        builder.finish(pairs.len())
    }

    pub fn read_text(reader: impl BufRead) -> Result<Self, ThesaurusError> {
        let mut lines = reader.lines();
        let header = lines
            .next()
            .ok_or_else(|| ThesaurusError::Header("missing header".into()))??;
        let (count, dim) = parse_header(&header)?;
        let mut builder = Builder::new(dim, count.min(1 << 20));
        let mut vector = Vec::with_capacity(dim);
        let mut record = 0;
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            record += 1;
            if record > count {
                return Err(ThesaurusError::CountMismatch {
                    expected: count,
                    found: record,
                });
            }
            let mut fields = line.split_ascii_whitespace();
            let word = fields.next().unwrap_or_default();
            vector.clear();
            for f in fields {
                let v: f32 = f.parse().map_err(|_| ThesaurusError::Record {
                    record,
                    reason: format!("invalid number {f:?}"),
                })?;
                vector.push(v);
            }
            if vector.len() != dim {
                return Err(ThesaurusError::Record {
                    record,
                    reason: format!("expected {dim} components, found {}", vector.len()),
                });
            }
            builder.push(record, word, &vector)?;
        }
        builder.finish(count)
    }

    pub fn read_binary(mut reader: impl BufRead) -> Result<Self, ThesaurusError> {
        let mut header = String::new();
        reader.read_line(&mut header)?;
        if header.is_empty() {
            return Err(ThesaurusError::Header("missing header".into()));
        }
        let (count, dim) = parse_header(header.trim_end())?;
        let mut builder = Builder::new(dim, count.min(1 << 20));
        let mut word = Vec::new();
        let mut raw = vec![0u8; dim * 4];
        let mut vector = vec![0f32; dim];
        for record in 1..=count {
            word.clear();
            let n = reader.read_until(b' ', &mut word)?;
            if n == 0 {
                return Err(ThesaurusError::CountMismatch {
                    expected: count,
                    found: record - 1,
                });
            }
            if word.last() != Some(&b' ') {
                return Err(ThesaurusError::Record {
                    record,
                    reason: "truncated word".into(),
                });
            }
            word.pop();
            // Some writers put a newline after each vector.
            let start = word.iter().position(|&b| b != b'\n').unwrap_or(word.len());
            let text = std::str::from_utf8(&word[start..]).map_err(|_| ThesaurusError::Record {
                record,
                reason: "word is not UTF-8".into(),
            })?;
            reader.read_exact(&mut raw).map_err(|_| ThesaurusError::Record {
                record,
                reason: "truncated vector".into(),
            })?;
            for (v, chunk) in vector.iter_mut().zip(raw.chunks_exact(4)) {
                *v = f32::from_le_bytes([chunk[0], chunk[1], chunk[2], chunk[3]]);
            }
            builder.push(record, text, &vector)?;
        }
        builder.finish(count)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn vector(&self, word: &str) -> Option<&[f32]> {
        self.index
            .get(&word.to_lowercase())
            .map(|&i| &self.data[i * self.dim..(i + 1) * self.dim])
    }
}

/// Reads a word2vec file in the given format.
pub fn load_embeddings(path: impl AsRef<Path>, format: EmbeddingFormat) -> Result<EmbeddingTable, ThesaurusError> {
    let reader = BufReader::new(File::open(path)?);
    match format {
        EmbeddingFormat::Text => EmbeddingTable::read_text(reader),
        EmbeddingFormat::Binary => EmbeddingTable::read_binary(reader),
    }
}

pub fn cosine(u: &[f32], v: &[f32]) -> Result<f64, ThesaurusError> {
    if u.len() != v.len() {
        return Err(ThesaurusError::DimensionMismatch(u.len(), v.len()));
    }
    let (mut dot, mut nu, mut nv) = (0f64, 0f64, 0f64);
    for (&a, &b) in u.iter().zip(v) {
        let (a, b) = (f64::from(a), f64::from(b));
        dot += a * b;
        nu += a * a;
        nv += b * b;
    }
    if nu == 0.0 || nv == 0.0 {
        return Err(ThesaurusError::ZeroVector);
    }
    Ok(dot / (nu.sqrt() * nv.sqrt()))
}

fn normalize(word: &str) -> String {
    word.chars()
        .filter(|c| c.is_alphanumeric())
        .flat_map(char::to_lowercase)
        .collect()
}

/// Typos and inflections of `query`: edit distance at most one, or one word
/// equal to the other plus a suffix of at most two characters.
pub fn is_noise(query: &str, candidate: &str) -> bool {
    let q = normalize(query);
    let c = normalize(candidate);
    if levenshtein(&q, &c) <= 1 {
        return true;
    }
    let (short, long) = if q.chars().count() <= c.chars().count() {
        (&q, &c)
    } else {
        (&c, &q)
    };
    long.starts_with(short.as_str()) && long.chars().count() - short.chars().count() <= 2
}

fn accept(query: &str, candidate: &str) -> bool {
    normalize(query) != normalize(candidate) && !is_noise(query, candidate)
}

impl Thesaurus for EmbeddingTable {
    fn synonyms(&self, word: &str, k: usize, min_similarity: f64) -> Vec<SynonymCandidate> {
        let key = word.to_lowercase();
        let Some(&qi) = self.index.get(&key) else {
            return Vec::new();
        };
        let qn = self.norms[qi];
        if qn == 0.0 || k == 0 {
            return Vec::new();
        }
        let qv = &self.data[qi * self.dim..(qi + 1) * self.dim];
        let mut scored: Vec<(f64, usize)> = (0..self.words.len())
            .filter(|&i| i != qi && self.norms[i] > 0.0)
            .map(|i| {
                let v = &self.data[i * self.dim..(i + 1) * self.dim];
                let dot: f64 = qv.iter().zip(v).map(|(&a, &b)| f64::from(a) * f64::from(b)).sum();
                (dot / (qn * self.norms[i]), i)
            })
            .filter(|&(sim, _)| sim >= min_similarity)
            .collect();
        scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| self.words[a.1].cmp(&self.words[b.1])));
        scored
            .into_iter()
            .filter(|&(_, i)| accept(&key, &self.words[i]))
            .take(k)
            .map(|(sim, i)| SynonymCandidate {
                word: self.words[i].clone(),
                similarity: sim.clamp(-1.0, 1.0),
            })
            .collect()
    }
}

/// Hand-written synonym lists, e.g. for tests or curated domain vocabularies.
/// Every listed synonym reports similarity 1.0; list order is rank order.
#[derive(Debug, Clone, Default)]
pub struct StaticThesaurus {
    entries: BTreeMap<String, Vec<String>>,
}

impl StaticThesaurus {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, word: &str, synonyms: &[&str]) -> Self {
        self.entries
            .insert(word.to_lowercase(), synonyms.iter().map(|s| s.to_string()).collect());
        self
    }
}

impl Thesaurus for StaticThesaurus {
    fn synonyms(&self, word: &str, k: usize, _min_similarity: f64) -> Vec<SynonymCandidate> {
        let key = word.to_lowercase();
        self.entries
            .get(&key)
            .map(|list| {
                list.iter()
                    .filter(|s| accept(&key, s))
                    .take(k)
                    .map(|s| SynonymCandidate {
                        word: s.clone(),
                        similarity: 1.0,
                    })
                    .collect()
            })
            .unwrap_or_default()
    }
}

/// A thesaurus with no entries.
#[derive(Debug, Clone, Copy, Default)]
pub struct EmptyThesaurus;

impl Thesaurus for EmptyThesaurus {
    fn synonyms(&self, _word: &str, _k: usize, _min_similarity: f64) -> Vec<SynonymCandidate> {
        Vec::new()
    }
}

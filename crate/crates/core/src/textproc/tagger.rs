use std::collections::HashMap;
use std::path::Path;
use std::sync::OnceLock;

use thiserror::Error;

use super::{PosTag, Token};

static BUILTIN_LEXICON: &str = include_str!("../../data/lexicon.tsv");

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("lexicon line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("lexicon line {line}: duplicate word {word:?}")]
    Duplicate { line: usize, word: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Anything that assigns one tag per token. Implementations may look at
/// context; the built-in tagger does not.
pub trait PosTagger: Send + Sync {
    fn tag(&self, tokens: &[Token]) -> Vec<PosTag>;
}

/// Runs `tagger` and stores its tags on the tokens.
pub fn tag_pos(tagger: &dyn PosTagger, mut tokens: Vec<Token>) -> Vec<Token> {
    let tags = tagger.tag(&tokens);
    assert_eq!(tags.len(), tokens.len(), "tagger must return one tag per token");
    for (token, tag) in tokens.iter_mut().zip(tags) {
        token.pos = tag;
    }
    tokens
}

/// Lowercase lexicon lookup, then suffix rules, then NOUN.
#[derive(Debug, Clone, Default)]
pub struct LexiconTagger {
    lexicon: HashMap<String, PosTag>,
}

const SUFFIX_RULES: &[(&str, PosTag)] = &[
    ("ing", PosTag::Verb),
    ("ize", PosTag::Verb),
    ("ify", PosTag::Verb),
    ("ly", PosTag::Adv),
    ("ous", PosTag::Adj),
    ("ful", PosTag::Adj),
];

impl LexiconTagger {
    /// The tagger over the bundled lexicon.
    pub fn builtin() -> &'static LexiconTagger {
        static TAGGER: OnceLock<LexiconTagger> = OnceLock::new();
        TAGGER.get_or_init(|| LexiconTagger::from_tsv(BUILTIN_LEXICON).expect("bundled lexicon is well-formed"))
    }

    /// Parses `word<TAB>TAG` lines.
    pub fn from_tsv(content: &str) -> Result<Self, LexiconError> {
        let mut lexicon = HashMap::new();
        for (idx, raw) in content.lines().enumerate() {
            let line = idx + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let (word, tag) = raw.split_once('\t').ok_or_else(|| LexiconError::Malformed {
                line,
                reason: "expected `word<TAB>TAG`".into(),
            })?;
            let tag: PosTag = tag.parse().map_err(|reason| LexiconError::Malformed { line, reason })?;
            let word = word.trim().to_lowercase();
            if lexicon.insert(word.clone(), tag).is_some() {
                return Err(LexiconError::Duplicate { line, word });
            }
        }
        Ok(LexiconTagger { lexicon })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        Self::from_tsv(&std::fs::read_to_string(path)?)
    }

    pub fn len(&self) -> usize {
        self.lexicon.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lexicon.is_empty()
    }

    pub fn tag_word(&self, word: &str) -> PosTag {
        let lower = word.to_lowercase();
        if let Some(&tag) = self.lexicon.get(&lower) {
            return tag;
        }
        if !lower.is_empty() && lower.chars().all(|c| c.is_ascii_digit()) {
            return PosTag::Num;
        }
        if !lower.is_empty() && lower.chars().all(|c| !c.is_alphanumeric()) {
            return PosTag::Punct;
        }
        for &(suffix, tag) in SUFFIX_RULES {
            // Require a stem of at least two characters: "sly" and "ring" are not rule hits.
            if lower.len() >= suffix.len() + 2 && lower.ends_with(suffix) {
                return tag;
            }
        }
        PosTag::Noun
    }
}

impl PosTagger for LexiconTagger {
    fn tag(&self, tokens: &[Token]) -> Vec<PosTag> {
        tokens.iter().map(|t| self.tag_word(&t.text)).collect()
    }
}

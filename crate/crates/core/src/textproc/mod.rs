//! Tokenization and part-of-speech tagging.

mod tagger;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::EntitySpan;

pub use tagger::{tag_pos, LexiconError, LexiconTagger, PosTagger};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PosTag {
    Verb,
    Noun,
    Adj,
    Adv,
    Pron,
    Det,
    Adp,
    Num,
    Punct,
    Other,
}

impl PosTag {
    pub const ALL: [PosTag; 10] = [
        PosTag::Verb,
        PosTag::Noun,
        PosTag::Adj,
        PosTag::Adv,
        PosTag::Pron,
        PosTag::Det,
        PosTag::Adp,
        PosTag::Num,
        PosTag::Punct,
        PosTag::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::Verb => "VERB",
            PosTag::Noun => "NOUN",
            PosTag::Adj => "ADJ",
            PosTag::Adv => "ADV",
            PosTag::Pron => "PRON",
            PosTag::Det => "DET",
            PosTag::Adp => "ADP",
            PosTag::Num => "NUM",
            PosTag::Punct => "PUNCT",
            PosTag::Other => "OTHER",
        }
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PosTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.trim().to_ascii_uppercase();
        PosTag::ALL
            .into_iter()
            .find(|t| t.as_str() == upper)
            .ok_or_else(|| format!("unknown POS tag {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    /// Character offsets into the source text.
    pub start: usize,
    pub end: usize,
    pub pos: PosTag,
    pub inside_entity: bool,
}

/// Characters split off the edges of a whitespace chunk.
fn is_edge_punct(c: char) -> bool {
    matches!(
        c,
        '.' | ','
            | ';'
            | ':'
            | '!'
            | '?'
            | '('
            | ')'
            | '['
            | ']'
            | '{'
            | '}'
            | '"'
            | '\''
            | '¿'
            | '¡'
            | '…'
            | '“'
            | '”'
            | '‘'
            | '’'
            | '«'
            | '»'
    )
}

/// Splits on whitespace, then detaches leading and trailing punctuation as
/// one-character tokens. Inner punctuation (hyphens, dots in versions,
/// apostrophes in contractions) stays in the word.
///
/// Tokens come back tagged [`PosTag::Other`], or [`PosTag::Punct`] for
/// detached punctuation; run a [`PosTagger`] to assign real tags.
pub fn tokenize(text: &str, entity_spans: &[EntitySpan]) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut push = |start: usize, end: usize, pos: PosTag| {
        tokens.push(Token {
            text: chars[start..end].iter().collect(),
            start,
            end,
            pos,
            inside_entity: entity_spans.iter().any(|s| s.overlaps(start, end)),
        });
    };

    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let chunk_start = i;
        while i < chars.len() && !chars[i].is_whitespace() {
            i += 1;
        }
        let chunk_end = i;

        let mut lo = chunk_start;
        while lo < chunk_end && is_edge_punct(chars[lo]) {
            lo += 1;
        }
        let mut hi = chunk_end;
        while hi > lo && is_edge_punct(chars[hi - 1]) {
            hi -= 1;
        }
        for p in chunk_start..lo {
            push(p, p + 1, PosTag::Punct);
        }
        if lo < hi {
            push(lo, hi, PosTag::Other);
        }
        for p in hi..chunk_end {
            push(p, p + 1, PosTag::Punct);
        }
    }
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn question_tokens() {
        let tokens = tokenize("What files cause the most issues?", &[]);
        let texts: Vec<&str> = tokens.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, ["What", "files", "cause", "the", "most", "issues", "?"]);
        assert_eq!(tokens[6].pos, PosTag::Punct);
    }

    #[test]
    fn entity_flag() {
        let span = EntitySpan {
            entity_type: "BugId".into(),
            value: "5".into(),
            start: 8,
            end: 9,
        };
        let tokens = tokenize("fix bug 5", &[span]);
        assert_eq!(tokens.len(), 3);
        assert!(tokens[2].inside_entity);
        assert!(!tokens[0].inside_entity);
    }

    #[test]
    fn single_and_inner_punctuation() {
        assert_eq!(tokenize("a", &[]).len(), 1);
        let texts: Vec<String> = tokenize("(re-open) Ubuntu 14.04.1? didn't", &[])
            .into_iter()
            .map(|t| t.text)
            .collect();
        assert_eq!(texts, ["(", "re-open", ")", "Ubuntu", "14.04.1", "?", "didn't"]);
    }

    #[test]
    fn tokens_reconstruct_source() {
        let text = "  Show me   \"ConsumerRecords\"... now!";
        let tokens = tokenize(text, &[]);
        let chars: Vec<char> = text.chars().collect();
        let mut rebuilt: Vec<char> = chars
            .iter()
            .map(|c| if c.is_whitespace() { *c } else { '\0' })
            .collect();
        for t in &tokens {
            for (j, c) in t.text.chars().enumerate() {
                assert_eq!(rebuilt[t.start + j], '\0');
                rebuilt[t.start + j] = c;
            }
        }
        assert_eq!(rebuilt, chars);
    }
}

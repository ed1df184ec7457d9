//! Inline entity markup: `How to upgrade Ubuntu [14.04.1](UbuntuVersion)?`.
//!
//! All offsets are character (Unicode scalar value) offsets.

use thiserror::Error;

use super::EntitySpan;

/// Malformed markup. Each variant carries the character offset in the markup
/// string where the problem was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MarkupError {
    #[error("unbalanced markup at offset {0}")]
    Unbalanced(usize),
    #[error("empty entity value at offset {0}")]
    EmptyValue(usize),
    #[error("empty entity type at offset {0}")]
    EmptyType(usize),
    #[error("invalid entity type at offset {0}")]
    InvalidType(usize),
    #[error("nested entity markup at offset {0}")]
    Nested(usize),
}

/// Spans that cannot be rendered against a plain string.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpanError {
    #[error("span {index} is out of bounds")]
    OutOfBounds { index: usize },
    #[error("span {index} value does not match the text")]
    ValueMismatch { index: usize },
    #[error("span {index} overlaps or precedes the previous span")]
    Overlap { index: usize },
    #[error("span {index} has an invalid entity type")]
    InvalidType { index: usize },
    #[error("plain text contains a reserved bracket at offset {0}")]
    ReservedChar(usize),
}

pub(crate) fn is_valid_type(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Splits annotated text into its plain form and the entity spans it marks.
pub fn parse_annotated(markup: &str) -> Result<(String, Vec<EntitySpan>), MarkupError> {
    let chars: Vec<char> = markup.chars().collect();
    let mut plain = String::with_capacity(markup.len());
    let mut plain_len = 0usize;
    let mut spans = Vec::new();
    let mut i = 0;

    while i < chars.len() {
        match chars[i] {
            '[' => {
                let open = i;
                let value_start = plain_len;
                let mut value = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => return Err(MarkupError::Unbalanced(chars.len() - 1)),
                        Some('[') => return Err(MarkupError::Nested(i)),
                        Some(']') => break,
                        Some(&c) => {
                            value.push(c);
                            i += 1;
                        }
                    }
                }
                if value.is_empty() {
                    return Err(MarkupError::EmptyValue(open));
                }
                // `]` must be followed directly by `(Type)`.
                i += 1;
                if chars.get(i) != Some(&'(') {
                    return Err(MarkupError::Unbalanced(i.min(chars.len() - 1)));
                }
                i += 1;
                let type_start = i;
                let mut entity_type = String::new();
                loop {
                    match chars.get(i) {
                        None => return Err(MarkupError::Unbalanced(chars.len() - 1)),
                        Some(')') => break,
                        Some('[') | Some('(') => return Err(MarkupError::Nested(i)),
                        Some(&c) => {
                            entity_type.push(c);
                            i += 1;
                        }
                    }
                }
                if entity_type.is_empty() {
                    return Err(MarkupError::EmptyType(type_start));
                }
                if !is_valid_type(&entity_type) {
                    return Err(MarkupError::InvalidType(type_start));
                }
                i += 1;
                let value_len = value.chars().count();
                plain.push_str(&value);
                plain_len += value_len;
                spans.push(EntitySpan {
                    entity_type,
                    value,
                    start: value_start,
                    end: value_start + value_len,
                });
            }
            ']' => return Err(MarkupError::Unbalanced(i)),
            c => {
                plain.push(c);
                plain_len += 1;
                i += 1;
            }
        }
    }
    Ok((plain, spans))
}

/// Checks spans against `plain`: in bounds, matching values, textual order,
/// no overlap, well-formed types.
pub fn validate_spans(plain: &str, spans: &[EntitySpan]) -> Result<(), SpanError> {
    let chars: Vec<char> = plain.chars().collect();
    let mut prev_end = 0;
    for (index, span) in spans.iter().enumerate() {
        if span.start >= span.end || span.end > chars.len() {
            return Err(SpanError::OutOfBounds { index });
        }
        if index > 0 && span.start < prev_end {
            return Err(SpanError::Overlap { index });
        }
        let value: String = chars[span.start..span.end].iter().collect();
        if value != span.value {
            return Err(SpanError::ValueMismatch { index });
        }
        if !is_valid_type(&span.entity_type) {
            return Err(SpanError::InvalidType { index });
        }
        prev_end = span.end;
    }
    Ok(())
}

/// Inverse of [`parse_annotated`].
pub fn render_annotated(plain: &str, spans: &[EntitySpan]) -> Result<String, SpanError> {
    if let Some(pos) = plain.chars().position(|c| c == '[' || c == ']') {
        return Err(SpanError::ReservedChar(pos));
    }
    validate_spans(plain, spans)?;

    let chars: Vec<char> = plain.chars().collect();
    let mut out = String::with_capacity(plain.len() + spans.len() * 8);
    let mut cursor = 0;
    for span in spans {
        out.extend(&chars[cursor..span.start]);
        out.push('[');
        out.push_str(&span.value);
        out.push_str("](");
        out.push_str(&span.entity_type);
        out.push(')');
        cursor = span.end;
    }
    out.extend(&chars[cursor..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span(t: &str, v: &str, s: usize, e: usize) -> EntitySpan {
        EntitySpan {
            entity_type: t.into(),
            value: v.into(),
            start: s,
            end: e,
        }
    }

    #[test]
    fn ubuntu_versions() {
        let (plain, spans) =
            parse_annotated("How to upgrade Ubuntu [14.04.1](UbuntuVersion) to [14.04.2](UbuntuVersion)?").unwrap();
        assert_eq!(plain, "How to upgrade Ubuntu 14.04.1 to 14.04.2?");
        assert_eq!(
            spans,
            vec![
                span("UbuntuVersion", "14.04.1", 22, 29),
                span("UbuntuVersion", "14.04.2", 33, 40)
            ]
        );
    }

    #[test]
    fn no_markup() {
        assert_eq!(
            parse_annotated("no entities here").unwrap(),
            ("no entities here".to_string(), vec![])
        );
    }

    #[test]
    fn unterminated_type() {
        assert_eq!(parse_annotated("fix [a](T"), Err(MarkupError::Unbalanced(8)));
    }

    #[test]
    fn malformed_inputs() {
        assert_eq!(parse_annotated("[](T)"), Err(MarkupError::EmptyValue(0)));
        assert_eq!(parse_annotated("[a]()"), Err(MarkupError::EmptyType(4)));
        assert_eq!(parse_annotated("[a [b](T)](U)"), Err(MarkupError::Nested(3)));
        assert_eq!(parse_annotated("a ] b"), Err(MarkupError::Unbalanced(2)));
        assert_eq!(parse_annotated("[a] b"), Err(MarkupError::Unbalanced(3)));
        assert_eq!(parse_annotated("[a](9x)"), Err(MarkupError::InvalidType(4)));
        assert!(matches!(parse_annotated("[abc"), Err(MarkupError::Unbalanced(_))));
    }

    #[test]
    fn plain_parentheses_pass_through() {
        let (plain, spans) = parse_annotated("open (the) [file](FileName)").unwrap();
        assert_eq!(plain, "open (the) file");
        assert_eq!(spans, vec![span("FileName", "file", 11, 15)]);
    }

    #[test]
    fn offsets_are_characters() {
        let (plain, spans) = parse_annotated("héllo [wörld](W)").unwrap();
        assert_eq!(plain, "héllo wörld");
        assert_eq!(spans[0].start, 6);
        assert_eq!(spans[0].end, 11);
    }

    #[test]
    fn render_examples() {
        assert_eq!(
            render_annotated("fix bug 5", &[span("BugId", "5", 8, 9)]).unwrap(),
            "fix bug [5](BugId)"
        );
        assert_eq!(render_annotated("x", &[]).unwrap(), "x");
        let original = "How to upgrade Ubuntu [14.04.1](UbuntuVersion) to [14.04.2](UbuntuVersion)?";
        let (p, s) = parse_annotated(original).unwrap();
        assert_eq!(render_annotated(&p, &s).unwrap(), original);
    }

    #[test]
    fn render_rejects_bad_spans() {
        assert_eq!(
            render_annotated("fix", &[span("T", "x", 0, 1)]),
            Err(SpanError::ValueMismatch { index: 0 })
        );
        assert_eq!(
            render_annotated("fix", &[span("T", "fix", 0, 4)]),
            Err(SpanError::OutOfBounds { index: 0 })
        );
        assert_eq!(
            render_annotated("abcd", &[span("T", "abc", 0, 3), span("T", "bc", 1, 3)]),
            Err(SpanError::Overlap { index: 1 })
        );
        assert_eq!(render_annotated("a [b]", &[]), Err(SpanError::ReservedChar(2)));
    }
}

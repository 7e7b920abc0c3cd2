use serde::Serialize;

use super::QueryError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Keyword {
    Merge,
    Match,
    Where,
    Contains,
    Return,
    Limit,
}

impl Keyword {
    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Merge => "MERGE",
            Keyword::Match => "MATCH",
            Keyword::Where => "WHERE",
            Keyword::Contains => "CONTAINS",
            Keyword::Return => "RETURN",
            Keyword::Limit => "LIMIT",
        }
    }

    fn lookup(word: &str) -> Option<Keyword> {
        [
            Keyword::Merge,
            Keyword::Match,
            Keyword::Where,
            Keyword::Contains,
            Keyword::Return,
            Keyword::Limit,
        ]
        .into_iter()
        .find(|k| k.as_str().eq_ignore_ascii_case(word))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum TokenKind {
    Keyword(Keyword),
    Identifier(String),
    /// Decoded contents of a single-quoted literal.
    StringLiteral(String),
    Number(f64),
    /// Parameter name without the `$`.
    Parameter(String),
    Punct(char),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Token {
    pub kind: TokenKind,
    /// The exact source slice.
    pub text: String,
    /// Byte offset of `text` in the input.
    pub offset: usize,
}

const PUNCT: &[char] = &[
    '(', ')', '[', ']', '{', '}', ':', ',', '.', '-', '>', '<', ';',
];

/// Splits `input` into tokens. Whitespace separates tokens and is not kept;
/// it can be recovered from the offsets.
pub fn tokenize(input: &str) -> Result<Vec<Token>, QueryError> {
    let bytes = input.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;

    while i < bytes.len() {
        let c = input[i..].chars().next().expect("in bounds");
        let start = i;

        let kind = if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        } else if c == '\'' {
            let (value, end) = lex_string(input, start)?;
            i = end;
            TokenKind::StringLiteral(value)
        } else if c == '$' {
            i += 1;
            let end = scan_ident(bytes, i);
            if end == i {
                return Err(QueryError::Lex {
                    offset: start,
                    message: "expected parameter name after `$`".into(),
                });
            }
            i = end;
            TokenKind::Parameter(input[start + 1..end].to_string())
        } else if c.is_ascii_digit() {
            i = scan_number(bytes, i);
            let value = input[start..i].parse().map_err(|_| QueryError::Lex {
                offset: start,
                message: "invalid number".into(),
            })?;
            TokenKind::Number(value)
        } else if c.is_ascii_alphabetic() || c == '_' {
            i = scan_ident(bytes, i);
            let word = &input[start..i];
            match Keyword::lookup(word) {
                Some(k) => TokenKind::Keyword(k),
                None => TokenKind::Identifier(word.to_string()),
            }
        } else if PUNCT.contains(&c) {
            i += 1;
            TokenKind::Punct(c)
        } else {
            return Err(QueryError::Lex {
                offset: start,
                message: format!("illegal character `{c}`"),
            });
        };

        tokens.push(Token {
            kind,
            text: input[start..i].to_string(),
            offset: start,
        });
    }
    Ok(tokens)
}

fn scan_ident(bytes: &[u8], mut i: usize) -> usize {
    while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
        i += 1;
    }
    i
}

fn scan_number(bytes: &[u8], mut i: usize) -> usize {
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    if i + 1 < bytes.len() && bytes[i] == b'.' && bytes[i + 1].is_ascii_digit() {
        i += 1;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
    }
    i
}

/// Lexes a single-quoted literal starting at `start`; returns the decoded
/// value and the offset just past the closing quote.
fn lex_string(input: &str, start: usize) -> Result<(String, usize), QueryError> {
    let mut value = String::new();
    let mut chars = input[start + 1..].char_indices();
    while let Some((off, c)) = chars.next() {
        match c {
            '\'' => return Ok((value, start + 1 + off + 1)),
            '\\' => {
                let Some((esc_off, e)) = chars.next() else {
                    break;
                };
                value.push(match e {
                    'n' => '\n',
                    't' => '\t',
                    'r' => '\r',
                    '\\' | '\'' | '"' => e,
                    other => {
                        return Err(QueryError::Lex {
                            offset: start + 1 + esc_off,
                            message: format!("unknown escape `\\{other}`"),
                        })
                    }
                });
            }
            c => value.push(c),
        }
    }
    Err(QueryError::Lex {
        offset: start,
        message: "unterminated string literal".into(),
    })
}

/// Escapes `s` as a single-quoted literal that [`tokenize`] decodes back to
/// `s`.
pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('\'');
    for c in s.chars() {
        match c {
            '\'' => out.push_str("\\'"),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('\'');
    out
}

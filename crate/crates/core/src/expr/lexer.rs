use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::ExprError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Number,
    /// `{t}`, the main timescale.
    TimeT,
    /// `{t0}`, entry time into the current state.
    TimeT0,
    Identifier,
    /// One of `+ - * / ^`; the lexeme holds the plain form even when the source
    /// used colon notation.
    Operator,
    LParen,
    RParen,
    Comma,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    /// 0-based character offset into the source.
    pub position: usize,
}

impl Token {
    fn new(kind: TokenKind, lexeme: impl Into<String>, position: usize) -> Self {
        Self {
            kind,
            lexeme: lexeme.into(),
            position,
        }
    }
}

fn is_operator(c: char) -> bool {
    matches!(c, '+' | '-' | '*' | '/' | '^')
}

/// Split a hazard expression into tokens.
///
/// Colon operators (`:*`, `:^`, ...) produce the same token as the plain
/// operator. Whitespace is skipped.
pub fn tokenize(source: &str) -> Result<Vec<Token>, ExprError> {
    let chars: Vec<char> = source.chars().collect();
    if chars.iter().all(|c| c.is_whitespace()) {
        return Err(ExprError::EmptySource);
    }

    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        match c {
            ':' => match chars.get(i + 1) {
                Some(&op) if is_operator(op) => {
                    tokens.push(Token::new(TokenKind::Operator, op.to_string(), i));
                    i += 2;
                }
                _ => return Err(ExprError::UnexpectedChar { ch: ':', offset: i }),
            },
            _ if is_operator(c) => {
                tokens.push(Token::new(TokenKind::Operator, c.to_string(), i));
                i += 1;
            }
            '(' => {
                tokens.push(Token::new(TokenKind::LParen, "(", i));
                i += 1;
            }
            ')' => {
                tokens.push(Token::new(TokenKind::RParen, ")", i));
                i += 1;
            }
            ',' => {
                tokens.push(Token::new(TokenKind::Comma, ",", i));
                i += 1;
            }
            '{' => {
                let close = chars[i + 1..]
                    .iter()
                    .position(|&c| c == '}')
                    .ok_or(ExprError::UnterminatedBrace { offset: i })?;
                let content: String = chars[i + 1..i + 1 + close].iter().collect();
                let kind = match content.trim() {
                    "t" => TokenKind::TimeT,
                    "t0" => TokenKind::TimeT0,
                    _ => return Err(ExprError::InvalidTimeVariable { content, offset: i }),
                };
                let lexeme: String = chars[i..i + close + 2].iter().collect();
                tokens.push(Token::new(kind, lexeme, i));
                i += close + 2;
            }
            _ if c.is_ascii_digit() || c == '.' => {
                let start = i;
                let end = scan_number(&chars, i);
                let lexeme: String = chars[start..end].iter().collect();
                match lexeme.parse::<f64>() {
                    Ok(v) if v.is_finite() => {}
                    _ => return Err(ExprError::InvalidNumber { lexeme, offset: start }),
                }
                tokens.push(Token::new(TokenKind::Number, lexeme, start));
                i = end;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let lexeme: String = chars[start..i].iter().collect();
                tokens.push(Token::new(TokenKind::Identifier, lexeme, start));
            }
            _ => return Err(ExprError::UnexpectedChar { ch: c, offset: i }),
        }
    }
    Ok(tokens)
}

// digits [. digits] [(e|E) [+-] digits]
fn scan_number(chars: &[char], mut i: usize) -> usize {
    while i < chars.len() && chars[i].is_ascii_digit() {
        i += 1;
    }
    if i < chars.len() && chars[i] == '.' {
        i += 1;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
    }
    if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
        let mut j = i + 1;
        if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
            j += 1;
        }
        if j < chars.len() && chars[j].is_ascii_digit() {
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            i = j;
        }
    }
    i
}

//! Tokenizer for `.lud` game descriptions.
//!
//! The token grammar is deliberately small: parentheses, braces, identifiers,
//! `name:` prefixes for named arguments, non-negative decimal integers and
//! double-quoted strings without escapes. There are no comments.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// 1-based line and column of a source character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl Pos {
    pub const fn new(line: u32, col: u32) -> Self {
        Pos { line, col }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    LParen,
    RParen,
    LBrace,
    RBrace,
    Ident,
    Str,
    Int,
    NamedArg,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Source lexeme; unquoted for strings, without the colon for named args.
    pub text: String,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexError {
    #[error("unexpected character {ch:?} at {pos}")]
    UnexpectedCharacter { ch: char, pos: Pos },
    #[error("unterminated string starting at {pos}")]
    UnterminatedString { pos: Pos },
}

impl LexError {
    pub fn pos(&self) -> Pos {
        match self {
            LexError::UnexpectedCharacter { pos, .. } | LexError::UnterminatedString { pos } => *pos,
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn is_delimiter(c: char) -> bool {
    c.is_whitespace() || matches!(c, '(' | ')' | '{' | '}' | '"')
}

struct Cursor<'a> {
    chars: core::iter::Peekable<core::str::Chars<'a>>,
    pos: Pos,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            chars: text.chars().peekable(),
            pos: Pos::new(1, 1),
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }
}

/// Splits `text` into tokens. Empty input yields an empty list.
pub fn tokenize(text: &str) -> Result<Vec<Token>, LexError> {
    let mut cur = Cursor::new(text);
    let mut out = Vec::new();

    while let Some(c) = cur.peek() {
        let start = cur.pos;
        let single = |kind, s: &str| Token {
            kind,
            text: String::from(s),
            pos: start,
        };
        match c {
            _ if c.is_whitespace() => {
                cur.bump();
            }
            '(' => {
                cur.bump();
                out.push(single(TokenKind::LParen, "("));
            }
            ')' => {
                cur.bump();
                out.push(single(TokenKind::RParen, ")"));
            }
            '{' => {
                cur.bump();
                out.push(single(TokenKind::LBrace, "{"));
            }
            '}' => {
                cur.bump();
                out.push(single(TokenKind::RBrace, "}"));
            }
            '"' => {
                cur.bump();
                let mut value = String::new();
                loop {
                    match cur.bump() {
                        Some('"') => break,
                        Some(ch) => value.push(ch),
                        None => return Err(LexError::UnterminatedString { pos: start }),
                    }
                }
                out.push(Token {
                    kind: TokenKind::Str,
                    text: value,
                    pos: start,
                });
            }
            _ if c.is_ascii_digit() => {
                let mut digits = String::new();
                while let Some(d) = cur.peek().filter(char::is_ascii_digit) {
                    digits.push(d);
                    cur.bump();
                }
                if let Some(next) = cur.peek().filter(|n| !is_delimiter(*n)) {
                    return Err(LexError::UnexpectedCharacter {
                        ch: next,
                        pos: cur.pos,
                    });
                }
                out.push(Token {
                    kind: TokenKind::Int,
                    text: digits,
                    pos: start,
                });
            }
            _ if is_ident_start(c) => {
                let mut ident = String::new();
                while let Some(d) = cur.peek().filter(|d| is_ident_char(*d)) {
                    ident.push(d);
                    cur.bump();
                }
                let kind = if cur.peek() == Some(':') {
                    cur.bump();
                    TokenKind::NamedArg
                } else {
                    TokenKind::Ident
                };
                if let Some(next) = cur.peek().filter(|n| kind == TokenKind::Ident && !is_delimiter(*n)) {
                    return Err(LexError::UnexpectedCharacter {
                        ch: next,
                        pos: cur.pos,
                    });
                }
                out.push(Token {
                    kind,
                    text: ident,
                    pos: start,
                });
            }
            other => {
                return Err(LexError::UnexpectedCharacter {
                    ch: other,
                    pos: start,
                })
            }
        }
    }
    Ok(out)
}

/// Position just past the last character of `text`.
pub fn end_pos(text: &str) -> Pos {
    let mut pos = Pos::new(1, 1);
    for c in text.chars() {
        if c == '\n' {
            pos.line += 1;
            pos.col = 1;
        } else {
            pos.col += 1;
        }
    }
    pos
}

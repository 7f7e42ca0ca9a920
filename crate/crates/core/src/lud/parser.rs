//! Recursive-descent parser producing [`LudemeNode`] trees.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use super::lexer::{end_pos, tokenize, LexError, Pos, Token, TokenKind};

/// Nesting deeper than this is rejected rather than risking the stack.
pub const MAX_DEPTH: usize = 256;

/// An argument value inside a ludeme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Int(u64),
    Str(String),
    Ident(String),
    Node(Box<LudemeNode>),
    List(Vec<Value>),
}

impl Value {
    pub fn as_node(&self) -> Option<&LudemeNode> {
        match self {
            Value::Node(n) => Some(n),
            _ => None,
        }
    }

    pub fn describe(&self) -> &'static str {
        match self {
            Value::Int(_) => "integer",
            Value::Str(_) => "string",
            Value::Ident(_) => "identifier",
            Value::Node(_) => "ludeme",
            Value::List(_) => "list",
        }
    }
}

/// One parenthesised ludeme: `(name arg... key:value...)`.
///
/// Equality is structural and ignores source positions.
#[derive(Debug, Clone, Eq)]
pub struct LudemeNode {
    pub name: String,
    pub positional: Vec<Value>,
    pub named: BTreeMap<String, Value>,
    pub pos: Pos,
}

impl PartialEq for LudemeNode {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.positional == other.positional && self.named == other.named
    }
}

impl LudemeNode {
    pub fn new(name: impl Into<String>) -> Self {
        LudemeNode {
            name: name.into(),
            positional: Vec::new(),
            named: BTreeMap::new(),
            pos: Pos::default(),
        }
    }

    pub fn with_arg(mut self, value: Value) -> Self {
        self.positional.push(value);
        self
    }

    pub fn with_named(mut self, name: impl Into<String>, value: Value) -> Self {
        self.named.insert(name.into(), value);
        self
    }

    pub fn arg_count(&self) -> usize {
        self.positional.len() + self.named.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error("empty input")]
    EmptyInput,
    #[error("unbalanced delimiter at {pos}")]
    UnbalancedDelimiter { pos: Pos },
    #[error("trailing content at {pos}")]
    TrailingContent { pos: Pos },
    #[error("root ludeme must be `game`, found `{name}`")]
    RootNotGame { name: String },
    #[error("unexpected {found} at {pos}: expected {expected}")]
    UnexpectedToken {
        found: &'static str,
        expected: &'static str,
        pos: Pos,
    },
    #[error("integer literal {text} at {pos} is too large")]
    IntegerOverflow { text: String, pos: Pos },
    #[error("named argument `{name}` repeated at {pos}")]
    DuplicateNamedArg { name: String, pos: Pos },
    #[error("nesting deeper than {MAX_DEPTH} at {pos}")]
    TooDeep { pos: Pos },
}

impl ParseError {
    /// Source position the error points at, if any.
    pub fn pos(&self) -> Option<Pos> {
        match self {
            ParseError::Lex(e) => Some(e.pos()),
            ParseError::EmptyInput | ParseError::RootNotGame { .. } => None,
            ParseError::UnbalancedDelimiter { pos }
            | ParseError::TrailingContent { pos }
            | ParseError::UnexpectedToken { pos, .. }
            | ParseError::IntegerOverflow { pos, .. }
            | ParseError::DuplicateNamedArg { pos, .. }
            | ParseError::TooDeep { pos } => Some(*pos),
        }
    }
}

fn describe(kind: TokenKind) -> &'static str {
    match kind {
        TokenKind::LParen => "`(`",
        TokenKind::RParen => "`)`",
        TokenKind::LBrace => "`{`",
        TokenKind::RBrace => "`}`",
        TokenKind::Ident => "identifier",
        TokenKind::Str => "string",
        TokenKind::Int => "integer",
        TokenKind::NamedArg => "named argument",
    }
}

struct Parser<'t> {
    tokens: &'t [Token],
    at: usize,
    /// Reported for errors found at end of input.
    eof: Pos,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.at)
    }

    fn next(&mut self) -> Option<&'t Token> {
        let t = self.tokens.get(self.at)?;
        self.at += 1;
        Some(t)
    }

    fn node(&mut self, depth: usize) -> Result<LudemeNode, ParseError> {
        let open = self.next().expect("caller checked for `(`");
        if depth >= MAX_DEPTH {
            return Err(ParseError::TooDeep { pos: open.pos });
        }
        let name = match self.next() {
            Some(t) if t.kind == TokenKind::Ident => t.text.clone(),
            Some(t) if matches!(t.kind, TokenKind::RBrace) => {
                return Err(ParseError::UnbalancedDelimiter { pos: t.pos })
            }
            Some(t) => {
                return Err(ParseError::UnexpectedToken {
                    found: describe(t.kind),
                    expected: "ludeme name",
                    pos: t.pos,
                })
            }
            None => return Err(ParseError::UnbalancedDelimiter { pos: self.eof }),
        };
        let mut node = LudemeNode {
            name,
            positional: Vec::new(),
            named: BTreeMap::new(),
            pos: open.pos,
        };
        loop {
            let Some(t) = self.peek() else {
                return Err(ParseError::UnbalancedDelimiter { pos: self.eof });
            };
            match t.kind {
                TokenKind::RParen => {
                    self.at += 1;
                    return Ok(node);
                }
                TokenKind::RBrace => return Err(ParseError::UnbalancedDelimiter { pos: t.pos }),
                TokenKind::NamedArg => {
                    self.at += 1;
                    let value = match self.peek() {
                        Some(v) if matches!(v.kind, TokenKind::RParen | TokenKind::NamedArg) => {
                            return Err(ParseError::UnexpectedToken {
                                found: describe(v.kind),
                                expected: "argument value",
                                pos: v.pos,
                            })
                        }
                        _ => self.value(depth + 1)?,
                    };
                    if node.named.insert(t.text.clone(), value).is_some() {
                        return Err(ParseError::DuplicateNamedArg {
                            name: t.text.clone(),
                            pos: t.pos,
                        });
                    }
                }
                _ => {
                    let v = self.value(depth + 1)?;
                    node.positional.push(v);
                }
            }
        }
    }

    fn list(&mut self, depth: usize) -> Result<Vec<Value>, ParseError> {
        let open = self.next().expect("caller checked for `{`");
        if depth >= MAX_DEPTH {
            return Err(ParseError::TooDeep { pos: open.pos });
        }
        let mut items = Vec::new();
        loop {
            match self.peek() {
                None => return Err(ParseError::UnbalancedDelimiter { pos: self.eof }),
                Some(t) if t.kind == TokenKind::RBrace => {
                    self.at += 1;
                    return Ok(items);
                }
                Some(t) if t.kind == TokenKind::RParen => {
                    return Err(ParseError::UnbalancedDelimiter { pos: t.pos })
                }
                Some(t) if t.kind == TokenKind::NamedArg => {
                    return Err(ParseError::UnexpectedToken {
                        found: describe(t.kind),
                        expected: "list element",
                        pos: t.pos,
                    })
                }
                Some(_) => items.push(self.value(depth + 1)?),
            }
        }
    }

    fn value(&mut self, depth: usize) -> Result<Value, ParseError> {
        let Some(t) = self.peek() else {
            return Err(ParseError::UnbalancedDelimiter { pos: self.eof });
        };
        match t.kind {
            TokenKind::LParen => Ok(Value::Node(Box::new(self.node(depth)?))),
            TokenKind::LBrace => Ok(Value::List(self.list(depth)?)),
            TokenKind::Int => {
                self.at += 1;
                t.text
                    .parse::<u64>()
                    .map(Value::Int)
                    .map_err(|_| ParseError::IntegerOverflow {
                        text: t.text.clone(),
                        pos: t.pos,
                    })
            }
            TokenKind::Str => {
                self.at += 1;
                Ok(Value::Str(t.text.clone()))
            }
            TokenKind::Ident => {
                self.at += 1;
                Ok(Value::Ident(t.text.clone()))
            }
            TokenKind::RParen | TokenKind::RBrace => {
                Err(ParseError::UnbalancedDelimiter { pos: t.pos })
            }
            TokenKind::NamedArg => Err(ParseError::UnexpectedToken {
                found: describe(t.kind),
                expected: "value",
                pos: t.pos,
            }),
        }
    }
}

/// Parses a single ludeme of any name. `eof` is reported for errors at end of input.
pub fn parse_fragment(tokens: &[Token], eof: Pos) -> Result<LudemeNode, ParseError> {
    let mut p = Parser { tokens, at: 0, eof };
    let first = p.peek().ok_or(ParseError::EmptyInput)?;
    let root = match first.kind {
        TokenKind::LParen => p.node(0)?,
        TokenKind::RParen | TokenKind::RBrace => {
            return Err(ParseError::UnbalancedDelimiter { pos: first.pos })
        }
        other => {
            return Err(ParseError::UnexpectedToken {
                found: describe(other),
                expected: "`(`",
                pos: first.pos,
            })
        }
    };
    if let Some(t) = p.peek() {
        return Err(ParseError::TrailingContent { pos: t.pos });
    }
    Ok(root)
}

/// Parses a complete game description whose root must be `game`.
pub fn parse(tokens: &[Token], eof: Pos) -> Result<LudemeNode, ParseError> {
    let root = parse_fragment(tokens, eof)?;
    if root.name != "game" {
        return Err(ParseError::RootNotGame { name: root.name });
    }
    Ok(root)
}

/// Tokenizes and parses a complete game description.
pub fn parse_str(text: &str) -> Result<LudemeNode, ParseError> {
    parse(&tokenize(text)?, end_pos(text))
}

/// Tokenizes and parses a single ludeme of any name.
pub fn parse_fragment_str(text: &str) -> Result<LudemeNode, ParseError> {
    parse_fragment(&tokenize(text)?, end_pos(text))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    const GOMOKU: &str = r#"(game "Gomoku"
  (mode 2)
  (equipment {
    (goBoard 15)
    (ball Each)
  })
  (rules
    (play (to (mover) (empty)))
    (end (line length:5) (result (mover) Win))
  )
)"#;

    fn names(v: &[Value]) -> Vec<&str> {
        v.iter()
            .map(|x| x.as_node().map(|n| n.name.as_str()).unwrap_or("-"))
            .collect()
    }

    #[test]
    fn gomoku_root_shape() {
        let root = parse_str(GOMOKU).unwrap();
        assert_eq!(root.name, "game");
        assert_eq!(root.positional[0], Value::Str("Gomoku".to_string()));
        assert_eq!(names(&root.positional[1..]), ["mode", "equipment", "rules"]);
        let equipment = root.positional[2].as_node().unwrap();
        assert!(matches!(&equipment.positional[0], Value::List(items) if items.len() == 2));
    }

    #[test]
    fn named_args_land_in_map() {
        let line = parse_fragment_str("(line length:5)").unwrap();
        assert!(line.positional.is_empty());
        assert_eq!(line.named.get("length"), Some(&Value::Int(5)));
    }

    #[test]
    fn play_fragment() {
        let play = parse_fragment_str("(play (to (mover) (empty)))").unwrap();
        assert_eq!(play.name, "play");
        let to = play.positional[0].as_node().unwrap();
        assert_eq!(to.name, "to");
        assert_eq!(names(&to.positional), ["mover", "empty"]);
    }

    #[test]
    fn unbalanced_at_end_of_input() {
        let src = "(game \"X\" (mode 2)";
        assert_eq!(
            parse_str(src),
            Err(ParseError::UnbalancedDelimiter { pos: end_pos(src) })
        );
    }

    #[test]
    fn structural_errors() {
        assert_eq!(parse_str(""), Err(ParseError::EmptyInput));
        assert_eq!(
            parse_str("(game) (x)"),
            Err(ParseError::TrailingContent { pos: Pos::new(1, 8) })
        );
        assert_eq!(
            parse_str("(mode 2)"),
            Err(ParseError::RootNotGame {
                name: "mode".to_string()
            })
        );
        assert_eq!(
            parse_str("(game {1 2)"),
            Err(ParseError::UnbalancedDelimiter { pos: Pos::new(1, 11) })
        );
        assert_eq!(
            parse_str("(game })"),
            Err(ParseError::UnbalancedDelimiter { pos: Pos::new(1, 7) })
        );
        assert!(matches!(
            parse_str("(game a:1 a:2)"),
            Err(ParseError::DuplicateNamedArg { .. })
        ));
        assert!(matches!(
            parse_str("(game 99999999999999999999999)"),
            Err(ParseError::IntegerOverflow { .. })
        ));
        assert!(matches!(
            parse_str("(1 2)"),
            Err(ParseError::UnexpectedToken { .. })
        ));
        assert!(matches!(
            parse_str("(game {a:1})"),
            Err(ParseError::UnexpectedToken { .. })
        ));
    }

    #[test]
    fn depth_is_bounded() {
        let mut src = String::new();
        for _ in 0..10_000 {
            src.push_str("(a ");
        }
        assert!(matches!(
            parse_fragment_str(&src),
            Err(ParseError::TooDeep { .. })
        ));
    }

    #[test]
    fn equality_ignores_positions() {
        let a = parse_fragment_str("(a (x) b:2)").unwrap();
        let b = parse_fragment_str("(a\n\n   (x)   b:2)").unwrap();
        let pos_of = |n: &LudemeNode| n.positional[0].as_node().unwrap().pos;
        assert_ne!(pos_of(&a), pos_of(&b));
        assert_eq!(a, b);
    }
}

//! The `.lud` description language: tokenizer, parser, canonical formatter
//! and the registry-driven compiler into [`GameDescription`].

pub mod description;
pub mod format;
pub mod lexer;
pub mod parser;
pub mod registry;

use thiserror::Error;

pub use description::GameDescription;
pub use format::format;
pub use lexer::{tokenize, LexError, Pos, Token, TokenKind};
pub use parser::{parse, parse_fragment, parse_fragment_str, parse_str, LudemeNode, ParseError, Value};
pub use registry::{CompileError, LudemeRegistry};

use registry::{Compiler, Construct};

/// Largest formatted description that still fits a version-40 QR code in binary mode.
pub const QR_CAPACITY_BYTES: usize = 2953;

/// Compiles a parsed `game` tree by resolving every node through `registry`.
///
/// Every ludeme name in the tree is looked up before any node is compiled, so
/// an unregistered name is reported ahead of arity or type errors.
pub fn compile(root: &LudemeNode, registry: &LudemeRegistry) -> Result<GameDescription, CompileError> {
    check_names(root, registry)?;
    match Compiler::new(registry).node(root)? {
        Construct::Game(g) => Ok(*g),
        _ => Err(CompileError::Malformed {
            ludeme: root.name.clone(),
            detail: "root must be (game ...)".into(),
            pos: root.pos,
        }),
    }
}

fn check_names(node: &LudemeNode, registry: &LudemeRegistry) -> Result<(), CompileError> {
    if registry.get(&node.name).is_none() {
        return Err(CompileError::UnknownLudeme {
            name: node.name.clone(),
            pos: node.pos,
        });
    }
    fn check_value(v: &Value, parent: &LudemeNode, registry: &LudemeRegistry) -> Result<(), CompileError> {
        match v {
            Value::Node(n) => check_names(n, registry),
            Value::List(items) => items.iter().try_for_each(|i| check_value(i, parent, registry)),
            Value::Ident(name) if registry.get(name).is_none() => Err(CompileError::UnknownLudeme {
                name: name.clone(),
                pos: parent.pos,
            }),
            _ => Ok(()),
        }
    }
    node.positional
        .iter()
        .chain(node.named.values())
        .try_for_each(|v| check_value(v, node, registry))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Compile(#[from] CompileError),
}

/// Parses and compiles `.lud` source with the standard registry.
pub fn load(source: &str) -> Result<GameDescription, LoadError> {
    let root = parse_str(source)?;
    Ok(compile(&root, &LudemeRegistry::standard())?)
}

//! The `.lud` files bundled with the binary.

use std::path::Path;

use anyhow::Context;
use micro_ludii_core::{load, Game};

pub const SHIPPED: [(&str, &str); 4] = [
    ("gomoku", include_str!("../../../games/gomoku.lud")),
    ("gomoku-9", include_str!("../../../games/gomoku-9.lud")),
    ("tictactoe", include_str!("../../../games/tictactoe.lud")),
    ("amazons", include_str!("../../../games/amazons.lud")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    SHIPPED.iter().map(|(n, _)| *n)
}

pub fn source(name: &str) -> Option<&'static str> {
    SHIPPED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// Compiles a bundled game. Panics only if a bundled file is broken.
pub fn shipped(name: &str) -> Option<Game> {
    let src = source(name)?;
    Some(Game::new(load(src).expect("bundled game compiles")).expect("bundled board is valid"))
}

/// Reads `.lud` text from a path, falling back to a bundled game name.
pub fn read_source(path: &Path) -> anyhow::Result<String> {
    match std::fs::read_to_string(path) {
        Ok(s) => Ok(s),
        Err(e) => path
            .to_str()
            .and_then(source)
            .map(str::to_owned)
            .with_context(|| format!("reading {}: {e}", path.display())),
    }
}

pub fn compile_source(src: &str) -> anyhow::Result<Game> {
    let desc = load(src).map_err(|e| anyhow::anyhow!("compile failure: {e}"))?;
    Game::new(desc).map_err(|e| anyhow::anyhow!("compile failure: {e}"))
}

pub fn load_path(path: &Path) -> anyhow::Result<Game> {
    compile_source(&read_source(path)?)
}

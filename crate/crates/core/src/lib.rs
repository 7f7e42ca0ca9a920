//! Core of a miniature ludeme-based general game system.
//!
//! Game descriptions written in the `.lud` s-expression language are parsed
//! into [`lud::LudemeNode`] trees and compiled through a registry of ludemes
//! into a [`GameDescription`]. The [`engine`] interprets a description as a
//! playable state machine and [`agents`] play it.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod agents;
pub mod engine;
pub mod lud;
pub mod topology;

pub use agents::{select_move, AgentKind, AgentSpec, SearchStats, StatsEntry};
pub use engine::{EngineError, Game, GameState, Move, MoveKind, Status, Trial};
pub use lud::description::{GameDescription, PieceId, Player, Site};
pub use lud::{compile, format, load, parse_str, LudemeRegistry};
pub use topology::{BoardKind, Direction, Topology};

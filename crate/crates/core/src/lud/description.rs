//! Compiled game descriptions: the engine-facing form of a `.lud` file.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::topology::BoardKind;

/// Board cell / intersection index, row-major with row 0 at the bottom.
pub type Site = usize;

/// A player id. Only two-player games are supported, so valid ids are 1 and 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Player(u8);

impl Player {
    pub const ONE: Player = Player(1);
    pub const TWO: Player = Player(2);

    pub fn new(id: u8) -> Option<Player> {
        matches!(id, 1 | 2).then_some(Player(id))
    }

    pub fn id(self) -> u8 {
        self.0
    }

    pub fn opponent(self) -> Player {
        Player(3 - self.0)
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Index into [`GameDescription::pieces`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PieceId(pub u8);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoardSpec {
    pub kind: BoardKind,
    pub side: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ownership {
    Each,
    None,
}

/// Destination restriction. `(empty)` is the only one the supported games use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiteFilter {
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Effect {
    Replay,
}

/// Piece movement rule: queen-line slides whose destinations satisfy `filter`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Movement {
    pub filter: SiteFilter,
    pub then: Option<Effect>,
}

impl Movement {
    pub fn replays(&self) -> bool {
        self.then == Some(Effect::Replay)
    }
}

/// A piece entry as written in the equipment section, before ownership expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceSpec {
    pub base: String,
    pub ownership: Ownership,
    pub movement: Option<Movement>,
}

/// A concrete piece type such as `Queen1` or `Dot0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceType {
    pub name: String,
    pub owner: Option<Player>,
    pub movement: Option<Movement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub piece: PieceId,
    pub sites: Vec<Site>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlayerRef {
    Mover,
    Next,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntExpr {
    Turn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    Even(IntExpr),
    /// A run of at least `length` pieces of the player who just moved.
    Line { length: usize },
    /// The referenced player has no legal move in the position it faces.
    Stalemated(PlayerRef),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MovesRule {
    /// Put a piece of `player` on any site passing `filter`.
    Place { player: PlayerRef, filter: SiteFilter },
    /// Every movement of every piece the mover owns.
    ByPiece,
    /// Drop `piece` on a queen-line destination from the replay site.
    Shoot { filter: SiteFilter, piece: PieceId },
    If {
        condition: Condition,
        then: alloc::boxed::Box<MovesRule>,
        otherwise: alloc::boxed::Box<MovesRule>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Win,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EndRule {
    pub condition: Condition,
    pub player: PlayerRef,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameDescription {
    pub name: String,
    pub players: u8,
    pub board: BoardSpec,
    pub piece_specs: Vec<PieceSpec>,
    pub pieces: Vec<PieceType>,
    pub start: Vec<Placement>,
    pub play: MovesRule,
    pub end: Vec<EndRule>,
}

impl GameDescription {
    pub fn piece(&self, id: PieceId) -> &PieceType {
        &self.pieces[id.0 as usize]
    }

    pub fn piece_by_name(&self, name: &str) -> Option<PieceId> {
        self.pieces
            .iter()
            .position(|p| p.name == name)
            .map(|i| PieceId(i as u8))
    }

    /// The first piece type owned by `player`, used by `(to (mover) ...)` placements.
    pub fn primary_piece(&self, player: Player) -> Option<PieceId> {
        self.pieces
            .iter()
            .position(|p| p.owner == Some(player))
            .map(|i| PieceId(i as u8))
    }

    pub fn site_count(&self) -> usize {
        self.board.side * self.board.side
    }
}

//! JSON shapes shared by trial files, match reports and the HTTP API.
//!
//! Pieces travel by name, statuses as `"Ongoing"`, `"Draw"` or `"Win(p)"`.

use serde::{Deserialize, Serialize};

use micro_ludii_core::agents::{value_to_color, visit_to_radius};
use micro_ludii_core::{Game, Move, MoveKind, Player, SearchStats, Status};

/// Overlay circle radius bounds, in cell units.
pub const R_MIN: f64 = 0.15;
pub const R_MAX: f64 = 0.45;

#[derive(Serialize, Deserialize)]
#[serde(remote = "MoveKind")]
enum MoveKindDef {
    Place,
    Slide,
    Shoot,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveJson {
    #[serde(with = "MoveKindDef")]
    pub kind: MoveKind,
    pub piece: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from: Option<usize>,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MoveDecodeError {
    #[error("unknown piece {0:?}")]
    UnknownPiece(String),
    #[error("site {0} is off the board")]
    OffBoard(usize),
    #[error("{0:?} moves {1} a `from` site")]
    FromMismatch(MoveKind, &'static str),
}

impl MoveJson {
    pub fn encode(game: &Game, mv: &Move) -> Self {
        MoveJson {
            kind: mv.kind,
            piece: game.piece_name(mv.piece).to_owned(),
            from: mv.from,
            to: mv.to,
        }
    }

    /// Resolves names and checks shape; legality is left to the engine.
    pub fn decode(&self, game: &Game) -> Result<Move, MoveDecodeError> {
        let piece = game
            .description()
            .piece_by_name(&self.piece)
            .ok_or_else(|| MoveDecodeError::UnknownPiece(self.piece.clone()))?;
        for site in self.from.iter().chain([&self.to]) {
            if *site >= game.site_count() {
                return Err(MoveDecodeError::OffBoard(*site));
            }
        }
        match (self.kind, self.from) {
            (MoveKind::Slide, None) => Err(MoveDecodeError::FromMismatch(MoveKind::Slide, "need")),
            (MoveKind::Slide, Some(from)) => Ok(Move::slide(piece, from, self.to)),
            (kind, Some(_)) => Err(MoveDecodeError::FromMismatch(kind, "must not have")),
            (MoveKind::Place, None) => Ok(Move::place(piece, self.to)),
            (MoveKind::Shoot, None) => Ok(Move::shoot(piece, self.to)),
        }
    }
}

pub fn status_text(status: Status) -> String {
    match status {
        Status::Ongoing => "Ongoing".into(),
        Status::Draw => "Draw".into(),
        Status::Win(p) => format!("Win({})", p.id()),
    }
}

pub fn parse_status(text: &str) -> Option<Status> {
    match text {
        "Ongoing" => Some(Status::Ongoing),
        "Draw" => Some(Status::Draw),
        _ => {
            let id = text.strip_prefix("Win(")?.strip_suffix(')')?;
            Player::new(id.parse().ok()?).map(Status::Win)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StatsEntryJson {
    #[serde(rename = "move")]
    pub mv: MoveJson,
    pub visits: u32,
    pub mean_value: f64,
    pub color: [u8; 3],
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StatsJson {
    pub entries: Vec<StatsEntryJson>,
    pub total_iterations: u32,
    pub elapsed_ms: u64,
}

impl StatsJson {
    pub fn encode(game: &Game, stats: &SearchStats) -> Self {
        let max = stats.max_visits();
        StatsJson {
            entries: stats
                .entries
                .iter()
                .map(|e| StatsEntryJson {
                    mv: MoveJson::encode(game, &e.mv),
                    visits: e.visits,
                    mean_value: e.mean_value,
                    color: value_to_color(e.mean_value),
                    radius: visit_to_radius(e.visits, max, R_MIN, R_MAX),
                })
                .collect(),
            total_iterations: stats.total_iterations,
            elapsed_ms: stats.elapsed_ms,
        }
    }
}

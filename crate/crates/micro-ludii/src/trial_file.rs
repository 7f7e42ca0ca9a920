//! JSON trial files.
//!
//! ```json
//! {"game": "Gomoku", "side": 15, "seed": 3,
//!  "moves": [{"kind": "Place", "piece": "Ball1", "to": 112}],
//!  "finalStatus": "Ongoing"}
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use micro_ludii_core::{Game, Trial};

use crate::wire::{parse_status, status_text, MoveJson};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct TrialJson {
    game: String,
    side: usize,
    seed: u64,
    moves: Vec<MoveJson>,
    final_status: String,
}

#[derive(Debug, Error)]
#[error("malformed trial: {0}")]
pub struct MalformedTrial(pub String);

pub fn save_trial(game: &Game, trial: &Trial) -> Vec<u8> {
    let json = TrialJson {
        game: trial.game.clone(),
        side: trial.side,
        seed: trial.seed,
        moves: trial.moves.iter().map(|m| MoveJson::encode(game, m)).collect(),
        final_status: status_text(trial.final_status),
    };
    let mut bytes = serde_json::to_vec_pretty(&json).expect("trial serializes");
    bytes.push(b'\n');
    bytes
}

/// Parses a trial for `game`. Piece names and sites are resolved against the
/// game; whether the moves are legal is a question for [`Game::verify_trial`].
pub fn load_trial(game: &Game, bytes: &[u8]) -> Result<Trial, MalformedTrial> {
    let json: TrialJson = serde_json::from_slice(bytes).map_err(|e| MalformedTrial(e.to_string()))?;
    if json.game != game.name() || json.side != game.topology().side() {
        return Err(MalformedTrial(format!(
            "trial is for {:?} side {}, not {:?} side {}",
            json.game,
            json.side,
            game.name(),
            game.topology().side()
        )));
    }
    let moves = json
        .moves
        .iter()
        .enumerate()
        .map(|(i, m)| m.decode(game).map_err(|e| MalformedTrial(format!("move {i}: {e}"))))
        .collect::<Result<_, _>>()?;
    let final_status = parse_status(&json.final_status)
        .ok_or_else(|| MalformedTrial(format!("bad finalStatus {:?}", json.final_status)))?;
    Ok(Trial {
        game: json.game,
        side: json.side,
        seed: json.seed,
        moves,
        final_status,
    })
}

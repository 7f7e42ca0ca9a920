//! Agent-vs-agent matches.
//!
//! Game `g` is seeded with `base_seed + g` and agent A moves first in even
//! games. Each agent draws its per-move seeds from a ChaCha8 stream keyed by
//! its own seed, the game seed and its seat letter, so reports are
//! reproducible however the games are scheduled.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use micro_ludii_core::{select_move, AgentSpec, Game, Player, Status, Trial};

use crate::agent_arg::AgentArg;
use crate::trial_file::save_trial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Seat {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GameResult {
    pub index: u64,
    pub seed: u64,
    pub first: Seat,
    pub winner: Option<Seat>,
    pub move_count: usize,
    pub trial: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MatchReport {
    pub game: String,
    pub agent_a: String,
    pub agent_b: String,
    pub games_played: u64,
    pub wins_a: u64,
    pub wins_b: u64,
    pub draws: u64,
    pub per_game: Vec<GameResult>,
    /// Wall-clock fields, the only ones that vary between identical runs.
    pub timing: Timing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Timing {
    pub elapsed_ms: u64,
}

fn agent_stream(spec: &AgentSpec, game_seed: u64, seat: Seat) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(game_seed.wrapping_mul(2).wrapping_add(seat as u64));
    rng
}

/// Plays one game; `first` moves as player 1.
pub fn play_game(
    game: &Game,
    a: &AgentSpec,
    b: &AgentSpec,
    first: Seat,
    seed: u64,
) -> anyhow::Result<Trial> {
    let mut streams = [agent_stream(a, seed, Seat::A), agent_stream(b, seed, Seat::B)];
    let seat_of = |p: Player| match (p == Player::ONE, first) {
        (true, s) => s,
        (false, Seat::A) => Seat::B,
        (false, Seat::B) => Seat::A,
    };
    let mut state = game.initial_state()?;
    let mut moves = Vec::new();
    while !state.status().is_over() {
        let seat = seat_of(state.mover());
        let spec = match seat {
            Seat::A => a,
            Seat::B => b,
        };
        let move_seed = streams[seat as usize].next_u64();
        let (mv, _) = select_move(&spec.with_seed(move_seed), game, &state)?;
        state = game.apply(&state, &mv)?;
        moves.push(mv);
    }
    Ok(Trial {
        game: game.name().into(),
        side: game.topology().side(),
        seed,
        moves,
        final_status: state.status(),
    })
}

pub fn trial_path(dir: &Path, index: u64) -> PathBuf {
    dir.join(format!("game-{index:03}.json"))
}

pub fn run_match(
    game: &Game,
    a: AgentArg,
    b: AgentArg,
    games: u64,
    base_seed: u64,
    out_dir: Option<&Path>,
) -> anyhow::Result<MatchReport> {
    anyhow::ensure!(games >= 1, "a match needs at least one game");
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let start = Instant::now();
    let per_game = (0..games)
        .into_par_iter()
        .map(|g| {
            let seed = base_seed.wrapping_add(g);
            let first = if g % 2 == 0 { Seat::A } else { Seat::B };
            let trial = play_game(game, &a.0, &b.0, first, seed)?;
            let path = match out_dir {
                Some(dir) => {
                    let path = trial_path(dir, g);
                    std::fs::write(&path, save_trial(game, &trial))
                        .with_context(|| format!("writing {}", path.display()))?;
                    Some(path)
                }
                None => None,
            };
            let winner = match trial.final_status {
                Status::Win(p) if p == Player::ONE => Some(first),
                Status::Win(_) => Some(if first == Seat::A { Seat::B } else { Seat::A }),
                _ => None,
            };
            Ok(GameResult {
                index: g,
                seed,
                first,
                winner,
                move_count: trial.moves.len(),
                trial: path,
            })
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let count = |s| per_game.iter().filter(|r| r.winner == Some(s)).count() as u64;
    let (wins_a, wins_b) = (count(Seat::A), count(Seat::B));
    Ok(MatchReport {
        game: game.name().into(),
        agent_a: a.to_string(),
        agent_b: b.to_string(),
        games_played: games,
        wins_a,
        wins_b,
        draws: games - wins_a - wins_b,
        per_game,
        timing: Timing {
            elapsed_ms: start.elapsed().as_millis() as u64,
        },
    })
}

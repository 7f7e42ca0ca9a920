//! Uniform random playouts and recorded trials.
//!
//! Playouts draw from a ChaCha8 stream seeded with the 64-bit seed, so a
//! `(game, state, seed)` triple always yields the same trial.

use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{EngineError, Game, GameState, Move, Status};

/// A recorded, replayable game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trial {
    pub game: String,
    pub side: usize,
    pub seed: u64,
    pub moves: Vec<Move>,
    pub final_status: Status,
}

impl Game {
    /// Plays uniformly random moves from `state` until the game ends.
    pub fn playout(&self, state: &GameState, seed: u64) -> (GameState, Trial) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut moves = Vec::new();
        let end = self.run_playout(state.clone(), &mut rng, |m| moves.push(*m));
        let trial = Trial {
            game: self.name().into(),
            side: self.topology().side(),
            seed,
            moves,
            final_status: end.status(),
        };
        (end, trial)
    }

    /// Random playout with a caller-owned generator, returning only the result.
    pub fn playout_with<R: Rng + ?Sized>(&self, state: &GameState, rng: &mut R) -> Status {
        self.run_playout(state.clone(), rng, |_| {}).status()
    }

    fn run_playout<R: Rng + ?Sized>(
        &self,
        mut state: GameState,
        rng: &mut R,
        mut record: impl FnMut(&Move),
    ) -> GameState {
        let mut buf = Vec::with_capacity(self.site_count());
        while !state.status().is_over() {
            self.moves_into(&state, &mut buf);
            // An ongoing state always has a move; end evaluation guarantees it.
            let mv = buf[rng.random_range(0..buf.len())];
            record(&mv);
            self.apply_in_place(&mut state, &mv);
        }
        state
    }

    /// Replays a trial and checks that it ends with the recorded status.
    pub fn verify_trial(&self, trial: &Trial) -> Result<GameState, TrialMismatch> {
        let state = self.replay(&trial.moves).map_err(TrialMismatch::Engine)?;
        if state.status() != trial.final_status {
            return Err(TrialMismatch::Status {
                recorded: trial.final_status,
                replayed: state.status(),
            });
        }
        Ok(state)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TrialMismatch {
    #[error("trial does not replay: {0}")]
    Engine(EngineError),
    #[error("trial records {recorded:?} but replays to {replayed:?}")]
    Status { recorded: Status, replayed: Status },
}

//! General game agents: uniform random and UCT Monte Carlo tree search.

mod mcts;
mod overlay;

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use mcts::{reward, ucb1};
pub use overlay::{value_to_color, visit_to_radius};

use crate::engine::{EngineError, Game, GameState, Move};

pub const DEFAULT_EXPLORATION: f64 = core::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AgentKind {
    Random,
    Mcts { iterations: u32, exploration: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentSpec {
    pub kind: AgentKind,
    pub seed: u64,
}

impl AgentSpec {
    pub fn random(seed: u64) -> Self {
        AgentSpec {
            kind: AgentKind::Random,
            seed,
        }
    }

    /// UCT with the default exploration constant √2.
    pub fn mcts(iterations: u32, seed: u64) -> Self {
        AgentSpec {
            kind: AgentKind::Mcts {
                iterations,
                exploration: DEFAULT_EXPLORATION,
            },
            seed,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        AgentSpec { seed, ..self }
    }

    pub fn validate(&self) -> Result<(), AgentError> {
        match self.kind {
            AgentKind::Random => Ok(()),
            AgentKind::Mcts { iterations: 0, .. } => {
                Err(AgentError::InvalidSpec("mcts needs at least one iteration"))
            }
            AgentKind::Mcts { exploration, .. } if !(exploration >= 0.0 && exploration.is_finite()) => {
                Err(AgentError::InvalidSpec("exploration constant must be a non-negative number"))
            }
            AgentKind::Mcts { .. } => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatsEntry {
    pub mv: Move,
    pub visits: u32,
    /// Mean reward for the root mover, in `[-1, 1]`.
    pub mean_value: f64,
}

/// Per-root-move search statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchStats {
    /// One entry per legal root move, in move order.
    pub entries: Vec<StatsEntry>,
    pub total_iterations: u32,
    /// Wall time, filled in by callers that own a clock.
    pub elapsed_ms: u64,
}

impl SearchStats {
    pub fn max_visits(&self) -> u32 {
        self.entries.iter().map(|e| e.visits).max().unwrap_or(0)
    }

    /// Most-visited move; ties go to the earlier move.
    pub fn robust_move(&self) -> Option<Move> {
        let mut best: Option<&StatsEntry> = None;
        for e in &self.entries {
            if best.is_none_or(|b| e.visits > b.visits) {
                best = Some(e);
            }
        }
        best.map(|e| e.mv)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AgentError {
    #[error("the game is already over")]
    TerminalState,
    #[error("invalid agent: {0}")]
    InvalidSpec(&'static str),
}

impl From<EngineError> for AgentError {
    fn from(_: EngineError) -> Self {
        AgentError::TerminalState
    }
}

/// Chooses a move for the player to move in `state`.
pub fn select_move(
    spec: &AgentSpec,
    game: &Game,
    state: &GameState,
) -> Result<(Move, SearchStats), AgentError> {
    spec.validate()?;
    let moves = game.legal_moves(state)?;
    match spec.kind {
        AgentKind::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            let pick = rng.random_range(0..moves.len());
            let entries = moves
                .iter()
                .enumerate()
                .map(|(i, mv)| StatsEntry {
                    mv: *mv,
                    visits: u32::from(i == pick),
                    mean_value: 0.0,
                })
                .collect();
            let stats = SearchStats {
                entries,
                total_iterations: 1,
                elapsed_ms: 0,
            };
            Ok((moves[pick], stats))
        }
        AgentKind::Mcts {
            iterations,
            exploration,
        } => {
            let stats = search(game, state, iterations, exploration, spec.seed);
            let mv = stats.robust_move().expect("ongoing state has moves");
            Ok((mv, stats))
        }
    }
}

/// Runs `iterations` UCT iterations from `state` and reports root statistics.
/// `state` must be ongoing.
pub fn search(
    game: &Game,
    state: &GameState,
    iterations: u32,
    exploration: f64,
    seed: u64,
) -> SearchStats {
    let mut tree = mcts::Tree::new(game, state, exploration, seed);
    for _ in 0..iterations {
        tree.iterate();
    }
    tree.root_stats(iterations)
}

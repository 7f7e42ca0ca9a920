//! UCT search over an arena-allocated tree.
//!
//! Each node stores the summed rewards from the point of view of the player
//! who made the move leading into it, so a parent simply maximises UCB1 over
//! its children. Children are expanded one per iteration in move order, which
//! doubles as the "unvisited first" rule.
//!
//! Selection short-circuits to an expanded child whose move ends the game in
//! a win for the player making it. Such a child's value is exact, and without
//! this rule positions with several forced wins split visits evenly between a
//! win in one and slower wins.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{SearchStats, StatsEntry};
use crate::engine::{Game, GameState, Move, Status};
use crate::lud::description::Player;

/// UCB1 score; unvisited children score `+inf`.
pub fn ucb1(mean: f64, child_visits: u32, parent_visits: u32, exploration: f64) -> f64 {
    if child_visits == 0 {
        return f64::INFINITY;
    }
    let ln_parent = libm::log(parent_visits.max(1) as f64);
    mean + exploration * libm::sqrt(ln_parent / child_visits as f64)
}

/// Reward in `{-1, 0, +1}` for `player` given a finished game.
pub fn reward(status: Status, player: Player) -> f64 {
    match status {
        Status::Win(w) if w == player => 1.0,
        Status::Win(_) => -1.0,
        _ => 0.0,
    }
}

struct Node {
    state: GameState,
    /// Player who made the move into this node; `None` at the root.
    moved_by: Option<Player>,
    moves: Vec<Move>,
    children: Vec<usize>,
    visits: u32,
    value: f64,
}

impl Node {
    fn new(game: &Game, state: GameState, moved_by: Option<Player>) -> Self {
        let mut moves = Vec::new();
        if !state.status().is_over() {
            game.moves_into(&state, &mut moves);
        }
        Node {
            state,
            moved_by,
            moves,
            children: Vec::new(),
            visits: 0,
            value: 0.0,
        }
    }

    fn mean(&self) -> f64 {
        if self.visits == 0 {
            0.0
        } else {
            self.value / self.visits as f64
        }
    }

    /// The move into this node won the game outright.
    fn decisive(&self) -> bool {
        self.moved_by.is_some() && self.state.status().winner() == self.moved_by
    }

    fn expandable(&self) -> bool {
        self.children.len() < self.moves.len()
    }
}

pub(crate) struct Tree<'g> {
    game: &'g Game,
    nodes: Vec<Node>,
    exploration: f64,
    rng: ChaCha8Rng,
}

impl<'g> Tree<'g> {
    pub(crate) fn new(game: &'g Game, root: &GameState, exploration: f64, seed: u64) -> Self {
        Tree {
            game,
            nodes: alloc::vec![Node::new(game, root.clone(), None)],
            exploration,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn select_child(&self, parent: usize) -> usize {
        let p = &self.nodes[parent];
        if let Some(&c) = p.children.iter().find(|&&c| self.nodes[c].decisive()) {
            return c;
        }
        let mut best = p.children[0];
        let mut best_score = f64::NEG_INFINITY;
        for &c in &p.children {
            let child = &self.nodes[c];
            let score = ucb1(child.mean(), child.visits, p.visits, self.exploration);
            if score > best_score {
                best = c;
                best_score = score;
            }
        }
        best
    }

    pub(crate) fn iterate(&mut self) {
        let mut path = alloc::vec![0usize];
        let mut at = 0;
        while !self.nodes[at].expandable() && !self.nodes[at].children.is_empty() {
            at = self.select_child(at);
            path.push(at);
        }
        if self.nodes[at].expandable() {
            let node = &self.nodes[at];
            let mv = node.moves[node.children.len()];
            let mover = node.state.mover();
            let mut next = node.state.clone();
            self.game.apply_in_place(&mut next, &mv);
            let child = Node::new(self.game, next, Some(mover));
            let id = self.nodes.len();
            self.nodes.push(child);
            self.nodes[at].children.push(id);
            path.push(id);
            at = id;
        }
        let leaf = &self.nodes[at].state;
        let outcome = if leaf.status().is_over() {
            leaf.status()
        } else {
            self.game.playout_with(leaf, &mut self.rng)
        };
        for id in path {
            let node = &mut self.nodes[id];
            node.visits += 1;
            if let Some(p) = node.moved_by {
                node.value += reward(outcome, p);
            }
        }
    }

    /// Per-root-move statistics, in move order, including unexpanded moves.
    pub(crate) fn root_stats(&self, iterations: u32) -> SearchStats {
        let root = &self.nodes[0];
        let entries = root
            .moves
            .iter()
            .enumerate()
            .map(|(i, mv)| match root.children.get(i) {
                Some(&c) => StatsEntry {
                    mv: *mv,
                    visits: self.nodes[c].visits,
                    mean_value: self.nodes[c].mean(),
                },
                None => StatsEntry {
                    mv: *mv,
                    visits: 0,
                    mean_value: 0.0,
                },
            })
            .collect();
        SearchStats {
            entries,
            total_iterations: iterations,
            elapsed_ms: 0,
        }
    }
}

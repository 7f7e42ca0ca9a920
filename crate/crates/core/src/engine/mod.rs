//! Rules engine interpreting a compiled [`GameDescription`].
//!
//! States are values: [`Game::apply`] returns a fresh [`GameState`] and never
//! mutates its input. Move lists are ordered by `(from, to)`.

mod line;
mod playout;

use alloc::vec::Vec;
use core::ops::ControlFlow;

use thiserror::Error;

pub use line::{detect_line, line_through};
pub use playout::{Trial, TrialMismatch};

use crate::lud::description::{
    Condition, GameDescription, IntExpr, MovesRule, PieceId, Player, PlayerRef, Site, SiteFilter,
};
use crate::topology::{Direction, Topology, TopologyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Ongoing,
    Win(Player),
    Draw,
}

impl Status {
    pub fn is_over(self) -> bool {
        self != Status::Ongoing
    }

    pub fn winner(self) -> Option<Player> {
        match self {
            Status::Win(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveKind {
    Place,
    Slide,
    Shoot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Move {
    pub kind: MoveKind,
    pub piece: PieceId,
    /// Origin of a slide; `None` for placements and shots.
    pub from: Option<Site>,
    pub to: Site,
}

impl Move {
    pub fn place(piece: PieceId, to: Site) -> Self {
        Move {
            kind: MoveKind::Place,
            piece,
            from: None,
            to,
        }
    }

    pub fn slide(piece: PieceId, from: Site, to: Site) -> Self {
        Move {
            kind: MoveKind::Slide,
            piece,
            from: Some(from),
            to,
        }
    }

    pub fn shoot(piece: PieceId, to: Site) -> Self {
        Move {
            kind: MoveKind::Shoot,
            piece,
            from: None,
            to,
        }
    }

    fn order_key(&self) -> (Option<Site>, Site) {
        (self.from, self.to)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GameState {
    contents: Vec<Option<PieceId>>,
    mover: Player,
    turn: u32,
    replay_site: Option<Site>,
    status: Status,
}

impl GameState {
    /// Builds an arbitrary position; its status is left `Ongoing` until
    /// evaluated with [`Game::eval_end`].
    pub fn from_parts(
        contents: Vec<Option<PieceId>>,
        mover: Player,
        turn: u32,
        replay_site: Option<Site>,
    ) -> Self {
        GameState {
            contents,
            mover,
            turn,
            replay_site,
            status: Status::Ongoing,
        }
    }

    pub fn contents(&self) -> &[Option<PieceId>] {
        &self.contents
    }

    pub fn at(&self, site: Site) -> Option<PieceId> {
        self.contents[site]
    }

    pub fn mover(&self) -> Player {
        self.mover
    }

    pub fn turn(&self) -> u32 {
        self.turn
    }

    pub fn replay_site(&self) -> Option<Site> {
        self.replay_site
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn occupied(&self) -> usize {
        self.contents.iter().filter(|c| c.is_some()).count()
    }

    /// The player who made the previous sub-move.
    pub fn last_mover(&self) -> Option<Player> {
        match (self.turn, self.replay_site) {
            (0, _) => None,
            (_, Some(_)) => Some(self.mover),
            (_, None) => Some(self.mover.opponent()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("the game is already over")]
    TerminalState,
    #[error("illegal move {0:?}")]
    IllegalMove(Move),
    #[error("two start placements target site {site}")]
    PlacementCollision { site: Site },
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// A compiled game together with its board graph.
#[derive(Debug, Clone)]
pub struct Game {
    desc: GameDescription,
    topology: Topology,
    /// Owner of each piece id.
    owners: Vec<Option<Player>>,
}

impl Game {
    pub fn new(desc: GameDescription) -> Result<Self, EngineError> {
        let topology = Topology::new(desc.board.kind, desc.board.side)?;
        let owners = desc.pieces.iter().map(|p| p.owner).collect();
        Ok(Game {
            desc,
            topology,
            owners,
        })
    }

    pub fn description(&self) -> &GameDescription {
        &self.desc
    }

    pub fn name(&self) -> &str {
        &self.desc.name
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn site_count(&self) -> usize {
        self.topology.site_count()
    }

    pub fn owner(&self, piece: PieceId) -> Option<Player> {
        self.owners[piece.0 as usize]
    }

    pub fn piece_name(&self, piece: PieceId) -> &str {
        &self.desc.piece(piece).name
    }

    pub fn initial_state(&self) -> Result<GameState, EngineError> {
        let mut contents = alloc::vec![None; self.site_count()];
        for placement in &self.desc.start {
            for &site in &placement.sites {
                if contents[site].replace(placement.piece).is_some() {
                    return Err(EngineError::PlacementCollision { site });
                }
            }
        }
        let mut state = GameState::from_parts(contents, Player::ONE, 0, None);
        state.status = self.end_status(&state, None);
        Ok(state)
    }

    /// Legal moves for the mover, ordered by `(from, to)`.
    pub fn legal_moves(&self, state: &GameState) -> Result<Vec<Move>, EngineError> {
        if state.status.is_over() {
            return Err(EngineError::TerminalState);
        }
        let mut out = Vec::new();
        self.moves_into(state, &mut out);
        Ok(out)
    }

    /// Fills `out` with the mover's moves regardless of status.
    pub(crate) fn moves_into(&self, state: &GameState, out: &mut Vec<Move>) {
        out.clear();
        let _ = self.generate(&self.desc.play, state, &mut |m| {
            out.push(m);
            ControlFlow::Continue(())
        });
        if !out.is_sorted_by_key(Move::order_key) {
            out.sort_unstable_by_key(Move::order_key);
        }
    }

    fn has_legal_move(&self, state: &GameState) -> bool {
        self.generate(&self.desc.play, state, &mut |_| ControlFlow::Break(()))
            .is_break()
    }

    fn resolve(&self, who: PlayerRef, state: &GameState) -> Player {
        match who {
            PlayerRef::Mover => state.mover,
            PlayerRef::Next => state.mover.opponent(),
        }
    }

    fn admits(filter: SiteFilter, state: &GameState, site: Site) -> bool {
        match filter {
            SiteFilter::Empty => state.contents[site].is_none(),
        }
    }

    fn condition_holds(&self, condition: Condition, state: &GameState) -> bool {
        match condition {
            Condition::Even(IntExpr::Turn) => state.turn.is_multiple_of(2),
            Condition::Line { length } => state
                .last_mover()
                .is_some_and(|p| detect_line(&self.topology, &state.contents, &self.owners, p, length)),
            Condition::Stalemated(who) => {
                debug_assert_eq!(who, PlayerRef::Mover);
                !self.has_legal_move(state)
            }
        }
    }

    fn queen_lines(
        &self,
        state: &GameState,
        origin: Site,
        filter: SiteFilter,
        emit: &mut impl FnMut(Site) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        for dir in Direction::ALL {
            for site in self.topology.ray(origin, dir) {
                if state.contents[site].is_some() || !Self::admits(filter, state, site) {
                    break;
                }
                emit(site)?;
            }
        }
        ControlFlow::Continue(())
    }

    fn generate(
        &self,
        rule: &MovesRule,
        state: &GameState,
        emit: &mut impl FnMut(Move) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        match rule {
            MovesRule::Place { player, filter } => {
                let who = self.resolve(*player, state);
                let Some(piece) = self.desc.primary_piece(who) else {
                    return ControlFlow::Continue(());
                };
                for site in 0..state.contents.len() {
                    if Self::admits(*filter, state, site) {
                        emit(Move::place(piece, site))?;
                    }
                }
                ControlFlow::Continue(())
            }
            MovesRule::ByPiece => {
                for (from, cell) in state.contents.iter().enumerate() {
                    let Some(piece) = *cell else { continue };
                    if self.owner(piece) != Some(state.mover) {
                        continue;
                    }
                    let Some(movement) = self.desc.piece(piece).movement else {
                        continue;
                    };
                    self.queen_lines(state, from, movement.filter, &mut |to| {
                        emit(Move::slide(piece, from, to))
                    })?;
                }
                ControlFlow::Continue(())
            }
            MovesRule::Shoot { filter, piece } => match state.replay_site {
                Some(origin) => self.queen_lines(state, origin, *filter, &mut |to| {
                    emit(Move::shoot(*piece, to))
                }),
                None => ControlFlow::Continue(()),
            },
            MovesRule::If {
                condition,
                then,
                otherwise,
            } => {
                let branch = if self.condition_holds(*condition, state) {
                    then
                } else {
                    otherwise
                };
                self.generate(branch, state, emit)
            }
        }
    }

    /// Applies a legal move, returning the successor state.
    pub fn apply(&self, state: &GameState, mv: &Move) -> Result<GameState, EngineError> {
        if state.status.is_over() {
            return Err(EngineError::TerminalState);
        }
        let mut found = false;
        let _ = self.generate(&self.desc.play, state, &mut |m| {
            if m == *mv {
                found = true;
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        if !found {
            return Err(EngineError::IllegalMove(*mv));
        }
        let mut next = state.clone();
        self.apply_in_place(&mut next, mv);
        Ok(next)
    }

    /// Applies `mv` without a legality check.
    pub(crate) fn apply_in_place(&self, state: &mut GameState, mv: &Move) {
        if let Some(from) = mv.from {
            state.contents[from] = None;
        }
        state.contents[mv.to] = Some(mv.piece);
        state.turn += 1;
        let replays = mv.kind == MoveKind::Slide
            && self
                .desc
                .piece(mv.piece)
                .movement
                .is_some_and(|m| m.replays());
        if replays {
            state.replay_site = Some(mv.to);
        } else {
            state.mover = state.mover.opponent();
            state.replay_site = None;
        }
        state.status = self.end_status(state, Some(mv.to));
    }

    /// Re-evaluates the end rules on `state` from scratch.
    pub fn eval_end(&self, state: &GameState) -> Status {
        self.end_status(state, None)
    }

    /// End rules in order, then the draw rule: a player with no move and no
    /// rule firing ends the game drawn. `last_to` restricts line checks to
    /// lines through the site just played.
    fn end_status(&self, state: &GameState, last_to: Option<Site>) -> Status {
        for rule in &self.desc.end {
            // Line conditions bind `mover` to whoever just moved; every other
            // condition looks at the position the player to move faces.
            let subject = match rule.condition {
                Condition::Line { length } => {
                    let Some(who) = state.last_mover() else { continue };
                    let formed = match last_to {
                        Some(site) => line_through(
                            &self.topology,
                            &state.contents,
                            &self.owners,
                            site,
                            who,
                            length,
                        ),
                        None => detect_line(&self.topology, &state.contents, &self.owners, who, length),
                    };
                    formed.then_some(who)
                }
                other => self.condition_holds(other, state).then_some(state.mover),
            };
            if let Some(who) = subject {
                let winner = match rule.player {
                    PlayerRef::Mover => who,
                    PlayerRef::Next => who.opponent(),
                };
                return Status::Win(winner);
            }
        }
        if self.has_legal_move(state) {
            Status::Ongoing
        } else {
            Status::Draw
        }
    }

    /// Replays `moves` from the initial state, checking each for legality.
    pub fn replay(&self, moves: &[Move]) -> Result<GameState, EngineError> {
        let mut state = self.initial_state()?;
        for mv in moves {
            state = self.apply(&state, mv)?;
        }
        Ok(state)
    }
}

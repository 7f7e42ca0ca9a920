//! The ludeme registry: one entry per supported keyword, each carrying its
//! arity, permitted named arguments and the function that compiles a node of
//! that name into an engine construct.
//!
//! Compilation is a single recursive walk driven entirely by registry lookups.
//! A name absent from the registry is an error, never a fallback.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use super::description::*;
use super::lexer::Pos;
use super::parser::{LudemeNode, Value};
use crate::topology::BoardKind;

/// Largest board edge the engine accepts.
pub const MAX_SIDE: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("unknown ludeme `{name}` at {pos}")]
    UnknownLudeme { name: String, pos: Pos },
    #[error("`{name}` at {pos} takes {expected} argument(s), got {got}")]
    ArityMismatch {
        name: String,
        expected: String,
        got: usize,
        pos: Pos,
    },
    #[error("unsupported feature: {detail}")]
    UnsupportedFeature { detail: String },
    #[error("bad reference: {detail}")]
    BadReference { detail: String },
    #[error("malformed `{ludeme}` at {pos}: {detail}")]
    Malformed {
        ludeme: String,
        detail: String,
        pos: Pos,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    /// Written in parentheses, e.g. `(mover)`.
    Ludeme,
    /// Written as a bare identifier, e.g. `Each`.
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arity {
    pub min: usize,
    pub max: Option<usize>,
}

impl Arity {
    const fn exactly(n: usize) -> Self {
        Arity {
            min: n,
            max: Some(n),
        }
    }

    const fn range(min: usize, max: usize) -> Self {
        Arity {
            min,
            max: Some(max),
        }
    }

    const fn at_least(min: usize) -> Self {
        Arity { min, max: None }
    }

    pub fn admits(&self, n: usize) -> bool {
        n >= self.min && self.max.is_none_or(|m| n <= m)
    }

    fn describe(&self) -> String {
        match self.max {
            Some(m) if m == self.min => format!("{m}"),
            Some(m) => format!("{}..={m}", self.min),
            None => format!("at least {}", self.min),
        }
    }
}

type CompileFn = fn(&mut Compiler<'_>, &LudemeNode) -> Result<Construct, CompileError>;

pub struct LudemeEntry {
    pub name: &'static str,
    pub form: Form,
    pub arity: Arity,
    pub named: &'static [&'static str],
    /// Human-readable argument signature.
    pub signature: &'static str,
    compile: CompileFn,
}

impl core::fmt::Debug for LudemeEntry {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("LudemeEntry")
            .field("name", &self.name)
            .field("form", &self.form)
            .field("arity", &self.arity)
            .field("signature", &self.signature)
            .finish()
    }
}

#[derive(Debug)]
pub struct LudemeRegistry {
    entries: BTreeMap<&'static str, LudemeEntry>,
}

macro_rules! entry {
    ($name:literal, $form:ident, $arity:expr, $named:expr, $sig:literal, $f:expr) => {
        LudemeEntry {
            name: $name,
            form: Form::$form,
            arity: $arity,
            named: $named,
            signature: $sig,
            compile: $f,
        }
    };
}

impl LudemeRegistry {
    /// The registry for every ludeme the engine understands.
    pub fn standard() -> Self {
        let list = [
            entry!("game", Ludeme, Arity::exactly(4), &[], "(game <string> <mode> <equipment> <rules>)", c_game),
            entry!("mode", Ludeme, Arity::exactly(1), &[], "(mode <int>)", c_mode),
            entry!("equipment", Ludeme, Arity::exactly(1), &[], "(equipment {<item>...})", c_equipment),
            entry!("rules", Ludeme, Arity::range(1, 3), &[], "(rules [<start>] <play> [<end>])", c_rules),
            entry!("start", Ludeme, Arity::exactly(1), &[], "(start {<place>...})", c_start),
            entry!("play", Ludeme, Arity::exactly(1), &[], "(play <moves>)", c_play),
            entry!("end", Ludeme, Arity::at_least(2), &[], "(end <condition> <result> ...)", c_end),
            entry!("goBoard", Ludeme, Arity::exactly(1), &[], "(goBoard <int>)", c_go_board),
            entry!("chessBoard", Ludeme, Arity::exactly(1), &[], "(chessBoard <int>)", c_chess_board),
            entry!("ball", Ludeme, Arity::range(1, 2), &[], "(ball <owner> [<movement>])", c_ball),
            entry!("queen", Ludeme, Arity::range(1, 2), &[], "(queen <owner> [<movement>])", c_queen),
            entry!("dot", Ludeme, Arity::range(1, 2), &[], "(dot <owner> [<movement>])", c_dot),
            entry!("to", Ludeme, Arity::range(0, 2), &[], "(to) | (to <player> <filter>)", c_to),
            entry!("mover", Ludeme, Arity::exactly(0), &[], "(mover)", c_mover),
            entry!("next", Ludeme, Arity::exactly(0), &[], "(next)", c_next),
            entry!("empty", Ludeme, Arity::exactly(0), &[], "(empty)", c_empty),
            entry!("line", Ludeme, Arity::exactly(0), &["length"], "(line length:<int>)", c_line),
            entry!("result", Ludeme, Arity::exactly(2), &[], "(result <player> <outcome>)", c_result),
            entry!("place", Ludeme, Arity::exactly(2), &[], "(place <string> <int>|{<int>...})", c_place),
            entry!("slide", Ludeme, Arity::range(1, 2), &[], "(slide <in> [<then>])", c_slide),
            entry!("in", Ludeme, Arity::exactly(2), &[], "(in (to) <filter>)", c_in),
            entry!("then", Ludeme, Arity::exactly(1), &[], "(then <effect>)", c_then),
            entry!("replay", Ludeme, Arity::exactly(0), &[], "(replay)", c_replay),
            entry!("shoot", Ludeme, Arity::exactly(2), &[], "(shoot <in> <string>)", c_shoot),
            entry!("byPiece", Ludeme, Arity::exactly(0), &[], "(byPiece)", c_by_piece),
            entry!("if", Ludeme, Arity::exactly(3), &[], "(if <condition> <moves> <moves>)", c_if),
            entry!("even", Ludeme, Arity::exactly(1), &[], "(even <int-expr>)", c_even),
            entry!("turn", Ludeme, Arity::exactly(0), &[], "(turn)", c_turn),
            entry!("stalemated", Ludeme, Arity::exactly(1), &[], "(stalemated <player>)", c_stalemated),
            entry!("Each", Constant, Arity::exactly(0), &[], "Each", |_, _| Ok(Construct::Ownership(Ownership::Each))),
            entry!("None", Constant, Arity::exactly(0), &[], "None", |_, _| Ok(Construct::Ownership(Ownership::None))),
            entry!("Win", Constant, Arity::exactly(0), &[], "Win", |_, _| Ok(Construct::Outcome(Outcome::Win))),
        ];
        LudemeRegistry {
            entries: list.into_iter().map(|e| (e.name, e)).collect(),
        }
    }

    pub fn get(&self, name: &str) -> Option<&LudemeEntry> {
        self.entries.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Default for LudemeRegistry {
    fn default() -> Self {
        Self::standard()
    }
}

/// Intermediate result of compiling one value.
#[derive(Debug, Clone)]
pub(crate) enum Construct {
    Int(u64),
    Str(String),
    List(Vec<Construct>),
    Game(Box<GameDescription>),
    Mode(u8),
    Equipment,
    Board(BoardSpec),
    Piece(PieceSpec),
    Rules(RulesParts),
    Start(Vec<Placement>),
    Place(Placement),
    Play(MovesRule),
    End(Vec<EndRule>),
    Moves(MovesRule),
    Condition(Condition),
    Player(PlayerRef),
    Filter(SiteFilter),
    ToSite,
    Region(SiteFilter),
    Movement(Movement),
    Then(Effect),
    Effect(Effect),
    IntExpr(IntExpr),
    Result(PlayerRef, Outcome),
    Ownership(Ownership),
    Outcome(Outcome),
}

impl Construct {
    fn describe(&self) -> &'static str {
        match self {
            Construct::Int(_) => "integer",
            Construct::Str(_) => "string",
            Construct::List(_) => "list",
            Construct::Game(_) => "game",
            Construct::Mode(_) => "mode",
            Construct::Equipment => "equipment",
            Construct::Board(_) => "board",
            Construct::Piece(_) => "piece",
            Construct::Rules(_) => "rules",
            Construct::Start(_) => "start rules",
            Construct::Place(_) => "placement",
            Construct::Play(_) => "play rules",
            Construct::End(_) => "end rules",
            Construct::Moves(_) => "moves",
            Construct::Condition(_) => "condition",
            Construct::Player(_) => "player",
            Construct::Filter(_) => "site filter",
            Construct::ToSite => "`(to)`",
            Construct::Region(_) => "region",
            Construct::Movement(_) => "movement",
            Construct::Then(_) => "consequence",
            Construct::Effect(_) => "effect",
            Construct::IntExpr(_) => "integer expression",
            Construct::Result(..) => "result",
            Construct::Ownership(_) => "ownership",
            Construct::Outcome(_) => "outcome",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub(crate) struct RulesParts {
    start: Vec<Placement>,
    play: Option<MovesRule>,
    end: Vec<EndRule>,
}

pub(crate) struct Compiler<'r> {
    registry: &'r LudemeRegistry,
    players: Option<u8>,
    board: Option<BoardSpec>,
    piece_specs: Vec<PieceSpec>,
    pieces: Vec<PieceType>,
}

impl<'r> Compiler<'r> {
    pub(crate) fn new(registry: &'r LudemeRegistry) -> Self {
        Compiler {
            registry,
            players: None,
            board: None,
            piece_specs: Vec::new(),
            pieces: Vec::new(),
        }
    }

    fn malformed(node: &LudemeNode, detail: impl Into<String>) -> CompileError {
        CompileError::Malformed {
            ludeme: node.name.clone(),
            detail: detail.into(),
            pos: node.pos,
        }
    }

    pub(crate) fn node(&mut self, node: &LudemeNode) -> Result<Construct, CompileError> {
        let entry = self
            .registry
            .get(&node.name)
            .ok_or_else(|| CompileError::UnknownLudeme {
                name: node.name.clone(),
                pos: node.pos,
            })?;
        if entry.form == Form::Constant {
            return Err(Self::malformed(node, "constant written as a ludeme"));
        }
        if !entry.arity.admits(node.positional.len()) {
            return Err(CompileError::ArityMismatch {
                name: node.name.clone(),
                expected: entry.arity.describe(),
                got: node.positional.len(),
                pos: node.pos,
            });
        }
        if let Some(k) = node.named.keys().find(|k| !entry.named.contains(&k.as_str())) {
            return Err(Self::malformed(node, format!("unknown named argument `{k}`")));
        }
        (entry.compile)(self, node)
    }

    fn value(&mut self, v: &Value, parent: &LudemeNode) -> Result<Construct, CompileError> {
        match v {
            Value::Int(i) => Ok(Construct::Int(*i)),
            Value::Str(s) => Ok(Construct::Str(s.clone())),
            Value::Node(n) => self.node(n),
            Value::List(items) => items
                .iter()
                .map(|i| self.value(i, parent))
                .collect::<Result<_, _>>()
                .map(Construct::List),
            Value::Ident(name) => {
                let entry = self
                    .registry
                    .get(name)
                    .ok_or_else(|| CompileError::UnknownLudeme {
                        name: name.clone(),
                        pos: parent.pos,
                    })?;
                if entry.form != Form::Constant {
                    return Err(Self::malformed(
                        parent,
                        format!("`{name}` must be written as `({name} ...)`"),
                    ));
                }
                let mut bare = LudemeNode::new(name.as_str());
                bare.pos = parent.pos;
                (entry.compile)(self, &bare)
            }
        }
    }

    /// Compiles `v` and narrows it with `pick`, reporting a type mismatch otherwise.
    fn want<T>(
        &mut self,
        v: &Value,
        parent: &LudemeNode,
        expected: &str,
        pick: impl FnOnce(Construct) -> Result<T, Construct>,
    ) -> Result<T, CompileError> {
        let c = self.value(v, parent)?;
        pick(c).map_err(|c| {
            Self::malformed(parent, format!("expected {expected}, found {}", c.describe()))
        })
    }

    fn resolve_piece(&self, name: &str) -> Result<PieceId, CompileError> {
        self.pieces
            .iter()
            .position(|p| p.name == name)
            .map(|i| PieceId(i as u8))
            .ok_or_else(|| CompileError::BadReference {
                detail: format!("no piece named \"{name}\" in equipment"),
            })
    }

    fn site_count(&self) -> Option<usize> {
        self.board.map(|b| b.side * b.side)
    }
}

fn phase_of(v: &Value) -> u8 {
    match v.as_node().map(|n| n.name.as_str()) {
        Some("mode") => 0,
        Some("equipment") => 1,
        _ => 2,
    }
}

fn c_game(c: &mut Compiler<'_>, n: &LudemeNode) -> Result<Construct, CompileError> {
    let name = c.want(&n.positional[0], n, "game name", |x| match x {
        Construct::Str(s) => Ok(s),
        o => Err(o),
    })?;
    // Mode and equipment are compiled first so rules can resolve piece names.
    let mut parts: Vec<&Value> = n.positional[1..].iter().collect();
    parts.sort_by_key(|v| phase_of(v));
    let mut rules = None;
    for v in parts {
        match c.value(v, n)? {
            Construct::Mode(m) if c.players.is_none() => c.players = Some(m),
            Construct::Equipment => {}
            Construct::Rules(r) if rules.is_none() => rules = Some(r),
            other => {
                return Err(Compiler::malformed(
                    n,
                    format!("unexpected or repeated {}", other.describe()),
                ))
            }
        }
    }
    let players = c
        .players
        .ok_or_else(|| Compiler::malformed(n, "missing (mode)"))?;
    let board = c
        .board
        .ok_or_else(|| Compiler::malformed(n, "equipment declares no board"))?;
    let rules = rules.ok_or_else(|| Compiler::malformed(n, "missing (rules)"))?;
    let play = rules
        .play
        .ok_or_else(|| Compiler::malformed(n, "rules declare no (play)"))?;
    Ok(Construct::Game(Box::new(GameDescription {
        name,
        players,
        board,
        piece_specs: core::mem::take(&mut c.piece_specs),
        pieces: core::mem::take(&mut c.pieces),
        start: rules.start,
        play,
        end: rules.end,
    })))
}

fn c_mode(c: &mut Compiler<'_>, n: &LudemeNode) -> Result<Construct, CompileError> {
    let count = c.want(&n.positional[0], n, "player count", |x| match x {
        Construct::Int(i) => Ok(i),
        o => Err(o),
    })?;
    if count != 2 {
        return Err(CompileError::UnsupportedFeature {
            detail: format!("(mode {count}): only two-player games are supported"),
        });
    }
    Ok(Construct::Mode(2))
}

fn c_equipment(c: &mut Compiler<'_>, n: &LudemeNode) -> Result<Construct, CompileError> {
    let Value::List(items) = &n.positional[0] else {
        return Err(Compiler::malformed(n, "expected a `{...}` list of items"));
    };
    let players = c
        .players
        .ok_or_else(|| Compiler::malformed(n, "equipment needs (mode) to expand owners"))?;
    for item in items {
        match c.value(item, n)? {
            Construct::Board(b) => {
                if c.board.replace(b).is_some() {
                    return Err(Compiler::malformed(n, "more than one board"));
                }
            }
            Construct::Piece(spec) => {
                let owners: Vec<Option<Player>> = match spec.ownership {
                    Ownership::Each => (1..=players).map(Player::new).collect(),
                    Ownership::None => alloc::vec![None],
                };
                for owner in owners {
                    let name = format!("{}{}", spec.base, owner.map_or(0, Player::id));
                    if c.pieces.iter().any(|p| p.name == name) {
                        return Err(Compiler::malformed(n, format!("piece {name} declared twice")));
                    }
                    if c.pieces.len() >= u8::MAX as usize {
                        return Err(CompileError::UnsupportedFeature {
                            detail: "too many piece types".to_string(),
                        });
                    }
                    c.pieces.push(PieceType {
                        name,
                        owner,
                        movement: spec.movement,
                    });
                }
                c.piece_specs.push(spec);
            }
            other => {
                return Err(Compiler::malformed(
                    n,
                    format!("expected board or piece, found {}", other.describe()),
                ))
            }
        }
    }
    if c.board.is_none() {
        return Err(Compiler::malformed(n, "equipment declares no board"));
    }
    Ok(Construct::Equipment)
}

fn c_rules(c: &mut Compiler<'_>, n: &LudemeNode) -> Result<Construct, CompileError> {
    let mut parts = RulesParts::default();
    let (mut seen_start, mut seen_end) = (false, false);
    for v in &n.positional {
        match c.value(v, n)? {
            Construct::Start(s) if !seen_start => {
                seen_start = true;
                parts.start = s;
            }
            Construct::Play(p) if parts.play.is_none() => parts.play = Some(p),
            Construct::End(e) if !seen_end => {
                seen_end = true;
                parts.end = e;
            }
            other => {
                return Err(Compiler::malformed(
                    n,
                    format!("unexpected or repeated {}", other.describe()),
                ))
            }
        }
    }
    Ok(Construct::Rules(parts))
}

fn c_start(c: &mut Compiler<'_>, n: &LudemeNode) -> Result<Construct, CompileError> {
    let placements = match c.value(&n.positional[0], n)? {
        Construct::Place(p) => alloc::vec![p],
        Construct::List(items) => items
            .into_iter()
            .map(|i| match i {
                Construct::Place(p) => Ok(p),
                o => Err(Compiler::malformed(
                    n,
                    format!("expected placement, found {}", o.describe()),
                )),
            })
            .collect::<Result<_, _>>()?,
        o => {
            return Err(Compiler::malformed(
                n,
                format!("expected placement list, found {}", o.describe()),
            ))
        }
    };
    Ok(Construct::Start(placements))
}

fn c_place(c: &mut Compiler<'_>, n: &LudemeNode) -> Result<Construct, CompileError> {
    let name = c.want(&n.positional[0], n, "piece name", |x| match x {
        Construct::Str(s) => Ok(s),
        o => Err(o),
    })?;
    let piece = c.resolve_piece(&name)?;
    let raw: Vec<u64> = match c.value(&n.positional[1], n)? {
        Construct::Int(i) => alloc::vec![i],
        Construct::List(items) => items
            .into_iter()
            .map(|i| match i {
                Construct::Int(v) => Ok(v),
                o => Err(Compiler::malformed(
                    n,
                    format!("expected site index, found {}", o.describe()),
                )),
            })
            .collect::<Result<_, _>>()?,
        o => {
            return Err(Compiler::malformed(
                n,
                format!("expected site indices, found {}", o.describe()),
            ))
        }
    };
    let count = c.site_count().unwrap_or(0);
    let sites = raw
        .into_iter()
        .map(|s| {
            usize::try_from(s)
                .ok()
                .filter(|&s| s < count)
                .ok_or_else(|| CompileError::BadReference {
                    detail: format!("site {s} for \"{name}\" is outside the {count}-site board"),
                })
        })
        .collect::<Result<_, _>>()?;
    Ok(Construct::Place(Placement { piece, sites }))
}

fn moves_arg(c: &mut Compiler<'_>, v: &Value, n: &LudemeNode) -> Result<MovesRule, CompileError> {
    c.want(v, n, "moves", |x| match x {
        Construct::Moves(m) => Ok(m),
        o => Err(o),
    })
}

fn c_play(c: &mut Compiler<'_>, n: &LudemeNode) -> Result<Construct, CompileError> {
    let moves = moves_arg(c, &n.positional[0], n)?;
    Ok(Construct::Play(moves))
}

fn c_end(c: &mut Compiler<'_>, n: &LudemeNode) -> Result<Construct, CompileError> {
    if !n.positional.len().is_multiple_of(2) {
        return Err(CompileError::ArityMismatch {
            name: n.name.clone(),
            expected: "an even number of".to_string(),
            got: n.positional.len(),
            pos: n.pos,
        });
    }
    let mut rules = Vec::new();
    for pair in n.positional.chunks(2) {
        let condition = c.want(&pair[0], n, "condition", |x| match x {
            Construct::Condition(k) => Ok(k),
            o => Err(o),
        })?;
        let (player, outcome) = c.want(&pair[1], n, "result", |x| match x {
            Construct::Result(p, o) => Ok((p, o)),
            o => Err(o),
        })?;
        rules.push(EndRule {
            condition,
            player,
            outcome,
        });
    }
    Ok(Construct::End(rules))
}

fn board(c: &mut Compiler<'_>, n: &LudemeNode, kind: BoardKind) -> Result<Construct, CompileError> {
    let side = c.want(&n.positional[0], n, "board size", |x| match x {
        Construct::Int(i) => Ok(i),
        o => Err(o),
    })?;
    if side == 0 {
        return Err(Compiler::malformed(n, "board size must be positive"));
    }
    if side > MAX_SIDE as u64 {
        return Err(CompileError::UnsupportedFeature {
            detail: format!("board size {side} exceeds {MAX_SIDE}"),
        });
    }
    Ok(Construct::Board(BoardSpec {
        kind,
        side: side as usize,
    }))
}

fn c_go_board(c: &mut Compiler<'_>, n: &LudemeNode) -> Result<Construct, CompileError> {
    board(c, n, BoardKind::GoBoard)
}

fn c_chess_board(c: &mut Compiler<'_>, n: &LudemeNode) -> Result<Construct, CompileError> {
    board(c, n, BoardKind::ChessBoard)
}

fn piece(c: &mut Compiler<'_>, n: &LudemeNode, base: &str) -> Result<Construct, CompileError> {
    let ownership = c.want(&n.positional[0], n, "Each or None", |x| match x {
        Construct::Ownership(o) => Ok(o),
        o => Err(o),
    })?;
    let movement = match n.positional.get(1) {
        Some(v) => Some(c.want(v, n, "movement", |x| match x {
            Construct::Movement(m) => Ok(m),
            o => Err(o),
        })?),
        None => None,
    };
    Ok(Construct::Piece(PieceSpec {
        base: base.to_string(),
        ownership,
        movement,
    }))
}

fn c_ball(c: &mut Compiler<'_>, n: &LudemeNode) -> Result<Construct, CompileError> {
    piece(c, n, "Ball")
}

fn c_queen(c: &mut Compiler<'_>, n: &LudemeNode) -> Result<Construct, CompileError> {
    piece(c, n, "Queen")
}

fn c_dot(c: &mut Compiler<'_>, n: &LudemeNode) -> Result<Construct, CompileError> {
    piece(c, n, "Dot")
}

fn player_arg(c: &mut Compiler<'_>, v: &Value, n: &LudemeNode) -> Result<PlayerRef, CompileError> {
    c.want(v, n, "player", |x| match x {
        Construct::Player(p) => Ok(p),
        o => Err(o),
    })
}

fn filter_arg(c: &mut Compiler<'_>, v: &Value, n: &LudemeNode) -> Result<SiteFilter, CompileError> {
    c.want(v, n, "site filter", |x| match x {
        Construct::Filter(f) => Ok(f),
        o => Err(o),
    })
}

fn c_to(c: &mut Compiler<'_>, n: &LudemeNode) -> Result<Construct, CompileError> {
    match n.positional.len() {
        0 => Ok(Construct::ToSite),
        2 => {
            let player = player_arg(c, &n.positional[0], n)?;
            let filter = filter_arg(c, &n.positional[1], n)?;
            let players = c.players.unwrap_or(2);
            for id in 1..=players {
                let owned = c
                    .pieces
                    .iter()
                    .any(|p| p.owner.map(Player::id) == Some(id));
                if !owned {
                    return Err(CompileError::BadReference {
                        detail: format!("player {id} owns no piece to place"),
                    });
                }
            }
            Ok(Construct::Moves(MovesRule::Place { player, filter }))
        }
        got => Err(CompileError::ArityMismatch {
            name: n.name.clone(),
            expected: "0 or 2".to_string(),
            got,
            pos: n.pos,
        }),
    }
}

fn c_mover(_: &mut Compiler<'_>, _: &LudemeNode) -> Result<Construct, CompileError> {
    Ok(Construct::Player(PlayerRef::Mover))
}

fn c_next(_: &mut Compiler<'_>, _: &LudemeNode) -> Result<Construct, CompileError> {
    Ok(Construct::Player(PlayerRef::Next))
}

fn c_empty(_: &mut Compiler<'_>, _: &LudemeNode) -> Result<Construct, CompileError> {
    Ok(Construct::Filter(SiteFilter::Empty))
}

fn c_line(_: &mut Compiler<'_>, n: &LudemeNode) -> Result<Construct, CompileError> {
    match n.named.get("length") {
        Some(Value::Int(l)) if *l >= 1 => Ok(Construct::Condition(Condition::Line {
            length: usize::try_from(*l).unwrap_or(usize::MAX),
        })),
        Some(_) => Err(Compiler::malformed(n, "length must be a positive integer")),
        None => Err(Compiler::malformed(n, "missing length:<int>")),
    }
}

fn c_result(c: &mut Compiler<'_>, n: &LudemeNode) -> Result<Construct, CompileError> {
    let player = player_arg(c, &n.positional[0], n)?;
    let outcome = c.want(&n.positional[1], n, "outcome", |x| match x {
        Construct::Outcome(o) => Ok(o),
        o => Err(o),
    })?;
    Ok(Construct::Result(player, outcome))
}

fn region_arg(c: &mut Compiler<'_>, v: &Value, n: &LudemeNode) -> Result<SiteFilter, CompileError> {
    c.want(v, n, "(in (to) <filter>)", |x| match x {
        Construct::Region(f) => Ok(f),
        o => Err(o),
    })
}

fn c_slide(c: &mut Compiler<'_>, n: &LudemeNode) -> Result<Construct, CompileError> {
    let filter = region_arg(c, &n.positional[0], n)?;
    let then = match n.positional.get(1) {
        Some(v) => Some(c.want(v, n, "(then ...)", |x| match x {
            Construct::Then(e) => Ok(e),
            o => Err(o),
        })?),
        None => None,
    };
    Ok(Construct::Movement(Movement { filter, then }))
}

fn c_in(c: &mut Compiler<'_>, n: &LudemeNode) -> Result<Construct, CompileError> {
    c.want(&n.positional[0], n, "(to)", |x| match x {
        Construct::ToSite => Ok(()),
        o => Err(o),
    })?;
    let filter = filter_arg(c, &n.positional[1], n)?;
    Ok(Construct::Region(filter))
}

fn c_then(c: &mut Compiler<'_>, n: &LudemeNode) -> Result<Construct, CompileError> {
    let effect = c.want(&n.positional[0], n, "effect", |x| match x {
        Construct::Effect(e) => Ok(e),
        o => Err(o),
    })?;
    Ok(Construct::Then(effect))
}

fn c_replay(_: &mut Compiler<'_>, _: &LudemeNode) -> Result<Construct, CompileError> {
    Ok(Construct::Effect(Effect::Replay))
}

fn c_shoot(c: &mut Compiler<'_>, n: &LudemeNode) -> Result<Construct, CompileError> {
    let filter = region_arg(c, &n.positional[0], n)?;
    let name = c.want(&n.positional[1], n, "piece name", |x| match x {
        Construct::Str(s) => Ok(s),
        o => Err(o),
    })?;
    let piece = c.resolve_piece(&name)?;
    Ok(Construct::Moves(MovesRule::Shoot { filter, piece }))
}

fn c_by_piece(_: &mut Compiler<'_>, _: &LudemeNode) -> Result<Construct, CompileError> {
    Ok(Construct::Moves(MovesRule::ByPiece))
}

fn c_if(c: &mut Compiler<'_>, n: &LudemeNode) -> Result<Construct, CompileError> {
    let condition = c.want(&n.positional[0], n, "condition", |x| match x {
        Construct::Condition(k) => Ok(k),
        o => Err(o),
    })?;
    if !matches!(condition, Condition::Even(_)) {
        return Err(CompileError::UnsupportedFeature {
            detail: format!("condition {condition:?} is only supported in end rules"),
        });
    }
    let then = moves_arg(c, &n.positional[1], n)?;
    let otherwise = moves_arg(c, &n.positional[2], n)?;
    Ok(Construct::Moves(MovesRule::If {
        condition,
        then: Box::new(then),
        otherwise: Box::new(otherwise),
    }))
}

fn c_even(c: &mut Compiler<'_>, n: &LudemeNode) -> Result<Construct, CompileError> {
    let expr = c.want(&n.positional[0], n, "integer expression", |x| match x {
        Construct::IntExpr(e) => Ok(e),
        o => Err(o),
    })?;
    Ok(Construct::Condition(Condition::Even(expr)))
}

fn c_turn(_: &mut Compiler<'_>, _: &LudemeNode) -> Result<Construct, CompileError> {
    Ok(Construct::IntExpr(IntExpr::Turn))
}

fn c_stalemated(c: &mut Compiler<'_>, n: &LudemeNode) -> Result<Construct, CompileError> {
    let player = player_arg(c, &n.positional[0], n)?;
    if player != PlayerRef::Mover {
        return Err(CompileError::UnsupportedFeature {
            detail: "(stalemated ...) only supports (mover)".to_string(),
        });
    }
    Ok(Construct::Condition(Condition::Stalemated(player)))
}

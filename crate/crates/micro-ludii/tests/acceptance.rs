//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use micro_ludii::agent_arg::AgentArg;
use micro_ludii::bench::perf_bench;
use micro_ludii::check::check;
use micro_ludii::games::{self, shipped};
use micro_ludii::matches::run_match;
use micro_ludii_core::agents::AgentError;
use micro_ludii_core::engine::{detect_line, line_through};
use micro_ludii_core::lud::description::{
    Condition, IntExpr, MovesRule, Ownership, Outcome, PlayerRef, SiteFilter,
};
use micro_ludii_core::lud::{self, LudemeRegistry};
use micro_ludii_core::{
    select_move, AgentKind, AgentSpec, BoardKind, Game, GameState, MoveKind, PieceId, Player, Status,
};

type Outcome3 = Result<String, String>;

struct Criterion {
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome3,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------------------
// Parse-compile fidelity

fn parse_compile() -> Outcome3 {
    let gomoku = lud::load(games::source("gomoku").unwrap()).map_err(|e| e.to_string())?;
    ensure(gomoku.players == 2, || "gomoku mode".into())?;
    ensure(gomoku.board.kind == BoardKind::GoBoard && gomoku.board.side == 15, || "gomoku board".into())?;
    let names: Vec<_> = gomoku.pieces.iter().map(|p| p.name.as_str()).collect();
    ensure(names == ["Ball1", "Ball2"], || format!("gomoku pieces {names:?}"))?;
    ensure(gomoku.start.is_empty(), || "gomoku start".into())?;
    ensure(
        matches!(gomoku.play, MovesRule::Place { player: PlayerRef::Mover, filter: SiteFilter::Empty }),
        || format!("gomoku play {:?}", gomoku.play),
    )?;
    ensure(gomoku.end.len() == 1, || "gomoku end count".into())?;
    let e = gomoku.end[0];
    ensure(
        e.condition == Condition::Line { length: 5 } && e.player == PlayerRef::Mover && e.outcome == Outcome::Win,
        || format!("gomoku end {e:?}"),
    )?;

    let amazons = lud::load(games::source("amazons").unwrap()).map_err(|e| e.to_string())?;
    ensure(amazons.board.kind == BoardKind::ChessBoard && amazons.board.side == 10, || "amazons board".into())?;
    let names: Vec<_> = amazons.pieces.iter().map(|p| p.name.as_str()).collect();
    ensure(names == ["Queen1", "Queen2", "Dot0"], || format!("amazons pieces {names:?}"))?;
    for q in &amazons.pieces[..2] {
        let m = q.movement.as_ref().ok_or("queen without movement")?;
        ensure(m.filter == SiteFilter::Empty && m.replays(), || format!("queen movement {m:?}"))?;
    }
    ensure(amazons.pieces[2].movement.is_none() && amazons.pieces[2].owner.is_none(), || "dot".into())?;
    ensure(
        amazons.piece_specs.iter().map(|s| s.ownership).collect::<Vec<_>>() == [Ownership::Each, Ownership::None],
        || "amazons ownership".into(),
    )?;
    let starts: Vec<(String, Vec<usize>)> = amazons
        .start
        .iter()
        .map(|p| (amazons.piece(p.piece).name.clone(), p.sites.clone()))
        .collect();
    ensure(
        starts == [("Queen1".into(), vec![3, 6, 30, 39]), ("Queen2".into(), vec![60, 69, 93, 96])],
        || format!("amazons start {starts:?}"),
    )?;
    match &amazons.play {
        MovesRule::If { condition, then, otherwise } => {
            ensure(*condition == Condition::Even(IntExpr::Turn), || "if condition".into())?;
            ensure(matches!(**then, MovesRule::ByPiece), || "then branch".into())?;
            ensure(
                matches!(**otherwise, MovesRule::Shoot { filter: SiteFilter::Empty, piece } if amazons.piece(piece).name == "Dot0"),
                || "else branch".into(),
            )?;
        }
        other => return Err(format!("amazons play {other:?}")),
    }
    let e = amazons.end.as_slice();
    ensure(
        e.len() == 1
            && e[0].condition == Condition::Stalemated(PlayerRef::Mover)
            && e[0].player == PlayerRef::Next
            && e[0].outcome == Outcome::Win,
        || format!("amazons end {e:?}"),
    )?;
    Ok("Gomoku and Amazons compile; all enumerated fields match".into())
}

// ---------------------------------------------------------------------------
// Round trip and mutation fuzz

fn mutate(src: &str, rng: &mut ChaCha8Rng) -> String {
    let mut chars: Vec<char> = src.chars().collect();
    const ALPHABET: &[char] = &['(', ')', '{', '}', '"', ':', ' ', 'a', 'Z', '7', '0', '\n', '#', '-', 'é'];
    for _ in 0..rng.random_range(1..=4) {
        let at = rng.random_range(0..=chars.len());
        match rng.random_range(0..4) {
            0 if at < chars.len() => {
                chars.remove(at);
            }
            1 => chars.insert(at, ALPHABET[rng.random_range(0..ALPHABET.len())]),
            2 if at < chars.len() => chars[at] = ALPHABET[rng.random_range(0..ALPHABET.len())],
            _ => {
                let delims: Vec<usize> = (0..chars.len()).filter(|&i| "(){}".contains(chars[i])).collect();
                if !delims.is_empty() {
                    chars.remove(delims[rng.random_range(0..delims.len())]);
                }
            }
        }
    }
    chars.into_iter().collect()
}

fn round_trip() -> Outcome3 {
    for (name, src) in games::SHIPPED {
        let tree = lud::parse_str(src).map_err(|e| format!("{name}: {e}"))?;
        let text = lud::format(&tree);
        let again = lud::parse_str(&text).map_err(|e| format!("{name} reformatted: {e}"))?;
        ensure(again == tree, || format!("{name}: tree changed by formatting"))?;
        ensure(lud::format(&again) == text, || format!("{name}: formatting not idempotent"))?;
    }
    let registry = LudemeRegistry::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (mut parse_errs, mut compile_errs, mut ok) = (0, 0, 0);
    for i in 0..1000 {
        let src = games::SHIPPED[i % 4].1;
        let mutated = mutate(src, &mut rng);
        let lines = mutated.split('\n').count() as u32;
        let result = catch_unwind(|| match lud::parse_str(&mutated) {
            Err(e) => Err(Some(e.pos())),
            Ok(tree) => lud::compile(&tree, &registry).map(|_| ()).map_err(|_| None),
        });
        match result {
            Err(_) => return Err(format!("panic on mutation {i}: {mutated:?}")),
            Ok(Ok(())) => ok += 1,
            Ok(Err(None)) => compile_errs += 1,
            Ok(Err(Some(pos))) => {
                parse_errs += 1;
                if let Some(p) = pos {
                    ensure(p.line >= 1 && p.line <= lines && p.col >= 1, || {
                        format!("mutation {i}: error at {p} outside {lines} lines")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "4 files round-trip; 1000 mutations: {parse_errs} parse errors, {compile_errs} compile errors, {ok} accepted, 0 panics"
    ))
}

// ---------------------------------------------------------------------------
// Independent tic-tac-toe oracle on a 3x3 board. Cells hold 0 (empty), 1 or 2.

const LINES3: [[usize; 3]; 8] = [
    [0, 1, 2], [3, 4, 5], [6, 7, 8], [0, 3, 6], [1, 4, 7], [2, 5, 8], [0, 4, 8], [2, 4, 6],
];

fn has_line(b: &[u8; 9], p: u8) -> bool {
    LINES3.iter().any(|l| l.iter().all(|&i| b[i] == p))
}

/// Outcome index (win 1, win 2, draw) after `last` moved, or `None` while ongoing.
fn oracle_status(b: &[u8; 9], last: u8) -> Option<usize> {
    if has_line(b, last) {
        Some(last as usize - 1)
    } else if b.iter().all(|&c| c != 0) {
        Some(2)
    } else {
        None
    }
}

fn oracle_tally(b: &mut [u8; 9], mover: u8, out: &mut [u64; 3]) {
    for i in 0..9 {
        if b[i] == 0 {
            b[i] = mover;
            match oracle_status(b, mover) {
                Some(k) => out[k] += 1,
                None => oracle_tally(b, 3 - mover, out),
            }
            b[i] = 0;
        }
    }
}

fn oracle_probabilities(b: &mut [u8; 9], mover: u8) -> [f64; 3] {
    let empties: Vec<usize> = (0..9).filter(|&i| b[i] == 0).collect();
    let w = 1.0 / empties.len() as f64;
    let mut p = [0.0; 3];
    for i in empties {
        b[i] = mover;
        let sub = match oracle_status(b, mover) {
            Some(k) => {
                let mut one = [0.0; 3];
                one[k] = 1.0;
                one
            }
            None => oracle_probabilities(b, 3 - mover),
        };
        b[i] = 0;
        for k in 0..3 {
            p[k] += w * sub[k];
        }
    }
    p
}

fn engine_tally(g: &Game, s: &GameState, out: &mut [u64; 3]) {
    match s.status() {
        Status::Win(p) => out[p.id() as usize - 1] += 1,
        Status::Draw => out[2] += 1,
        Status::Ongoing => {
            for mv in g.legal_moves(s).unwrap() {
                engine_tally(g, &g.apply(s, &mv).unwrap(), out);
            }
        }
    }
}

fn to_state(b: &[u8; 9]) -> GameState {
    let contents = b
        .iter()
        .map(|&c| match c {
            0 => None,
            p => Some(PieceId(p - 1)),
        })
        .collect();
    let n = b.iter().filter(|&&c| c != 0).count() as u32;
    let mover = if n.is_multiple_of(2) { Player::ONE } else { Player::TWO };
    GameState::from_parts(contents, mover, n, None)
}

// ---------------------------------------------------------------------------
// Engine oracles

fn longest_run(side: i32, cells: &[Option<PieceId>], piece: PieceId) -> usize {
    let mut best = 0;
    for r in 0..side {
        for c in 0..side {
            for (dr, dc) in [(0, 1), (1, 0), (1, 1), (1, -1)] {
                let (mut rr, mut cc, mut n) = (r, c, 0);
                while (0..side).contains(&rr) && (0..side).contains(&cc) && cells[(rr * side + cc) as usize] == Some(piece) {
                    n += 1;
                    rr += dr;
                    cc += dc;
                }
                best = best.max(n);
            }
        }
    }
    best
}

fn engine_oracles() -> Outcome3 {
    // (a) line detection.
    let gomoku = shipped("gomoku").unwrap();
    let topo = gomoku.topology();
    let owners = [Some(Player::ONE), Some(Player::TWO)];
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut disagreements = 0;
    let mut positives = 0;
    for _ in 0..1000 {
        let density = rng.random_range(0.05..0.8);
        let cells: Vec<Option<PieceId>> = (0..225)
            .map(|_| rng.random_bool(density).then(|| PieceId(rng.random_range(0..2))))
            .collect();
        for (k, player) in [Player::ONE, Player::TWO].into_iter().enumerate() {
            let expected = longest_run(15, &cells, PieceId(k as u8)) >= 5;
            let full = detect_line(topo, &cells, &owners, player, 5);
            let local = (0..225).any(|s| line_through(topo, &cells, &owners, s, player, 5));
            positives += expected as usize;
            disagreements += (full != expected) as usize + (local != expected) as usize;
        }
    }
    ensure(disagreements == 0, || format!("{disagreements} line disagreements"))?;

    // (b) Amazons slides by walking coordinates.
    let amazons = shipped("amazons").unwrap();
    let s = amazons.initial_state().unwrap();
    let mut walked = 0;
    for q in [3i32, 6, 30, 39] {
        for (dr, dc) in [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)] {
            let (mut r, mut c) = (q / 10 + dr, q % 10 + dc);
            while (0..10).contains(&r) && (0..10).contains(&c) && s.at((r * 10 + c) as usize).is_none() {
                walked += 1;
                r += dr;
                c += dc;
            }
        }
    }
    let moves = amazons.legal_moves(&s).unwrap();
    ensure(moves.iter().all(|m| m.kind == MoveKind::Slide), || "non-slide opening move".into())?;
    ensure(moves.len() == walked, || format!("{} slides vs oracle {walked}", moves.len()))?;

    // (c) side-3 game tree.
    let ttt = shipped("tictactoe").unwrap();
    let mut oracle = [0; 3];
    oracle_tally(&mut [0; 9], 1, &mut oracle);
    let mut engine = [0; 3];
    engine_tally(&ttt, &ttt.initial_state().unwrap(), &mut engine);
    ensure(oracle == engine, || format!("engine {engine:?} vs oracle {oracle:?}"))?;
    Ok(format!(
        "0/2000 line disagreements ({positives} lines); {walked} opening slides; tree tallies {engine:?}"
    ))
}

// ---------------------------------------------------------------------------

fn playout_statistics() -> Outcome3 {
    let exact = oracle_probabilities(&mut [0; 9], 1);
    let game = shipped("tictactoe").unwrap();
    let initial = game.initial_state().unwrap();
    const N: u64 = 100_000;
    let counts = (0..N)
        .into_par_iter()
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut c = [0u64; 3];
            match game.playout_with(&initial, &mut rng) {
                Status::Win(p) => c[p.id() as usize - 1] += 1,
                _ => c[2] += 1,
            }
            c
        })
        .reduce(|| [0; 3], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]]);
    let observed = counts.map(|c| c as f64 / N as f64);
    let worst = (0..3).map(|k| (observed[k] - exact[k]).abs()).fold(0.0, f64::max);
    let line = format!(
        "observed {:.4}/{:.4}/{:.4} vs exact {:.4}/{:.4}/{:.4}, max deviation {worst:.4}",
        observed[0], observed[1], observed[2], exact[0], exact[1], exact[2]
    );
    ensure(worst <= 0.01, || line.clone())?;
    Ok(line)
}

fn mcts_tactics() -> Outcome3 {
    // Every reachable ongoing side-3 position where the mover can win at once.
    let mut seen = HashSet::new();
    let mut positions = Vec::new();
    let mut stack = vec![([0u8; 9], 1u8)];
    while let Some((b, mover)) = stack.pop() {
        if !seen.insert(b) {
            continue;
        }
        let winning: Vec<usize> = (0..9)
            .filter(|&i| {
                let mut t = b;
                t[i] == 0 && {
                    t[i] = mover;
                    has_line(&t, mover)
                }
            })
            .collect();
        if !winning.is_empty() {
            positions.push((b, winning));
        }
        for i in 0..9 {
            if b[i] == 0 {
                let mut t = b;
                t[i] = mover;
                if oracle_status(&t, mover).is_none() {
                    stack.push((t, 3 - mover));
                }
            }
        }
    }
    let game = shipped("tictactoe").unwrap();
    let hits = positions
        .par_iter()
        .enumerate()
        .filter(|(i, (b, winning))| {
            let spec = AgentSpec::mcts(2000, *i as u64);
            let (mv, _) = select_move(&spec, &game, &to_state(b)).unwrap();
            winning.contains(&mv.to)
        })
        .count();
    let rate = hits as f64 / positions.len() as f64;
    let line = format!("{hits}/{} positions ({:.2}%)", positions.len(), rate * 100.0);
    ensure(rate >= 0.99, || line.clone())?;
    Ok(line)
}

fn strength() -> Outcome3 {
    let game = shipped("gomoku-9").unwrap();
    let a: AgentArg = "mcts:1000".parse().unwrap();
    let b: AgentArg = "random".parse().unwrap();
    let report = run_match(&game, a, b, 50, 1, None).map_err(|e| e.to_string())?;
    let line = format!(
        "mcts(1000) won {}/50 (lost {}, drew {}) in {} ms",
        report.wins_a, report.wins_b, report.draws, report.timing.elapsed_ms
    );
    ensure(report.wins_a >= 45, || line.clone())?;
    Ok(line)
}

fn throughput() -> Outcome3 {
    let game = shipped("gomoku").unwrap();
    let r = perf_bench(&game, Duration::from_secs(5)).map_err(|e| e.to_string())?;
    let line = format!("{} playouts in {:.2} s = {:.0} playouts/s", r.playouts, r.seconds, r.playouts_per_second);
    ensure(r.playouts_per_second >= 1000.0, || line.clone())?;
    Ok(line)
}

fn stats_invariants() -> Outcome3 {
    let names = ["gomoku", "amazons"];
    let violations: Vec<String> = (0..100u64)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + i);
            let game = shipped(names[i as usize % 2]).unwrap();
            let mut s = game.initial_state().unwrap();
            for _ in 0..rng.random_range(0..40) {
                let moves = game.legal_moves(&s).ok()?;
                let next = game.apply(&s, &moves[rng.random_range(0..moves.len())]).unwrap();
                if next.status().is_over() {
                    break;
                }
                s = next;
            }
            let iterations = rng.random_range(1..=600);
            let spec = AgentSpec {
                kind: AgentKind::Mcts { iterations, exploration: rng.random_range(0.0..3.0) },
                seed: rng.random(),
            };
            let (mv, stats) = match select_move(&spec, &game, &s) {
                Ok(r) => r,
                Err(AgentError::TerminalState) => return None,
                Err(e) => return Some(format!("search {i}: {e}")),
            };
            let legal = game.legal_moves(&s).unwrap();
            let sum: u64 = stats.entries.iter().map(|e| e.visits as u64).sum();
            let bad_mean = stats.entries.iter().any(|e| !(-1.0..=1.0).contains(&e.mean_value));
            let listed: Vec<_> = stats.entries.iter().map(|e| e.mv).collect();
            if sum != iterations as u64 || stats.total_iterations != iterations || bad_mean || listed != legal || !legal.contains(&mv) {
                Some(format!("search {i}: visits {sum} of {iterations}, mean out of range {bad_mean}"))
            } else {
                None
            }
        })
        .collect();
    ensure(violations.is_empty(), || violations.join("; "))?;
    Ok("100 searches, 0 violations".into())
}

fn api_contract() -> Outcome3 {
    let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build().map_err(|e| e.to_string())?;
    let result = catch_unwind(AssertUnwindSafe(|| {
        rt.block_on(async {
            let c = common::spawn_server().await;
            common::contract_script(&c).await;
        })
    }));
    match result {
        Ok(()) => Ok("all endpoints and error codes behave; field names exact".into()),
        Err(e) => Err(e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "contract script panicked".into())),
    }
}

fn qr_lint() -> Outcome3 {
    let r = check(games::source("gomoku").unwrap()).map_err(|e| e.to_string())?;
    let line = format!("formatted gomoku.lud is {} bytes (limit {})", r.formatted_bytes, r.qr_capacity_bytes);
    ensure(r.formatted_bytes <= 2953, || line.clone())?;
    Ok(line)
}

fn main() {
    // Failing assertions inside criteria are reported on their line instead.
    std::panic::set_hook(Box::new(|_| {}));
    let criteria = [
        Criterion { name: "parse-compile fidelity", limit: Duration::from_secs(1), run: parse_compile },
        Criterion { name: "round-trip and mutation fuzz", limit: Duration::from_secs(30), run: round_trip },
        Criterion { name: "engine oracles", limit: Duration::from_secs(120), run: engine_oracles },
        Criterion { name: "playout statistics", limit: Duration::from_secs(60), run: playout_statistics },
        Criterion { name: "mcts tactical soundness", limit: Duration::from_secs(300), run: mcts_tactics },
        Criterion { name: "strength vs random", limit: Duration::from_secs(600), run: strength },
        Criterion { name: "playout throughput", limit: Duration::from_secs(60), run: throughput },
        Criterion { name: "search stats invariants", limit: Duration::from_secs(120), run: stats_invariants },
        Criterion { name: "api contract", limit: Duration::from_secs(60), run: api_contract },
        Criterion { name: "qr lint", limit: Duration::from_secs(1), run: qr_lint },
    ];
    let mut failed = 0;
    for c in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(c.run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > c.limit => Err(format!("{detail}; took {took:.1?}, limit {:?}", c.limit)),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("[PASS] {}: {detail} ({took:.1?})", c.name),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {}: {detail} ({took:.1?})", c.name);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}

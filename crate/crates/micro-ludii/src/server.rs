//! HTTP/JSON match server.
//!
//! Sessions live in memory. Each one sits behind its own lock. Mutating
//! requests hold the write lock while agents think, so concurrent moves on a
//! session are applied one at a time and the loser sees the updated state.

use std::collections::{BTreeMap, HashMap};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;
use tokio::sync::RwLock;
use tower_http::services::ServeDir;

use micro_ludii_core::agents::{search, DEFAULT_EXPLORATION};
use micro_ludii_core::{select_move, AgentKind, AgentSpec, Game, GameState, Move, Player, SearchStats, Status};

use crate::games;
use crate::wire::{MoveJson, StatsJson};

pub const DEFAULT_IDLE: Duration = Duration::from_secs(3600);
/// Upper bound on a single search request.
pub const MAX_ITERATIONS: u32 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ErrorCode {
    UnknownGame,
    BadSeatAssignment,
    UnknownMatch,
    NotYourSeat,
    IllegalMove,
    MatchOver,
    NotAgentSeat,
    BadRequest,
}

#[derive(Debug)]
pub struct ApiError {
    pub code: ErrorCode,
    pub detail: String,
}

impl ApiError {
    fn new(code: ErrorCode, detail: impl Into<String>) -> Self {
        ApiError {
            code,
            detail: detail.into(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match self.code {
            ErrorCode::UnknownMatch => StatusCode::NOT_FOUND,
            _ => StatusCode::BAD_REQUEST,
        };
        (status, Json(json!({ "error": self.code, "detail": self.detail }))).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SeatJson {
    Human,
    Random {
        #[serde(default)]
        seed: u64,
    },
    #[serde(rename_all = "camelCase")]
    Mcts {
        iterations: u32,
        #[serde(default)]
        seed: u64,
        exploration_c: Option<f64>,
    },
}

impl SeatJson {
    fn agent(self) -> Option<AgentSpec> {
        match self {
            SeatJson::Human => None,
            SeatJson::Random { seed } => Some(AgentSpec::random(seed)),
            SeatJson::Mcts {
                iterations,
                seed,
                exploration_c,
            } => Some(AgentSpec {
                kind: AgentKind::Mcts {
                    iterations,
                    exploration: exploration_c.unwrap_or(DEFAULT_EXPLORATION),
                },
                seed,
            }),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateMatch {
    game: String,
    seats: BTreeMap<String, serde_json::Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Analyze {
    iterations: u32,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StateView {
    pub game: String,
    pub board_kind: &'static str,
    pub side: usize,
    pub sites: BTreeMap<usize, String>,
    pub mover: u8,
    pub turn: u32,
    pub replay_site: Option<usize>,
    pub status: &'static str,
    pub winner: Option<u8>,
    pub legal_moves: Vec<MoveJson>,
    pub history_length: usize,
}

#[derive(Serialize)]
struct AiMoveView {
    #[serde(rename = "move")]
    mv: MoveJson,
    state: StateView,
    stats: StatsJson,
}

pub struct Session {
    game: Arc<Game>,
    state: GameState,
    /// Seat for players 1 and 2; `None` is a human.
    seats: [Option<AgentSpec>; 2],
    history: Vec<Move>,
    last_stats: Option<SearchStats>,
}

impl Session {
    fn seat(&self, p: Player) -> Option<AgentSpec> {
        self.seats[p.id() as usize - 1]
    }

    fn view(&self) -> StateView {
        let game = &self.game;
        let status = self.state.status();
        let legal_moves = match status {
            Status::Ongoing => game.legal_moves(&self.state).unwrap_or_default(),
            _ => Vec::new(),
        };
        StateView {
            game: game.name().into(),
            board_kind: game.topology().kind().ludeme(),
            side: game.topology().side(),
            sites: self
                .state
                .contents()
                .iter()
                .enumerate()
                .filter_map(|(i, c)| c.map(|p| (i, game.piece_name(p).to_owned())))
                .collect(),
            mover: self.state.mover().id(),
            turn: self.state.turn(),
            replay_site: self.state.replay_site(),
            status: match status {
                Status::Ongoing => "Ongoing",
                Status::Win(_) => "Win",
                Status::Draw => "Draw",
            },
            winner: status.winner().map(Player::id),
            legal_moves: legal_moves.iter().map(|m| MoveJson::encode(game, m)).collect(),
            history_length: self.history.len(),
        }
    }

    fn ensure_ongoing(&self) -> Result<(), ApiError> {
        match self.state.status() {
            Status::Ongoing => Ok(()),
            s => Err(ApiError::new(ErrorCode::MatchOver, format!("match finished: {s:?}"))),
        }
    }

    fn apply(&mut self, mv: Move) -> Result<(), ApiError> {
        self.state = self
            .game
            .apply(&self.state, &mv)
            .map_err(|e| ApiError::new(ErrorCode::IllegalMove, e.to_string()))?;
        self.history.push(mv);
        self.last_stats = None;
        debug_assert_eq!(self.game.replay(&self.history).as_ref(), Ok(&self.state));
        Ok(())
    }
}

struct Entry {
    session: Arc<RwLock<Session>>,
    /// Milliseconds since server start of the last request touching this session.
    touched: AtomicU64,
}

#[derive(Clone)]
pub struct AppState {
    games: Arc<BTreeMap<&'static str, Arc<Game>>>,
    sessions: Arc<RwLock<HashMap<String, Arc<Entry>>>>,
    epoch: Instant,
}

impl Default for AppState {
    fn default() -> Self {
        Self::new()
    }
}

impl AppState {
    pub fn new() -> Self {
        let games = games::names()
            .map(|n| (n, Arc::new(games::shipped(n).expect("bundled game"))))
            .collect();
        AppState {
            games: Arc::new(games),
            sessions: Arc::default(),
            epoch: Instant::now(),
        }
    }

    fn now_ms(&self) -> u64 {
        self.epoch.elapsed().as_millis() as u64
    }

    async fn session(&self, id: &str) -> Result<Arc<RwLock<Session>>, ApiError> {
        let sessions = self.sessions.read().await;
        let entry = sessions
            .get(id)
            .ok_or_else(|| ApiError::new(ErrorCode::UnknownMatch, format!("no match {id:?}")))?;
        entry.touched.store(self.now_ms(), Ordering::Relaxed);
        Ok(entry.session.clone())
    }

    pub async fn session_count(&self) -> usize {
        self.sessions.read().await.len()
    }

    /// Drops sessions untouched for longer than `idle`.
    pub async fn evict_idle(&self, idle: Duration) -> usize {
        let now = self.now_ms();
        let idle = idle.as_millis() as u64;
        let mut sessions = self.sessions.write().await;
        let before = sessions.len();
        sessions.retain(|_, e| now.saturating_sub(e.touched.load(Ordering::Relaxed)) <= idle);
        before - sessions.len()
    }
}

fn body<T: DeserializeOwned>(bytes: &[u8], code: ErrorCode) -> Result<T, ApiError> {
    serde_json::from_slice(bytes).map_err(|e| ApiError::new(code, e.to_string()))
}

fn parse_seats(raw: &BTreeMap<String, serde_json::Value>) -> Result<[Option<AgentSpec>; 2], ApiError> {
    let bad = |d: String| ApiError::new(ErrorCode::BadSeatAssignment, d);
    if let Some(k) = raw.keys().find(|k| *k != "1" && *k != "2") {
        return Err(bad(format!("no player {k:?}; seats are \"1\" and \"2\"")));
    }
    let mut seats = [None; 2];
    for (i, key) in ["1", "2"].into_iter().enumerate() {
        let value = raw.get(key).ok_or_else(|| bad(format!("player {key} has no seat")))?;
        let seat: SeatJson =
            serde_json::from_value(value.clone()).map_err(|e| bad(format!("player {key}: {e}")))?;
        seats[i] = seat.agent();
        if let Some(spec) = &seats[i] {
            spec.validate().map_err(|e| bad(format!("player {key}: {e}")))?;
            if let AgentKind::Mcts { iterations, .. } = spec.kind {
                if iterations > MAX_ITERATIONS {
                    return Err(bad(format!("player {key}: at most {MAX_ITERATIONS} iterations")));
                }
            }
        }
    }
    Ok(seats)
}

async fn list_games(State(app): State<AppState>) -> Json<Vec<&'static str>> {
    Json(app.games.keys().copied().collect())
}

async fn create_match(State(app): State<AppState>, bytes: Bytes) -> ApiResult<serde_json::Value> {
    let req: CreateMatch = body(&bytes, ErrorCode::BadRequest)?;
    let game = app
        .games
        .get(req.game.as_str())
        .ok_or_else(|| ApiError::new(ErrorCode::UnknownGame, format!("no game {:?}", req.game)))?
        .clone();
    let seats = parse_seats(&req.seats)?;
    let state = game.initial_state().expect("bundled start is valid");
    let id = uuid::Uuid::new_v4().simple().to_string();
    let entry = Entry {
        session: Arc::new(RwLock::new(Session {
            game,
            state,
            seats,
            history: Vec::new(),
            last_stats: None,
        })),
        touched: AtomicU64::new(app.now_ms()),
    };
    app.sessions.write().await.insert(id.clone(), Arc::new(entry));
    Ok(Json(json!({ "id": id })))
}

async fn get_state(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<StateView> {
    let session = app.session(&id).await?;
    let view = session.read().await.view();
    Ok(Json(view))
}

async fn post_move(
    State(app): State<AppState>,
    Path(id): Path<String>,
    bytes: Bytes,
) -> ApiResult<StateView> {
    let session = app.session(&id).await?;
    let mut s = session.write().await;
    s.ensure_ongoing()?;
    if s.seat(s.state.mover()).is_some() {
        return Err(ApiError::new(
            ErrorCode::NotYourSeat,
            format!("player {} is played by an agent", s.state.mover().id()),
        ));
    }
    let mv: MoveJson = body(&bytes, ErrorCode::IllegalMove)?;
    let mv = mv
        .decode(&s.game)
        .map_err(|e| ApiError::new(ErrorCode::IllegalMove, e.to_string()))?;
    s.apply(mv)?;
    Ok(Json(s.view()))
}

async fn ai_move(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<AiMoveView> {
    let session = app.session(&id).await?;
    let mut s = session.write_owned().await;
    s.ensure_ongoing()?;
    let Some(spec) = s.seat(s.state.mover()) else {
        return Err(ApiError::new(
            ErrorCode::NotAgentSeat,
            format!("player {} is human", s.state.mover().id()),
        ));
    };
    // Vary the agent's seed by ply so repeated positions are not replayed identically.
    let spec = spec.with_seed(spec.seed.wrapping_add(s.history.len() as u64));
    let view = tokio::task::spawn_blocking(move || {
        let start = Instant::now();
        let (mv, mut stats) = select_move(&spec, &s.game, &s.state)
            .map_err(|e| ApiError::new(ErrorCode::MatchOver, e.to_string()))?;
        stats.elapsed_ms = start.elapsed().as_millis() as u64;
        let stats_json = StatsJson::encode(&s.game, &stats);
        let mv_json = MoveJson::encode(&s.game, &mv);
        s.apply(mv)?;
        s.last_stats = Some(stats);
        Ok::<_, ApiError>(AiMoveView {
            mv: mv_json,
            state: s.view(),
            stats: stats_json,
        })
    })
    .await
    .expect("agent task panicked")?;
    Ok(Json(view))
}

async fn analyze(
    State(app): State<AppState>,
    Path(id): Path<String>,
    bytes: Bytes,
) -> ApiResult<serde_json::Value> {
    let session = app.session(&id).await?;
    let s = session.read_owned().await;
    s.ensure_ongoing()?;
    let req: Analyze = body(&bytes, ErrorCode::BadRequest)?;
    if req.iterations == 0 || req.iterations > MAX_ITERATIONS {
        return Err(ApiError::new(
            ErrorCode::BadRequest,
            format!("iterations must be in 1..={MAX_ITERATIONS}"),
        ));
    }
    let stats = tokio::task::spawn_blocking(move || {
        let start = Instant::now();
        let seed = s.history.len() as u64;
        let mut stats = search(&s.game, &s.state, req.iterations, DEFAULT_EXPLORATION, seed);
        stats.elapsed_ms = start.elapsed().as_millis() as u64;
        StatsJson::encode(&s.game, &stats)
    })
    .await
    .expect("search task panicked");
    Ok(Json(json!({ "stats": stats })))
}

pub fn router(app: AppState, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/games", get(list_games))
        .route("/api/match", post(create_match))
        .route("/api/match/{id}", get(get_state))
        .route("/api/match/{id}/move", post(post_move))
        .route("/api/match/{id}/ai-move", post(ai_move))
        .route("/api/match/{id}/analyze", post(analyze))
        .with_state(app);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

/// Serves until the listener fails or ctrl-c arrives, evicting idle sessions.
pub async fn serve(
    listener: tokio::net::TcpListener,
    app: AppState,
    static_dir: Option<PathBuf>,
    idle: Duration,
) -> std::io::Result<()> {
    let sweeper = app.clone();
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(idle.min(Duration::from_secs(60)).max(Duration::from_millis(10)));
        loop {
            tick.tick().await;
            let n = sweeper.evict_idle(idle).await;
            if n > 0 {
                tracing::info!(evicted = n, "dropped idle sessions");
            }
        }
    });
    let addr: Option<SocketAddr> = listener.local_addr().ok();
    tracing::info!(?addr, "serving");
    axum::serve(listener, router(app, static_dir))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

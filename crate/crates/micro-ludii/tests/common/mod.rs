#![allow(dead_code)]

use std::time::Duration;

use micro_ludii::server::{self, AppState};
use serde_json::{json, Value};

pub struct Client {
    pub base: String,
    pub http: reqwest::Client,
    pub app: AppState,
}

/// Starts a server on an ephemeral port inside the current runtime.
pub async fn spawn_server() -> Client {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let base = format!("http://{}", listener.local_addr().unwrap());
    let app = AppState::new();
    let served = app.clone();
    tokio::spawn(async move {
        server::serve(listener, served, None, Duration::from_secs(3600)).await.unwrap();
    });
    Client {
        base,
        http: reqwest::Client::new(),
        app,
    }
}

impl Client {
    pub async fn get(&self, path: &str) -> (u16, Value) {
        let r = self.http.get(format!("{}{path}", self.base)).send().await.unwrap();
        let status = r.status().as_u16();
        (status, r.json().await.unwrap_or(Value::Null))
    }

    pub async fn post(&self, path: &str, body: Value) -> (u16, Value) {
        let r = self
            .http
            .post(format!("{}{path}", self.base))
            .json(&body)
            .send()
            .await
            .unwrap();
        let status = r.status().as_u16();
        (status, r.json().await.unwrap_or(Value::Null))
    }

    pub async fn create(&self, game: &str, seat1: Value, seat2: Value) -> String {
        let (code, body) = self
            .post("/api/match", json!({"game": game, "seats": {"1": seat1, "2": seat2}}))
            .await;
        assert_eq!(code, 200, "{body}");
        body["id"].as_str().unwrap().to_owned()
    }
}

pub fn human() -> Value {
    json!({"kind": "human"})
}

pub fn keys(v: &Value) -> Vec<&str> {
    let mut k: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    k.sort();
    k
}

pub const STATE_KEYS: [&str; 11] = [
    "boardKind",
    "game",
    "historyLength",
    "legalMoves",
    "mover",
    "replaySite",
    "side",
    "sites",
    "status",
    "turn",
    "winner",
];

pub const ENTRY_KEYS: [&str; 5] = ["color", "meanValue", "move", "radius", "visits"];
pub const STATS_KEYS: [&str; 3] = ["elapsedMs", "entries", "totalIterations"];

fn error_code(resp: &(u16, Value)) -> (u16, &str) {
    (resp.0, resp.1["error"].as_str().unwrap_or("<none>"))
}

fn assert_error(resp: &(u16, Value), status: u16, code: &str) {
    assert_eq!(error_code(resp), (status, code), "{}", resp.1);
    assert_eq!(keys(&resp.1), ["detail", "error"]);
}

fn assert_stats_shape(stats: &Value) {
    assert_eq!(keys(stats), STATS_KEYS);
    for e in stats["entries"].as_array().unwrap() {
        assert_eq!(keys(e), ENTRY_KEYS);
    }
}

/// The full scripted client run: every endpoint's happy path and every error code.
pub async fn contract_script(c: &Client) {
    // Listing.
    let (code, games) = c.get("/api/games").await;
    assert_eq!(code, 200);
    let mut names: Vec<&str> = games.as_array().unwrap().iter().map(|g| g.as_str().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["amazons", "gomoku", "gomoku-9", "tictactoe"]);

    // createMatch errors.
    let r = c.post("/api/match", json!({"game": "nosuch", "seats": {"1": human(), "2": human()}})).await;
    assert_error(&r, 400, "UnknownGame");
    for seats in [
        json!({"1": human()}),
        json!({"1": human(), "2": human(), "3": human()}),
        json!({"1": human(), "2": {"kind": "alpha"}}),
        json!({"1": human(), "2": {"kind": "mcts", "iterations": 0}}),
    ] {
        let r = c.post("/api/match", json!({"game": "gomoku", "seats": seats})).await;
        assert_error(&r, 400, "BadSeatAssignment");
    }

    // Human vs agent Gomoku.
    let mcts7 = json!({"kind": "mcts", "iterations": 300, "seed": 7});
    let id = c.create("gomoku", human(), mcts7.clone()).await;
    let (code, view) = c.get(&format!("/api/match/{id}")).await;
    assert_eq!(code, 200);
    assert_eq!(keys(&view), STATE_KEYS);
    assert_eq!(view["legalMoves"].as_array().unwrap().len(), 225);
    assert_eq!(view["sites"], json!({}));
    assert_eq!(view["boardKind"], "goBoard");
    assert_eq!(view["side"], 15);
    assert_eq!(view["status"], "Ongoing");
    assert_eq!(view["mover"], 1);
    assert_eq!(view["turn"], 0);

    let r = c.post(&format!("/api/match/{id}/ai-move"), json!({})).await;
    assert_error(&r, 400, "NotAgentSeat");

    let place = json!({"kind": "Place", "piece": "Ball1", "to": 112});
    let (code, view) = c.post(&format!("/api/match/{id}/move"), place.clone()).await;
    assert_eq!(code, 200, "{view}");
    assert_eq!(keys(&view), STATE_KEYS);
    assert_eq!(view["sites"]["112"], "Ball1");
    assert_eq!(view["historyLength"], 1);
    assert_eq!(view["mover"], 2);

    let r = c.post(&format!("/api/match/{id}/move"), place.clone()).await;
    assert_error(&r, 400, "NotYourSeat");

    let (code, ai) = c.post(&format!("/api/match/{id}/ai-move"), json!({})).await;
    assert_eq!(code, 200, "{ai}");
    assert_eq!(keys(&ai), ["move", "state", "stats"]);
    assert_eq!(keys(&ai["state"]), STATE_KEYS);
    assert_stats_shape(&ai["stats"]);
    let entries = ai["stats"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 224);
    let visits: u64 = entries.iter().map(|e| e["visits"].as_u64().unwrap()).sum();
    assert_eq!(visits, 300);
    assert_eq!(ai["stats"]["totalIterations"], 300);
    assert_eq!(ai["state"]["historyLength"], 2);
    let to = ai["move"]["to"].as_u64().unwrap();
    assert_eq!(ai["state"]["sites"][to.to_string()], "Ball2");

    // Same move twice: the second is illegal and leaves the state alone.
    let (_, before) = c.get(&format!("/api/match/{id}")).await;
    let r = c.post(&format!("/api/match/{id}/move"), place.clone()).await;
    assert_error(&r, 400, "IllegalMove");
    let r = c
        .post(&format!("/api/match/{id}/move"), json!({"kind": "Place", "piece": "Nope", "to": 3}))
        .await;
    assert_error(&r, 400, "IllegalMove");
    let (_, after) = c.get(&format!("/api/match/{id}")).await;
    assert_eq!(before, after);

    let (code, an) = c.post(&format!("/api/match/{id}/analyze"), json!({"iterations": 1})).await;
    assert_eq!(code, 200);
    assert_eq!(keys(&an), ["stats"]);
    assert_stats_shape(&an["stats"]);
    let entries = an["stats"]["entries"].as_array().unwrap();
    assert_eq!(entries.iter().filter(|e| e["visits"] == 1).count(), 1);
    assert_eq!(entries.iter().filter(|e| e["visits"] == 0).count(), entries.len() - 1);
    assert!(entries.iter().all(|e| e["move"]["kind"] == "Place"));
    let (_, unchanged) = c.get(&format!("/api/match/{id}")).await;
    assert_eq!(unchanged, after, "analyze must not mutate the match");

    // A random seat reports exactly one visited entry.
    let rid = c.create("gomoku", json!({"kind": "random", "seed": 3}), human()).await;
    let (code, ai) = c.post(&format!("/api/match/{rid}/ai-move"), json!({})).await;
    assert_eq!(code, 200);
    let entries = ai["stats"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 225);
    assert_eq!(entries.iter().filter(|e| e["visits"] == 1).count(), 1);
    assert!(entries.iter().all(|e| e["meanValue"] == 0.0 && e["color"] == json!([128, 0, 128])));

    // Amazons hot seat: movement phase first, arrows only.
    let aid = c.create("amazons", human(), human()).await;
    let (_, view) = c.get(&format!("/api/match/{aid}")).await;
    assert_eq!(view["turn"], 0);
    assert_eq!(view["boardKind"], "chessBoard");
    assert!(view["legalMoves"].as_array().unwrap().iter().all(|m| m["kind"] == "Slide"));
    let (code, an) = c.post(&format!("/api/match/{aid}/analyze"), json!({"iterations": 200})).await;
    assert_eq!(code, 200);
    assert!(an["stats"]["entries"].as_array().unwrap().iter().all(|e| e["move"]["kind"] == "Slide"));
    let slide = json!({"kind": "Slide", "piece": "Queen1", "from": 30, "to": 41});
    let (code, view) = c.post(&format!("/api/match/{aid}/move"), slide).await;
    assert_eq!(code, 200, "{view}");
    assert_eq!(view["replaySite"], 41);
    assert_eq!(view["mover"], 1);
    let (code, view) = c
        .post(&format!("/api/match/{aid}/move"), json!({"kind": "Shoot", "piece": "Dot0", "to": 52}))
        .await;
    assert_eq!(code, 200, "{view}");
    assert_eq!(view["sites"]["52"], "Dot0");
    assert_eq!(view["replaySite"], Value::Null);

    // Finish a tic-tac-toe game: X takes the bottom row.
    let tid = c.create("tictactoe", human(), human()).await;
    for (piece, to) in [("Ball1", 0), ("Ball2", 3), ("Ball1", 1), ("Ball2", 4), ("Ball1", 2)] {
        let (code, _) = c
            .post(&format!("/api/match/{tid}/move"), json!({"kind": "Place", "piece": piece, "to": to}))
            .await;
        assert_eq!(code, 200);
    }
    let (_, view) = c.get(&format!("/api/match/{tid}")).await;
    assert_eq!(view["status"], "Win");
    assert_eq!(view["winner"], 1);
    assert_eq!(view["legalMoves"], json!([]));
    let over = json!({"kind": "Place", "piece": "Ball2", "to": 5});
    assert_error(&c.post(&format!("/api/match/{tid}/move"), over).await, 400, "MatchOver");
    assert_error(&c.post(&format!("/api/match/{tid}/ai-move"), json!({})).await, 400, "MatchOver");
    assert_error(
        &c.post(&format!("/api/match/{tid}/analyze"), json!({"iterations": 5})).await,
        400,
        "MatchOver",
    );

    // Unknown ids.
    assert_error(&c.get("/api/match/nope").await, 404, "UnknownMatch");
    let mv = json!({"kind": "Place", "piece": "Ball1", "to": 0});
    assert_error(&c.post("/api/match/nope/move", mv).await, 404, "UnknownMatch");
    assert_error(&c.post("/api/match/nope/ai-move", json!({})).await, 404, "UnknownMatch");
    assert_error(&c.post("/api/match/nope/analyze", json!({"iterations": 1})).await, 404, "UnknownMatch");
}

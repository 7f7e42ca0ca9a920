//! Single-threaded random playout throughput.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use micro_ludii_core::Game;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BenchReport {
    pub game: String,
    pub seconds: f64,
    pub playouts: u64,
    pub playouts_per_second: f64,
}

/// Runs playouts with seeds 0, 1, 2, ... from the initial state until
/// `duration` has passed.
pub fn perf_bench(game: &Game, duration: Duration) -> anyhow::Result<BenchReport> {
    let initial = game.initial_state()?;
    let start = Instant::now();
    let mut playouts = 0u64;
    loop {
        let mut rng = ChaCha8Rng::seed_from_u64(playouts);
        game.playout_with(&initial, &mut rng);
        playouts += 1;
        if start.elapsed() >= duration {
            break;
        }
    }
    let seconds = start.elapsed().as_secs_f64();
    Ok(BenchReport {
        game: game.name().into(),
        seconds,
        playouts,
        playouts_per_second: playouts as f64 / seconds,
    })
}

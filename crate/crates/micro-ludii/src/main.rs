use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Context;
use clap::{Parser, Subcommand};

use micro_ludii::agent_arg::AgentArg;
use micro_ludii::{bench, check, games, matches, server};

#[derive(Parser)]
#[command(name = "micro-ludii", version, about = "Play and inspect ludeme-described board games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an agent-vs-agent match and print the report as JSON.
    Play {
        /// A `.lud` file, or the name of a bundled game.
        #[arg(long)]
        game: PathBuf,
        /// `random[:seed]` or `mcts[:iterations[:seed]]`.
        #[arg(long)]
        agent_a: AgentArg,
        #[arg(long)]
        agent_b: AgentArg,
        #[arg(long, default_value_t = 1)]
        games: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory receiving one trial file per game.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Measure random playouts per second.
    Bench {
        #[arg(long)]
        game: PathBuf,
        #[arg(long, default_value_t = 10.0)]
        seconds: f64,
    },
    /// Compile a description and lint its formatted size.
    Check {
        #[arg(long)]
        game: PathBuf,
    },
    /// Start the HTTP match server.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: String,
        /// Directory of static web client assets.
        #[arg(long)]
        static_dir: Option<PathBuf>,
        /// Idle seconds before a match is dropped.
        #[arg(long, default_value_t = server::DEFAULT_IDLE.as_secs())]
        idle_secs: u64,
    },
}

fn print_json(value: &impl serde::Serialize) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Play {
            game,
            agent_a,
            agent_b,
            games: n,
            seed,
            out_dir,
        } => {
            let game = games::load_path(&game)?;
            let report = matches::run_match(&game, agent_a, agent_b, n, seed, out_dir.as_deref())?;
            print_json(&report)
        }
        Command::Bench { game, seconds } => {
            anyhow::ensure!(seconds > 0.0 && seconds.is_finite(), "--seconds must be positive");
            let game = games::load_path(&game)?;
            print_json(&bench::perf_bench(&game, Duration::from_secs_f64(seconds))?)
        }
        Command::Check { game } => {
            let report = check::check(&games::read_source(&game)?)?;
            if !report.fits_qr {
                eprintln!(
                    "warning: formatted description is {} bytes, over the {}-byte capacity of a QR code",
                    report.formatted_bytes, report.qr_capacity_bytes
                );
            }
            print_json(&report)
        }
        Command::Serve {
            addr,
            static_dir,
            idle_secs,
        } => {
            tracing_subscriber::fmt().with_writer(std::io::stderr).init();
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async {
                let listener = tokio::net::TcpListener::bind(&addr)
                    .await
                    .with_context(|| format!("binding {addr}"))?;
                let app = server::AppState::new();
                server::serve(listener, app, static_dir, Duration::from_secs(idle_secs)).await?;
                Ok(())
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

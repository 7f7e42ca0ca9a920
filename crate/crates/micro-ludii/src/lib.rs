//! Std companion to `micro-ludii-core`: shipped games, trial files, agent
//! matches, playout benchmarks and the HTTP match server.

pub mod agent_arg;
pub mod bench;
pub mod check;
pub mod games;
pub mod matches;
pub mod server;
pub mod trial_file;
pub mod wire;

pub use micro_ludii_core as core;

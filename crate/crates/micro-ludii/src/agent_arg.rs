//! Command-line agent syntax: `random[:seed]` or `mcts[:iterations[:seed]]`.

use std::fmt;
use std::str::FromStr;

use micro_ludii_core::{AgentKind, AgentSpec};
use thiserror::Error;

pub const DEFAULT_ITERATIONS: u32 = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentArg(pub AgentSpec);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AgentArgError {
    #[error("unknown agent kind {0:?} (expected random or mcts)")]
    UnknownKind(String),
    #[error("bad number {0:?}")]
    BadNumber(String),
    #[error("too many fields in {0:?}")]
    TooManyFields(String),
    #[error("{0}")]
    Invalid(&'static str),
}

fn number<T: FromStr>(s: &str) -> Result<T, AgentArgError> {
    s.parse().map_err(|_| AgentArgError::BadNumber(s.into()))
}

impl FromStr for AgentArg {
    type Err = AgentArgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let spec = match parts.as_slice() {
            ["random"] => AgentSpec::random(0),
            ["random", seed] => AgentSpec::random(number(seed)?),
            ["random", ..] => return Err(AgentArgError::TooManyFields(s.into())),
            ["mcts"] => AgentSpec::mcts(DEFAULT_ITERATIONS, 0),
            ["mcts", it] => AgentSpec::mcts(number(it)?, 0),
            ["mcts", it, seed] => AgentSpec::mcts(number(it)?, number(seed)?),
            ["mcts", ..] => return Err(AgentArgError::TooManyFields(s.into())),
            [kind, ..] => return Err(AgentArgError::UnknownKind((*kind).into())),
            [] => unreachable!("split yields at least one part"),
        };
        spec.validate().map_err(|e| match e {
            micro_ludii_core::agents::AgentError::InvalidSpec(m) => AgentArgError::Invalid(m),
            _ => AgentArgError::Invalid("invalid agent"),
        })?;
        Ok(AgentArg(spec))
    }
}

impl fmt::Display for AgentArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.kind {
            AgentKind::Random => write!(f, "random:{}", self.0.seed),
            AgentKind::Mcts { iterations, .. } => write!(f, "mcts:{iterations}:{}", self.0.seed),
        }
    }
}

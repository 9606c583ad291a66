use thiserror::Error;

use crate::action::ActionError;
use crate::io::TraceError;
use crate::monitor::MonitorError;
use crate::scenario::ScenarioError;
use crate::sim::{ConfigError, WorldError};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Monitor(#[from] MonitorError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    World(#[from] WorldError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

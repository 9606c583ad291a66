//! Norm monitoring when only some actions are observed.
//!
//! A monitor tracks an open-world partial state from the actions it manages
//! to observe, reconstructs the actions of unobserved agents (exhaustively or
//! approximately) and judges obligation and prohibition instances, telling
//! identified verdicts apart from discovered ones.
//!
//! Layers, bottom-up: [`logic`] (symbols, literals, matching, consistency),
//! [`action`] and [`norm`] (models), [`scenario`] (compiled domain),
//! [`reconstruct`] and [`monitor`] (the engine), [`sim`] (ground-truth
//! simulation and experiments) and [`io`] (scenario/trace files, reports).

pub mod action;
pub mod io;
pub mod logic;
pub mod monitor;
pub mod norm;
pub mod reconstruct;
pub mod scenario;
pub mod sim;

mod error;

pub use action::{ActionDescription, ActionId, ActionInstance, ActionSchema, ConcurrentAction};
pub use error::Error;
pub use monitor::{InitialKnowledge, Monitor, MonitorConfig, MonitorError, TickRecord, Variant};
pub use norm::{Deontic, Mode, Norm, NormInstance, Status, Verdict};
pub use scenario::{Observability, Scenario, ScenarioError};

#[cfg(test)]
pub(crate) mod testkit;

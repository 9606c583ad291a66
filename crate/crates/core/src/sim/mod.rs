//! Ground-truth simulation and detection-rate experiments.
//!
//! A repetition builds a scenario, runs the world with random agents,
//! feeds the sensor's output to every requested monitor variant and scores
//! the verdicts against an omniscient judge. Each repetition draws from its
//! own random streams, derived from the master seed, the repetition index
//! and the purpose of the draws, so repetitions can run in parallel and a
//! sweep reuses the same worlds for every row.

pub mod case_study;
pub mod experiment;
pub mod metrics;
pub mod random;
pub mod world;

pub use case_study::{CameraChoice, CaseStudyConfig, ConfigError, CorridorChoice, Layout};
pub use experiment::{case_study_row, random_row, stream, RowResult, RunResult, Summary};
pub use metrics::{oracle_verdicts, score_run, Counts, Score};
pub use random::{generate_random, ObsChoice, RandomConfig};
pub use world::{observe, simulate, step_world, GroundTruthLog, WorldError, WorldTick};

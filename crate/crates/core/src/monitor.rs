//! The monitoring loop.
//!
//! Each call to [`Monitor::advance`] takes the actions observed at tick `t`
//! and returns the record of tick `t−1`: the preconditions of what was seen
//! at `t` refine `p_t` retrospectively, reconstruction runs on
//! `(p_{t−1}, p_t, Act_{t−1})`, and only then are the norms of `t−1`
//! judged. [`Monitor::finish`] closes the last tick with whatever is known.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action::{self, ActionId, ConcurrentAction};
use crate::logic::{is_consistent, Literal};
use crate::norm::{check_norms, relevant_instances, Discovery, Verdict};
use crate::reconstruct::{approximate_reconstruct, full_reconstruct, Diagnostics, FullConfig, Outcome};
use crate::scenario::Scenario;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Judges observed actions only.
    Traditional,
    Approximate,
    Full,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Traditional, Variant::Full, Variant::Approximate];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Traditional => "traditional",
            Variant::Approximate => "approximate",
            Variant::Full => "full",
        }
    }
}

/// What the monitor knows before the first observation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKnowledge {
    /// The closed-world encoding of the initial state.
    #[default]
    Complete,
    /// Nothing.
    Empty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonitorConfig {
    pub variant: Variant,
    pub initial: InitialKnowledge,
    pub full: FullConfig,
}

impl MonitorConfig {
    pub fn new(variant: Variant) -> Self {
        MonitorConfig {
            variant,
            initial: InitialKnowledge::Complete,
            full: FullConfig::default(),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonitorError {
    #[error("tick {tick}: agent {agent} appears in more than one observed action")]
    DuplicateActor { tick: u64, agent: String },
    #[error("tick {tick}: observed action {action} is performed by a non-agent")]
    UnknownActor { tick: u64, action: String },
    #[error("tick {tick}: sensor/model mismatch: {detail}")]
    SensorMismatch { tick: u64, detail: String },
    #[error("the monitor has already been finished")]
    Finished,
}

/// Everything the monitor concluded about one tick.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TickRecord {
    pub tick: u64,
    /// Actions the sensor reported.
    pub observed: ConcurrentAction,
    /// R: unobserved actions known to have been executed.
    pub reconstructed: BTreeSet<ActionId>,
    /// D with the instance each representative stands for.
    pub discovered: Vec<Discovery>,
    pub verdicts: Vec<Verdict>,
    /// Refined partial state at the start of the tick.
    pub state: BTreeSet<Literal>,
    pub diagnostics: Diagnostics,
}

#[derive(Clone, Debug)]
pub struct Monitor {
    scn: Arc<Scenario>,
    cfg: MonitorConfig,
    tick: u64,
    curr: BTreeSet<Literal>,
    prev: Option<(BTreeSet<Literal>, ConcurrentAction)>,
    finished: bool,
}

impl Monitor {
    pub fn new(scn: Arc<Scenario>, cfg: MonitorConfig) -> Self {
        let curr = match cfg.initial {
            InitialKnowledge::Complete => action::closed_world_encoding(&scn, &scn.initial_state),
            InitialKnowledge::Empty => BTreeSet::new(),
        };
        Monitor {
            scn,
            cfg,
            tick: 0,
            curr,
            prev: None,
            finished: false,
        }
    }

    pub fn scenario(&self) -> &Arc<Scenario> {
        &self.scn
    }

    pub fn config(&self) -> MonitorConfig {
        self.cfg
    }

    /// Index of the next tick to be observed.
    pub fn tick(&self) -> u64 {
        self.tick
    }

    /// Current knowledge about the state at [`Monitor::tick`].
    pub fn state(&self) -> &BTreeSet<Literal> {
        &self.curr
    }

    /// Feeds the observations of the current tick; returns the record of
    /// the previous tick, if any.
    pub fn advance(&mut self, observed: &ConcurrentAction) -> Result<Option<TickRecord>, MonitorError> {
        if self.finished {
            return Err(MonitorError::Finished);
        }
        let scn = Arc::clone(&self.scn);
        let t = self.tick;
        let mut seen = BTreeSet::new();
        for &a in observed {
            let inst = scn.action(a);
            if scn.agents.binary_search(&inst.actor).is_err() {
                return Err(MonitorError::UnknownActor {
                    tick: t,
                    action: scn.describe_action(a),
                });
            }
            if !seen.insert(inst.actor) {
                return Err(MonitorError::DuplicateActor {
                    tick: t,
                    agent: scn.symbols.name(inst.actor).to_string(),
                });
            }
        }

        let pre: Vec<Literal> = action::pre_of(&scn, observed).into_iter().collect();
        if !action::extends_consistently(&scn, &self.curr, &pre) {
            return Err(MonitorError::SensorMismatch {
                tick: t,
                detail: "observed preconditions contradict the known state".into(),
            });
        }
        self.curr.extend(pre);

        let record = match self.prev.take() {
            Some((p, act)) => Some(self.close(p, act)),
            None => None,
        };

        // computed after the refinement above so that the invariant
        // literals carried over use everything known about p_t
        let next = if observed.len() < scn.agent_count() {
            action::post_of(&scn, observed)
        } else {
            let mut n = action::invariant_literals(&scn, &self.curr, observed);
            n.extend(action::effects(&scn, observed));
            n
        };
        if !is_consistent(&next, &scn.statics, &scn.rules) {
            return Err(MonitorError::SensorMismatch {
                tick: t,
                detail: "observed postconditions are contradictory".into(),
            });
        }
        let curr = std::mem::replace(&mut self.curr, next);
        self.prev = Some((curr, observed.clone()));
        self.tick += 1;
        Ok(record)
    }

    /// Closes the last observed tick without next-tick preconditions.
    pub fn finish(&mut self) -> Result<Option<TickRecord>, MonitorError> {
        if self.finished {
            return Err(MonitorError::Finished);
        }
        self.finished = true;
        Ok(self.prev.take().map(|(p, act)| self.close(p, act)))
    }

    fn close(&mut self, mut p: BTreeSet<Literal>, observed: ConcurrentAction) -> TickRecord {
        let scn = Arc::clone(&self.scn);
        let t = self.tick - 1;
        let mut act = observed.clone();
        let outcome = if act.len() < scn.agent_count() {
            match self.cfg.variant {
                Variant::Traditional => Outcome::default(),
                Variant::Approximate => approximate_reconstruct(&scn, &mut p, &mut self.curr, &mut act, t),
                Variant::Full => full_reconstruct(&scn, &mut p, &mut self.curr, &mut act, self.cfg.full),
            }
        } else {
            Outcome::default()
        };
        let instances = relevant_instances(&scn, &p, t);
        let verdicts = check_norms(&scn, &instances, &act, &outcome.discovered);
        TickRecord {
            tick: t,
            observed,
            reconstructed: outcome.reconstructed,
            discovered: outcome.discovered,
            verdicts,
            state: p,
            diagnostics: outcome.diagnostics,
        }
    }
}

/// Runs a monitor over a whole observation sequence.
pub fn run_monitor(
    scn: Arc<Scenario>,
    cfg: MonitorConfig,
    observations: &[ConcurrentAction],
) -> Result<Vec<TickRecord>, MonitorError> {
    let mut m = Monitor::new(scn, cfg);
    let mut out = Vec::with_capacity(observations.len());
    for obs in observations {
        out.extend(m.advance(obs)?);
    }
    out.extend(m.finish()?);
    Ok(out)
}

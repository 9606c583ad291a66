//! Ground-truth world: random agent policies, joint-action repair and the
//! sensor models.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use thiserror::Error;

use crate::action::{self, ActionError, ActionId, ConcurrentAction, Knowledge};
use crate::logic::{GroundAtom, Literal, Sym};
use crate::scenario::{Observability, Scenario};

/// Resampling rounds before unresolved agents fall back to NOP.
pub const REPAIR_ROUNDS: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WorldError {
    #[error("agent {0} has nothing applicable and no NOP action")]
    MissingNop(String),
    #[error("scripted tick {tick}: joint action is not a consistent concurrent action")]
    Inconsistent { tick: usize },
    #[error(transparent)]
    Action(#[from] ActionError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorldTick {
    /// s_t, before the joint action.
    pub state: BTreeSet<GroundAtom>,
    pub executed: ConcurrentAction,
    pub observed: ConcurrentAction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundTruthLog {
    pub ticks: Vec<WorldTick>,
    pub final_state: BTreeSet<GroundAtom>,
}

impl GroundTruthLog {
    pub fn observations(&self) -> Vec<ConcurrentAction> {
        self.ticks.iter().map(|t| t.observed.clone()).collect()
    }
}

/// Non-NOP actions of `agent` applicable in `s`.
pub fn applicable(scn: &Scenario, agent: Sym, s: &BTreeSet<GroundAtom>) -> Vec<ActionId> {
    scn.actions_of(agent)
        .iter()
        .copied()
        .filter(|&a| {
            let inst = scn.action(a);
            !inst.nop && action::pre_holds(inst, Knowledge::Full(s))
        })
        .collect()
}

/// Agents whose chosen (non-NOP) action has an unmet concurrency condition
/// or a postcondition clashing with the others'.
fn unresolved(scn: &Scenario, choice: &BTreeMap<Sym, ActionId>) -> Vec<Sym> {
    let joint: ConcurrentAction = choice.values().copied().collect();
    choice
        .iter()
        .filter(|(_, &a)| !scn.action(a).nop)
        .filter(|(_, &a)| {
            if !action::concurrent_condition_satisfied(scn, a, &joint) {
                return true;
            }
            let others: BTreeSet<Literal> = action::post_of(scn, joint.iter().filter(|&&b| b != a));
            !action::extends_consistently(scn, &others, &scn.action(a).post)
        })
        .map(|(&g, _)| g)
        .collect()
}

/// Draws one joint action and applies it.
///
/// Every agent picks uniformly among its applicable actions (NOP when there
/// are none). Agents left unresolved by the joint action are resampled for
/// up to [`REPAIR_ROUNDS`] rounds; any still unresolved then fall back to
/// NOP one round at a time until the joint action is consistent.
pub fn step_world(
    scn: &Scenario,
    s: &BTreeSet<GroundAtom>,
    rng: &mut impl Rng,
) -> Result<(ConcurrentAction, BTreeSet<GroundAtom>), WorldError> {
    let mut options: BTreeMap<Sym, Vec<ActionId>> = BTreeMap::new();
    let mut choice: BTreeMap<Sym, ActionId> = BTreeMap::new();
    for &g in &scn.agents {
        let opts = applicable(scn, g, s);
        let pick = if opts.is_empty() {
            nop(scn, g)?
        } else {
            opts[rng.random_range(0..opts.len())]
        };
        choice.insert(g, pick);
        options.insert(g, opts);
    }
    for _ in 0..REPAIR_ROUNDS {
        let bad = unresolved(scn, &choice);
        if bad.is_empty() {
            break;
        }
        for g in bad {
            let opts = &options[&g];
            choice.insert(g, opts[rng.random_range(0..opts.len())]);
        }
    }
    loop {
        let bad = unresolved(scn, &choice);
        if bad.is_empty() {
            break;
        }
        for g in bad {
            choice.insert(g, nop(scn, g)?);
        }
    }
    let joint: ConcurrentAction = choice.into_values().collect();
    let next = action::apply(scn, &joint, s)?;
    Ok((joint, next))
}

fn nop(scn: &Scenario, g: Sym) -> Result<ActionId, WorldError> {
    scn.nop_of(g)
        .ok_or_else(|| WorldError::MissingNop(scn.symbols.name(g).to_string()))
}

/// The sensor. Under cameras an action is seen iff it is observable; under
/// a probability every agent draws once per tick (so the stream does not
/// depend on what was executed) and its action is seen when the draw falls
/// below the probability. NOPs are always seen.
pub fn observe(scn: &Scenario, joint: &ConcurrentAction, rng: &mut impl Rng) -> ConcurrentAction {
    match scn.observability {
        Observability::Schemas(_) => joint.iter().copied().filter(|&a| scn.is_observable(a)).collect(),
        Observability::Probability(p) => {
            let by_actor: BTreeMap<Sym, ActionId> = joint.iter().map(|&a| (scn.action(a).actor, a)).collect();
            let mut out = ConcurrentAction::new();
            for g in &scn.agents {
                let u: f64 = rng.random();
                if let Some(&a) = by_actor.get(g) {
                    if scn.action(a).nop || u < p {
                        out.insert(a);
                    }
                }
            }
            out
        }
    }
}

/// Runs the world for `steps` ticks from the initial state.
pub fn simulate(
    scn: &Scenario,
    steps: usize,
    world_rng: &mut impl Rng,
    obs_rng: &mut impl Rng,
) -> Result<GroundTruthLog, WorldError> {
    let mut s = scn.initial_state.clone();
    let mut ticks = Vec::with_capacity(steps);
    for _ in 0..steps {
        let (executed, next) = step_world(scn, &s, world_rng)?;
        let observed = observe(scn, &executed, obs_rng);
        ticks.push(WorldTick {
            state: std::mem::replace(&mut s, next),
            executed,
            observed,
        });
    }
    Ok(GroundTruthLog { ticks, final_state: s })
}

/// Replays a fixed sequence of joint actions from the initial state.
pub fn scripted(
    scn: &Scenario,
    script: &[ConcurrentAction],
    obs_rng: &mut impl Rng,
) -> Result<GroundTruthLog, WorldError> {
    let mut s = scn.initial_state.clone();
    let mut ticks = Vec::with_capacity(script.len());
    for (t, executed) in script.iter().enumerate() {
        if !action::is_concurrent_consistent(scn, executed) {
            return Err(WorldError::Inconsistent { tick: t });
        }
        let next = action::apply(scn, executed, &s)?;
        let observed = observe(scn, executed, obs_rng);
        ticks.push(WorldTick {
            state: std::mem::replace(&mut s, next),
            executed: executed.clone(),
            observed,
        });
    }
    Ok(GroundTruthLog { ticks, final_state: s })
}

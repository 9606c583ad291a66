//! Reconstruction of the actions of agents the monitor did not observe.
//!
//! Inputs are the partial state before the tick (`i`), the partial state
//! after it (`f`) and the observed joint action (`act`). Both procedures
//! refine all three in place and report the reconstructed set R.
//!
//! * [`full_reconstruct`] enumerates every joint completion consistent with
//!   `i`, `f`, the rules and the concurrency conditions and commits to the
//!   actions common to all of them.
//! * [`approximate_reconstruct`] propagates per-agent candidate sets to a
//!   fixpoint, commits to singletons and reports discovered representatives
//!   for agents whose every candidate is forbidden (or mandatory).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::action::{self, actors, ActionId, ConcurrentAction};
use crate::logic::{Literal, Sym};
use crate::norm::Discovery;
use crate::scenario::Scenario;

mod approx;
mod full;
mod search;

pub use approx::{approximate_reconstruct, approximate_search, CandidateTable};
pub use full::{full_reconstruct, FullConfig};
pub use search::{search, search_capped, SolutionSet};

/// Default bound on the number of joint completions examined per tick.
pub const DEFAULT_SOLUTION_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// |𝒮| (saturating) for full reconstruction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution_count: Option<u64>,
    /// Number of independent sub-problems the search was split into.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<usize>,
    /// The cap on examined completions was hit; nothing was committed.
    #[serde(default, skip_serializing_if = "is_false")]
    pub capped: bool,
    /// No consistent completion exists (the model and the observations
    /// disagree); nothing was committed.
    #[serde(default, skip_serializing_if = "is_false")]
    pub no_solution: bool,
    /// Agents left with no consistent candidate by approximate search.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub empty_candidates: Vec<String>,
    /// Candidate-set size per target agent (approximate search).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub candidate_counts: BTreeMap<String, usize>,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    /// Unobserved actions the monitor is now certain were executed.
    pub reconstructed: BTreeSet<ActionId>,
    pub discovered: Vec<Discovery>,
    pub diagnostics: Diagnostics,
}

/// Agents without an action in `act`, in ascending symbol order.
pub fn target_agents(scn: &Scenario, act: &ConcurrentAction) -> Vec<Sym> {
    let seen = actors(scn, act);
    scn.agents.iter().copied().filter(|a| !seen.contains(a)).collect()
}

/// `i ∪ pre(act)` and `f ∪ post(act)`.
pub(crate) fn extended_states(
    scn: &Scenario,
    i: &BTreeSet<Literal>,
    f: &BTreeSet<Literal>,
    act: &ConcurrentAction,
) -> (BTreeSet<Literal>, BTreeSet<Literal>) {
    let mut i0 = i.clone();
    i0.extend(action::pre_of(scn, act));
    let mut f0 = f.clone();
    f0.extend(action::post_of(scn, act));
    (i0, f0)
}

/// Actions of `agent` whose precondition is consistent with `i` and whose
/// postcondition is consistent with `f`. Actions the sensor sees
/// deterministically (NOPs, camera-watched moves) are left out: had the
/// agent performed one, it would have been observed.
pub(crate) fn consistent_actions(
    scn: &Scenario,
    agent: Sym,
    i: &BTreeSet<Literal>,
    f: &BTreeSet<Literal>,
) -> Vec<ActionId> {
    scn.actions_of(agent)
        .iter()
        .copied()
        .filter(|&a| {
            let inst = scn.action(a);
            !scn.is_observable(a)
                && action::extends_consistently(scn, i, &inst.pre)
                && action::extends_consistently(scn, f, &inst.post)
        })
        .collect()
}

/// Shared tail of both procedures once R is known: `act ∪= R`,
/// `i ∪= pre(R)` and the final-state update, where `extended_invariants`
/// yields the invariant literals used while some agent stays unknown.
pub(crate) fn commit(
    scn: &Scenario,
    i: &mut BTreeSet<Literal>,
    f: &mut BTreeSet<Literal>,
    act: &mut ConcurrentAction,
    r: &BTreeSet<ActionId>,
    extended_invariants: impl FnOnce(&BTreeSet<Literal>, &ConcurrentAction) -> BTreeSet<Literal>,
) {
    if r.is_empty() {
        return;
    }
    act.extend(r.iter().copied());
    i.extend(action::pre_of(scn, r));
    if act.len() < scn.agent_count() {
        f.extend(action::post_of(scn, r));
        let keep = extended_invariants(i, act);
        f.extend(keep);
    } else {
        let keep = action::invariant_literals(scn, i, act);
        f.extend(keep);
        f.extend(action::effects(scn, act));
    }
}

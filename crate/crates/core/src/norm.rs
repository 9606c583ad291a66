//! Conditional deontic norms, their instances and verdicts.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::action::{ActionId, ActionInstance, ActionSchema, ConcurrentAction};
use crate::logic::{satisfies, Condition, LiteralSource, Sym};
use crate::scenario::Scenario;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, schemars::JsonSchema)]
pub enum Deontic {
    #[serde(rename = "O")]
    Obligation,
    #[serde(rename = "P")]
    Prohibition,
}

impl Deontic {
    pub fn symbol(self) -> &'static str {
        match self {
            Deontic::Obligation => "O",
            Deontic::Prohibition => "P",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Norm {
    pub id: String,
    pub deontic: Deontic,
    pub condition: Condition,
    pub action: ActionSchema,
    /// Importance used when picking a discovered representative; higher is
    /// more important. Defaults to the declaration index.
    pub priority: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormInstance {
    pub norm: usize,
    pub deontic: Deontic,
    /// The norm's action under the substitution that satisfied the
    /// condition; variables not bound by the condition stay free.
    pub action: ActionSchema,
    pub born_at: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Fulfilled,
    Violated,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// The monitor knows the action that fulfilled/violated the instance, or
    /// knows every action of the tick.
    Identified,
    /// The monitor only knows the culprit could not have acted otherwise.
    Discovered,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Verdict {
    pub instance: NormInstance,
    pub status: Status,
    pub mode: Mode,
    pub culprit: Option<Sym>,
    /// Identified: the matching action. Discovered: the representative from
    /// the discovered set, not claimed to have been executed.
    pub witness: Option<ActionId>,
}

/// One instance per (norm, instantiated action) for every substitution
/// under which the norm condition holds in `p`.
pub fn relevant_instances(scn: &Scenario, p: &dyn LiteralSource, tick: u64) -> Vec<NormInstance> {
    let mut out = BTreeSet::new();
    for (k, norm) in scn.norms.iter().enumerate() {
        for sigma in satisfies(&norm.condition, p, &scn.statics) {
            out.insert(NormInstance {
                norm: k,
                deontic: norm.deontic,
                action: norm.action.apply(&sigma),
                born_at: tick,
            });
        }
    }
    out.into_iter().collect()
}

fn any_match(scn: &Scenario, schema: &ActionSchema, act: &ConcurrentAction) -> bool {
    act.iter().any(|&a| schema.matches(scn.action(a)).is_some())
}

pub fn judge_obligation(scn: &Scenario, inst: &NormInstance, act: &ConcurrentAction, agent_count: usize) -> Status {
    if any_match(scn, &inst.action, act) {
        Status::Fulfilled
    } else if act.len() == agent_count {
        Status::Violated
    } else {
        Status::Unknown
    }
}

pub fn judge_prohibition(scn: &Scenario, inst: &NormInstance, act: &ConcurrentAction, agent_count: usize) -> Status {
    if any_match(scn, &inst.action, act) {
        Status::Violated
    } else if act.len() == agent_count {
        Status::Fulfilled
    } else {
        Status::Unknown
    }
}

pub fn judge(scn: &Scenario, inst: &NormInstance, act: &ConcurrentAction, agent_count: usize) -> Status {
    match inst.deontic {
        Deontic::Obligation => judge_obligation(scn, inst, act, agent_count),
        Deontic::Prohibition => judge_prohibition(scn, inst, act, agent_count),
    }
}

/// Identified verdicts for one instance. An instance matched by several
/// actions yields one verdict per matching action (one per culprit);
/// verdicts that follow from knowing every action carry no culprit.
pub fn identified_verdicts(
    scn: &Scenario,
    inst: &NormInstance,
    act: &ConcurrentAction,
    agent_count: usize,
) -> Vec<Verdict> {
    let matching: Vec<ActionId> = act
        .iter()
        .copied()
        .filter(|&a| inst.action.matches(scn.action(a)).is_some())
        .collect();
    let hit = match inst.deontic {
        Deontic::Obligation => Status::Fulfilled,
        Deontic::Prohibition => Status::Violated,
    };
    let miss = match inst.deontic {
        Deontic::Obligation => Status::Violated,
        Deontic::Prohibition => Status::Fulfilled,
    };
    if !matching.is_empty() {
        matching
            .into_iter()
            .map(|a| Verdict {
                instance: inst.clone(),
                status: hit,
                mode: Mode::Identified,
                culprit: Some(scn.action(a).actor),
                witness: Some(a),
            })
            .collect()
    } else if act.len() == agent_count {
        vec![Verdict {
            instance: inst.clone(),
            status: miss,
            mode: Mode::Identified,
            culprit: None,
            witness: None,
        }]
    } else {
        Vec::new()
    }
}

fn matching_instances<'a>(
    instances: &'a [NormInstance],
    deontic: Deontic,
    a: &'a ActionInstance,
) -> impl Iterator<Item = &'a NormInstance> + 'a {
    instances
        .iter()
        .filter(move |i| i.deontic == deontic && i.action.matches(a).is_some())
}

pub fn forbidden(instances: &[NormInstance], a: &ActionInstance) -> bool {
    matching_instances(instances, Deontic::Prohibition, a).next().is_some()
}

pub fn mandatory(instances: &[NormInstance], a: &ActionInstance) -> bool {
    matching_instances(instances, Deontic::Obligation, a).next().is_some()
}

/// A representative action standing for an agent all of whose possible
/// actions are forbidden (or all mandatory), with the instance it is taken
/// to violate (fulfil).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Discovery {
    pub action: ActionId,
    pub deontic: Deontic,
    pub instance: NormInstance,
}

/// Picks the discovered representative among `candidates` (all of one
/// agent), or `None` unless every candidate is forbidden (else every one
/// mandatory).
///
/// Presumption of innocence: for prohibitions the candidate whose least
/// important matching instance is least important overall; for obligations
/// the one fulfilling the most important instance. Remaining ties go to the
/// lexicographically greatest action.
pub fn discover(scn: &Scenario, instances: &[NormInstance], candidates: &[ActionId]) -> Option<Discovery> {
    let all = |d: Deontic| {
        !candidates.is_empty()
            && candidates
                .iter()
                .all(|&a| matching_instances(instances, d, scn.action(a)).next().is_some())
    };
    let deontic = if all(Deontic::Prohibition) {
        Deontic::Prohibition
    } else if all(Deontic::Obligation) {
        Deontic::Obligation
    } else {
        return None;
    };
    let key = |inst: &NormInstance| scn.norms[inst.norm].priority;
    let mut best: Option<(i64, ActionId, &NormInstance)> = None;
    for &a in candidates {
        let insts = matching_instances(instances, deontic, scn.action(a));
        // for prohibitions the least important instance, for obligations the
        // most important one; first in instance order on ties
        let chosen = match deontic {
            Deontic::Prohibition => insts.min_by_key(|i| key(i)),
            Deontic::Obligation => insts.fold(None::<&NormInstance>, |acc, i| match acc {
                Some(b) if key(b) >= key(i) => Some(b),
                _ => Some(i),
            }),
        }
        .expect("candidate matches some instance");
        let score = match deontic {
            Deontic::Prohibition => -key(chosen),
            Deontic::Obligation => key(chosen),
        };
        let better = match best {
            None => true,
            Some((s, b, _)) => score > s || (score == s && a > b),
        };
        if better {
            best = Some((score, a, chosen));
        }
    }
    best.map(|(_, action, inst)| Discovery {
        action,
        deontic,
        instance: inst.clone(),
    })
}

/// Identified verdicts for every instance plus one discovered verdict per
/// representative in `discovered`.
pub fn check_norms(
    scn: &Scenario,
    instances: &[NormInstance],
    act: &ConcurrentAction,
    discovered: &[Discovery],
) -> Vec<Verdict> {
    let mut out: Vec<Verdict> = instances
        .iter()
        .flat_map(|i| identified_verdicts(scn, i, act, scn.agents.len()))
        .collect();
    for d in discovered {
        out.push(Verdict {
            instance: d.instance.clone(),
            status: match d.deontic {
                Deontic::Obligation => Status::Fulfilled,
                Deontic::Prohibition => Status::Violated,
            },
            mode: Mode::Discovered,
            culprit: Some(scn.action(d.action).actor),
            witness: Some(d.action),
        });
    }
    out.sort();
    out
}

//! Action descriptions, ground action instances, concurrent-action
//! consistency, effects and state transition.
//!
//! Every statically valid grounding of every description is computed once
//! when a scenario is compiled; an [`ActionId`] indexes that table, whose
//! order is the lexicographic order of ground schemas `name(args)`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::logic::{
    extension_consistent, is_consistent, literal_compatible, unify_args, Args, Condition, Describe, GroundAtom,
    Literal, LiteralPattern, LiteralSource, Substitution, Sym, SymbolTable, TermArgs,
};
use crate::scenario::Scenario;

/// Index into the ground action table of a [`Scenario`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionId(pub u32);

impl ActionId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A joint action: at most one member per actor when well-formed.
pub type ConcurrentAction = BTreeSet<ActionId>;

/// `name(args)` with variables and constants; signed when used as a
/// concurrency condition (positive: some other action must match;
/// negative: no other action may match).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionSchema {
    pub name: Sym,
    pub args: TermArgs,
    pub positive: bool,
}

impl ActionSchema {
    pub fn apply(&self, sigma: &Substitution) -> ActionSchema {
        ActionSchema {
            name: self.name,
            args: self.args.iter().map(|t| t.apply(sigma)).collect(),
            positive: self.positive,
        }
    }

    /// The substitution under which this schema denotes `a`, if any.
    pub fn matches(&self, a: &ActionInstance) -> Option<Substitution> {
        if self.name != a.name {
            return None;
        }
        let mut sigma = Substitution::new();
        unify_args(&self.args, &a.args, &mut sigma).then_some(sigma)
    }
}

impl Describe for ActionSchema {
    fn describe(&self, syms: &SymbolTable) -> String {
        let body = if self.args.is_empty() {
            syms.name(self.name).to_string()
        } else {
            let args: Vec<String> = self.args.iter().map(|t| t.describe(syms)).collect();
            format!("{}({})", syms.name(self.name), args.join(","))
        };
        if self.positive {
            body
        } else {
            format!("-{body}")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionDescription {
    pub name: Sym,
    pub params: Vec<Sym>,
    pub actor: Sym,
    /// Static and dynamic literals plus constraints.
    pub pre: Condition,
    pub con: Vec<ActionSchema>,
    pub post: Vec<LiteralPattern>,
    /// The distinguished no-effect action: always observable, chosen by the
    /// simulator only when nothing else is applicable.
    pub nop: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionInstance {
    pub desc: usize,
    pub name: Sym,
    pub args: Args,
    pub actor: Sym,
    /// Ground dynamic preconditions only; static ones hold by construction.
    pub pre: Vec<Literal>,
    pub con: Vec<ActionSchema>,
    pub post: Vec<Literal>,
    pub nop: bool,
}

impl Describe for ActionInstance {
    fn describe(&self, syms: &SymbolTable) -> String {
        GroundAtom {
            pred: self.name,
            args: self.args.clone(),
        }
        .describe(syms)
    }
}

/// How a state is read when testing preconditions.
#[derive(Clone, Copy)]
pub enum Knowledge<'a> {
    /// Closed world: atoms not in the set are false.
    Full(&'a BTreeSet<GroundAtom>),
    /// Open world: positives must be asserted, asserted complements block.
    Partial(&'a BTreeSet<Literal>),
}

pub fn pre_holds(a: &ActionInstance, k: Knowledge<'_>) -> bool {
    match k {
        Knowledge::Full(s) => a.pre.iter().all(|l| s.contains(&l.atom) == l.positive),
        Knowledge::Partial(p) => a
            .pre
            .iter()
            .all(|l| if l.positive { p.contains(l) } else { !p.contains(&l.complement()) }),
    }
}

/// Instances of description `desc` whose precondition holds in the state.
pub fn instantiate(scn: &Scenario, desc: usize, k: Knowledge<'_>) -> Vec<ActionId> {
    scn.actions_of_description(desc)
        .filter(|&id| pre_holds(scn.action(id), k))
        .collect()
}

/// Positive concurrency schemas need a witness among the *other* members of
/// `joint`; negative ones must match none of them. An action never satisfies
/// or violates its own condition.
pub fn concurrent_condition_satisfied(scn: &Scenario, a: ActionId, joint: &ConcurrentAction) -> bool {
    let inst = scn.action(a);
    inst.con.iter().all(|schema| {
        let found = joint
            .iter()
            .filter(|&&b| b != a)
            .any(|&b| schema.matches(scn.action(b)).is_some());
        found == schema.positive
    })
}

pub fn pre_of<'a>(scn: &Scenario, ids: impl IntoIterator<Item = &'a ActionId>) -> BTreeSet<Literal> {
    ids.into_iter()
        .flat_map(|&id| scn.action(id).pre.iter().cloned())
        .collect()
}

pub fn post_of<'a>(scn: &Scenario, ids: impl IntoIterator<Item = &'a ActionId>) -> BTreeSet<Literal> {
    ids.into_iter()
        .flat_map(|&id| scn.action(id).post.iter().cloned())
        .collect()
}

pub fn actors<'a>(scn: &Scenario, ids: impl IntoIterator<Item = &'a ActionId>) -> BTreeSet<Sym> {
    ids.into_iter().map(|&id| scn.action(id).actor).collect()
}

/// Consistency of a concurrent action: joint preconditions and
/// postconditions consistent, every concurrency condition satisfied and
/// every agent performing exactly one member.
pub fn is_concurrent_consistent(scn: &Scenario, joint: &ConcurrentAction) -> bool {
    if !is_consistent(&pre_of(scn, joint), &scn.statics, &scn.rules)
        || !is_consistent(&post_of(scn, joint), &scn.statics, &scn.rules)
    {
        return false;
    }
    if !joint.iter().all(|&a| concurrent_condition_satisfied(scn, a, joint)) {
        return false;
    }
    let mut by_actor: Vec<Sym> = joint.iter().map(|&a| scn.action(a).actor).collect();
    by_actor.sort();
    let n = by_actor.len();
    by_actor.dedup();
    n == by_actor.len() && by_actor == scn.agents
}

/// `post(A)` plus the preconditions of `A` that survive its postconditions.
pub fn effects(scn: &Scenario, joint: &ConcurrentAction) -> BTreeSet<Literal> {
    let post = post_of(scn, joint);
    let pre = pre_of(scn, joint);
    let surviving: Vec<Literal> = pre
        .into_iter()
        .filter(|l| literal_compatible(&post, l, &scn.statics, &scn.rules))
        .collect();
    let mut out = post;
    out.extend(surviving);
    out
}

/// Literals of `p` not contradicted by `eff(A)`.
pub fn invariant_literals(scn: &Scenario, p: &BTreeSet<Literal>, joint: &ConcurrentAction) -> BTreeSet<Literal> {
    let eff = effects(scn, joint);
    compatible_subset(scn, p, &eff)
}

/// `{ l ∈ p : {l} ∪ with consistent }`.
pub fn compatible_subset(scn: &Scenario, p: &BTreeSet<Literal>, with: &dyn LiteralSource) -> BTreeSet<Literal> {
    p.iter()
        .filter(|l| literal_compatible(with, l, &scn.statics, &scn.rules))
        .cloned()
        .collect()
}

/// Whether `base ∪ lits` stays consistent, assuming `base` is.
pub fn extends_consistently(scn: &Scenario, base: &dyn LiteralSource, lits: &[Literal]) -> bool {
    extension_consistent(base, lits, &scn.statics, &scn.rules)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ActionError {
    #[error("action {action} is not applicable: precondition {literal} does not hold")]
    NotApplicable { action: String, literal: String },
    #[error("joint action has contradictory postconditions on {atom}")]
    ContradictoryEffects { atom: String },
}

/// Closed-world transition: remove atoms negated by `post(A)`, add the
/// positive ones.
pub fn apply(
    scn: &Scenario,
    joint: &ConcurrentAction,
    s: &BTreeSet<GroundAtom>,
) -> Result<BTreeSet<GroundAtom>, ActionError> {
    for &id in joint {
        let a = scn.action(id);
        if let Some(l) = a.pre.iter().find(|l| s.contains(&l.atom) != l.positive) {
            return Err(ActionError::NotApplicable {
                action: a.describe(&scn.symbols),
                literal: l.describe(&scn.symbols),
            });
        }
    }
    let post = post_of(scn, joint);
    if let Some(l) = post.iter().find(|l| l.positive && post.contains(&l.complement())) {
        return Err(ActionError::ContradictoryEffects {
            atom: l.atom.describe(&scn.symbols),
        });
    }
    let mut next = s.clone();
    for l in &post {
        if !l.positive {
            next.remove(&l.atom);
        }
    }
    for l in &post {
        if l.positive {
            next.insert(l.atom.clone());
        }
    }
    Ok(next)
}

/// Open-world encoding of a closed-world state over the dynamic universe.
pub fn closed_world_encoding(scn: &Scenario, s: &BTreeSet<GroundAtom>) -> BTreeSet<Literal> {
    scn.dynamic_universe
        .iter()
        .map(|a| Literal {
            atom: a.clone(),
            positive: s.contains(a),
        })
        .collect()
}

#[cfg(test)]
mod tests;

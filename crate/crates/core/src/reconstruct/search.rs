//! Exhaustive search for joint completions.
//!
//! Branches over *every* consistent action of each target agent. (Read
//! literally, the classic recursive formulation returns after the first
//! consistent action description and would drop alternatives; the solution
//! set is defined as all completions, which is what this computes.)

use std::collections::BTreeSet;

use crate::action::{self, ActionId, ConcurrentAction};
use crate::logic::{Layered, Literal, LiteralSource, Sym};
use crate::scenario::Scenario;

use super::{consistent_actions, extended_states, target_agents};

/// 𝒮: every solution assigns one action to each target agent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolutionSet {
    pub solutions: BTreeSet<ConcurrentAction>,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    /// ⋂𝒮 (empty when 𝒮 is empty).
    pub fn intersection(&self) -> BTreeSet<ActionId> {
        let mut it = self.solutions.iter();
        let Some(first) = it.next() else {
            return BTreeSet::new();
        };
        let mut r = first.clone();
        for s in it {
            r.retain(|a| s.contains(a));
        }
        r
    }
}

/// The cap on examined completions was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Capped;

/// All joint completions of `act` (see the module docs).
pub fn search(scn: &Scenario, i: &BTreeSet<Literal>, f: &BTreeSet<Literal>, act: &ConcurrentAction) -> SolutionSet {
    search_capped(scn, i, f, act, u64::MAX).expect("uncapped search")
}

/// As [`search`], giving up once more than `cap` complete assignments have
/// been examined.
pub fn search_capped(
    scn: &Scenario,
    i: &BTreeSet<Literal>,
    f: &BTreeSet<Literal>,
    act: &ConcurrentAction,
    cap: u64,
) -> Result<SolutionSet, Capped> {
    let ta = target_agents(scn, act);
    let (i0, f0) = extended_states(scn, i, f, act);
    let candidates: Vec<Vec<ActionId>> = ta.iter().map(|&g| consistent_actions(scn, g, &i0, &f0)).collect();
    let mut dfs = Dfs {
        scn,
        i0: &i0,
        f0: &f0,
        act,
        candidates: &candidates,
        leaf_check: &|joint: &ConcurrentAction| leaf_consistent(scn, joint),
        chosen: Vec::new(),
        pre: Vec::new(),
        post: Vec::new(),
        leaves: 0,
        cap,
        out: Vec::new(),
    };
    dfs.run(0)?;
    Ok(SolutionSet {
        solutions: dfs.out.into_iter().map(|s| s.into_iter().collect()).collect(),
    })
}

/// Every member's concurrency condition holds in the joint action and every
/// agent acts exactly once.
fn leaf_consistent(scn: &Scenario, joint: &ConcurrentAction) -> bool {
    joint
        .iter()
        .all(|&a| action::concurrent_condition_satisfied(scn, a, joint))
        && action::actors(scn, joint).len() == joint.len()
}

pub(crate) struct Dfs<'a> {
    pub scn: &'a Scenario,
    pub i0: &'a BTreeSet<Literal>,
    pub f0: &'a BTreeSet<Literal>,
    pub act: &'a ConcurrentAction,
    pub candidates: &'a [Vec<ActionId>],
    /// Receives `act ∪ chosen` at every complete assignment.
    pub leaf_check: &'a dyn Fn(&ConcurrentAction) -> bool,
    pub chosen: Vec<ActionId>,
    pub pre: Vec<Literal>,
    pub post: Vec<Literal>,
    pub leaves: u64,
    pub cap: u64,
    pub out: Vec<Vec<ActionId>>,
}

impl Dfs<'_> {
    pub fn run(&mut self, depth: usize) -> Result<(), Capped> {
        if depth == self.candidates.len() {
            self.leaves += 1;
            if self.leaves > self.cap {
                return Err(Capped);
            }
            let mut joint = self.act.clone();
            joint.extend(self.chosen.iter().copied());
            if (self.leaf_check)(&joint) {
                self.out.push(self.chosen.clone());
            }
            return Ok(());
        }
        for &a in &self.candidates[depth] {
            let inst = self.scn.action(a);
            let ok = {
                let pre_view = Layered {
                    base: self.i0 as &dyn LiteralSource,
                    extra: &self.pre,
                };
                let post_view = Layered {
                    base: self.f0 as &dyn LiteralSource,
                    extra: &self.post,
                };
                action::extends_consistently(self.scn, &pre_view, &inst.pre)
                    && action::extends_consistently(self.scn, &post_view, &inst.post)
            };
            if !ok {
                continue;
            }
            let (pm, qm) = (self.pre.len(), self.post.len());
            self.pre.extend(inst.pre.iter().cloned());
            self.post.extend(inst.post.iter().cloned());
            self.chosen.push(a);
            let r = self.run(depth + 1);
            self.chosen.pop();
            self.pre.truncate(pm);
            self.post.truncate(qm);
            r?;
        }
        Ok(())
    }
}

/// Agents in ascending order paired with their consistent actions.
pub(crate) fn candidate_rows(
    scn: &Scenario,
    ta: &[Sym],
    i0: &BTreeSet<Literal>,
    f0: &BTreeSet<Literal>,
) -> Vec<(Sym, Vec<ActionId>)> {
    ta.iter().map(|&g| (g, consistent_actions(scn, g, i0, f0))).collect()
}

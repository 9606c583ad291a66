//! Approximate reconstruction: per-agent candidate propagation.

use std::collections::{BTreeMap, BTreeSet};

use crate::action::{self, ActionId, ConcurrentAction};
use crate::logic::{Literal, Sym};
use crate::norm::{discover, relevant_instances};
use crate::scenario::Scenario;

use super::{commit, consistent_actions, extended_states, target_agents, Outcome};

/// S̃ split by agent: every target agent maps to the actions it may have
/// performed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CandidateTable {
    pub rows: BTreeMap<Sym, Vec<ActionId>>,
    /// Agents committed during propagation, in commitment order.
    pub committed: Vec<Sym>,
    /// Fixpoint passes performed.
    pub passes: usize,
}

impl CandidateTable {
    /// Union of the singleton rows.
    pub fn singletons(&self) -> BTreeSet<ActionId> {
        self.rows
            .values()
            .filter(|r| r.len() == 1)
            .map(|r| r[0])
            .collect()
    }

    pub fn all(&self) -> impl Iterator<Item = ActionId> + '_ {
        self.rows.values().flatten().copied()
    }
}

/// Computes every target agent's consistent actions; an agent left with a
/// single one is committed, its pre/post join `i`/`f`, and the pass repeats
/// until nothing new is committed.
pub fn approximate_search(
    scn: &Scenario,
    i: &BTreeSet<Literal>,
    f: &BTreeSet<Literal>,
    act: &ConcurrentAction,
) -> CandidateTable {
    let (mut i, mut f) = extended_states(scn, i, f, act);
    let mut ta = target_agents(scn, act);
    let mut table = CandidateTable::default();
    let mut last: BTreeMap<Sym, Vec<ActionId>> = BTreeMap::new();
    while !ta.is_empty() {
        table.passes += 1;
        last = ta.iter().map(|&g| (g, consistent_actions(scn, g, &i, &f))).collect();
        let singles: Vec<Sym> = ta.iter().copied().filter(|g| last[g].len() == 1).collect();
        if singles.is_empty() {
            break;
        }
        for g in singles {
            let a = last[&g][0];
            let inst = scn.action(a);
            i.extend(inst.pre.iter().cloned());
            f.extend(inst.post.iter().cloned());
            table.rows.insert(g, vec![a]);
            table.committed.push(g);
            ta.retain(|&x| x != g);
        }
    }
    for g in ta {
        table.rows.insert(g, last.remove(&g).unwrap_or_default());
    }
    table
}

pub fn approximate_reconstruct(
    scn: &Scenario,
    i: &mut BTreeSet<Literal>,
    f: &mut BTreeSet<Literal>,
    act: &mut ConcurrentAction,
    tick: u64,
) -> Outcome {
    let mut out = Outcome::default();
    let table = approximate_search(scn, i, f, act);
    for (g, row) in &table.rows {
        let name = scn.symbols.name(*g).to_string();
        if row.is_empty() {
            out.diagnostics.empty_candidates.push(name.clone());
        }
        out.diagnostics.candidate_counts.insert(name, row.len());
    }
    let r = table.singletons();
    commit(scn, i, f, act, &r, |i, act| circle_invariants(scn, i, act, &table));
    out.reconstructed = r;

    let instances = relevant_instances(scn, &*i, tick);
    for row in table.rows.values().filter(|r| r.len() > 1) {
        if let Some(d) = discover(scn, &instances, row) {
            out.discovered.push(d);
        }
    }
    out
}

/// p°: literals of `i` compatible with the observed postconditions and,
/// one candidate at a time, with every candidate's postcondition. (Taking
/// the union of all candidates' postconditions at once would make
/// alternative destinations of one agent contradict each other and leave
/// nothing.)
pub(super) fn circle_invariants(
    scn: &Scenario,
    i: &BTreeSet<Literal>,
    act: &ConcurrentAction,
    table: &CandidateTable,
) -> BTreeSet<Literal> {
    let post_act = action::post_of(scn, act);
    let cand_posts: BTreeSet<&Vec<Literal>> = table.all().map(|a| &scn.action(a).post).collect();
    i.iter()
        .filter(|l| {
            let lit = std::slice::from_ref(*l);
            action::extends_consistently(scn, &post_act, lit)
                && cand_posts
                    .iter()
                    .all(|p| action::extends_consistently(scn, *p, lit))
        })
        .cloned()
        .collect()
}

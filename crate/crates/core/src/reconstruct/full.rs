//! Full reconstruction.
//!
//! The joint search is split exactly into independent sub-problems: two
//! target agents are coupled when some literal of one agent's candidates
//! can take part in a conflict (a complementary pair or a rule grounding
//! over every literal in play) together with a literal of the other's, or
//! when a concurrency condition of one can be met or broken by the other.
//! Uncoupled groups cannot influence each other's consistency, so 𝒮 is the
//! product of the per-group solution sets, ⋂𝒮 is the union of per-group
//! intersections, and every minimal conflict behind p• involves at most one
//! group. Disable with [`FullConfig::decompose`] to run the plain search.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use crate::action::{self, ActionId, ConcurrentAction};
use crate::logic::{unify_args, Literal, Substitution, Sym};
use crate::scenario::Scenario;

use super::search::{candidate_rows, search_capped, Capped, Dfs};
use super::{commit, extended_states, target_agents, Outcome, DEFAULT_SOLUTION_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FullConfig {
    /// Bound on complete assignments examined per tick; beyond it the tick
    /// proceeds as if nothing could be reconstructed.
    pub cap: u64,
    pub decompose: bool,
}

impl Default for FullConfig {
    fn default() -> Self {
        FullConfig {
            cap: DEFAULT_SOLUTION_CAP,
            decompose: true,
        }
    }
}

pub fn full_reconstruct(
    scn: &Scenario,
    i: &mut BTreeSet<Literal>,
    f: &mut BTreeSet<Literal>,
    act: &mut ConcurrentAction,
    cfg: FullConfig,
) -> Outcome {
    if target_agents(scn, act).is_empty() {
        return Outcome::default();
    }
    if cfg.decompose {
        decomposed(scn, i, f, act, cfg.cap)
    } else {
        plain(scn, i, f, act, cfg.cap)
    }
}

fn plain(
    scn: &Scenario,
    i: &mut BTreeSet<Literal>,
    f: &mut BTreeSet<Literal>,
    act: &mut ConcurrentAction,
    cap: u64,
) -> Outcome {
    let mut out = Outcome::default();
    let solutions = match search_capped(scn, i, f, act, cap) {
        Ok(s) => s,
        Err(Capped) => {
            out.diagnostics.capped = true;
            return out;
        }
    };
    out.diagnostics.solution_count = Some(solutions.len() as u64);
    if solutions.is_empty() {
        out.diagnostics.no_solution = true;
        return out;
    }
    let r = solutions.intersection();
    let posts: Vec<Vec<Literal>> = solutions
        .solutions
        .iter()
        .map(|s| action::post_of(scn, s).into_iter().collect())
        .collect();
    commit(scn, i, f, act, &r, |i, act| {
        let bases = solution_bases(scn, act, posts.iter());
        bullet_invariants(scn, i, &bases)
    });
    out.reconstructed = r;
    out
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }

    fn union_all(&mut self, xs: impl IntoIterator<Item = usize>) {
        let mut it = xs.into_iter();
        if let Some(first) = it.next() {
            for x in it {
                self.union(first, x);
            }
        }
    }
}

fn decomposed(
    scn: &Scenario,
    i: &mut BTreeSet<Literal>,
    f: &mut BTreeSet<Literal>,
    act: &mut ConcurrentAction,
    cap: u64,
) -> Outcome {
    let mut out = Outcome::default();
    let ta = target_agents(scn, act);
    let (i0, f0) = extended_states(scn, i, f, act);
    let mut rows = candidate_rows(scn, &ta, &i0, &f0);

    // unary pruning against the observed actions' concurrency conditions
    let matches_any = |schema: &action::ActionSchema, ids: &ConcurrentAction| {
        ids.iter().any(|&b| schema.matches(scn.action(b)).is_some())
    };
    for (_, cands) in rows.iter_mut() {
        cands.retain(|&a| {
            let inst = scn.action(a);
            let own_ok = inst
                .con
                .iter()
                .filter(|s| !s.positive)
                .all(|s| !matches_any(s, act));
            let theirs_ok = act.iter().all(|&m| {
                scn.action(m)
                    .con
                    .iter()
                    .filter(|s| !s.positive)
                    .all(|s| s.matches(inst).is_none())
            });
            own_ok && theirs_ok
        });
    }

    let n = rows.len();
    let agent_index: BTreeMap<Sym, usize> = rows.iter().enumerate().map(|(k, (g, _))| (*g, k)).collect();
    let mut uf = UnionFind((0..n).collect());

    // literal ownership
    let mut owners: BTreeMap<Literal, BTreeSet<usize>> = BTreeMap::new();
    for (k, (_, cands)) in rows.iter().enumerate() {
        for &a in cands {
            let inst = scn.action(a);
            for l in inst.pre.iter().chain(&inst.post) {
                owners.entry(l.clone()).or_default().insert(k);
            }
        }
    }
    let mut universe: BTreeSet<Literal> = i0.clone();
    universe.extend(f0.iter().cloned());
    universe.extend(owners.keys().cloned());

    for (l, ks) in &owners {
        if let Some(other) = owners.get(&l.complement()) {
            uf.union_all(ks.iter().chain(other).copied());
        }
    }
    for rule in &scn.rules {
        let m = crate::logic::matcher_for(&rule.body, &universe, &scn.statics);
        for (k, pat) in rule.body.literals.iter().enumerate() {
            if scn.statics.is_static(pat.atom.pred) {
                continue;
            }
            for l in owners.keys() {
                if l.atom.pred != pat.atom.pred || l.positive != pat.positive {
                    continue;
                }
                let mut sigma = Substitution::new();
                if !unify_args(&pat.atom.args, &l.atom.args, &mut sigma) {
                    continue;
                }
                let mut done = vec![false; rule.body.literals.len()];
                done[k] = true;
                let _ = m.run(&mut done, &mut sigma, &mut |s| {
                    let ks: Vec<usize> = rule
                        .body
                        .literals
                        .iter()
                        .filter_map(|p| p.ground(s))
                        .filter_map(|g| owners.get(&g))
                        .flatten()
                        .copied()
                        .collect();
                    uf.union_all(ks);
                    ControlFlow::Continue(())
                });
            }
        }
    }

    // concurrency coupling
    let mut routed: Vec<(ActionId, usize)> = Vec::new(); // (observed member, schema index)
    for (k, (_, cands)) in rows.iter().enumerate() {
        for &a in cands {
            for s in &scn.action(a).con {
                if s.positive && matches_any(s, act) {
                    continue;
                }
                for (j, (_, other)) in rows.iter().enumerate() {
                    if j != k && other.iter().any(|&b| s.matches(scn.action(b)).is_some()) {
                        uf.union(k, j);
                    }
                }
            }
        }
    }
    for &m in act.iter() {
        for (si, s) in scn.action(m).con.iter().enumerate() {
            if !s.positive || act.iter().any(|&b| b != m && s.matches(scn.action(b)).is_some()) {
                continue;
            }
            let ks: Vec<usize> = rows
                .iter()
                .enumerate()
                .filter(|(_, (_, c))| c.iter().any(|&b| s.matches(scn.action(b)).is_some()))
                .map(|(k, _)| k)
                .collect();
            if ks.is_empty() {
                out.diagnostics.no_solution = true;
                out.diagnostics.solution_count = Some(0);
                return out;
            }
            uf.union_all(ks);
            routed.push((m, si));
        }
    }

    // group agents by component, in ascending agent order
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for k in 0..n {
        let root = uf.find(k);
        groups.entry(root).or_default().push(k);
    }
    out.diagnostics.components = Some(groups.len());

    let mut per_group: Vec<(Vec<usize>, Vec<Vec<ActionId>>)> = Vec::new();
    let mut leaves = 0u64;
    for members in groups.into_values() {
        let cands: Vec<Vec<ActionId>> = members.iter().map(|&k| rows[k].1.clone()).collect();
        let member_agents: BTreeSet<Sym> = members.iter().map(|&k| rows[k].0).collect();
        // observed schemas whose possible witnesses live in this group
        let mine: Vec<(ActionId, usize)> = routed
            .iter()
            .copied()
            .filter(|&(m, si)| {
                let s = &scn.action(m).con[si];
                member_agents.iter().any(|g| {
                    rows[agent_index[g]]
                        .1
                        .iter()
                        .any(|&b| s.matches(scn.action(b)).is_some())
                })
            })
            .collect();
        let chosen_ok = |joint: &ConcurrentAction| {
            joint
                .iter()
                .filter(|a| !act.contains(a))
                .all(|&a| action::concurrent_condition_satisfied(scn, a, joint))
                && mine.iter().all(|&(m, si)| {
                    let s = &scn.action(m).con[si];
                    joint.iter().any(|&b| b != m && s.matches(scn.action(b)).is_some())
                })
        };
        let mut dfs = Dfs {
            scn,
            i0: &i0,
            f0: &f0,
            act,
            candidates: &cands,
            leaf_check: &chosen_ok,
            chosen: Vec::new(),
            pre: Vec::new(),
            post: Vec::new(),
            leaves: 0,
            cap: cap.saturating_sub(leaves),
            out: Vec::new(),
        };
        if dfs.run(0).is_err() {
            out.diagnostics.capped = true;
            return out;
        }
        leaves += dfs.leaves;
        per_group.push((members, dfs.out));
    }

    let count = per_group
        .iter()
        .fold(1u64, |acc, (_, sols)| acc.saturating_mul(sols.len() as u64));
    out.diagnostics.solution_count = Some(count);
    if count == 0 {
        out.diagnostics.no_solution = true;
        return out;
    }

    let mut r = BTreeSet::new();
    for (_, sols) in &per_group {
        let mut common: BTreeSet<ActionId> = sols[0].iter().copied().collect();
        for s in &sols[1..] {
            common.retain(|a| s.contains(a));
        }
        r.extend(common);
    }

    let group_posts: Vec<BTreeSet<Vec<Literal>>> = per_group
        .iter()
        .map(|(_, sols)| {
            sols.iter()
                .map(|s| action::post_of(scn, s.iter()).into_iter().collect())
                .collect()
        })
        .collect();
    commit(scn, i, f, act, &r, |i, act| {
        let bases = solution_bases(scn, act, group_posts.iter().flatten());
        bullet_invariants(scn, i, &bases)
    });
    out.reconstructed = r;
    out
}

/// `post(act) ∪ p` for every distinct solution postcondition `p`.
pub(super) fn solution_bases<'a>(
    scn: &Scenario,
    act: &ConcurrentAction,
    posts: impl Iterator<Item = &'a Vec<Literal>>,
) -> Vec<BTreeSet<Literal>> {
    let post_act = action::post_of(scn, act);
    let mut bases: BTreeSet<BTreeSet<Literal>> = BTreeSet::new();
    for p in posts {
        let mut b = post_act.clone();
        b.extend(p.iter().cloned());
        bases.insert(b);
    }
    if bases.is_empty() {
        bases.insert(post_act);
    }
    bases.into_iter().collect()
}

/// p•: literals of `i` that no solution can have changed.
pub(super) fn bullet_invariants(scn: &Scenario, i: &BTreeSet<Literal>, bases: &[BTreeSet<Literal>]) -> BTreeSet<Literal> {
    i.iter()
        .filter(|l| {
            bases
                .iter()
                .all(|b| action::extends_consistently(scn, b, std::slice::from_ref(*l)))
        })
        .cloned()
        .collect()
}

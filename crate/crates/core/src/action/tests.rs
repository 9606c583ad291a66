use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::logic::{is_consistent, GroundAtom, Literal};
use crate::testkit::{act, acts, atom, lit_names, lits, names, p0, running, sym};

/// Three robots that lift a table together and move between five offices;
/// nobody may enter o5 while another robot does.
const CONCURRENT: &str = r#"{
  "name": "concurrent",
  "agents": ["r1", "r2", "r3"],
  "symbols": { "predicates": {
    "robot": {"arity": 1, "dynamic": false},
    "table": {"arity": 1, "dynamic": false},
    "office": {"arity": 1, "dynamic": false},
    "in": {"arity": 2, "dynamic": true},
    "lifted": {"arity": 1, "dynamic": true}
  } },
  "statics": ["robot(r1)", "robot(r2)", "robot(r3)", "table(table)",
              "office(o1)", "office(o2)", "office(o3)", "office(o5)"],
  "dynamic_universe": ["lifted(table)", "in(r1,o1)", "in(r1,o2)", "in(r1,o3)", "in(r1,o5)",
                       "in(r2,o1)", "in(r2,o2)", "in(r2,o3)", "in(r2,o5)",
                       "in(r3,o1)", "in(r3,o2)", "in(r3,o3)", "in(r3,o5)"],
  "initial_state": ["in(r1,o2)", "in(r2,o1)", "in(r3,o1)"],
  "action_descriptions": [
    {"name": "lift", "params": ["A", "T"], "actor": "A",
     "pre": ["robot(A)", "table(T)"], "con": ["+lift(A2,T)"], "post": ["lifted(T)"]},
    {"name": "move", "params": ["A", "O1", "O2"], "actor": "A",
     "pre": ["robot(A)", "office(O1)", "office(O2)", "O1 != O2", "in(A,O1)"],
     "con": ["-move(A2,O,o5)"], "post": ["¬in(A,O1)", "in(A,O2)"]},
    {"name": "nop", "params": ["A"], "actor": "A", "pre": ["robot(A)"], "nop": true}
  ],
  "observability": {"kind": "probability", "p": 0.5}
}"#;

fn concurrent() -> Scenario {
    Scenario::from_json(CONCURRENT).unwrap()
}

fn move_desc(scn: &Scenario) -> usize {
    scn.descriptions.iter().position(|d| scn.symbols.name(d.name) == "move").unwrap()
}

#[test]
fn instantiate_on_initial_state() {
    let scn = running();
    let ids = instantiate(&scn, move_desc(&scn), Knowledge::Full(&scn.initial_state));
    let a = act(&scn, "move(r1,a,b)");
    assert!(ids.contains(&a));
    assert_eq!(
        lit_names(&scn, &scn.action(a).post),
        ["in(r1,b)", "¬in(r1,a)"].map(String::from).into_iter().collect()
    );

    // oracle: every (robot, from, to) triple with in(robot,from) in s_0 and
    // corridor(from,to) among the static facts
    let robots = ["r1", "r2", "r3"];
    let offices = ["a", "b", "c", "d", "e", "f"];
    let mut want = BTreeSet::new();
    for r in robots {
        for o1 in offices {
            for o2 in offices {
                let here = scn.initial_state.contains(&atom(&scn, &format!("in({r},{o1})")));
                let corridor = GroundAtom::new(sym(&scn, "corridor"), [sym(&scn, o1), sym(&scn, o2)]);
                if here && scn.statics.contains(&corridor) {
                    want.insert(format!("move({r},{o1},{o2})"));
                }
            }
        }
    }
    let got: BTreeSet<String> = names(&scn, ids).into_iter().collect();
    assert_eq!(got, want);
    assert_eq!(got.len(), 7);
}

#[test]
fn instantiate_on_empty_state_is_empty() {
    let scn = running();
    assert!(instantiate(&scn, move_desc(&scn), Knowledge::Full(&BTreeSet::new())).is_empty());
}

#[test]
fn action_table_is_sorted_and_static_typed() {
    let scn = running();
    let keys: Vec<_> = scn.actions().iter().map(|a| (a.name, a.args.clone())).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    // only corridors of the layout are grounded: 3 robots × 12 corridors + 3 NOPs
    assert_eq!(scn.actions().len(), 3 * 12 + 3);
    for a in scn.actions() {
        assert!(a.pre.iter().all(|l| !scn.statics.is_static(l.atom.pred)));
    }
}

#[test]
fn empty_concurrency_condition_holds() {
    let scn = running();
    let joint = acts(&scn, &["move(r1,a,b)", "move(r2,d,a)", "move(r3,e,a)"]);
    for &a in &joint {
        assert!(concurrent_condition_satisfied(&scn, a, &joint));
    }
}

#[test]
fn positive_schema_needs_another_witness() {
    let scn = concurrent();
    let l1 = act(&scn, "lift(r1,table)");
    let l2 = act(&scn, "lift(r2,table)");
    assert!(concurrent_condition_satisfied(&scn, l1, &[l1, l2].into_iter().collect()));
    // an action does not witness itself
    assert!(!concurrent_condition_satisfied(&scn, l1, &[l1].into_iter().collect()));
}

#[test]
fn negative_schema_excludes_matching_actions() {
    let scn = concurrent();
    let m1 = act(&scn, "move(r1,o2,o3)");
    let m3 = act(&scn, "move(r3,o1,o5)");
    assert!(!concurrent_condition_satisfied(&scn, m1, &[m1, m3].into_iter().collect()));
    // its own negative schema does not apply to itself
    assert!(concurrent_condition_satisfied(&scn, m3, &[m3].into_iter().collect()));

    // oracle: unify the schema with every other member by hand
    let joint: ConcurrentAction = [m1, m3].into_iter().collect();
    let schema = &scn.action(m1).con[0];
    let blocked = joint
        .iter()
        .filter(|&&b| b != m1)
        .any(|&b| scn.action(b).name == schema.name && scn.action(b).args[2] == sym(&scn, "o5"));
    assert!(blocked);
}

#[test]
fn step_zero_joint_action_is_consistent() {
    let scn = running();
    let joint = acts(&scn, &["move(r1,a,b)", "move(r2,d,a)", "move(r3,e,a)"]);
    assert!(is_concurrent_consistent(&scn, &joint));
}

#[test]
fn incomplete_joint_action_is_inconsistent() {
    let scn = running();
    assert!(!is_concurrent_consistent(&scn, &acts(&scn, &["move(r1,a,b)", "move(r2,d,a)"])));
}

#[test]
fn two_actions_of_one_robot_are_inconsistent() {
    let scn = running();
    let joint = acts(&scn, &["move(r1,a,b)", "move(r1,a,e)"]);
    assert!(!is_concurrent_consistent(&scn, &joint));
    assert!(!is_consistent(&post_of(&scn, &joint), &scn.statics, &scn.rules));
}

/// The four clauses checked one by one.
fn consistent_by_clauses(scn: &Scenario, joint: &ConcurrentAction) -> bool {
    let pre: BTreeSet<Literal> = joint.iter().flat_map(|&a| scn.action(a).pre.clone()).collect();
    let post: BTreeSet<Literal> = joint.iter().flat_map(|&a| scn.action(a).post.clone()).collect();
    let clause_pre = is_consistent(&pre, &scn.statics, &scn.rules);
    let clause_post = is_consistent(&post, &scn.statics, &scn.rules);
    let clause_con = joint.iter().all(|&a| {
        scn.action(a).con.iter().all(|s| {
            let hit = joint.iter().any(|&b| {
                b != a && scn.action(b).name == s.name && s.matches(scn.action(b)).is_some()
            });
            hit == s.positive
        })
    });
    let clause_complete = scn
        .agents
        .iter()
        .all(|&g| joint.iter().filter(|&&a| scn.action(a).actor == g).count() == 1)
        && joint.iter().all(|&a| scn.agents.contains(&scn.action(a).actor));
    clause_pre && clause_post && clause_con && clause_complete
}

#[test]
fn effects_of_single_move() {
    let scn = running();
    let eff = effects(&scn, &acts(&scn, &["move(r1,a,b)"]));
    assert_eq!(eff, lits(&scn, &["in(r1,b)", "¬in(r1,a)"]));
}

#[test]
fn effects_of_nothing() {
    let scn = running();
    assert!(effects(&scn, &ConcurrentAction::new()).is_empty());
}

/// `post ∪ {l ∈ pre : {l} ∪ post consistent}`, testing each literal with the
/// full consistency check.
fn effects_by_literal(scn: &Scenario, joint: &ConcurrentAction) -> BTreeSet<Literal> {
    let post = post_of(scn, joint);
    let mut out = post.clone();
    for l in pre_of(scn, joint) {
        let mut with = post.clone();
        with.insert(l.clone());
        if is_consistent(&with, &scn.statics, &scn.rules) {
            out.insert(l);
        }
    }
    out
}

#[test]
fn effects_of_two_moves_into_a() {
    let scn = running();
    let joint = acts(&scn, &["move(r2,d,a)", "move(r3,e,a)"]);
    let want = lits(&scn, &["in(r2,a)", "in(r3,a)", "¬in(r2,d)", "¬in(r3,e)"]);
    assert_eq!(effects(&scn, &joint), want);
    assert_eq!(effects_by_literal(&scn, &joint), want);
}

#[test]
fn apply_reproduces_the_running_example() {
    let scn = running();
    let s0 = scn.initial_state.clone();
    let s1 = apply(&scn, &acts(&scn, &["move(r1,a,b)", "move(r2,d,a)", "move(r3,e,a)"]), &s0).unwrap();
    let want1: BTreeSet<GroundAtom> = ["in(r1,b)", "in(r2,a)", "in(r3,a)"].iter().map(|t| atom(&scn, t)).collect();
    assert_eq!(s1, want1);
    let s2 = apply(&scn, &acts(&scn, &["move(r1,b,c)", "move(r2,a,e)", "move(r3,a,b)"]), &s1).unwrap();
    let want2: BTreeSet<GroundAtom> = ["in(r1,c)", "in(r2,e)", "in(r3,b)"].iter().map(|t| atom(&scn, t)).collect();
    assert_eq!(s2, want2);
}

#[test]
fn apply_of_nops_is_identity() {
    let scn = running();
    let nops = acts(&scn, &["nop(r1)", "nop(r2)", "nop(r3)"]);
    assert_eq!(apply(&scn, &nops, &scn.initial_state).unwrap(), scn.initial_state);
    assert_eq!(apply(&scn, &ConcurrentAction::new(), &scn.initial_state).unwrap(), scn.initial_state);
}

#[test]
fn apply_rejects_inapplicable_actions() {
    let scn = running();
    let err = apply(&scn, &acts(&scn, &["move(r1,b,c)"]), &scn.initial_state).unwrap_err();
    assert!(matches!(err, ActionError::NotApplicable { ref action, .. } if action == "move(r1,b,c)"));
}

#[test]
fn invariant_literals_drop_what_the_move_changes() {
    let scn = running();
    let p = p0(&scn);
    let got = invariant_literals(&scn, &p, &acts(&scn, &["move(r1,a,b)"]));
    let mut want = p.clone();
    want.remove(&lits(&scn, &["in(r1,a)"]).into_iter().next().unwrap());
    want.remove(&lits(&scn, &["¬in(r1,b)"]).into_iter().next().unwrap());
    assert_eq!(got, want);

    assert_eq!(invariant_literals(&scn, &p, &ConcurrentAction::new()), p);
    let single = lits(&scn, &["in(r2,d)"]);
    assert!(invariant_literals(&scn, &single, &acts(&scn, &["move(r2,d,a)"])).is_empty());
}

fn placement() -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0usize..6, 3)
}

fn state_of(scn: &Scenario, placement: &[usize]) -> BTreeSet<GroundAtom> {
    let offices = ["a", "b", "c", "d", "e", "f"];
    ["r1", "r2", "r3"]
        .iter()
        .zip(placement)
        .map(|(r, &o)| atom(scn, &format!("in({r},{})", offices[o])))
        .collect()
}

proptest! {
    #[test]
    fn concurrent_consistency_matches_clauses(choice in proptest::collection::vec(0usize..20, 0..5)) {
        let scn = concurrent();
        let all: Vec<ActionId> = scn.action_ids().collect();
        let joint: ConcurrentAction = choice.iter().map(|&k| all[k % all.len()]).collect();
        prop_assert_eq!(is_concurrent_consistent(&scn, &joint), consistent_by_clauses(&scn, &joint));
    }

    #[test]
    fn concurrent_consistency_matches_clauses_on_moves(choice in proptest::collection::vec(0usize..39, 0..5)) {
        let scn = running();
        let all: Vec<ActionId> = scn.action_ids().collect();
        let joint: ConcurrentAction = choice.iter().map(|&k| all[k % all.len()]).collect();
        prop_assert_eq!(is_concurrent_consistent(&scn, &joint), consistent_by_clauses(&scn, &joint));
    }

    #[test]
    fn effects_contain_post_and_stay_consistent(p in placement(), pick in proptest::collection::vec(0usize..8, 3)) {
        let scn = running();
        let s = state_of(&scn, &p);
        let joint: ConcurrentAction = scn
            .agents
            .iter()
            .zip(&pick)
            .map(|(&g, &k)| {
                let opts: Vec<ActionId> = crate::sim::world::applicable(&scn, g, &s);
                opts[k % opts.len()]
            })
            .collect();
        let eff = effects(&scn, &joint);
        prop_assert!(post_of(&scn, &joint).is_subset(&eff));
        prop_assert_eq!(&eff, &effects_by_literal(&scn, &joint));
        if is_concurrent_consistent(&scn, &joint) {
            prop_assert!(is_consistent(&eff, &scn.statics, &scn.rules));
        }
    }

    #[test]
    fn apply_keeps_every_robot_in_one_office(p in placement(), pick in proptest::collection::vec(0usize..8, 3)) {
        let scn = running();
        let s = state_of(&scn, &p);
        let joint: ConcurrentAction = scn
            .agents
            .iter()
            .zip(&pick)
            .map(|(&g, &k)| {
                let opts = crate::sim::world::applicable(&scn, g, &s);
                opts[k % opts.len()]
            })
            .collect();
        let next = apply(&scn, &joint, &s).unwrap();
        for &g in &scn.agents {
            prop_assert_eq!(next.iter().filter(|a| a.args[0] == g).count(), 1);
        }
    }

    #[test]
    fn full_and_partial_instantiation_agree_on_complete_knowledge(p in placement()) {
        let scn = running();
        let s = state_of(&scn, &p);
        let enc = closed_world_encoding(&scn, &s);
        for d in 0..scn.descriptions.len() {
            prop_assert_eq!(
                instantiate(&scn, d, Knowledge::Full(&s)),
                instantiate(&scn, d, Knowledge::Partial(&enc))
            );
        }
    }

    #[test]
    fn partial_instantiation_never_invents_actions(p in placement(), keep in proptest::collection::vec(any::<bool>(), 18)) {
        // with sound but incomplete knowledge, every instance found is one
        // that is truly applicable
        let scn = running();
        let s = state_of(&scn, &p);
        let enc: BTreeSet<Literal> = closed_world_encoding(&scn, &s)
            .into_iter()
            .zip(keep.iter().cycle())
            .filter(|(_, k)| **k)
            .map(|(l, _)| l)
            .collect();
        let d = move_desc(&scn);
        let full: BTreeSet<ActionId> = instantiate(&scn, d, Knowledge::Full(&s)).into_iter().collect();
        for a in instantiate(&scn, d, Knowledge::Partial(&enc)) {
            prop_assert!(full.contains(&a));
        }
    }
}

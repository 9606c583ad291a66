use super::*;
use crate::sim::case_study::Layout;
use crate::testkit::running;

fn running_file() -> ScenarioFile {
    Layout::running_example().to_scenario("running-example")
}

fn compile_err(edit: impl FnOnce(&mut ScenarioFile)) -> ScenarioError {
    let mut file = running_file();
    edit(&mut file);
    Scenario::compile(file).expect_err("should not compile")
}

#[test]
fn running_example_table() {
    let scn = running();
    assert_eq!(scn.agent_count(), 3);
    // 12 corridors per robot plus one NOP each
    assert_eq!(scn.actions().len(), 3 * 12 + 3);
    assert_eq!(scn.dynamic_universe.len(), 18);
    for g in &scn.agents {
        let nop = scn.nop_of(*g).unwrap();
        assert!(scn.is_observable(nop));
        assert_eq!(scn.actions_of(*g).len(), 13);
    }
    assert!(scn.is_observable(scn.parse_action("move(r2,a,b)").unwrap()));
    assert!(!scn.is_observable(scn.parse_action("move(r2,a,e)").unwrap()));
}

#[test]
fn parse_action_rejects_unknown_groundings() {
    let scn = running();
    assert!(matches!(scn.parse_action("move(r1,a,c)"), Err(ScenarioError::UnknownGroundAction(_))));
    assert!(matches!(scn.parse_action("fly(r1)"), Err(ScenarioError::UnknownGroundAction(_))));
    assert!(matches!(scn.parse_action("move(r1,a"), Err(ScenarioError::Syntax { .. })));
}

#[test]
fn json_round_trip_preserves_the_hash() {
    let scn = running();
    let text = scn.file().to_json_pretty();
    let again = Scenario::from_json(&text).unwrap();
    assert_eq!(again.hash(), scn.hash());
    assert_eq!(again.file(), scn.file());
    assert_eq!(again.actions(), scn.actions());
}

#[test]
fn load_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    std::fs::write(&path, running_file().to_json_pretty()).unwrap();
    assert_eq!(Scenario::load(&path).unwrap().hash(), running().hash());
    assert!(matches!(Scenario::load(dir.path().join("missing.json")), Err(ScenarioError::Io { .. })));
}

#[test]
fn hash_tracks_content_not_formatting() {
    let a = running();
    let compact = serde_json::to_string(a.file()).unwrap();
    assert_eq!(Scenario::from_json(&compact).unwrap().hash(), a.hash());
    let mut file = running_file();
    file.norms[0].priority = Some(7);
    assert_ne!(Scenario::compile(file).unwrap().hash(), a.hash());
    assert_eq!(a.hash().len(), 64);
}

#[test]
fn malformed_json() {
    assert!(matches!(Scenario::from_json("{"), Err(ScenarioError::Json(_))));
}

#[test]
fn unknown_predicate() {
    let e = compile_err(|f| f.statics.push("wall(a)".into()));
    assert!(matches!(e, ScenarioError::UnknownPredicate { ref name, .. } if name == "wall"));
}

#[test]
fn wrong_arity() {
    let e = compile_err(|f| f.initial_state.push("in(r1)".into()));
    assert!(matches!(e, ScenarioError::Arity { expected: 2, found: 1, .. }));
}

#[test]
fn dynamic_fact_among_statics() {
    let e = compile_err(|f| f.statics.push("in(r1,a)".into()));
    assert!(matches!(e, ScenarioError::ExpectedStatic { .. }));
}

#[test]
fn static_atom_in_universe() {
    let e = compile_err(|f| f.dynamic_universe.push("robot(r1)".into()));
    assert!(matches!(e, ScenarioError::ExpectedDynamic { .. }));
}

#[test]
fn initial_state_outside_universe() {
    let e = compile_err(|f| {
        f.dynamic_universe.retain(|a| a != "in(r1,a)");
    });
    assert!(matches!(e, ScenarioError::NotInUniverse(_)));
}

#[test]
fn initial_state_must_be_consistent() {
    let e = compile_err(|f| f.initial_state.push("in(r1,b)".into()));
    assert!(matches!(e, ScenarioError::InconsistentInitialState));
}

#[test]
fn duplicate_action_description() {
    let e = compile_err(|f| {
        let again = f.action_descriptions[0].clone();
        f.action_descriptions.push(again);
    });
    assert!(matches!(e, ScenarioError::DuplicateAction(_)));
}

#[test]
fn actor_must_be_a_parameter() {
    let e = compile_err(|f| f.action_descriptions[0].actor = "X".into());
    assert!(matches!(e, ScenarioError::ActorNotParam { .. }));
}

#[test]
fn parameters_need_a_static_type() {
    let e = compile_err(|f| f.action_descriptions[0].pre.retain(|p| p != "office(O2)" && p != "corridor(O1,O2)"));
    assert!(matches!(e, ScenarioError::UntypedParam { ref param, .. } if param == "O2"));
}

#[test]
fn empty_postcondition() {
    let e = compile_err(|f| f.action_descriptions[0].post.clear());
    assert!(matches!(e, ScenarioError::EmptyPost(_)));
}

#[test]
fn empty_rule_body() {
    let e = compile_err(|f| f.rules[0].body.clear());
    assert!(matches!(e, ScenarioError::EmptyRuleBody(0)));
}

#[test]
fn actor_outside_the_agents() {
    let e = compile_err(|f| f.agents.retain(|a| a != "r3"));
    assert!(matches!(e, ScenarioError::ActorNotAgent { ref actor, .. } if actor == "r3"));
}

#[test]
fn norm_on_unknown_action() {
    let e = compile_err(|f| f.norms[0].action = "fly(R2)".into());
    assert!(matches!(e, ScenarioError::UnknownAction { .. }));
}

#[test]
fn bad_observation_probability() {
    let e = compile_err(|f| f.observability = ObservabilitySpec::Probability { p: 1.5 });
    assert!(matches!(e, ScenarioError::BadProbability(_)));
}

#[test]
fn probability_model_observes_only_nops() {
    let mut file = running_file();
    file.observability = ObservabilitySpec::Probability { p: 0.5 };
    let scn = Scenario::compile(file).unwrap();
    for a in scn.action_ids() {
        assert_eq!(scn.is_observable(a), scn.action(a).nop);
    }
}

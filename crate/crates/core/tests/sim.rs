//! World simulation, sensors and scenario generators.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use normmon_core::action::is_concurrent_consistent;
use normmon_core::io::scenario_file::ObservabilitySpec;
use normmon_core::sim::case_study::floor_fraction;
use normmon_core::sim::random::tenth;
use normmon_core::sim::world::applicable;
use normmon_core::sim::{generate_random, observe, simulate, step_world, CameraChoice, Layout};
use normmon_core::{ConcurrentAction, Scenario};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn strs(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn pairs(xs: &[(&str, &str)]) -> Vec<(String, String)> {
    xs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

/// One robot in o1 with the given exits.
fn lone_robot(exits: &[(&str, &str)]) -> Scenario {
    let layout = Layout {
        offices: strs(&["o1", "o2", "o3"]),
        robots: strs(&["r1"]),
        corridors: pairs(exits),
        cameras: Vec::new(),
        placement: pairs(&[("r1", "o1")]),
    };
    Scenario::compile(layout.to_scenario("lone")).unwrap()
}

#[test]
fn two_exits_are_drawn_evenly() {
    let scn = lone_robot(&[("o1", "o2"), ("o1", "o3")]);
    let mut r = rng(99);
    let mut counts: BTreeMap<String, u32> = BTreeMap::new();
    let n = 10_000;
    for _ in 0..n {
        let (joint, _) = step_world(&scn, &scn.initial_state, &mut r).unwrap();
        let a = joint.iter().next().unwrap();
        *counts.entry(scn.describe_action(*a)).or_default() += 1;
    }
    assert_eq!(counts.len(), 2);
    for (a, c) in counts {
        let freq = f64::from(c) / f64::from(n);
        assert!((0.48..=0.52).contains(&freq), "{a}: {freq}");
    }
}

#[test]
fn single_exit_is_taken_with_certainty() {
    let scn = lone_robot(&[("o1", "o2")]);
    let mut r = rng(1);
    for _ in 0..100 {
        let (joint, _) = step_world(&scn, &scn.initial_state, &mut r).unwrap();
        assert_eq!(joint, [scn.parse_action("move(r1,o1,o2)").unwrap()].into());
    }
}

#[test]
fn blocked_agents_wait() {
    let scn = lone_robot(&[("o2", "o3")]);
    let r1 = scn.agent("r1").unwrap();
    assert!(applicable(&scn, r1, &scn.initial_state).is_empty());
    let (joint, next) = step_world(&scn, &scn.initial_state, &mut rng(0)).unwrap();
    assert_eq!(joint, [scn.nop_of(r1).unwrap()].into());
    assert_eq!(next, scn.initial_state);
}

fn with_probability(p: f64) -> Scenario {
    let mut file = Layout::running_example().to_scenario("p");
    file.observability = ObservabilitySpec::Probability { p };
    Scenario::compile(file).unwrap()
}

#[test]
fn probability_extremes() {
    for (p, all) in [(0.0, false), (1.0, true)] {
        let scn = with_probability(p);
        let mut world = rng(4);
        let mut obs = rng(5);
        let log = simulate(&scn, 50, &mut world, &mut obs).unwrap();
        for t in &log.ticks {
            let want: ConcurrentAction = if all {
                t.executed.clone()
            } else {
                t.executed.iter().copied().filter(|&a| scn.action(a).nop).collect()
            };
            assert_eq!(t.observed, want, "p = {p}");
        }
    }
}

#[test]
fn camera_counts_follow_the_floor() {
    assert_eq!(floor_fraction(0.4, 10), 4);
    assert_eq!(floor_fraction(0.2, 12), 2);
    assert_eq!(floor_fraction(1.0, 7), 7);
    assert_eq!(floor_fraction(0.0, 7), 0);

    // ten corridors, 40% of them watched
    let offices = ["o1", "o2", "o3", "o4", "o5"];
    let mut corridors = Vec::new();
    for (k, a) in offices.iter().enumerate() {
        corridors.push((a.to_string(), offices[(k + 1) % 5].to_string()));
        corridors.push((offices[(k + 1) % 5].to_string(), a.to_string()));
    }
    let layout = Layout {
        offices: strs(&offices),
        robots: strs(&["r1", "r2"]),
        corridors,
        cameras: Vec::new(),
        placement: pairs(&[("r1", "o1"), ("r2", "o3")]),
    };
    let watched = layout.clone().with_cameras(CameraChoice::Ratio(0.4), &mut rng(3));
    assert_eq!(watched.cameras.len(), 4);
    assert!(watched.cameras.iter().all(|c| layout.corridors.contains(c)));
    let all = layout.clone().with_cameras(CameraChoice::Ratio(1.0), &mut rng(3));
    let as_set = |v: &[(String, String)]| v.iter().cloned().collect::<BTreeSet<_>>();
    assert_eq!(as_set(&all.cameras), as_set(&layout.corridors));
}

fn capabilities(file: &normmon_core::io::ScenarioFile) -> BTreeMap<String, BTreeSet<String>> {
    let mut out: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for s in file.statics.iter().filter_map(|s| s.strip_prefix("capable(")) {
        let (role, action) = s.trim_end_matches(')').split_once(',').unwrap();
        out.entry(role.to_string()).or_default().insert(action.to_string());
    }
    out
}

#[test]
fn single_action_collapses_every_range() {
    for seed in 0..20 {
        let file = generate_random(3, 1, 0.5, &mut rng(seed));
        let caps = capabilities(&file);
        assert_eq!(caps.len(), 1);
        assert_eq!(caps.values().next().unwrap(), &["a1".to_string()].into());
        assert_eq!(file.norms.len(), 1);
    }
}

#[test]
fn capabilities_stay_within_a_tenth() {
    assert_eq!(tenth(50), 5);
    for seed in 0..10 {
        let file = generate_random(4, 50, 0.5, &mut rng(seed));
        let caps = capabilities(&file);
        assert!(!caps.is_empty() && caps.len() <= 50);
        assert!(caps.values().all(|c| !c.is_empty() && c.len() <= 5));
        let props = file.dynamic_universe.len();
        assert!((50..=100).contains(&props));
        assert!((1..=50).contains(&file.norms.len()));
        Scenario::compile(file).unwrap();
    }
}

#[test]
fn generation_is_deterministic() {
    let a = generate_random(3, 6, 0.3, &mut rng(17)).to_json_pretty();
    let b = generate_random(3, 6, 0.3, &mut rng(17)).to_json_pretty();
    assert_eq!(a, b);
    let c = generate_random(3, 6, 0.3, &mut rng(18)).to_json_pretty();
    assert_ne!(a, c);
}

#[test]
fn random_layouts_are_well_formed() {
    use normmon_core::sim::case_study::CaseStudyConfig;
    for seed in 0..200 {
        let cfg = CaseStudyConfig::default();
        let l = Layout::random(&cfg, &mut rng(seed));
        let o = l.offices.len();
        assert!((3..=10).contains(&o));
        assert!((2..=5).contains(&l.robots.len()));
        let c = l.corridors.len();
        assert!((o..=o * (o - 1)).contains(&c), "{c} corridors for {o} offices");
        let distinct: BTreeSet<_> = l.corridors.iter().collect();
        assert_eq!(distinct.len(), c);
        assert!(l.corridors.iter().all(|(a, b)| a != b));
        let starts: BTreeSet<_> = l.placement.iter().map(|(_, o)| o).collect();
        assert_eq!(starts.len(), l.robots.len(), "robots start apart");
        // every office has a way out
        for office in &l.offices {
            assert!(l.corridors.iter().any(|(a, _)| a == office));
        }
    }
}

/// Expected approximate identification with two actions per system.
const TWO_ACTION_FLOOR: f64 = 90.0;
const TWO_ACTION_TOLERANCE_PP: f64 = 5.0;

#[test]
fn two_actions_are_mostly_identified() {
    use normmon_core::monitor::Variant;
    use normmon_core::sim::experiment::{random_row, Aggregation, Metric, MonitorSettings};
    use normmon_core::sim::{ObsChoice, RandomConfig};
    let cfg = RandomConfig {
        actions: (2, 2),
        observation: ObsChoice::Random,
        reps: 200,
        steps: 100,
        seed: 0,
        ..RandomConfig::default()
    };
    let row = random_row(&cfg, &[Variant::Approximate], MonitorSettings::default()).unwrap();
    let (id, _) = row.rates(Variant::Approximate, Metric::Violations, Aggregation::Pooled).unwrap();
    assert!(id >= TWO_ACTION_FLOOR - TWO_ACTION_TOLERANCE_PP, "{id}");
    assert!(row.is_sound());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ground_truth_logs_are_well_formed(seed in 0u64..10_000, k in 0u64..50) {
        let (scn, log) = common::small_world(seed, k);
        let mut s = scn.initial_state.clone();
        for t in &log.ticks {
            prop_assert_eq!(&t.state, &s);
            prop_assert!(is_concurrent_consistent(&scn, &t.executed));
            prop_assert!(t.observed.is_subset(&t.executed));
            s = normmon_core::action::apply(&scn, &t.executed, &s).unwrap();
        }
        prop_assert_eq!(s, log.final_state);
    }

    #[test]
    fn sensor_is_repeatable(seed in any::<u64>()) {
        let scn = with_probability(0.5);
        let log = simulate(&scn, 10, &mut rng(seed), &mut rng(seed ^ 1)).unwrap();
        for t in &log.ticks {
            let mut a = rng(seed);
            let mut b = rng(seed);
            prop_assert_eq!(observe(&scn, &t.executed, &mut a), observe(&scn, &t.executed, &mut b));
        }
    }
}

//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::Arc;

use normmon_core::action::{self, closed_world_encoding, ActionId, ConcurrentAction};
use normmon_core::logic::{is_consistent, Literal};
use normmon_core::monitor::{run_monitor, MonitorConfig, TickRecord, Variant};
use normmon_core::norm::{Mode, Status};
use normmon_core::reconstruct::{approximate_search, search, target_agents};
use normmon_core::sim::case_study::{CameraChoice, CaseStudyConfig};
use normmon_core::sim::experiment::{case_study_scenario, random_scenario, world_run};
use normmon_core::sim::random::{ObsChoice, RandomConfig};
use normmon_core::sim::{oracle_verdicts, GroundTruthLog};
use normmon_core::Scenario;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn running_example() -> Arc<Scenario> {
    Arc::new(Scenario::load(fixture("running-example.json")).unwrap())
}

pub fn small_case_study(seed: u64) -> CaseStudyConfig {
    CaseStudyConfig {
        offices: (3, 6),
        robots: (2, 4),
        cameras: CameraChoice::Random,
        steps: 25,
        reps: 1,
        seed,
        ..CaseStudyConfig::default()
    }
}

pub fn small_random(seed: u64) -> RandomConfig {
    RandomConfig {
        agents: (1, 4),
        actions: (1, 8),
        observation: ObsChoice::Random,
        steps: 25,
        reps: 1,
        seed,
    }
}

/// Scenario and ground-truth run number `k` of a mixed batch: even `k`
/// are office layouts, odd `k` propositional systems.
pub fn small_world(seed: u64, k: u64) -> (Arc<Scenario>, GroundTruthLog) {
    let (scn, steps) = if k % 2 == 0 {
        let cfg = small_case_study(seed);
        (case_study_scenario(&cfg, k).unwrap(), cfg.steps)
    } else {
        let cfg = small_random(seed);
        (random_scenario(&cfg, k).unwrap(), cfg.steps)
    };
    let log = world_run(&scn, seed, k, steps).unwrap();
    (Arc::new(scn), log)
}

pub fn records(scn: &Arc<Scenario>, log: &GroundTruthLog, variant: Variant) -> Vec<TickRecord> {
    run_monitor(Arc::clone(scn), MonitorConfig::new(variant), &log.observations()).unwrap()
}

fn literal_true(scn: &Scenario, now: &BTreeSet<Literal>, l: &Literal) -> bool {
    if scn.statics.is_static(l.atom.pred) {
        scn.statics.contains(&l.atom) == l.positive
    } else {
        now.contains(l)
    }
}

/// Every combination of one non-observable action per target agent that,
/// together with `act`, forms a consistent concurrent action whose pre- and
/// postconditions are consistent with `i` and `f`.
pub fn brute_force(
    scn: &Scenario,
    i: &BTreeSet<Literal>,
    f: &BTreeSet<Literal>,
    act: &ConcurrentAction,
) -> BTreeSet<ConcurrentAction> {
    let options: Vec<Vec<ActionId>> = target_agents(scn, act)
        .into_iter()
        .map(|g| scn.actions_of(g).iter().copied().filter(|&a| !scn.is_observable(a)).collect())
        .collect();
    let mut combos: Vec<ConcurrentAction> = vec![ConcurrentAction::new()];
    for opts in &options {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                opts.iter().map(move |&a| {
                    let mut c = c.clone();
                    c.insert(a);
                    c
                })
            })
            .collect();
    }
    combos
        .into_iter()
        .filter(|s| {
            let joint: ConcurrentAction = act.union(s).copied().collect();
            let mut ip = i.clone();
            ip.extend(action::pre_of(scn, &joint));
            let mut fp = f.clone();
            fp.extend(action::post_of(scn, &joint));
            action::is_concurrent_consistent(scn, &joint)
                && is_consistent(&ip, &scn.statics, &scn.rules)
                && is_consistent(&fp, &scn.statics, &scn.rules)
        })
        .collect()
}

/// A reconstruction problem taken from a monitor run: the knowledge the
/// monitor held about s_t and s_{t+1} plus what it observed at t.
pub struct Problem {
    pub i: BTreeSet<Literal>,
    pub f: BTreeSet<Literal>,
    pub act: ConcurrentAction,
    pub executed: ConcurrentAction,
}

pub fn problems(recs: &[TickRecord], log: &GroundTruthLog) -> Vec<Problem> {
    recs.iter()
        .enumerate()
        .map(|(t, r)| Problem {
            i: r.state.clone(),
            f: recs.get(t + 1).map(|n| n.state.clone()).unwrap_or_default(),
            act: r.observed.clone(),
            executed: log.ticks[t].executed.clone(),
        })
        .collect()
}

/// Soundness violations of one monitored run; empty when sound.
pub fn soundness_violations(scn: &Scenario, log: &GroundTruthLog, recs: &[TickRecord]) -> Vec<String> {
    let mut bad = Vec::new();
    if recs.len() != log.ticks.len() {
        bad.push(format!("{} records for {} ticks", recs.len(), log.ticks.len()));
        return bad;
    }
    for (t, (rec, wt)) in recs.iter().zip(&log.ticks).enumerate() {
        let now = closed_world_encoding(scn, &wt.state);
        // (a) knowledge
        for l in rec.state.iter().filter(|l| !literal_true(scn, &now, l)) {
            bad.push(format!("tick {t}: false literal {}", scn.describe(l)));
        }
        // (b) reconstruction
        for a in rec.reconstructed.iter().filter(|a| !wt.executed.contains(a)) {
            bad.push(format!("tick {t}: reconstructed {} was not executed", scn.describe_action(*a)));
        }
        // (c) identified verdicts
        let oracle = oracle_verdicts(scn, &wt.state, &wt.executed, t as u64);
        for v in rec.verdicts.iter().filter(|v| v.mode == Mode::Identified) {
            if !oracle.contains(v) {
                bad.push(format!("tick {t}: identified verdict {v:?} not in the oracle"));
            }
        }
        // (d) discovered culprits
        for v in rec.verdicts.iter().filter(|v| v.mode == Mode::Discovered) {
            let confirmed = oracle.iter().any(|o| {
                o.culprit == v.culprit
                    && o.status == v.status
                    && o.status != Status::Unknown
                    && o.instance.deontic == v.instance.deontic
            });
            if !confirmed {
                bad.push(format!("tick {t}: discovered verdict {v:?} unconfirmed"));
            }
        }
    }
    // (e) the truth survives both searches on the knowledge the monitor held
    for (t, p) in problems(recs, log).iter().enumerate() {
        let truth: ConcurrentAction = p.executed.difference(&p.act).copied().collect();
        if !search(scn, &p.i, &p.f, &p.act).solutions.contains(&truth) {
            bad.push(format!("tick {t}: true joint action missing from the solutions"));
        }
        let table = approximate_search(scn, &p.i, &p.f, &p.act);
        for a in &truth {
            let row = table.rows.get(&scn.action(*a).actor);
            if !row.is_some_and(|r| r.contains(a)) {
                bad.push(format!("tick {t}: {} missing from its candidate row", scn.describe_action(*a)));
            }
        }
    }
    bad
}

/// Non-observable actions per target agent, for sizing oracle instances.
pub fn candidate_counts(scn: &Scenario, act: &ConcurrentAction) -> Vec<usize> {
    target_agents(scn, act)
        .into_iter()
        .map(|g| scn.actions_of(g).iter().filter(|&&a| !scn.is_observable(a)).count())
        .collect()
}

/// Search-versus-oracle comparison over mixed random runs; returns
/// (instances checked, mismatching instances).
pub fn oracle_comparison(seed: u64, wanted: usize) -> (usize, Vec<String>) {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for k in 0.. {
        if checked >= wanted || k > 20 * wanted as u64 {
            break;
        }
        let (scn, log) = small_world(seed, k);
        let recs = records(&scn, &log, Variant::Traditional);
        for p in problems(&recs, &log) {
            let counts = candidate_counts(&scn, &p.act);
            if counts.is_empty() || counts.len() > 3 || counts.iter().any(|&c| c > 10) {
                continue;
            }
            let got = search(&scn, &p.i, &p.f, &p.act).solutions;
            if got != brute_force(&scn, &p.i, &p.f, &p.act) {
                mismatches.push(format!("run {k}: search disagrees with the oracle"));
            }
            checked += 1;
        }
    }
    (checked, mismatches)
}

/// Identified truth units (violations + fulfilments) found by a variant.
pub fn identified(score: &normmon_core::sim::Score) -> u64 {
    score.violations.identified + score.fulfilments.identified
}

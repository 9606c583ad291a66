//! Scoring monitor verdicts against an omniscient judge.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::action::{self, ConcurrentAction};
use crate::logic::{GroundAtom, Sym};
use crate::monitor::TickRecord;
use crate::norm::{check_norms, relevant_instances, Mode, NormInstance, Status, Verdict};
use crate::scenario::Scenario;

use super::world::GroundTruthLog;

/// Verdicts of a monitor that sees the full state and every action.
pub fn oracle_verdicts(scn: &Scenario, s: &BTreeSet<GroundAtom>, executed: &ConcurrentAction, tick: u64) -> Vec<Verdict> {
    let p = action::closed_world_encoding(scn, s);
    let instances = relevant_instances(scn, &p, tick);
    check_norms(scn, &instances, executed, &[])
}

/// One ground-truth verdict: an instance, its status and (when an action
/// decided it) the agent responsible.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Unit {
    pub instance: NormInstance,
    pub status: Status,
    pub culprit: Option<Sym>,
}

impl Unit {
    fn of(v: &Verdict) -> Self {
        Unit {
            instance: v.instance.clone(),
            status: v.status,
            culprit: v.culprit,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    /// Ground-truth verdicts.
    pub truth: u64,
    /// Of those, found by an identified verdict.
    pub identified: u64,
    /// Of those, accounted for by a discovered verdict.
    pub discovered: u64,
}

impl Counts {
    fn add(&mut self, o: &Counts) {
        self.truth += o.truth;
        self.identified += o.identified;
        self.discovered += o.discovered;
    }

    /// (identified %, discovered %); 0 when there is nothing to find.
    pub fn rates(&self) -> (f64, f64) {
        if self.truth == 0 {
            return (0.0, 0.0);
        }
        let t = self.truth as f64;
        (100.0 * self.identified as f64 / t, 100.0 * self.discovered as f64 / t)
    }
}

/// Score of one monitor variant on one or more runs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Score {
    pub violations: Counts,
    pub fulfilments: Counts,
    /// Identified verdicts the oracle does not confirm.
    pub unsound_identified: u64,
    /// Discovered verdicts whose culprit decided no instance that way.
    pub unsound_discovered: u64,
    /// Reconstructed actions that were not executed.
    pub unsound_reconstructed: u64,
    /// Known literals contradicted by the true state.
    pub unsound_literals: u64,
    pub capped_ticks: u64,
    pub no_solution_ticks: u64,
    pub ticks: u64,
}

impl Score {
    pub fn add(&mut self, o: &Score) {
        self.violations.add(&o.violations);
        self.fulfilments.add(&o.fulfilments);
        self.unsound_identified += o.unsound_identified;
        self.unsound_discovered += o.unsound_discovered;
        self.unsound_reconstructed += o.unsound_reconstructed;
        self.unsound_literals += o.unsound_literals;
        self.capped_ticks += o.capped_ticks;
        self.no_solution_ticks += o.no_solution_ticks;
        self.ticks += o.ticks;
    }

    pub fn is_sound(&self) -> bool {
        self.unsound_identified == 0
            && self.unsound_discovered == 0
            && self.unsound_reconstructed == 0
            && self.unsound_literals == 0
    }
}

/// Scores the records of one run. Identified verdicts match ground-truth
/// units exactly; each discovered verdict then claims one not yet matched
/// unit with the same culprit, deontic operator and status.
pub fn score_run(scn: &Scenario, log: &GroundTruthLog, records: &[TickRecord]) -> Score {
    let mut score = Score::default();
    for (t, wt) in log.ticks.iter().enumerate() {
        let tick = t as u64;
        score.ticks += 1;
        let truth: Vec<Unit> = oracle_verdicts(scn, &wt.state, &wt.executed, tick)
            .iter()
            .map(Unit::of)
            .collect();
        for u in &truth {
            match u.status {
                Status::Violated => score.violations.truth += 1,
                Status::Fulfilled => score.fulfilments.truth += 1,
                Status::Unknown => {}
            }
        }
        let Some(rec) = records.iter().find(|r| r.tick == tick) else {
            continue;
        };
        if rec.diagnostics.capped {
            score.capped_ticks += 1;
        }
        if rec.diagnostics.no_solution {
            score.no_solution_ticks += 1;
        }
        score.unsound_reconstructed += rec.reconstructed.iter().filter(|a| !wt.executed.contains(a)).count() as u64;
        score.unsound_literals += rec
            .state
            .iter()
            .filter(|l| wt.state.contains(&l.atom) != l.positive)
            .count() as u64;

        let mut used = vec![false; truth.len()];
        let bump = |c: &mut Score, status: Status, discovered: bool| {
            let counts = match status {
                Status::Violated => &mut c.violations,
                Status::Fulfilled => &mut c.fulfilments,
                Status::Unknown => return,
            };
            if discovered {
                counts.discovered += 1;
            } else {
                counts.identified += 1;
            }
        };
        for v in rec.verdicts.iter().filter(|v| v.mode == Mode::Identified) {
            let u = Unit::of(v);
            match truth.iter().position(|x| *x == u) {
                Some(k) if !used[k] => {
                    used[k] = true;
                    bump(&mut score, v.status, false);
                }
                Some(_) => {}
                None => score.unsound_identified += 1,
            }
        }
        for v in rec.verdicts.iter().filter(|v| v.mode == Mode::Discovered) {
            let fits = |x: &Unit| {
                x.culprit.is_some()
                    && x.culprit == v.culprit
                    && x.status == v.status
                    && x.instance.deontic == v.instance.deontic
            };
            if !truth.iter().any(fits) {
                score.unsound_discovered += 1;
                continue;
            }
            // prefer the very instance the monitor named
            let pick = truth
                .iter()
                .enumerate()
                .filter(|(k, x)| !used[*k] && fits(x))
                .min_by_key(|(_, x)| x.instance != v.instance)
                .map(|(k, _)| k);
            if let Some(k) = pick {
                used[k] = true;
                bump(&mut score, v.status, true);
            }
        }
    }
    score
}

/// Largest number of simultaneously applicable instances of a single
/// action description over the run.
pub fn max_instantiations(scn: &Scenario, log: &GroundTruthLog) -> usize {
    let mut best = 0;
    for wt in &log.ticks {
        for (d, desc) in scn.descriptions.iter().enumerate() {
            if desc.nop {
                continue;
            }
            best = best.max(action::instantiate(scn, d, action::Knowledge::Full(&wt.state)).len());
        }
    }
    best
}

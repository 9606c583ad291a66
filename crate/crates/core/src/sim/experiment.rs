//! Repetitions, aggregation and sweep rows.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::io::report::SweepRow;
use crate::monitor::{run_monitor, InitialKnowledge, MonitorConfig, Variant};
use crate::reconstruct::FullConfig;
use crate::scenario::Scenario;
use crate::Error;

use super::case_study::{CaseStudyConfig, Layout};
use super::metrics::{max_instantiations, score_run, Score};
use super::random::{generate_random, ObsChoice, RandomConfig};
use super::world::{simulate, GroundTruthLog};

/// Purposes of the per-repetition random streams.
pub mod purpose {
    pub const LAYOUT: u64 = 0;
    pub const CAMERAS: u64 = 1;
    pub const WORLD: u64 = 2;
    pub const OBSERVE: u64 = 3;
    pub const PARAMS: u64 = 4;
}

const PURPOSES: u64 = 8;

/// Independent stream for (master seed, repetition, purpose).
pub fn stream(seed: u64, rep: u64, purpose: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep * PURPOSES + purpose);
    rng
}

/// Monitor settings shared by every variant of an experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonitorSettings {
    pub initial: InitialKnowledge,
    pub full: FullConfig,
}

impl Default for MonitorSettings {
    fn default() -> Self {
        MonitorSettings {
            initial: InitialKnowledge::Complete,
            full: FullConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunResult {
    pub scores: BTreeMap<Variant, Score>,
    pub max_instantiations: usize,
}

/// Runs every variant on the same observation stream.
pub fn run_variants(
    scn: &Arc<Scenario>,
    log: &GroundTruthLog,
    variants: &[Variant],
    settings: MonitorSettings,
) -> Result<RunResult, Error> {
    let observations = log.observations();
    let mut scores = BTreeMap::new();
    for &v in variants {
        let cfg = MonitorConfig {
            variant: v,
            initial: settings.initial,
            full: settings.full,
        };
        let records = run_monitor(Arc::clone(scn), cfg, &observations)?;
        scores.insert(v, score_run(scn, log, &records));
    }
    Ok(RunResult {
        scores,
        max_instantiations: max_instantiations(scn, log),
    })
}

/// Per-variant aggregate over repetitions.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub runs: usize,
    pub pooled: Score,
    /// Mean over runs with at least one ground-truth violation of
    /// (identified %, discovered %).
    pub mean_violations: (f64, f64),
    pub mean_fulfilments: (f64, f64),
}

fn mean(xs: &[(f64, f64)]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    (
        xs.iter().map(|x| x.0).sum::<f64>() / n,
        xs.iter().map(|x| x.1).sum::<f64>() / n,
    )
}

impl Summary {
    pub fn of(scores: &[&Score]) -> Self {
        let mut pooled = Score::default();
        for s in scores {
            pooled.add(s);
        }
        let v: Vec<_> = scores
            .iter()
            .filter(|s| s.violations.truth > 0)
            .map(|s| s.violations.rates())
            .collect();
        let f: Vec<_> = scores
            .iter()
            .filter(|s| s.fulfilments.truth > 0)
            .map(|s| s.fulfilments.rates())
            .collect();
        Summary {
            runs: scores.len(),
            pooled,
            mean_violations: mean(&v),
            mean_fulfilments: mean(&f),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Violations,
    Fulfilments,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Aggregation {
    Pooled,
    PerRunMean,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RowResult {
    pub runs: Vec<RunResult>,
    pub summaries: BTreeMap<Variant, Summary>,
    pub max_instantiations: usize,
}

impl RowResult {
    fn new(runs: Vec<RunResult>) -> Self {
        let mut summaries = BTreeMap::new();
        let variants: Vec<Variant> = runs
            .first()
            .map(|r| r.scores.keys().copied().collect())
            .unwrap_or_default();
        for v in variants {
            let scores: Vec<&Score> = runs.iter().map(|r| &r.scores[&v]).collect();
            summaries.insert(v, Summary::of(&scores));
        }
        let max_instantiations = runs.iter().map(|r| r.max_instantiations).max().unwrap_or(0);
        RowResult {
            runs,
            summaries,
            max_instantiations,
        }
    }

    /// (identified %, discovered %) of one variant.
    pub fn rates(&self, v: Variant, metric: Metric, agg: Aggregation) -> Option<(f64, f64)> {
        let s = self.summaries.get(&v)?;
        Some(match (metric, agg) {
            (Metric::Violations, Aggregation::Pooled) => s.pooled.violations.rates(),
            (Metric::Fulfilments, Aggregation::Pooled) => s.pooled.fulfilments.rates(),
            (Metric::Violations, Aggregation::PerRunMean) => s.mean_violations,
            (Metric::Fulfilments, Aggregation::PerRunMean) => s.mean_fulfilments,
        })
    }

    pub fn sweep_row(&self, key: f64, metric: Metric, agg: Aggregation) -> SweepRow {
        let total = |v| self.rates(v, metric, agg).map(|(i, d)| i + d);
        let approx = self.rates(Variant::Approximate, metric, agg);
        SweepRow {
            key,
            traditional: total(Variant::Traditional),
            full: total(Variant::Full),
            approx_identified: approx.map(|r| r.0),
            approx_discovered: approx.map(|r| r.1),
        }
    }

    /// Pooled soundness counters over every variant.
    pub fn is_sound(&self) -> bool {
        self.summaries.values().all(|s| s.pooled.is_sound())
    }
}

/// The scenario of repetition `rep` of a case-study configuration.
pub fn case_study_scenario(cfg: &CaseStudyConfig, rep: u64) -> Result<Scenario, Error> {
    let layout = Layout::random(cfg, &mut stream(cfg.seed, rep, purpose::LAYOUT))
        .with_cameras(cfg.cameras, &mut stream(cfg.seed, rep, purpose::CAMERAS));
    Ok(Scenario::compile(layout.to_scenario(&format!("case-study-{rep}")))?)
}

/// The scenario of repetition `rep` of a random configuration.
pub fn random_scenario(cfg: &RandomConfig, rep: u64) -> Result<Scenario, Error> {
    let mut params = stream(cfg.seed, rep, purpose::PARAMS);
    let g = params.random_range(cfg.agents.0..=cfg.agents.1);
    let a = params.random_range(cfg.actions.0..=cfg.actions.1);
    let p = match cfg.observation {
        ObsChoice::Fixed(p) => p,
        ObsChoice::Random => params.random(),
    };
    let file = generate_random(g, a, p, &mut stream(cfg.seed, rep, purpose::LAYOUT));
    Ok(Scenario::compile(file)?)
}

/// Ground-truth run of repetition `rep` on `scn`.
pub fn world_run(scn: &Scenario, seed: u64, rep: u64, steps: usize) -> Result<GroundTruthLog, Error> {
    Ok(simulate(
        scn,
        steps,
        &mut stream(seed, rep, purpose::WORLD),
        &mut stream(seed, rep, purpose::OBSERVE),
    )?)
}

fn run_reps(
    reps: usize,
    make: impl Fn(u64) -> Result<(Arc<Scenario>, GroundTruthLog), Error> + Sync,
    variants: &[Variant],
    settings: MonitorSettings,
) -> Result<RowResult, Error> {
    let runs = (0..reps as u64)
        .into_par_iter()
        .map(|rep| {
            let (scn, log) = make(rep)?;
            run_variants(&scn, &log, variants, settings)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(RowResult::new(runs))
}

/// All repetitions of one case-study configuration.
pub fn case_study_row(cfg: &CaseStudyConfig, variants: &[Variant], settings: MonitorSettings) -> Result<RowResult, Error> {
    cfg.validate()?;
    run_reps(
        cfg.reps,
        |rep| {
            let scn = case_study_scenario(cfg, rep)?;
            let log = world_run(&scn, cfg.seed, rep, cfg.steps)?;
            Ok((Arc::new(scn), log))
        },
        variants,
        settings,
    )
}

/// All repetitions of one random configuration.
pub fn random_row(cfg: &RandomConfig, variants: &[Variant], settings: MonitorSettings) -> Result<RowResult, Error> {
    cfg.validate()?;
    run_reps(
        cfg.reps,
        |rep| {
            let scn = random_scenario(cfg, rep)?;
            let log = world_run(&scn, cfg.seed, rep, cfg.steps)?;
            Ok((Arc::new(scn), log))
        },
        variants,
        settings,
    )
}

#[cfg(test)]
mod tests {
    use rand::RngCore;

    use crate::sim::{CameraChoice, Counts};

    use super::*;

    fn first(mut r: ChaCha8Rng) -> u64 {
        r.next_u64()
    }

    #[test]
    fn streams_are_distinct_and_repeatable() {
        let mut seen = std::collections::BTreeSet::new();
        for rep in 0..4 {
            for p in [purpose::LAYOUT, purpose::CAMERAS, purpose::WORLD, purpose::OBSERVE, purpose::PARAMS] {
                assert_eq!(first(stream(11, rep, p)), first(stream(11, rep, p)));
                assert!(seen.insert(first(stream(11, rep, p))));
            }
        }
        assert_ne!(first(stream(11, 0, 0)), first(stream(12, 0, 0)));
    }

    fn score(truth: u64, identified: u64) -> Score {
        Score {
            violations: Counts {
                truth,
                identified,
                discovered: 0,
            },
            ..Score::default()
        }
    }

    #[test]
    fn pooled_and_per_run_aggregation() {
        // 1/1 and 1/3 pooled is 2/4; the per-run mean is (100 + 33.3) / 2;
        // the run without violations only counts towards the pool
        let runs = [score(1, 1), score(3, 1), score(0, 0)];
        let s = Summary::of(&runs.iter().collect::<Vec<_>>());
        assert_eq!(s.runs, 3);
        assert_eq!(s.pooled.violations.rates(), (50.0, 0.0));
        assert!((s.mean_violations.0 - 200.0 / 3.0).abs() < 1e-9);
        assert_eq!(s.mean_fulfilments, (0.0, 0.0));
    }

    #[test]
    fn worlds_are_shared_across_camera_rows() {
        let base = CaseStudyConfig {
            reps: 3,
            steps: 10,
            seed: 5,
            ..CaseStudyConfig::default()
        };
        let watched = CaseStudyConfig {
            cameras: CameraChoice::Ratio(1.0),
            ..base.clone()
        };
        for rep in 0..3 {
            let a = case_study_scenario(&base, rep).unwrap();
            let b = case_study_scenario(&watched, rep).unwrap();
            assert_eq!(a.file().agents, b.file().agents);
            assert_eq!(a.file().statics, b.file().statics);
            let la = world_run(&a, base.seed, rep, base.steps).unwrap();
            let lb = world_run(&b, base.seed, rep, base.steps).unwrap();
            let executed = |l: &GroundTruthLog| l.ticks.iter().map(|t| t.executed.clone()).collect::<Vec<_>>();
            assert_eq!(executed(&la), executed(&lb));
        }
    }
}

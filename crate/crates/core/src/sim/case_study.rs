//! Office-delivery robots: offices joined by directed corridors, some of
//! them watched by cameras, and one collision prohibition.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::io::scenario_file::{
    ActionSpec, NormSpec, ObservabilitySpec, PredicateSpec, RuleSpec, ScenarioFile, SymbolsSpec,
};
use crate::norm::Deontic;

/// How many corridors a generated layout gets.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorridorChoice {
    /// Uniform in `[O, O·(O−1)]`.
    Random,
    /// `O + ⌊x·(O·(O−1) − O)⌋`: 0 gives the sparsest layout, 1 the complete
    /// digraph.
    Ratio(f64),
}

/// How many corridors get a camera.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CameraChoice {
    /// `⌊x·C⌋`.
    Ratio(f64),
    /// Uniform in `[0, C]`.
    Random,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseStudyConfig {
    pub offices: (usize, usize),
    pub robots: (usize, usize),
    pub corridors: CorridorChoice,
    pub cameras: CameraChoice,
    pub steps: usize,
    pub reps: usize,
    pub seed: u64,
}

impl Default for CaseStudyConfig {
    fn default() -> Self {
        CaseStudyConfig {
            offices: (3, 10),
            robots: (2, 5),
            corridors: CorridorChoice::Random,
            cameras: CameraChoice::Ratio(0.4),
            steps: 100,
            reps: 100,
            seed: 0,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("{0}")]
    Invalid(String),
}

impl CaseStudyConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        if self.offices.0 < 3 || self.offices.0 > self.offices.1 {
            return bad("offices: need 3 <= min <= max");
        }
        if self.robots.0 < 2 || self.robots.0 > self.robots.1 {
            return bad("robots: need 2 <= min <= max");
        }
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        if let CorridorChoice::Ratio(x) = self.corridors {
            if !unit(x) {
                return bad("corridor ratio must lie in [0, 1]");
            }
        }
        if let CameraChoice::Ratio(x) = self.cameras {
            if !unit(x) {
                return bad("camera ratio must lie in [0, 1]");
            }
        }
        if self.reps == 0 {
            return bad("reps must be positive");
        }
        Ok(())
    }
}

/// `⌊x·n⌋`, robust to the representation error of decimal fractions.
pub fn floor_fraction(x: f64, n: usize) -> usize {
    ((x * n as f64) + 1e-9).floor().max(0.0) as usize
}

/// A concrete office world.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub offices: Vec<String>,
    pub robots: Vec<String>,
    /// Directed (from, to) pairs.
    pub corridors: Vec<(String, String)>,
    pub cameras: Vec<(String, String)>,
    /// (robot, office) in the initial state.
    pub placement: Vec<(String, String)>,
}

fn pairs(xs: &[(&str, &str)]) -> Vec<(String, String)> {
    xs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

impl Layout {
    /// Six offices, three robots; cameras watch both directions of the
    /// a–b, b–c and b–f corridors.
    pub fn running_example() -> Self {
        Layout {
            offices: ["a", "b", "c", "d", "e", "f"].map(String::from).to_vec(),
            robots: ["r1", "r2", "r3"].map(String::from).to_vec(),
            corridors: pairs(&[
                ("a", "b"),
                ("b", "a"),
                ("b", "c"),
                ("c", "b"),
                ("b", "f"),
                ("f", "b"),
                ("a", "e"),
                ("e", "a"),
                ("d", "a"),
                ("d", "e"),
                ("e", "d"),
                ("e", "f"),
            ]),
            cameras: pairs(&[("a", "b"), ("b", "a"), ("b", "c"), ("c", "b"), ("b", "f"), ("f", "b")]),
            placement: pairs(&[("r1", "a"), ("r2", "d"), ("r3", "e")]),
        }
    }

    /// Draws office/robot counts, corridors and the initial placement.
    /// Robots are clamped to the number of offices so they can start apart.
    pub fn random(cfg: &CaseStudyConfig, rng: &mut impl Rng) -> Self {
        let o = rng.random_range(cfg.offices.0..=cfg.offices.1);
        let r = rng.random_range(cfg.robots.0..=cfg.robots.1).min(o);
        let max = o * (o - 1);
        let c = match cfg.corridors {
            CorridorChoice::Random => rng.random_range(o..=max),
            CorridorChoice::Ratio(x) => o + floor_fraction(x, max - o),
        };
        let offices: Vec<String> = (1..=o).map(|k| format!("o{k}")).collect();
        let robots: Vec<String> = (1..=r).map(|k| format!("r{k}")).collect();
        let mut all: Vec<(String, String)> = Vec::with_capacity(max);
        for a in &offices {
            for b in &offices {
                if a != b {
                    all.push((a.clone(), b.clone()));
                }
            }
        }
        // every office first gets one exit, then random extra corridors
        let mut chosen: Vec<(String, String)> = Vec::with_capacity(c);
        for a in &offices {
            let outs: Vec<&(String, String)> = all.iter().filter(|(x, _)| x == a).collect();
            chosen.push(outs[rng.random_range(0..outs.len())].clone());
        }
        let mut rest: Vec<(String, String)> = all.into_iter().filter(|p| !chosen.contains(p)).collect();
        rest.shuffle(rng);
        rest.truncate(c - o);
        chosen.extend(rest);
        let all = chosen;
        let mut starts = offices.clone();
        starts.shuffle(rng);
        let placement = robots.iter().cloned().zip(starts).collect();
        Layout {
            offices,
            robots,
            corridors: all,
            cameras: Vec::new(),
            placement,
        }
    }

    /// Places cameras on a uniformly random subset of the corridors.
    pub fn with_cameras(mut self, choice: CameraChoice, rng: &mut impl Rng) -> Self {
        let mut order = self.corridors.clone();
        order.shuffle(rng);
        let k = match choice {
            CameraChoice::Ratio(x) => floor_fraction(x, order.len()),
            CameraChoice::Random => rng.random_range(0..=order.len()),
        };
        order.truncate(k);
        self.cameras = order;
        self
    }

    pub fn to_scenario(&self, name: &str) -> ScenarioFile {
        let pred = |arity, dynamic| PredicateSpec { arity, dynamic };
        let mut predicates = BTreeMap::new();
        predicates.insert("robot".to_string(), pred(1, false));
        predicates.insert("office".to_string(), pred(1, false));
        predicates.insert("corridor".to_string(), pred(2, false));
        predicates.insert("in".to_string(), pred(2, true));

        let mut statics: Vec<String> = self.robots.iter().map(|r| format!("robot({r})")).collect();
        statics.extend(self.offices.iter().map(|o| format!("office({o})")));
        statics.extend(self.corridors.iter().map(|(a, b)| format!("corridor({a},{b})")));

        let mut universe = Vec::new();
        for r in &self.robots {
            for o in &self.offices {
                universe.push(format!("in({r},{o})"));
            }
        }
        let strings = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();

        ScenarioFile {
            name: name.to_string(),
            agents: self.robots.clone(),
            symbols: SymbolsSpec {
                predicates,
                constants: Vec::new(),
            },
            statics,
            dynamic_universe: universe,
            initial_state: self.placement.iter().map(|(r, o)| format!("in({r},{o})")).collect(),
            rules: vec![RuleSpec {
                body: strings(&["in(R1,OA)", "in(R1,OB)", "OA != OB"]),
            }],
            action_descriptions: vec![
                ActionSpec {
                    name: "move".into(),
                    params: strings(&["R", "O1", "O2"]),
                    actor: "R".into(),
                    pre: strings(&["robot(R)", "office(O1)", "office(O2)", "in(R,O1)", "corridor(O1,O2)"]),
                    con: Vec::new(),
                    post: strings(&["¬in(R,O1)", "in(R,O2)"]),
                    nop: false,
                },
                ActionSpec {
                    name: "nop".into(),
                    params: strings(&["R"]),
                    actor: "R".into(),
                    pre: strings(&["robot(R)"]),
                    con: Vec::new(),
                    post: Vec::new(),
                    nop: true,
                },
            ],
            norms: vec![NormSpec {
                id: "collision".into(),
                deontic: Deontic::Prohibition,
                condition: strings(&["in(R1,L2)"]),
                action: "move(R2,L1,L2)".into(),
                priority: None,
            }],
            observability: ObservabilitySpec::Schemas {
                observed: self.cameras.iter().map(|(a, b)| format!("move(R,{a},{b})")).collect(),
            },
        }
    }
}

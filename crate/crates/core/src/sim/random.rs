//! Random normative systems: roles with capabilities, propositional state,
//! actions with random pre/post/concurrency conditions and random norms.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::io::scenario_file::{ActionSpec, NormSpec, ObservabilitySpec, PredicateSpec, ScenarioFile, SymbolsSpec};
use crate::norm::Deontic;

use super::case_study::ConfigError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObsChoice {
    Fixed(f64),
    /// Uniform in [0, 1] per repetition.
    Random,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomConfig {
    pub agents: (usize, usize),
    pub actions: (usize, usize),
    pub observation: ObsChoice,
    pub steps: usize,
    pub reps: usize,
    pub seed: u64,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig {
            agents: (2, 5),
            actions: (2, 10),
            observation: ObsChoice::Fixed(0.5),
            steps: 100,
            reps: 100,
            seed: 0,
        }
    }
}

impl RandomConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        if self.agents.0 < 1 || self.agents.0 > self.agents.1 {
            return bad("agents: need 1 <= min <= max");
        }
        if self.actions.0 < 1 || self.actions.0 > self.actions.1 {
            return bad("actions: need 1 <= min <= max");
        }
        if let ObsChoice::Fixed(p) = self.observation {
            if !(0.0..=1.0).contains(&p) {
                return bad("observation probability must lie in [0, 1]");
            }
        }
        if self.reps == 0 {
            return bad("reps must be positive");
        }
        Ok(())
    }
}

/// `⌈0.1·n⌉`.
pub fn tenth(n: usize) -> usize {
    n.div_ceil(10)
}

fn signed(rng: &mut impl Rng, prop: usize) -> String {
    if rng.random_bool(0.5) {
        format!("p{prop}")
    } else {
        format!("¬p{prop}")
    }
}

/// `k ∈ [lo, hi]` distinct propositions (1-based), each with a random sign.
fn random_literals(rng: &mut impl Rng, props: usize, lo: usize, hi: usize) -> Vec<String> {
    let k = rng.random_range(lo..=hi).min(props);
    let mut idx = sample(rng, props, k).into_vec();
    idx.sort_unstable();
    idx.into_iter().map(|i| signed(rng, i + 1)).collect()
}

/// Generates a scenario with `g` agents and `a` actions observed with
/// probability `p`.
pub fn generate_random(g: usize, a: usize, p: f64, rng: &mut impl Rng) -> ScenarioFile {
    let agents: Vec<String> = (1..=g).map(|k| format!("g{k}")).collect();
    let actions: Vec<String> = (1..=a).map(|k| format!("a{k}")).collect();

    let n_roles = rng.random_range(1..=a);
    let roles: Vec<String> = (1..=n_roles).map(|k| format!("role{k}")).collect();
    let mut statics: Vec<String> = agents.iter().map(|x| format!("agent({x})")).collect();
    for role in &roles {
        let size = rng.random_range(1..=tenth(a)).min(a);
        let mut caps = sample(rng, a, size).into_vec();
        caps.sort_unstable();
        statics.extend(caps.into_iter().map(|c| format!("capable({role},{})", actions[c])));
    }
    for x in &agents {
        let mut plays: Vec<usize> = (0..n_roles).filter(|_| rng.random_bool(0.5)).collect();
        if plays.is_empty() {
            plays.push(rng.random_range(0..n_roles));
        }
        statics.extend(plays.into_iter().map(|r| format!("play({x},{})", roles[r])));
    }

    let props = rng.random_range(a..=2 * a);
    let lit_max = tenth(props);
    let mut descriptions = Vec::with_capacity(a + 1);
    for (k, name) in actions.iter().enumerate() {
        let mut pre = vec!["play(A,R)".to_string(), format!("capable(R,{name})")];
        pre.extend(random_literals(rng, props, 1, lit_max));
        let post = random_literals(rng, props, 1, lit_max);
        let con_size = rng.random_range(0..=tenth(a)).min(a - 1);
        let mut others: Vec<usize> = sample(rng, a - 1, con_size)
            .into_iter()
            .map(|j| if j >= k { j + 1 } else { j })
            .collect();
        others.sort_unstable();
        let con = others
            .into_iter()
            .enumerate()
            .map(|(v, j)| format!("{}(X{})", actions[j], v + 1))
            .collect();
        descriptions.push(ActionSpec {
            name: name.clone(),
            params: vec!["A".into()],
            actor: "A".into(),
            pre,
            con,
            post,
            nop: false,
        });
    }
    descriptions.push(ActionSpec {
        name: "nop".into(),
        params: vec!["A".into()],
        actor: "A".into(),
        pre: vec!["agent(A)".into()],
        con: Vec::new(),
        post: Vec::new(),
        nop: true,
    });

    let n_norms = rng.random_range(1..=a);
    let norms = (1..=n_norms)
        .map(|k| {
            let deontic = if rng.random_bool(0.5) {
                Deontic::Obligation
            } else {
                Deontic::Prohibition
            };
            let condition = random_literals(rng, props, 0, lit_max);
            let target = &actions[rng.random_range(0..a)];
            NormSpec {
                id: format!("n{k}"),
                deontic,
                condition,
                action: format!("{target}(X)"),
                priority: None,
            }
        })
        .collect();

    let initial_state = (1..=props).filter(|_| rng.random_bool(0.5)).map(|i| format!("p{i}")).collect();

    let mut predicates = BTreeMap::new();
    predicates.insert("agent".to_string(), PredicateSpec { arity: 1, dynamic: false });
    predicates.insert("play".to_string(), PredicateSpec { arity: 2, dynamic: false });
    predicates.insert("capable".to_string(), PredicateSpec { arity: 2, dynamic: false });
    for i in 1..=props {
        predicates.insert(format!("p{i}"), PredicateSpec { arity: 0, dynamic: true });
    }

    ScenarioFile {
        name: format!("random-g{g}-a{a}"),
        agents,
        symbols: SymbolsSpec {
            predicates,
            constants: Vec::new(),
        },
        statics,
        dynamic_universe: (1..=props).map(|i| format!("p{i}")).collect(),
        initial_state,
        rules: Vec::new(),
        action_descriptions: descriptions,
        norms,
        observability: ObservabilitySpec::Probability { p },
    }
}

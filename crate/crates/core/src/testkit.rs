//! Fixtures shared by the unit tests.

use std::collections::BTreeSet;

use crate::action::{ActionId, ConcurrentAction};
use crate::logic::{AtomPattern, GroundAtom, Literal, Sym, Term};
use crate::scenario::Scenario;
use crate::sim::case_study::Layout;

/// Six offices, three robots, cameras on a–b, b–c and b–f.
pub fn running() -> Scenario {
    Scenario::compile(Layout::running_example().to_scenario("running-example")).unwrap()
}

pub fn sym(scn: &Scenario, name: &str) -> Sym {
    scn.symbols.get(name).unwrap_or_else(|| panic!("no symbol {name}"))
}

pub fn lit(scn: &Scenario, text: &str) -> Literal {
    scn.parse_literal(text).unwrap()
}

pub fn lits(scn: &Scenario, texts: &[&str]) -> BTreeSet<Literal> {
    texts.iter().map(|t| lit(scn, t)).collect()
}

pub fn atom(scn: &Scenario, text: &str) -> GroundAtom {
    lit(scn, text).atom
}

pub fn act(scn: &Scenario, text: &str) -> ActionId {
    scn.parse_action(text).unwrap()
}

pub fn acts(scn: &Scenario, texts: &[&str]) -> ConcurrentAction {
    texts.iter().map(|t| act(scn, t)).collect()
}

/// Upper-case arguments become variables.
pub fn pattern(scn: &Scenario, pred: &str, args: &[&str]) -> AtomPattern {
    AtomPattern {
        pred: sym(scn, pred),
        args: args
            .iter()
            .map(|a| {
                let s = sym(scn, a);
                if crate::logic::is_variable_name(a) {
                    Term::Var(s)
                } else {
                    Term::Const(s)
                }
            })
            .collect(),
    }
}

pub fn names(scn: &Scenario, ids: impl IntoIterator<Item = ActionId>) -> Vec<String> {
    ids.into_iter().map(|a| scn.describe_action(a)).collect()
}

pub fn lit_names<'a>(scn: &Scenario, ls: impl IntoIterator<Item = &'a Literal>) -> BTreeSet<String> {
    ls.into_iter().map(|l| scn.describe(l)).collect()
}

/// s_0 of the running example as literals.
pub fn p0(scn: &Scenario) -> BTreeSet<Literal> {
    crate::action::closed_world_encoding(scn, &scn.initial_state)
}

/// One reconstruction problem cut from a simulated run: partial knowledge
/// of s_t and s_{t+1}, the observed joint action and what really happened.
pub struct Instance {
    pub scn: Scenario,
    pub i: BTreeSet<Literal>,
    pub f: BTreeSet<Literal>,
    pub act: ConcurrentAction,
    pub executed: ConcurrentAction,
    /// s_t and s_{t+1}, closed-world encoded.
    pub now: BTreeSet<Literal>,
    pub next: BTreeSet<Literal>,
}

/// Small random instance: even seeds use an office layout, odd seeds the
/// propositional generator (≤ 3 agents, ≤ 8 action names).
pub fn random_instance(seed: u64) -> Instance {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::sim::case_study::{CameraChoice, CaseStudyConfig};

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let file = if seed % 2 == 0 {
        let cfg = CaseStudyConfig {
            offices: (3, 5),
            robots: (2, 3),
            ..CaseStudyConfig::default()
        };
        Layout::random(&cfg, &mut rng)
            .with_cameras(CameraChoice::Random, &mut rng)
            .to_scenario("random-offices")
    } else {
        let g = rng.random_range(1..=3);
        let a = rng.random_range(2..=8);
        let p = rng.random_range(0.0..=1.0);
        crate::sim::random::generate_random(g, a, p, &mut rng)
    };
    let scn = Scenario::compile(file).unwrap();
    let steps = rng.random_range(1..=6);
    let mut obs_rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let log = crate::sim::world::simulate(&scn, steps, &mut rng, &mut obs_rng).unwrap();
    let last = log.ticks.last().unwrap();
    let keep_i = rng.random_range(0.3..=1.0);
    let keep_f = rng.random_range(0.0..=0.6);
    let now = crate::action::closed_world_encoding(&scn, &last.state);
    let next = crate::action::closed_world_encoding(&scn, &log.final_state);
    let i = now.iter().filter(|_| rng.random_bool(keep_i)).cloned().collect();
    let f = next.iter().filter(|_| rng.random_bool(keep_f)).cloned().collect();
    Instance {
        i,
        f,
        act: last.observed.clone(),
        executed: last.executed.clone(),
        now,
        next,
        scn,
    }
}

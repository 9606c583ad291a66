//! A compiled scenario: interned symbols, static facts, integrity rules,
//! action descriptions with their ground action table, norms, the initial
//! state and the observation model.
//!
//! Compilation validates the document; every error here is fatal.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::ControlFlow;
use std::path::Path;

use thiserror::Error;

use crate::action::{ActionDescription, ActionId, ActionInstance, ActionSchema};
use crate::io::scenario_file::{ObservabilitySpec, PredicateSpec, ScenarioFile};
use crate::logic::syntax::{self, RawAtom, RawItem, RawLiteral, SyntaxError};
use crate::logic::{
    for_each_match, is_consistent, is_variable_name, AtomPattern, Condition, Constraint, Describe, GroundAtom,
    IntegrityRule, Literal, LiteralPattern, Relation, Statics, Substitution, Sym, SymbolTable, Term,
};
use crate::norm::Norm;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{context}: {source}")]
    Syntax {
        context: String,
        #[source]
        source: SyntaxError,
    },
    #[error("{context}: unknown predicate `{name}`")]
    UnknownPredicate { context: String, name: String },
    #[error("{context}: `{name}` has arity {expected}, used with {found} arguments")]
    Arity {
        context: String,
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("{context}: `{name}` must be a static predicate")]
    ExpectedStatic { context: String, name: String },
    #[error("{context}: `{name}` must be a dynamic predicate")]
    ExpectedDynamic { context: String, name: String },
    #[error("{context}: `{text}` must be ground")]
    NotGround { context: String, text: String },
    #[error("{context}: `{name}` is not a valid {what}")]
    BadName {
        context: String,
        name: String,
        what: &'static str,
    },
    #[error("action `{0}` is declared twice")]
    DuplicateAction(String),
    #[error("{context}: unknown action `{name}`")]
    UnknownAction { context: String, name: String },
    #[error("action `{action}`: actor `{actor}` is not a parameter")]
    ActorNotParam { action: String, actor: String },
    #[error("action `{action}`: parameter `{param}` does not occur in a positive static precondition")]
    UntypedParam { action: String, param: String },
    #[error("{context}: variable `{var}` is not bound by {by}")]
    UnboundVariable {
        context: String,
        var: String,
        by: &'static str,
    },
    #[error("action `{0}` has an empty postcondition")]
    EmptyPost(String),
    #[error("rule {0} has an empty body")]
    EmptyRuleBody(usize),
    #[error("grounding `{action}` yields actor `{actor}`, which is not an agent")]
    ActorNotAgent { action: String, actor: String },
    #[error("initial state atom `{0}` is not in the dynamic universe")]
    NotInUniverse(String),
    #[error("the initial state violates an integrity rule")]
    InconsistentInitialState,
    #[error("observation probability {0} is outside [0, 1]")]
    BadProbability(f64),
    #[error("`{0}` is not a ground action of this scenario")]
    UnknownGroundAction(String),
}

/// Compiled observation model.
#[derive(Clone, Debug, PartialEq)]
pub enum Observability {
    Schemas(Vec<ActionSchema>),
    Probability(f64),
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub symbols: SymbolTable,
    /// Sorted.
    pub agents: Vec<Sym>,
    pub statics: Statics,
    pub rules: Vec<IntegrityRule>,
    pub descriptions: Vec<ActionDescription>,
    pub norms: Vec<Norm>,
    /// Sorted.
    pub dynamic_universe: Vec<GroundAtom>,
    pub initial_state: BTreeSet<GroundAtom>,
    pub observability: Observability,
    actions: Vec<ActionInstance>,
    by_description: Vec<Vec<ActionId>>,
    by_actor: BTreeMap<Sym, Vec<ActionId>>,
    lookup: HashMap<(Sym, Vec<Sym>), ActionId>,
    observable: Vec<bool>,
    file: ScenarioFile,
    hash: String,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        Self::compile(ScenarioFile::from_json(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ScenarioError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn compile(file: ScenarioFile) -> Result<Self, ScenarioError> {
        Compiler::new(&file)?.finish(file)
    }

    pub fn file(&self) -> &ScenarioFile {
        &self.file
    }

    /// SHA-256 of the canonical scenario document.
    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn action(&self, id: ActionId) -> &ActionInstance {
        &self.actions[id.index()]
    }

    pub fn actions(&self) -> &[ActionInstance] {
        &self.actions
    }

    pub fn action_ids(&self) -> impl Iterator<Item = ActionId> {
        (0..self.actions.len() as u32).map(ActionId)
    }

    pub fn actions_of_description(&self, desc: usize) -> impl Iterator<Item = ActionId> + '_ {
        self.by_description[desc].iter().copied()
    }

    /// Ground actions whose actor is `agent`, in table order.
    pub fn actions_of(&self, agent: Sym) -> &[ActionId] {
        self.by_actor.get(&agent).map_or(&[], Vec::as_slice)
    }

    pub fn nop_of(&self, agent: Sym) -> Option<ActionId> {
        self.actions_of(agent).iter().copied().find(|&a| self.action(a).nop)
    }

    pub fn find_action(&self, name: Sym, args: &[Sym]) -> Option<ActionId> {
        self.lookup.get(&(name, args.to_vec())).copied()
    }

    /// Whether the sensor sees `id` deterministically: NOPs always, other
    /// actions when they match an observed schema. Always false besides
    /// NOPs under a probabilistic model.
    pub fn is_observable(&self, id: ActionId) -> bool {
        self.observable[id.index()]
    }

    pub fn agent_count(&self) -> usize {
        self.agents.len()
    }

    pub fn describe_action(&self, id: ActionId) -> String {
        self.action(id).describe(&self.symbols)
    }

    pub fn describe<T: Describe + ?Sized>(&self, x: &T) -> String {
        x.describe(&self.symbols)
    }

    /// Parses `name(c1,...,cn)` into a ground action of the table.
    pub fn parse_action(&self, text: &str) -> Result<ActionId, ScenarioError> {
        let raw = syntax::parse_atom(text).map_err(|source| ScenarioError::Syntax {
            context: "action".into(),
            source,
        })?;
        let unknown = || ScenarioError::UnknownGroundAction(text.trim().to_string());
        let name = self.symbols.get(&raw.pred).ok_or_else(unknown)?;
        let args = raw
            .args
            .iter()
            .map(|a| self.symbols.get(a))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(unknown)?;
        self.find_action(name, &args).ok_or_else(unknown)
    }

    pub fn parse_literal(&self, text: &str) -> Result<Literal, ScenarioError> {
        let raw = syntax::parse_literal(text).map_err(|source| ScenarioError::Syntax {
            context: "literal".into(),
            source,
        })?;
        let bad = || ScenarioError::NotGround {
            context: "literal".into(),
            text: text.to_string(),
        };
        let pred = self.symbols.get(&raw.atom.pred).ok_or_else(bad)?;
        let args = raw
            .atom
            .args
            .iter()
            .map(|a| self.symbols.get(a))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(bad)?;
        Ok(Literal {
            atom: GroundAtom::new(pred, args),
            positive: raw.positive,
        })
    }

    pub fn agent(&self, name: &str) -> Option<Sym> {
        self.symbols.get(name).filter(|s| self.agents.binary_search(s).is_ok())
    }
}

struct Compiler {
    symbols: SymbolTable,
    preds: BTreeMap<String, PredicateSpec>,
    action_arity: BTreeMap<String, usize>,
}

fn syn<T>(context: &str, r: Result<T, SyntaxError>) -> Result<T, ScenarioError> {
    r.map_err(|source| ScenarioError::Syntax {
        context: context.to_string(),
        source,
    })
}

fn parse_items(context: &str, items: &[String]) -> Result<Vec<RawItem>, ScenarioError> {
    items.iter().map(|t| syn(context, syntax::parse_item(t))).collect()
}

fn parse_literals(context: &str, items: &[String]) -> Result<Vec<RawLiteral>, ScenarioError> {
    items.iter().map(|t| syn(context, syntax::parse_literal(t))).collect()
}

fn parse_atoms(context: &str, items: &[String]) -> Result<Vec<RawAtom>, ScenarioError> {
    items.iter().map(|t| syn(context, syntax::parse_atom(t))).collect()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Placement {
    Static,
    Dynamic,
    Any,
}

impl Compiler {
    fn new(file: &ScenarioFile) -> Result<Self, ScenarioError> {
        let mut names: BTreeSet<String> = BTreeSet::new();
        names.extend(file.agents.iter().cloned());
        names.extend(file.symbols.constants.iter().cloned());
        names.extend(file.symbols.predicates.keys().cloned());
        let mut add_atom = |a: &RawAtom, names: &mut BTreeSet<String>| {
            names.insert(a.pred.clone());
            names.extend(a.args.iter().cloned());
        };
        let add_items = |items: &[RawItem], names: &mut BTreeSet<String>, add: &mut dyn FnMut(&RawAtom, &mut BTreeSet<String>)| {
            for i in items {
                match i {
                    RawItem::Literal(l) => add(&l.atom, names),
                    RawItem::Constraint(c) => {
                        names.insert(c.left.clone());
                        names.insert(c.right.clone());
                    }
                }
            }
        };
        for a in parse_atoms("statics", &file.statics)? {
            add_atom(&a, &mut names);
        }
        for a in parse_atoms("dynamic_universe", &file.dynamic_universe)? {
            add_atom(&a, &mut names);
        }
        for a in parse_atoms("initial_state", &file.initial_state)? {
            add_atom(&a, &mut names);
        }
        for (k, r) in file.rules.iter().enumerate() {
            let items = parse_items(&format!("rule {k}"), &r.body)?;
            add_items(&items, &mut names, &mut add_atom);
        }
        for d in &file.action_descriptions {
            names.insert(d.name.clone());
            names.extend(d.params.iter().cloned());
            names.insert(d.actor.clone());
            let ctx = format!("action `{}`", d.name);
            add_items(&parse_items(&ctx, &d.pre)?, &mut names, &mut add_atom);
            for l in parse_literals(&ctx, &d.post)?.iter().chain(&parse_literals(&ctx, &d.con)?) {
                add_atom(&l.atom, &mut names);
            }
        }
        for n in &file.norms {
            let ctx = format!("norm `{}`", n.id);
            add_items(&parse_items(&ctx, &n.condition)?, &mut names, &mut add_atom);
            add_atom(&syn(&ctx, syntax::parse_atom(&n.action))?, &mut names);
        }
        if let ObservabilitySpec::Schemas { observed } = &file.observability {
            for a in parse_atoms("observability", observed)? {
                add_atom(&a, &mut names);
            }
        }

        let mut symbols = SymbolTable::from_names(names);
        for p in file.symbols.predicates.keys() {
            let s = symbols.get(p).expect("interned");
            symbols.mark_predicate(s);
        }
        let mut action_arity = BTreeMap::new();
        for d in &file.action_descriptions {
            let s = symbols.get(&d.name).expect("interned");
            symbols.mark_predicate(s);
            if action_arity.insert(d.name.clone(), d.params.len()).is_some() {
                return Err(ScenarioError::DuplicateAction(d.name.clone()));
            }
        }
        Ok(Compiler {
            symbols,
            preds: file.symbols.predicates.clone(),
            action_arity,
        })
    }

    fn sym(&self, name: &str) -> Sym {
        self.symbols.get(name).expect("all names are interned up front")
    }

    fn term(&self, name: &str) -> Term {
        if is_variable_name(name) {
            Term::Var(self.sym(name))
        } else {
            Term::Const(self.sym(name))
        }
    }

    fn check_pred(&self, context: &str, a: &RawAtom, placement: Placement) -> Result<(), ScenarioError> {
        let spec = self.preds.get(&a.pred).ok_or_else(|| ScenarioError::UnknownPredicate {
            context: context.to_string(),
            name: a.pred.clone(),
        })?;
        if spec.arity != a.args.len() {
            return Err(ScenarioError::Arity {
                context: context.to_string(),
                name: a.pred.clone(),
                expected: spec.arity,
                found: a.args.len(),
            });
        }
        match placement {
            Placement::Static if spec.dynamic => Err(ScenarioError::ExpectedStatic {
                context: context.to_string(),
                name: a.pred.clone(),
            }),
            Placement::Dynamic if !spec.dynamic => Err(ScenarioError::ExpectedDynamic {
                context: context.to_string(),
                name: a.pred.clone(),
            }),
            _ => Ok(()),
        }
    }

    fn is_dynamic(&self, pred: &str) -> bool {
        self.preds.get(pred).is_some_and(|p| p.dynamic)
    }

    fn ground_atom(&self, context: &str, a: &RawAtom, placement: Placement) -> Result<GroundAtom, ScenarioError> {
        self.check_pred(context, a, placement)?;
        if let Some(v) = a.args.iter().find(|x| is_variable_name(x)) {
            return Err(ScenarioError::NotGround {
                context: context.to_string(),
                text: format!("{}(..{}..)", a.pred, v),
            });
        }
        Ok(GroundAtom::new(self.sym(&a.pred), a.args.iter().map(|x| self.sym(x))))
    }

    fn pattern(&self, a: &RawAtom) -> AtomPattern {
        AtomPattern {
            pred: self.sym(&a.pred),
            args: a.args.iter().map(|x| self.term(x)).collect(),
        }
    }

    fn literal_pattern(&self, l: &RawLiteral) -> LiteralPattern {
        LiteralPattern {
            atom: self.pattern(&l.atom),
            positive: l.positive,
        }
    }

    /// Builds a condition, checking predicates and that every variable of a
    /// constraint or static negative literal also occurs in some literal
    /// that can bind it.
    fn condition(&self, context: &str, items: &[RawItem]) -> Result<Condition, ScenarioError> {
        let mut cond = Condition::default();
        let mut binding: BTreeSet<&str> = BTreeSet::new();
        for i in items {
            if let RawItem::Literal(l) = i {
                self.check_pred(context, &l.atom, Placement::Any)?;
                if l.positive || self.is_dynamic(&l.atom.pred) {
                    binding.extend(l.atom.args.iter().map(String::as_str).filter(|x| is_variable_name(x)));
                }
            }
        }
        for i in items {
            match i {
                RawItem::Literal(l) => {
                    if !l.positive && !self.is_dynamic(&l.atom.pred) {
                        for v in l.atom.args.iter().filter(|x| is_variable_name(x)) {
                            if !binding.contains(v.as_str()) {
                                return Err(ScenarioError::UnboundVariable {
                                    context: context.to_string(),
                                    var: v.clone(),
                                    by: "a positive literal",
                                });
                            }
                        }
                    }
                    cond.literals.push(self.literal_pattern(l));
                }
                RawItem::Constraint(c) => {
                    for side in [&c.left, &c.right] {
                        if is_variable_name(side) && !binding.contains(side.as_str()) {
                            return Err(ScenarioError::UnboundVariable {
                                context: context.to_string(),
                                var: side.clone(),
                                by: "a literal",
                            });
                        }
                    }
                    cond.constraints.push(Constraint {
                        left: self.term(&c.left),
                        relation: if c.equal { Relation::Eq } else { Relation::Neq },
                        right: self.term(&c.right),
                    });
                }
            }
        }
        Ok(cond)
    }

    fn action_schema(&self, context: &str, l: &RawLiteral) -> Result<ActionSchema, ScenarioError> {
        let arity = self
            .action_arity
            .get(&l.atom.pred)
            .ok_or_else(|| ScenarioError::UnknownAction {
                context: context.to_string(),
                name: l.atom.pred.clone(),
            })?;
        if *arity != l.atom.args.len() {
            return Err(ScenarioError::Arity {
                context: context.to_string(),
                name: l.atom.pred.clone(),
                expected: *arity,
                found: l.atom.args.len(),
            });
        }
        Ok(ActionSchema {
            name: self.sym(&l.atom.pred),
            args: l.atom.args.iter().map(|x| self.term(x)).collect(),
            positive: l.positive,
        })
    }

    fn description(&self, d: &crate::io::scenario_file::ActionSpec) -> Result<ActionDescription, ScenarioError> {
        let ctx = format!("action `{}`", d.name);
        for p in &d.params {
            if !is_variable_name(p) {
                return Err(ScenarioError::BadName {
                    context: ctx,
                    name: p.clone(),
                    what: "parameter (variables start upper-case)",
                });
            }
        }
        if !d.params.contains(&d.actor) {
            return Err(ScenarioError::ActorNotParam {
                action: d.name.clone(),
                actor: d.actor.clone(),
            });
        }
        let pre_items = parse_items(&ctx, &d.pre)?;
        let pre = self.condition(&ctx, &pre_items)?;
        let typed: BTreeSet<&str> = pre_items
            .iter()
            .filter_map(|i| match i {
                RawItem::Literal(l) if l.positive && !self.is_dynamic(&l.atom.pred) => Some(l),
                _ => None,
            })
            .flat_map(|l| l.atom.args.iter().map(String::as_str))
            .collect();
        for p in &d.params {
            if !typed.contains(p.as_str()) {
                return Err(ScenarioError::UntypedParam {
                    action: d.name.clone(),
                    param: p.clone(),
                });
            }
        }
        // static negatives and constraints may only use variables a positive
        // static literal binds, since grounding only consults static facts
        for i in &pre_items {
            let vars: Vec<&String> = match i {
                RawItem::Literal(l) if !l.positive && !self.is_dynamic(&l.atom.pred) => l.atom.args.iter().collect(),
                RawItem::Constraint(c) => vec![&c.left, &c.right],
                _ => continue,
            };
            for v in vars {
                if is_variable_name(v) && !typed.contains(v.as_str()) {
                    return Err(ScenarioError::UnboundVariable {
                        context: ctx,
                        var: v.clone(),
                        by: "a positive static precondition",
                    });
                }
            }
        }
        let check_params = |l: &RawLiteral| -> Result<(), ScenarioError> {
            for v in l.atom.args.iter().filter(|x| is_variable_name(x)) {
                if !d.params.contains(v) {
                    return Err(ScenarioError::UnboundVariable {
                        context: ctx.clone(),
                        var: v.clone(),
                        by: "the parameters",
                    });
                }
            }
            Ok(())
        };
        for i in &pre_items {
            if let RawItem::Literal(l) = i {
                if self.is_dynamic(&l.atom.pred) {
                    check_params(l)?;
                }
            }
        }
        let mut post = Vec::new();
        for l in parse_literals(&ctx, &d.post)? {
            self.check_pred(&ctx, &l.atom, Placement::Dynamic)?;
            check_params(&l)?;
            post.push(self.literal_pattern(&l));
        }
        if post.is_empty() && !d.nop {
            return Err(ScenarioError::EmptyPost(d.name.clone()));
        }
        let con = parse_literals(&ctx, &d.con)?
            .iter()
            .map(|l| self.action_schema(&ctx, l))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ActionDescription {
            name: self.sym(&d.name),
            params: d.params.iter().map(|p| self.sym(p)).collect(),
            actor: self.sym(&d.actor),
            pre,
            con,
            post,
            nop: d.nop,
        })
    }

    fn finish(self, file: ScenarioFile) -> Result<Scenario, ScenarioError> {
        for name in file.agents.iter().chain(&file.symbols.constants) {
            if is_variable_name(name) || syntax::parse_atom(name).map(|a| !a.args.is_empty()).unwrap_or(true) {
                return Err(ScenarioError::BadName {
                    context: "symbols".into(),
                    name: name.clone(),
                    what: "constant",
                });
            }
        }
        let mut agents: Vec<Sym> = file.agents.iter().map(|a| self.sym(a)).collect();
        agents.sort();
        agents.dedup();

        let static_preds: BTreeSet<Sym> = self
            .preds
            .iter()
            .filter(|(_, p)| !p.dynamic)
            .map(|(n, _)| self.sym(n))
            .collect();
        let facts = parse_atoms("statics", &file.statics)?
            .iter()
            .map(|a| self.ground_atom("statics", a, Placement::Static))
            .collect::<Result<BTreeSet<_>, _>>()?;
        let statics = Statics::new(static_preds, facts);

        let universe = parse_atoms("dynamic_universe", &file.dynamic_universe)?
            .iter()
            .map(|a| self.ground_atom("dynamic_universe", a, Placement::Dynamic))
            .collect::<Result<BTreeSet<_>, _>>()?;
        let initial_state = parse_atoms("initial_state", &file.initial_state)?
            .iter()
            .map(|a| self.ground_atom("initial_state", a, Placement::Dynamic))
            .collect::<Result<BTreeSet<_>, _>>()?;
        if let Some(a) = initial_state.iter().find(|a| !universe.contains(*a)) {
            return Err(ScenarioError::NotInUniverse(a.describe(&self.symbols)));
        }

        let mut rules = Vec::new();
        for (k, r) in file.rules.iter().enumerate() {
            if r.body.is_empty() {
                return Err(ScenarioError::EmptyRuleBody(k));
            }
            let items = parse_items(&format!("rule {k}"), &r.body)?;
            rules.push(IntegrityRule {
                body: self.condition(&format!("rule {k}"), &items)?,
            });
        }

        let descriptions = file
            .action_descriptions
            .iter()
            .map(|d| self.description(d))
            .collect::<Result<Vec<_>, _>>()?;

        let mut norms = Vec::new();
        for (k, n) in file.norms.iter().enumerate() {
            let ctx = format!("norm `{}`", n.id);
            let condition = self.condition(&ctx, &parse_items(&ctx, &n.condition)?)?;
            let raw = syn(&ctx, syntax::parse_atom(&n.action))?;
            let action = self.action_schema(
                &ctx,
                &RawLiteral {
                    atom: raw,
                    positive: true,
                },
            )?;
            norms.push(Norm {
                id: n.id.clone(),
                deontic: n.deontic,
                condition,
                action,
                priority: n.priority.unwrap_or(k as i64),
            });
        }

        let mut actions = ground_actions(&descriptions, &statics)?;
        actions.sort_by(|a, b| (a.name, &a.args).cmp(&(b.name, &b.args)));
        for a in &actions {
            if agents.binary_search(&a.actor).is_err() {
                return Err(ScenarioError::ActorNotAgent {
                    action: a.describe(&self.symbols),
                    actor: self.symbols.name(a.actor).to_string(),
                });
            }
        }
        let mut by_description = vec![Vec::new(); descriptions.len()];
        let mut by_actor: BTreeMap<Sym, Vec<ActionId>> = agents.iter().map(|&g| (g, Vec::new())).collect();
        let mut lookup = HashMap::new();
        for (k, a) in actions.iter().enumerate() {
            let id = ActionId(k as u32);
            by_description[a.desc].push(id);
            by_actor.entry(a.actor).or_default().push(id);
            lookup.insert((a.name, a.args.to_vec()), id);
        }

        let observability = match &file.observability {
            ObservabilitySpec::Probability { p } => {
                if !(0.0..=1.0).contains(p) {
                    return Err(ScenarioError::BadProbability(*p));
                }
                Observability::Probability(*p)
            }
            ObservabilitySpec::Schemas { observed } => Observability::Schemas(
                parse_atoms("observability", observed)?
                    .into_iter()
                    .map(|atom| {
                        self.action_schema(
                            "observability",
                            &RawLiteral {
                                atom,
                                positive: true,
                            },
                        )
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        let observable = actions
            .iter()
            .map(|a| {
                a.nop
                    || match &observability {
                        Observability::Schemas(s) => s.iter().any(|s| s.matches(a).is_some()),
                        Observability::Probability(_) => false,
                    }
            })
            .collect();

        let dynamic_universe: Vec<GroundAtom> = universe.into_iter().collect();
        let encoding: BTreeSet<Literal> = dynamic_universe
            .iter()
            .map(|a| Literal {
                atom: a.clone(),
                positive: initial_state.contains(a),
            })
            .collect();
        if !is_consistent(&encoding, &statics, &rules) {
            return Err(ScenarioError::InconsistentInitialState);
        }

        let hash = file.content_hash();
        Ok(Scenario {
            name: file.name.clone(),
            symbols: self.symbols,
            agents,
            statics,
            rules,
            descriptions,
            norms,
            dynamic_universe,
            initial_state,
            observability,
            actions,
            by_description,
            by_actor,
            lookup,
            observable,
            file,
            hash,
        })
    }
}

/// Every grounding of every description whose static precondition and
/// constraints hold, projected onto its parameters.
fn ground_actions(descriptions: &[ActionDescription], statics: &Statics) -> Result<Vec<ActionInstance>, ScenarioError> {
    let empty: BTreeSet<Literal> = BTreeSet::new();
    let mut out = Vec::new();
    for (k, d) in descriptions.iter().enumerate() {
        let static_part = Condition {
            literals: d
                .pre
                .literals
                .iter()
                .filter(|l| statics.is_static(l.atom.pred))
                .cloned()
                .collect(),
            constraints: d.pre.constraints.clone(),
        };
        let mut groundings: BTreeSet<Vec<Sym>> = BTreeSet::new();
        let _ = for_each_match(&static_part, &empty, statics, &Substitution::new(), &mut |sigma| {
            let args: Option<Vec<Sym>> = d.params.iter().map(|p| sigma.get(*p)).collect();
            groundings.insert(args.expect("parameters are typed by static literals"));
            ControlFlow::Continue(())
        });
        for args in groundings {
            let sigma: Substitution = d.params.iter().copied().zip(args.iter().copied()).collect();
            let ground = |l: &LiteralPattern| l.ground(&sigma).expect("parameters cover the literal");
            let mut pre: Vec<Literal> = d
                .pre
                .literals
                .iter()
                .filter(|l| !statics.is_static(l.atom.pred))
                .map(ground)
                .collect();
            pre.sort();
            pre.dedup();
            let mut post: Vec<Literal> = d.post.iter().map(ground).collect();
            post.sort();
            post.dedup();
            out.push(ActionInstance {
                desc: k,
                name: d.name,
                actor: sigma.get(d.actor).expect("actor is a parameter"),
                args: args.into_iter().collect(),
                pre,
                con: d.con.iter().map(|c| c.apply(&sigma)).collect(),
                post,
                nop: d.nop,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests;

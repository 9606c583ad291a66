use smallvec::SmallVec;

use super::symbol::{Sym, SymbolTable};

pub type Args = SmallVec<[Sym; 4]>;
pub type TermArgs = SmallVec<[Term; 4]>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Sym),
    Const(Sym),
}

impl Term {
    pub fn is_var(self) -> bool {
        matches!(self, Term::Var(_))
    }

    /// Value of the term under `sigma`, if it is ground there.
    pub fn resolve(self, sigma: &Substitution) -> Option<Sym> {
        match self {
            Term::Const(c) => Some(c),
            Term::Var(v) => sigma.get(v),
        }
    }

    pub fn apply(self, sigma: &Substitution) -> Term {
        match self {
            Term::Var(v) => sigma.get(v).map_or(self, Term::Const),
            c => c,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    pub pred: Sym,
    pub args: Args,
}

impl GroundAtom {
    pub fn new(pred: Sym, args: impl IntoIterator<Item = Sym>) -> Self {
        GroundAtom {
            pred,
            args: args.into_iter().collect(),
        }
    }

    /// Smallest atom with predicate `pred`; used as a range start.
    pub(crate) fn lower_bound(pred: Sym) -> Self {
        GroundAtom {
            pred,
            args: Args::new(),
        }
    }

    pub fn pos(self) -> Literal {
        Literal {
            atom: self,
            positive: true,
        }
    }

    pub fn neg(self) -> Literal {
        Literal {
            atom: self,
            positive: false,
        }
    }
}

/// A signed ground atom. Ordering is by atom first so that all literals of
/// one predicate are contiguous in ordered sets.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: GroundAtom,
    pub positive: bool,
}

impl Literal {
    pub fn complement(&self) -> Literal {
        Literal {
            atom: self.atom.clone(),
            positive: !self.positive,
        }
    }

    pub fn pred(&self) -> Sym {
        self.atom.pred
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomPattern {
    pub pred: Sym,
    pub args: TermArgs,
}

impl AtomPattern {
    pub fn vars(&self) -> impl Iterator<Item = Sym> + '_ {
        self.args.iter().filter_map(|t| match t {
            Term::Var(v) => Some(*v),
            Term::Const(_) => None,
        })
    }

    pub fn ground(&self, sigma: &Substitution) -> Option<GroundAtom> {
        let mut args = Args::new();
        for t in &self.args {
            args.push(t.resolve(sigma)?);
        }
        Some(GroundAtom {
            pred: self.pred,
            args,
        })
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(|t| !t.is_var())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LiteralPattern {
    pub atom: AtomPattern,
    pub positive: bool,
}

impl LiteralPattern {
    pub fn ground(&self, sigma: &Substitution) -> Option<Literal> {
        Some(Literal {
            atom: self.atom.ground(sigma)?,
            positive: self.positive,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Eq,
    Neq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint {
    pub left: Term,
    pub relation: Relation,
    pub right: Term,
}

impl Constraint {
    /// `None` while either side is unbound.
    pub fn eval(&self, sigma: &Substitution) -> Option<bool> {
        let l = self.left.resolve(sigma)?;
        let r = self.right.resolve(sigma)?;
        Some(match self.relation {
            Relation::Eq => l == r,
            Relation::Neq => l != r,
        })
    }
}

/// Conjunction of literal patterns and (in)equality constraints: action
/// preconditions, norm conditions and integrity-rule bodies.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Condition {
    pub literals: Vec<LiteralPattern>,
    pub constraints: Vec<Constraint>,
}

impl Condition {
    pub fn is_empty(&self) -> bool {
        self.literals.is_empty() && self.constraints.is_empty()
    }
}

/// Finite map from variables to constants.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Substitution {
    bindings: SmallVec<[(Sym, Sym); 8]>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, var: Sym) -> Option<Sym> {
        self.bindings
            .iter()
            .find(|(v, _)| *v == var)
            .map(|(_, c)| *c)
    }

    /// Binds `var` to `value`; false if it is already bound elsewhere.
    pub fn bind(&mut self, var: Sym, value: Sym) -> bool {
        match self.get(var) {
            Some(c) => c == value,
            None => {
                self.bindings.push((var, value));
                true
            }
        }
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub(crate) fn truncate(&mut self, len: usize) {
        self.bindings.truncate(len);
    }

    pub fn iter(&self) -> impl Iterator<Item = (Sym, Sym)> + '_ {
        self.bindings.iter().copied()
    }

    /// Bindings in variable order, for comparisons that ignore insertion order.
    pub fn sorted(&self) -> Vec<(Sym, Sym)> {
        let mut v: Vec<_> = self.bindings.to_vec();
        v.sort();
        v
    }
}

impl FromIterator<(Sym, Sym)> for Substitution {
    fn from_iter<T: IntoIterator<Item = (Sym, Sym)>>(iter: T) -> Self {
        let mut s = Substitution::new();
        for (v, c) in iter {
            s.bind(v, c);
        }
        s
    }
}

/// Extends `sigma` so that `pattern` equals `ground` over the argument
/// lists. On failure `sigma` is restored.
pub(crate) fn unify_args(pattern: &[Term], ground: &[Sym], sigma: &mut Substitution) -> bool {
    if pattern.len() != ground.len() {
        return false;
    }
    let mark = sigma.len();
    for (t, g) in pattern.iter().zip(ground) {
        let ok = match *t {
            Term::Const(c) => c == *g,
            Term::Var(v) => sigma.bind(v, *g),
        };
        if !ok {
            sigma.truncate(mark);
            return false;
        }
    }
    true
}

/// Unifies a pattern against a ground atom, extending `seed`.
pub fn unify(pattern: &AtomPattern, ground: &GroundAtom, seed: &Substitution) -> Option<Substitution> {
    if pattern.pred != ground.pred {
        return None;
    }
    let mut sigma = seed.clone();
    unify_args(&pattern.args, &ground.args, &mut sigma).then_some(sigma)
}

/// Textual rendering against a symbol table.
pub trait Describe {
    fn describe(&self, syms: &SymbolTable) -> String;
}

fn join_args<I: IntoIterator<Item = String>>(name: &str, args: I) -> String {
    let args: Vec<String> = args.into_iter().collect();
    if args.is_empty() {
        name.to_string()
    } else {
        format!("{}({})", name, args.join(","))
    }
}

impl Describe for Sym {
    fn describe(&self, syms: &SymbolTable) -> String {
        syms.name(*self).to_string()
    }
}

impl Describe for Term {
    fn describe(&self, syms: &SymbolTable) -> String {
        match self {
            Term::Var(s) | Term::Const(s) => syms.name(*s).to_string(),
        }
    }
}

impl Describe for GroundAtom {
    fn describe(&self, syms: &SymbolTable) -> String {
        join_args(
            syms.name(self.pred),
            self.args.iter().map(|a| syms.name(*a).to_string()),
        )
    }
}

impl Describe for Literal {
    fn describe(&self, syms: &SymbolTable) -> String {
        let a = self.atom.describe(syms);
        if self.positive {
            a
        } else {
            format!("¬{a}")
        }
    }
}

impl Describe for AtomPattern {
    fn describe(&self, syms: &SymbolTable) -> String {
        join_args(
            syms.name(self.pred),
            self.args.iter().map(|a| a.describe(syms)),
        )
    }
}

impl Describe for LiteralPattern {
    fn describe(&self, syms: &SymbolTable) -> String {
        let a = self.atom.describe(syms);
        if self.positive {
            a
        } else {
            format!("¬{a}")
        }
    }
}

impl Describe for Constraint {
    fn describe(&self, syms: &SymbolTable) -> String {
        let op = match self.relation {
            Relation::Eq => "=",
            Relation::Neq => "!=",
        };
        format!(
            "{} {} {}",
            self.left.describe(syms),
            op,
            self.right.describe(syms)
        )
    }
}

impl Describe for Substitution {
    fn describe(&self, syms: &SymbolTable) -> String {
        let parts: Vec<String> = self
            .sorted()
            .into_iter()
            .map(|(v, c)| format!("{}/{}", syms.name(v), syms.name(c)))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

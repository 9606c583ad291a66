//! Matching of conditions against ground knowledge.
//!
//! Dynamic literals are evaluated under the open-world reading: a positive
//! literal holds iff it is asserted, a negative one iff its negation is
//! asserted explicitly. Static literals are evaluated closed-world against
//! the static facts, which are complete.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use super::symbol::Sym;
use super::term::{unify_args, Condition, Constraint, GroundAtom, Literal, LiteralPattern, Substitution};

/// Static facts together with the set of predicates that are static.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Statics {
    facts: BTreeSet<GroundAtom>,
    preds: BTreeSet<Sym>,
}

impl Statics {
    pub fn new(preds: BTreeSet<Sym>, facts: BTreeSet<GroundAtom>) -> Self {
        Statics { facts, preds }
    }

    pub fn is_static(&self, pred: Sym) -> bool {
        self.preds.contains(&pred)
    }

    pub fn contains(&self, atom: &GroundAtom) -> bool {
        self.facts.contains(atom)
    }

    pub fn facts(&self) -> &BTreeSet<GroundAtom> {
        &self.facts
    }

    pub fn predicates(&self) -> &BTreeSet<Sym> {
        &self.preds
    }

    fn scan(
        &self,
        pred: Sym,
        f: &mut dyn FnMut(&GroundAtom) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        for a in self.facts.range(GroundAtom::lower_bound(pred)..) {
            if a.pred != pred {
                break;
            }
            f(a)?;
        }
        ControlFlow::Continue(())
    }
}

/// A set of ground literals that conditions can be matched against.
pub trait LiteralSource {
    fn holds(&self, lit: &Literal) -> bool;

    /// Visits every asserted atom with predicate `pred` and the given sign.
    fn scan(
        &self,
        pred: Sym,
        positive: bool,
        f: &mut dyn FnMut(&GroundAtom) -> ControlFlow<()>,
    ) -> ControlFlow<()>;
}

impl LiteralSource for BTreeSet<Literal> {
    fn holds(&self, lit: &Literal) -> bool {
        self.contains(lit)
    }

    fn scan(
        &self,
        pred: Sym,
        positive: bool,
        f: &mut dyn FnMut(&GroundAtom) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let start = Literal {
            atom: GroundAtom::lower_bound(pred),
            positive: false,
        };
        for l in self.range(start..) {
            if l.atom.pred != pred {
                break;
            }
            if l.positive == positive {
                f(&l.atom)?;
            }
        }
        ControlFlow::Continue(())
    }
}

impl LiteralSource for [Literal] {
    fn holds(&self, lit: &Literal) -> bool {
        self.contains(lit)
    }

    fn scan(
        &self,
        pred: Sym,
        positive: bool,
        f: &mut dyn FnMut(&GroundAtom) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        for l in self {
            if l.atom.pred == pred && l.positive == positive {
                f(&l.atom)?;
            }
        }
        ControlFlow::Continue(())
    }
}

impl LiteralSource for Vec<Literal> {
    fn holds(&self, lit: &Literal) -> bool {
        self.as_slice().holds(lit)
    }

    fn scan(
        &self,
        pred: Sym,
        positive: bool,
        f: &mut dyn FnMut(&GroundAtom) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        self.as_slice().scan(pred, positive, f)
    }
}

/// `base ∪ extra` without materialising the union.
pub struct Layered<'a> {
    pub base: &'a dyn LiteralSource,
    pub extra: &'a [Literal],
}

impl LiteralSource for Layered<'_> {
    fn holds(&self, lit: &Literal) -> bool {
        self.extra.contains(lit) || self.base.holds(lit)
    }

    fn scan(
        &self,
        pred: Sym,
        positive: bool,
        f: &mut dyn FnMut(&GroundAtom) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        self.base.scan(pred, positive, f)?;
        self.extra.scan(pred, positive, f)
    }
}

pub(crate) struct Matcher<'a> {
    pub literals: &'a [LiteralPattern],
    pub constraints: &'a [Constraint],
    pub src: &'a dyn LiteralSource,
    pub statics: &'a Statics,
}

enum Step {
    Check(usize),
    Enumerate(usize),
}

impl Matcher<'_> {
    fn literal_holds(&self, lit: &Literal) -> bool {
        if self.statics.is_static(lit.atom.pred) {
            self.statics.contains(&lit.atom) == lit.positive
        } else {
            self.src.holds(lit)
        }
    }

    fn next_step(&self, done: &[bool], sigma: &Substitution) -> Option<Step> {
        let mut best: Option<(u8, usize)> = None;
        for (k, lit) in self.literals.iter().enumerate() {
            if done[k] {
                continue;
            }
            let ground = lit.atom.args.iter().all(|t| t.resolve(sigma).is_some());
            let rank = if ground {
                0
            } else if lit.positive {
                1
            } else if !self.statics.is_static(lit.atom.pred) {
                2
            } else {
                // static negative with unbound variables cannot be enumerated
                continue;
            };
            if best.is_none_or(|(r, _)| rank < r) {
                best = Some((rank, k));
                if rank == 0 {
                    break;
                }
            }
        }
        best.map(|(rank, k)| if rank == 0 { Step::Check(k) } else { Step::Enumerate(k) })
    }

    /// Depth-first enumeration of all extensions of `sigma` satisfying the
    /// literals not yet marked in `done` and every constraint.
    pub fn run(
        &self,
        done: &mut [bool],
        sigma: &mut Substitution,
        f: &mut dyn FnMut(&Substitution) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if self.constraints.iter().any(|c| c.eval(sigma) == Some(false)) {
            return ControlFlow::Continue(());
        }
        match self.next_step(done, sigma) {
            None => {
                let all_done = done.iter().all(|d| *d);
                let constraints_ok = self.constraints.iter().all(|c| c.eval(sigma) == Some(true));
                if all_done && constraints_ok {
                    f(sigma)?;
                }
                ControlFlow::Continue(())
            }
            Some(Step::Check(k)) => {
                let lit = self.literals[k].ground(sigma).expect("ground literal");
                if self.literal_holds(&lit) {
                    done[k] = true;
                    let r = self.run(done, sigma, f);
                    done[k] = false;
                    r?;
                }
                ControlFlow::Continue(())
            }
            Some(Step::Enumerate(k)) => {
                let pat = &self.literals[k];
                let mut visit = |atom: &GroundAtom| {
                    let mark = sigma.len();
                    if !unify_args(&pat.atom.args, &atom.args, sigma) {
                        return ControlFlow::Continue(());
                    }
                    done[k] = true;
                    let r = self.run(done, sigma, f);
                    done[k] = false;
                    sigma.truncate(mark);
                    r
                };
                if self.statics.is_static(pat.atom.pred) {
                    self.statics.scan(pat.atom.pred, &mut visit)
                } else {
                    self.src.scan(pat.atom.pred, pat.positive, &mut visit)
                }
            }
        }
    }
}

/// Visits every substitution extending `seed` under which `cond` holds.
pub fn for_each_match(
    cond: &Condition,
    src: &dyn LiteralSource,
    statics: &Statics,
    seed: &Substitution,
    f: &mut dyn FnMut(&Substitution) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let m = Matcher {
        literals: &cond.literals,
        constraints: &cond.constraints,
        src,
        statics,
    };
    let mut done = vec![false; cond.literals.len()];
    let mut sigma = seed.clone();
    m.run(&mut done, &mut sigma, f)
}

pub fn has_match(cond: &Condition, src: &dyn LiteralSource, statics: &Statics, seed: &Substitution) -> bool {
    for_each_match(cond, src, statics, seed, &mut |_| ControlFlow::Break(())).is_break()
}

/// All substitutions under which `cond` is satisfied by `state` and the
/// static facts, in canonical order without duplicates. Variables that occur
/// in no literal and no constraint stay unbound.
pub fn satisfies(cond: &Condition, state: &dyn LiteralSource, statics: &Statics) -> Vec<Substitution> {
    let mut out: BTreeSet<Vec<(Sym, Sym)>> = BTreeSet::new();
    let _ = for_each_match(cond, state, statics, &Substitution::new(), &mut |s| {
        out.insert(s.sorted());
        ControlFlow::Continue(())
    });
    out.into_iter().map(|b| b.into_iter().collect()).collect()
}

/// A matcher for `cond` over `src`, for callers that seed literals themselves.
pub(crate) fn matcher_for<'a>(cond: &'a Condition, src: &'a dyn LiteralSource, statics: &'a Statics) -> Matcher<'a> {
    Matcher {
        literals: &cond.literals,
        constraints: &cond.constraints,
        src,
        statics,
    }
}

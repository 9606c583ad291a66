use std::collections::BTreeSet;
use std::ops::ControlFlow;

use super::matcher::{has_match, Layered, LiteralSource, Matcher, Statics};
use super::term::{unify_args, Condition, Literal, Substitution};

/// Domain knowledge whose body entails ⊥: no situation may satisfy it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegrityRule {
    pub body: Condition,
}

/// False iff `literals` holds a complementary pair or some rule body is
/// satisfied by `literals` together with the static facts.
pub fn is_consistent(literals: &BTreeSet<Literal>, statics: &Statics, rules: &[IntegrityRule]) -> bool {
    if literals
        .iter()
        .any(|l| l.positive && literals.contains(&l.complement()))
    {
        return false;
    }
    !rules
        .iter()
        .any(|r| has_match(&r.body, literals, statics, &Substitution::new()))
}

/// Consistency of `base ∪ extra`, assuming `base` is already consistent.
///
/// Only conflicts that use at least one literal of `extra` are searched for:
/// each rule body is seeded by unifying one of its dynamic literals with an
/// extra literal, and the rest is matched against the union.
pub fn extension_consistent(
    base: &dyn LiteralSource,
    extra: &[Literal],
    statics: &Statics,
    rules: &[IntegrityRule],
) -> bool {
    let view = Layered { base, extra };
    if extra.iter().any(|l| view.holds(&l.complement())) {
        return false;
    }
    for rule in rules {
        let m = Matcher {
            literals: &rule.body.literals,
            constraints: &rule.body.constraints,
            src: &view,
            statics,
        };
        let mut done = vec![false; rule.body.literals.len()];
        for (k, pat) in rule.body.literals.iter().enumerate() {
            if statics.is_static(pat.atom.pred) {
                continue;
            }
            for l in extra {
                if l.atom.pred != pat.atom.pred || l.positive != pat.positive {
                    continue;
                }
                let mut sigma = Substitution::new();
                if !unify_args(&pat.atom.args, &l.atom.args, &mut sigma) {
                    continue;
                }
                done[k] = true;
                let found = m
                    .run(&mut done, &mut sigma, &mut |_| ControlFlow::Break(()))
                    .is_break();
                done[k] = false;
                if found {
                    return false;
                }
            }
        }
    }
    true
}

/// Whether `base ∪ {lit}` is consistent, assuming `base` is.
pub fn literal_compatible(
    base: &dyn LiteralSource,
    lit: &Literal,
    statics: &Statics,
    rules: &[IntegrityRule],
) -> bool {
    extension_consistent(base, std::slice::from_ref(lit), statics, rules)
}

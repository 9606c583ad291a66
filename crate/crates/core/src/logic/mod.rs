//! Ground first-order substrate: interned symbols, atoms and literals,
//! substitutions, condition matching and consistency under integrity rules.

mod consistency;
mod matcher;
mod symbol;
pub mod syntax;
mod term;

pub use consistency::{extension_consistent, is_consistent, literal_compatible, IntegrityRule};
pub use matcher::{for_each_match, has_match, satisfies, Layered, LiteralSource, Statics};
pub use symbol::{is_variable_name, Sym, SymbolKind, SymbolTable};
pub use term::{
    unify, Args, AtomPattern, Condition, Constraint, Describe, GroundAtom, Literal, LiteralPattern, Relation,
    Substitution, Term, TermArgs,
};

pub(crate) use matcher::matcher_for;
pub(crate) use term::unify_args;

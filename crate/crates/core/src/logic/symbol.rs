use std::collections::HashMap;
use std::fmt;

/// Interned identifier. Ids are assigned in lexicographic order of the
/// symbol text when a table is built with [`SymbolTable::from_names`], so
/// comparing ids compares names.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sym(pub(crate) u32);

impl Sym {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    Predicate,
    Constant,
    Variable,
}

/// Variables begin with an upper-case letter (or `_`), everything else is a
/// predicate or constant name.
pub fn is_variable_name(text: &str) -> bool {
    text.chars()
        .next()
        .is_some_and(|c| c.is_ascii_uppercase() || c == '_')
}

#[derive(Clone, Debug, Default)]
pub struct SymbolTable {
    names: Vec<String>,
    index: HashMap<String, Sym>,
    predicate: Vec<bool>,
}

impl SymbolTable {
    /// Builds a table whose ids follow the sorted order of `names`.
    pub fn from_names<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut all: Vec<String> = names.into_iter().map(Into::into).collect();
        all.sort();
        all.dedup();
        let mut table = SymbolTable::default();
        for name in all {
            table.intern(&name);
        }
        table
    }

    /// Interns `name`, appending a fresh id if it is new. Appending after
    /// construction breaks the id/lexicographic correspondence.
    pub fn intern(&mut self, name: &str) -> Sym {
        if let Some(&s) = self.index.get(name) {
            return s;
        }
        let s = Sym(self.names.len() as u32);
        self.names.push(name.to_string());
        self.predicate.push(false);
        self.index.insert(name.to_string(), s);
        s
    }

    pub fn get(&self, name: &str) -> Option<Sym> {
        self.index.get(name).copied()
    }

    pub fn name(&self, s: Sym) -> &str {
        &self.names[s.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub(crate) fn mark_predicate(&mut self, s: Sym) {
        self.predicate[s.index()] = true;
    }

    /// Kind of a symbol. A name used both as a predicate (or action name)
    /// and as a constant reports `Predicate`.
    pub fn kind(&self, s: Sym) -> SymbolKind {
        let name = self.name(s);
        if is_variable_name(name) {
            SymbolKind::Variable
        } else if self.predicate[s.index()] {
            SymbolKind::Predicate
        } else {
            SymbolKind::Constant
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Sym, &str)> {
        self.names
            .iter()
            .enumerate()
            .map(|(i, n)| (Sym(i as u32), n.as_str()))
    }
}

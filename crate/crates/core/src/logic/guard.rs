use std::fmt;

use crate::symbols::{Alphabet, SymSet};

/// A conjunction of literals over an alphabet: `pos` must be present, `neg`
/// must be absent. The empty cube is `true`.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Guard {
    pub pos: SymSet,
    pub neg: SymSet,
}

impl Guard {
    pub const TRUE: Guard = Guard { pos: SymSet::EMPTY, neg: SymSet::EMPTY };

    pub fn matches(&self, symbols: SymSet) -> bool {
        self.pos.is_subset(symbols) && symbols.intersect(self.neg).is_empty()
    }

    /// Symbols the guard mentions.
    pub fn support(&self) -> SymSet {
        self.pos.union(self.neg)
    }

    pub fn is_true(&self) -> bool {
        self.pos.is_empty() && self.neg.is_empty()
    }

    pub fn display<'a>(&self, alphabet: &'a Alphabet) -> DisplayGuard<'a> {
        DisplayGuard { guard: *self, alphabet }
    }
}

pub struct DisplayGuard<'a> {
    guard: Guard,
    alphabet: &'a Alphabet,
}

impl fmt::Display for DisplayGuard<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.guard.is_true() {
            return write!(f, "true");
        }
        let lits: Vec<String> = self
            .guard
            .support()
            .iter()
            .map(|i| {
                let name = self.alphabet.name(i);
                if self.guard.pos.contains(i) {
                    name.to_string()
                } else {
                    format!("!{name}")
                }
            })
            .collect();
        write!(f, "{}", lits.join(" && "))
    }
}

use crate::symbols::SymSet;

/// Explicit-mode transition label: a concrete service set, or the silent
/// symbol of the given agent. `Silent(i)` and `Services(SymSet::EMPTY)` are
/// different labels.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Silent(usize),
    Services(SymSet),
}

impl Label {
    pub fn is_silent(&self) -> bool {
        matches!(self, Label::Silent(_))
    }

    pub fn services(&self) -> Option<SymSet> {
        match self {
            Label::Silent(_) => None,
            Label::Services(s) => Some(*s),
        }
    }
}

use std::collections::HashMap;

use thiserror::Error;

use super::{find_accepting_lasso, Buchi, Label};
use crate::logic::{Guard, UltimatelyPeriodicWord};
use crate::symbols::SymSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MembershipError {
    #[error("automaton has a silent transition (agent {0}); words carry no silent symbols")]
    SilentLabel(usize),
}

/// A transition label that can read one letter of a word.
pub trait Letter {
    fn reads(&self, symbol: SymSet) -> Result<bool, MembershipError>;
}

impl Letter for Guard {
    fn reads(&self, symbol: SymSet) -> Result<bool, MembershipError> {
        Ok(self.matches(symbol))
    }
}

impl Letter for Label {
    fn reads(&self, symbol: SymSet) -> Result<bool, MembershipError> {
        match self {
            Label::Silent(i) => Err(MembershipError::SilentLabel(*i)),
            Label::Services(s) => Ok(*s == symbol),
        }
    }
}

/// Decides `w ∈ Lang(a)` by exploring the product of the folded word lasso
/// with `a` and searching it for an accepting lasso.
pub fn check_lasso_membership<L: Letter>(
    a: &Buchi<L>,
    w: &UltimatelyPeriodicWord,
) -> Result<bool, MembershipError> {
    let mut product: Buchi<()> = Buchi::new(a.is_accepting(a.initial()));
    let mut ids: HashMap<(usize, usize), usize> = HashMap::from([((0, a.initial()), 0)]);
    let mut stack = vec![(0usize, a.initial())];
    while let Some((pos, q)) = stack.pop() {
        let from = ids[&(pos, q)];
        let symbol = w.at(pos);
        let next_pos = w.succ(pos);
        for &t in a.outgoing(q) {
            let tr = a.transition(t);
            if !tr.label.reads(symbol)? {
                continue;
            }
            let key = (next_pos, tr.target);
            let to = match ids.get(&key) {
                Some(&id) => id,
                None => {
                    let id = product.add_state(a.is_accepting(tr.target));
                    ids.insert(key, id);
                    stack.push(key);
                    id
                }
            };
            product.add_transition(from, (), to);
        }
    }
    Ok(find_accepting_lasso(&product).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_feasible_first_symbol() {
        let mut a = Buchi::new(true);
        a.add_transition(0, Label::Services(SymSet(1)), 0);
        let w = UltimatelyPeriodicWord::new(vec![], vec![SymSet(2)]);
        assert_eq!(check_lasso_membership(&a, &w), Ok(false));
        let w = UltimatelyPeriodicWord::new(vec![], vec![SymSet(1)]);
        assert_eq!(check_lasso_membership(&a, &w), Ok(true));
    }

    #[test]
    fn silent_labels_are_rejected() {
        let mut a = Buchi::new(true);
        a.add_transition(0, Label::Silent(3), 0);
        let w = UltimatelyPeriodicWord::new(vec![], vec![SymSet(0)]);
        assert_eq!(check_lasso_membership(&a, &w), Err(MembershipError::SilentLabel(3)));
    }
}

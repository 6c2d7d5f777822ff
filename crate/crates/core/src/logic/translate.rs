//! LTL to Büchi translation: on-the-fly tableau expansion into a
//! transition-based generalized Büchi automaton, then counter
//! degeneralization into a state-based Büchi automaton with cube guards.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::{Formula, Guard};
use crate::automata::Buchi;
use crate::symbols::{Alphabet, SymSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TranslateError {
    #[error("atom `{0}` is not in the alphabet")]
    UnknownAtom(String),
    #[error("formula has {0} eventualities; at most 64 are supported")]
    TooManyEventualities(usize),
}

type Obligations = BTreeSet<Formula>;

/// One outgoing edge of a tableau node: the letter constraint, the
/// obligations for the next position, and which eventualities were
/// postponed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Edge {
    guard: Guard,
    next: Obligations,
    postponed: u64,
}

struct Tableau<'a> {
    alphabet: &'a Alphabet,
    eventualities: HashMap<Formula, usize>,
}

#[derive(Clone)]
struct Branch {
    todo: Vec<Formula>,
    done: BTreeSet<Formula>,
    pos: SymSet,
    neg: SymSet,
    next: Obligations,
    postponed: u64,
}

impl Tableau<'_> {
    fn bit(&self, f: &Formula) -> u64 {
        1 << self.eventualities[f]
    }

    fn expand(&self, mut b: Branch, out: &mut BTreeSet<Edge>) {
        while let Some(f) = b.todo.pop() {
            if !b.done.insert(f.clone()) {
                continue;
            }
            match f {
                Formula::True => {}
                Formula::False => return,
                Formula::Atom(ref a) => {
                    b.pos = b.pos.with(self.alphabet.index_of(a).unwrap());
                    if !b.pos.intersect(b.neg).is_empty() {
                        return;
                    }
                }
                Formula::Not(ref a) => {
                    let Formula::Atom(name) = &**a else { unreachable!("input is in NNF") };
                    b.neg = b.neg.with(self.alphabet.index_of(name).unwrap());
                    if !b.pos.intersect(b.neg).is_empty() {
                        return;
                    }
                }
                Formula::And(x, y) => {
                    b.todo.push(*x);
                    b.todo.push(*y);
                }
                Formula::Or(x, y) => {
                    let mut left = b.clone();
                    left.todo.push(*x);
                    self.expand(left, out);
                    b.todo.push(*y);
                }
                Formula::Next(x) => {
                    insert_flat(&mut b.next, *x);
                }
                Formula::Until(ref x, ref y) => {
                    let mut now = b.clone();
                    now.todo.push((**y).clone());
                    self.expand(now, out);
                    b.postponed |= self.bit(&f);
                    b.todo.push((**x).clone());
                    insert_flat(&mut b.next, f.clone());
                }
                Formula::Eventually(ref x) => {
                    let mut now = b.clone();
                    now.todo.push((**x).clone());
                    self.expand(now, out);
                    b.postponed |= self.bit(&f);
                    insert_flat(&mut b.next, f.clone());
                }
                Formula::Release(ref x, ref y) => {
                    let mut now = b.clone();
                    now.todo.push((**x).clone());
                    now.todo.push((**y).clone());
                    self.expand(now, out);
                    b.todo.push((**y).clone());
                    insert_flat(&mut b.next, f.clone());
                }
                Formula::Always(ref x) => {
                    b.todo.push((**x).clone());
                    insert_flat(&mut b.next, f.clone());
                }
            }
        }
        out.insert(Edge { guard: Guard { pos: b.pos, neg: b.neg }, next: b.next, postponed: b.postponed });
    }

    fn edges(&self, node: &Obligations) -> Vec<Edge> {
        let mut out = BTreeSet::new();
        let start = Branch {
            todo: node.iter().rev().cloned().collect(),
            done: BTreeSet::new(),
            pos: SymSet::EMPTY,
            neg: SymSet::EMPTY,
            next: BTreeSet::new(),
            postponed: 0,
        };
        self.expand(start, &mut out);
        // drop edges subsumed by a weaker-guarded edge with the same target
        // and no more postponed eventualities
        let all: Vec<Edge> = out.into_iter().collect();
        all.iter()
            .enumerate()
            .filter(|(i, e)| {
                !all.iter().enumerate().any(|(j, o)| {
                    j != *i
                        && o.next == e.next
                        && o.guard.pos.is_subset(e.guard.pos)
                        && o.guard.neg.is_subset(e.guard.neg)
                        && o.postponed & !e.postponed == 0
                        && (o.guard != e.guard || o.postponed != e.postponed || j < *i)
                })
            })
            .map(|(_, e)| e.clone())
            .collect()
    }
}

/// Inserts `f` into an obligation set, splitting conjunctions and dropping
/// `true` so equivalent nodes share a key.
fn insert_flat(set: &mut Obligations, f: Formula) {
    match f {
        Formula::True => {}
        Formula::And(a, b) => {
            insert_flat(set, *a);
            insert_flat(set, *b);
        }
        f => {
            set.insert(f);
        }
    }
}

fn collect_eventualities(f: &Formula, out: &mut HashMap<Formula, usize>) {
    if matches!(f, Formula::Until(..) | Formula::Eventually(_)) && !out.contains_key(f) {
        let k = out.len();
        out.insert(f.clone(), k);
    }
    for c in f.children() {
        collect_eventualities(c, out);
    }
}

/// Translates `f` into a Büchi automaton over `2^alphabet` whose language is
/// exactly the set of models of `f`.
pub fn translate(f: &Formula, alphabet: &Alphabet) -> Result<Buchi<Guard>, TranslateError> {
    if let Some(a) = f.atoms().into_iter().find(|a| !alphabet.contains(a)) {
        return Err(TranslateError::UnknownAtom(a.to_string()));
    }
    let nnf = f.to_nnf();
    let mut eventualities = HashMap::new();
    collect_eventualities(&nnf, &mut eventualities);
    let k = eventualities.len();
    if k > 64 {
        return Err(TranslateError::TooManyEventualities(k));
    }
    let tableau = Tableau { alphabet, eventualities };
    let all_marks: u64 = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };

    // Degeneralized states are (obligations, counter) with counter in 0..=k;
    // counter == k marks acceptance.
    let mut init = BTreeSet::new();
    insert_flat(&mut init, nnf);
    let mut ba: Buchi<Guard> = Buchi::new(k == 0);
    let mut ids: HashMap<(Obligations, usize), usize> = HashMap::new();
    let mut order: Vec<(Obligations, usize)> = vec![(init.clone(), 0)];
    ids.insert((init, 0), 0);
    let mut edge_cache: HashMap<Obligations, Vec<Edge>> = HashMap::new();
    let mut at = 0;
    while at < order.len() {
        let (node, counter) = order[at].clone();
        let edges = edge_cache.entry(node.clone()).or_insert_with(|| tableau.edges(&node)).clone();
        for e in edges {
            let marks = all_marks & !e.postponed;
            let mut c = if counter == k { 0 } else { counter };
            while c < k && marks >> c & 1 == 1 {
                c += 1;
            }
            let key = (e.next, c);
            let target = match ids.get(&key) {
                Some(&id) => id,
                None => {
                    let id = ba.add_state(c == k);
                    ids.insert(key.clone(), id);
                    order.push(key);
                    id
                }
            };
            ba.add_transition(at, e.guard, target);
        }
        at += 1;
    }
    let trimmed = ba.trim().automaton;
    Ok(trimmed.merge_duplicate_states().automaton)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{check_lasso_membership, find_accepting_lasso};
    use crate::logic::{eval_ltl, parse, UltimatelyPeriodicWord};

    fn alpha() -> Alphabet {
        Alphabet::new(["a", "b", "R1", "assist"]).unwrap()
    }

    fn tr(s: &str) -> Buchi<Guard> {
        translate(&parse(s, &alpha()).unwrap(), &alpha()).unwrap()
    }

    #[test]
    fn true_is_single_universal_state() {
        let ba = tr("true");
        assert_eq!(ba.num_states(), 1);
        assert_eq!(ba.num_transitions(), 1);
        assert!(ba.is_accepting(0));
        assert!(ba.transition(0).label.is_true());
    }

    #[test]
    fn false_is_empty() {
        assert!(find_accepting_lasso(&tr("false")).is_none());
        assert!(find_accepting_lasso(&tr("F a && G !a")).is_none());
    }

    #[test]
    fn tautology_accepts_everything() {
        let ba = tr("assist || !assist");
        for period in [vec![SymSet(0)], vec![SymSet(8)], vec![SymSet(8), SymSet(1)]] {
            let w = UltimatelyPeriodicWord::new(vec![], period);
            assert!(check_lasso_membership(&ba, &w).unwrap());
        }
    }

    #[test]
    fn avoid_room() {
        let ba = tr("G !R1");
        let empty = UltimatelyPeriodicWord::new(vec![], vec![SymSet::EMPTY]);
        assert!(check_lasso_membership(&ba, &empty).unwrap());
        let visits = UltimatelyPeriodicWord::new(vec![SymSet::EMPTY, SymSet(4)], vec![SymSet::EMPTY]);
        assert!(!check_lasso_membership(&ba, &visits).unwrap());
    }

    #[test]
    fn membership_agrees_with_semantics_on_samples() {
        let words = [
            UltimatelyPeriodicWord::new(vec![], vec![SymSet(1)]),
            UltimatelyPeriodicWord::new(vec![SymSet(2)], vec![SymSet(0)]),
            UltimatelyPeriodicWord::new(vec![SymSet(1), SymSet(1)], vec![SymSet(2), SymSet(0)]),
            UltimatelyPeriodicWord::new(vec![SymSet(0)], vec![SymSet(3), SymSet(1), SymSet(0)]),
        ];
        for s in ["G a", "F b", "a U b", "G F a", "F G a", "X (a U b)", "!(a U b)", "G (a || X b)"] {
            let f = parse(s, &alpha()).unwrap();
            let ba = translate(&f, &alpha()).unwrap();
            for w in &words {
                assert_eq!(check_lasso_membership(&ba, w).unwrap(), eval_ltl(&f, &alpha(), w), "{s} on {w:?}");
            }
        }
    }
}

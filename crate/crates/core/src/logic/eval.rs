//! Direct LTL semantics on ultimately periodic words.
//!
//! This evaluator shares no code with the automaton translation and serves as
//! its oracle.

use super::Formula;
use crate::symbols::{Alphabet, SymSet};

/// A word `prefix · period^ω` over symbol sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UltimatelyPeriodicWord {
    pub prefix: Vec<SymSet>,
    pub period: Vec<SymSet>,
}

impl UltimatelyPeriodicWord {
    pub fn new(prefix: Vec<SymSet>, period: Vec<SymSet>) -> Self {
        assert!(!period.is_empty(), "period must be nonempty");
        UltimatelyPeriodicWord { prefix, period }
    }

    /// Number of distinct positions (`|prefix| + |period|`).
    pub fn positions(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    pub fn at(&self, i: usize) -> SymSet {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// Successor of position `i` in the folded lasso.
    pub fn succ(&self, i: usize) -> usize {
        if i + 1 < self.positions() {
            i + 1
        } else {
            self.prefix.len()
        }
    }
}

/// Decides `w ⊨ f` by evaluating every subformula at every lasso position.
/// Atoms not in `alphabet` are false everywhere.
pub fn eval_ltl(f: &Formula, alphabet: &Alphabet, w: &UltimatelyPeriodicWord) -> bool {
    eval_vec(f, alphabet, w)[0]
}

fn eval_vec(f: &Formula, alphabet: &Alphabet, w: &UltimatelyPeriodicWord) -> Vec<bool> {
    let n = w.positions();
    match f {
        Formula::True => vec![true; n],
        Formula::False => vec![false; n],
        Formula::Atom(a) => match alphabet.index_of(a) {
            Some(i) => (0..n).map(|p| w.at(p).contains(i)).collect(),
            None => vec![false; n],
        },
        Formula::Not(a) => eval_vec(a, alphabet, w).into_iter().map(|v| !v).collect(),
        Formula::And(a, b) => zip(eval_vec(a, alphabet, w), eval_vec(b, alphabet, w), |x, y| x && y),
        Formula::Or(a, b) => zip(eval_vec(a, alphabet, w), eval_vec(b, alphabet, w), |x, y| x || y),
        Formula::Next(a) => {
            let v = eval_vec(a, alphabet, w);
            (0..n).map(|p| v[w.succ(p)]).collect()
        }
        Formula::Until(a, b) => {
            let (va, vb) = (eval_vec(a, alphabet, w), eval_vec(b, alphabet, w));
            fixpoint(w, false, |p, next| vb[p] || (va[p] && next))
        }
        Formula::Release(a, b) => {
            let (va, vb) = (eval_vec(a, alphabet, w), eval_vec(b, alphabet, w));
            fixpoint(w, true, |p, next| vb[p] && (va[p] || next))
        }
        Formula::Eventually(a) => {
            let v = eval_vec(a, alphabet, w);
            fixpoint(w, false, |p, next| v[p] || next)
        }
        Formula::Always(a) => {
            let v = eval_vec(a, alphabet, w);
            fixpoint(w, true, |p, next| v[p] && next)
        }
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

/// Least (`init = false`) or greatest (`init = true`) fixpoint of
/// `val[p] = step(p, val[succ(p)])` over the folded lasso.
fn fixpoint(w: &UltimatelyPeriodicWord, init: bool, step: impl Fn(usize, bool) -> bool) -> Vec<bool> {
    let n = w.positions();
    let mut val = vec![init; n];
    loop {
        let mut changed = false;
        for p in (0..n).rev() {
            let v = step(p, val[w.succ(p)]);
            if v != val[p] {
                val[p] = v;
                changed = true;
            }
        }
        if !changed {
            return val;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    const A: SymSet = SymSet(1);
    const B: SymSet = SymSet(2);
    const E: SymSet = SymSet(0);

    fn f(s: &str) -> Formula {
        parse(s, &ab()).unwrap()
    }

    #[test]
    fn constant_words() {
        let w = UltimatelyPeriodicWord::new(vec![], vec![A]);
        assert!(eval_ltl(&f("G a"), &ab(), &w));
        let w = UltimatelyPeriodicWord::new(vec![A], vec![A]);
        assert!(!eval_ltl(&f("F b"), &ab(), &w));
    }

    /// Truncated-unrolling oracle for `a U b`: look for a witness within the
    /// first `depth` letters.
    fn until_by_unrolling(w: &UltimatelyPeriodicWord, depth: usize) -> bool {
        for k in 0..depth {
            if w.at(k).contains(1) {
                return (0..k).all(|j| w.at(j).contains(0));
            }
        }
        false
    }

    #[test]
    fn until_with_prefix() {
        let w = UltimatelyPeriodicWord::new(vec![A, A, B], vec![E]);
        assert!(until_by_unrolling(&w, 10));
        assert!(eval_ltl(&f("a U b"), &ab(), &w));
        let w2 = UltimatelyPeriodicWord::new(vec![A, E, B], vec![E]);
        assert!(!until_by_unrolling(&w2, 10));
        assert!(!eval_ltl(&f("a U b"), &ab(), &w2));
    }

    #[test]
    fn periodic_liveness() {
        let w = UltimatelyPeriodicWord::new(vec![E], vec![A, E, B]);
        assert!(eval_ltl(&f("G F a && G F b"), &ab(), &w));
        assert!(!eval_ltl(&f("F G a"), &ab(), &w));
        assert!(eval_ltl(&f("G (!a || X X b)"), &ab(), &w));
        assert!(eval_ltl(&f("X (b U a)"), &ab(), &w));
        assert!(!eval_ltl(&f("X X (b U a)"), &ab(), &w));
    }
}

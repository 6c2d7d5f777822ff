use std::collections::BTreeSet;
use std::fmt;

/// LTL abstract syntax.
///
/// `Release` never comes out of the parser; it appears only after
/// [`Formula::to_nnf`] pushes a negation through an until.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    Eventually(Box<Formula>),
    Always(Box<Formula>),
}

use Formula::*;

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Or(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Self {
        Next(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Self {
        Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: Formula, b: Formula) -> Self {
        Release(Box::new(a), Box::new(b))
    }

    pub fn eventually(f: Formula) -> Self {
        Eventually(Box::new(f))
    }

    pub fn always(f: Formula) -> Self {
        Always(Box::new(f))
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            True | False | Atom(_) => vec![],
            Not(a) | Next(a) | Eventually(a) | Always(a) => vec![a],
            And(a, b) | Or(a, b) | Until(a, b) | Release(a, b) => vec![a, b],
        }
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        if let Atom(a) = self {
            out.insert(a);
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    pub fn contains_next(&self) -> bool {
        matches!(self, Next(_)) || self.children().into_iter().any(Formula::contains_next)
    }

    pub fn depth(&self) -> usize {
        1 + self.children().into_iter().map(Formula::depth).max().unwrap_or(0)
    }

    /// Negation normal form: negations only on atoms; `Release` is introduced
    /// as the dual of `Until`.
    pub fn to_nnf(&self) -> Formula {
        self.nnf(false)
    }

    fn nnf(&self, neg: bool) -> Formula {
        match (self, neg) {
            (True, false) | (False, true) => True,
            (False, false) | (True, true) => False,
            (Atom(a), false) => Atom(a.clone()),
            (Atom(a), true) => Formula::not(Atom(a.clone())),
            (Not(a), n) => a.nnf(!n),
            (And(a, b), false) => Formula::and(a.nnf(false), b.nnf(false)),
            (And(a, b), true) => Formula::or(a.nnf(true), b.nnf(true)),
            (Or(a, b), false) => Formula::or(a.nnf(false), b.nnf(false)),
            (Or(a, b), true) => Formula::and(a.nnf(true), b.nnf(true)),
            (Next(a), n) => Formula::next(a.nnf(n)),
            (Until(a, b), false) => Formula::until(a.nnf(false), b.nnf(false)),
            (Until(a, b), true) => Formula::release(a.nnf(true), b.nnf(true)),
            (Release(a, b), false) => Formula::release(a.nnf(false), b.nnf(false)),
            (Release(a, b), true) => Formula::until(a.nnf(true), b.nnf(true)),
            (Eventually(a), false) => Formula::eventually(a.nnf(false)),
            (Eventually(a), true) => Formula::always(a.nnf(true)),
            (Always(a), false) => Formula::always(a.nnf(false)),
            (Always(a), true) => Formula::eventually(a.nnf(true)),
        }
    }

    pub fn is_nnf(&self) -> bool {
        match self {
            Not(a) => matches!(**a, Atom(_)),
            _ => self.children().into_iter().all(Formula::is_nnf),
        }
    }
}

fn prec(f: &Formula) -> u8 {
    match f {
        Or(..) => 1,
        And(..) => 2,
        Until(..) | Release(..) => 3,
        Not(_) | Next(_) | Eventually(_) | Always(_) => 4,
        True | False | Atom(_) => 5,
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, child: &Formula, min: u8| -> fmt::Result {
            if prec(child) < min {
                write!(f, "({child})")
            } else {
                write!(f, "{child}")
            }
        };
        match self {
            True => write!(f, "true"),
            False => write!(f, "false"),
            Atom(a) => write!(f, "{a}"),
            Not(a) => {
                write!(f, "!")?;
                wrap(f, a, 4)
            }
            Next(a) | Eventually(a) | Always(a) => {
                let op = match self {
                    Next(_) => "X",
                    Eventually(_) => "F",
                    _ => "G",
                };
                write!(f, "{op} ")?;
                wrap(f, a, 4)
            }
            And(a, b) | Or(a, b) => {
                let (op, p) = if matches!(self, And(..)) { ("&&", 2) } else { ("||", 1) };
                wrap(f, a, p)?;
                write!(f, " {op} ")?;
                wrap(f, b, p)
            }
            Until(a, b) | Release(a, b) => {
                let op = if matches!(self, Until(..)) { "U" } else { "R" };
                // right-associative: parenthesize a binary temporal left child
                wrap(f, a, 4)?;
                write!(f, " {op} ")?;
                wrap(f, b, 3)
            }
        }
    }
}

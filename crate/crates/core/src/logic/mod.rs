//! LTL front end: syntax, parsing, normal form, translation to Büchi
//! automata, and a direct semantic evaluator on lasso-shaped words.

mod eval;
mod formula;
mod guard;
mod parse;
mod translate;

pub use eval::{eval_ltl, UltimatelyPeriodicWord};
pub use formula::Formula;
pub use guard::Guard;
pub use parse::{parse, parse_unchecked, ParseError};
pub use translate::{translate, TranslateError};

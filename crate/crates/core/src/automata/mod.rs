//! Explicit-state Büchi automata shared by the specification automata and
//! every product stage.

mod buchi;
mod dot;
mod label;
mod lasso;
mod membership;

pub use buchi::{Buchi, Rebuilt, StateId, TransId, Transition};
pub use dot::to_dot;
pub use label::Label;
pub use lasso::{find_accepting_lasso, find_lasso_by, Lasso};
pub use membership::{check_lasso_membership, Letter, MembershipError};

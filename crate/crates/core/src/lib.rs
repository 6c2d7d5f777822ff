//! Synthesis of per-agent action and synchronization strategies for teams of
//! agents with local LTL motion and task specifications.

pub mod agents;
pub mod automata;
pub mod executor;
pub mod global;
pub mod io;
pub mod logic;
pub mod motion;
pub mod pipeline;
pub mod symbols;
pub mod taskprod;

//! Task-and-motion product of a reduced motion product with a task
//! specification automaton, assisting services, dependency sets and the
//! second reduction.

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::agents::Coalition;
use crate::automata::{Buchi, Label, StateId, TransId};
use crate::logic::{Formula, Guard};
use crate::motion::{reduce, Reduction};
use crate::symbols::{Alphabet, SymSet};

/// Label of the reduced task-and-motion product: the service label together
/// with the set of agents the transition depends on.
pub type DepLabel = (Label, Coalition);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TaskProdError {
    #[error("service {0} belongs to agent {1} itself; assistance is defined for foreign services only")]
    OwnService(String, usize),
}

#[derive(Clone, Debug)]
pub struct TaskMotionProduct {
    pub agent: usize,
    pub automaton: Buchi<Label>,
    /// Product state -> (reduced motion state, task state, counter 1..=3).
    pub states: Vec<(StateId, StateId, u8)>,
    /// Product transition -> reduced motion transition it moves along.
    pub motion_trans: Vec<TransId>,
    /// Product transition -> task transition, `None` for silent stutter.
    pub task_trans: Vec<Option<TransId>>,
    /// Services of the agent.
    pub own: SymSet,
    /// Foreign services occurring in the task formula.
    pub foreign: SymSet,
    /// Assisting foreign services per transition (empty until
    /// [`compute_dep`] runs).
    pub assisting: Vec<SymSet>,
    pub dep: Vec<Coalition>,
}

impl TaskMotionProduct {
    /// Services a label of this product can mention.
    pub fn relevant(&self) -> SymSet {
        self.own.union(self.foreign)
    }
}

fn counter(j: u8, motion_acc: bool, task_acc: bool) -> u8 {
    match j {
        1 if motion_acc => 2,
        2 if task_acc => 3,
        3 => 1,
        _ => j,
    }
}

/// Reachable fragment of the task-and-motion product. Joint labels are
/// `a ∪ X` for a non-silent reduced motion label `a` and `X` ranging over the
/// subsets of the foreign services occurring in the task formula; services
/// absent from the formula cannot change any guard.
pub fn build_task_motion_product(
    agent: usize,
    own: SymSet,
    motion: &Buchi<Label>,
    task_formula: &Formula,
    task: &Buchi<Guard>,
    services: &Alphabet,
) -> TaskMotionProduct {
    let mentioned = task_formula
        .atoms()
        .into_iter()
        .filter_map(|a| services.index_of(a))
        .fold(SymSet::EMPTY, SymSet::with);
    let foreign = mentioned.minus(own);

    let init = (motion.initial(), task.initial(), 1u8);
    let mut index: HashMap<(StateId, StateId, u8), StateId> = HashMap::from([(init, 0)]);
    let mut states = vec![init];
    let mut automaton = Buchi::new(false);
    let mut motion_trans = Vec::new();
    let mut task_trans = Vec::new();
    let mut seen: HashSet<(StateId, Label, StateId)> = HashSet::new();
    let mut queue = VecDeque::from([0]);

    while let Some(p) = queue.pop_front() {
        let (q1, q2, j) = states[p];
        let mut succ: Vec<(Label, StateId, StateId, TransId, Option<TransId>)> = Vec::new();
        for &mt in motion.outgoing(q1) {
            let m = motion.transition(mt);
            match m.label {
                Label::Silent(_) => succ.push((Label::Silent(agent), m.target, q2, mt, None)),
                Label::Services(a) => {
                    for x in foreign.subsets() {
                        let sigma = a.union(x);
                        for &tt in task.outgoing(q2) {
                            let t = task.transition(tt);
                            if t.label.matches(sigma) {
                                succ.push((Label::Services(sigma), m.target, t.target, mt, Some(tt)));
                            }
                        }
                    }
                }
            }
        }
        for (label, q1n, q2n, mt, tt) in succ {
            // a silent move only stutters the task automaton, so it does not
            // count as a visit to its accepting states
            let read = !label.is_silent();
            let jn = counter(j, motion.is_accepting(q1n), read && task.is_accepting(q2n));
            let key = (q1n, q2n, jn);
            let target = *index.entry(key).or_insert_with(|| {
                states.push(key);
                queue.push_back(states.len() - 1);
                automaton.add_state(jn == 3)
            });
            if seen.insert((p, label, target)) {
                automaton.add_transition(p, label, target);
                motion_trans.push(mt);
                task_trans.push(tt);
            }
        }
    }
    let n = automaton.num_transitions();
    TaskMotionProduct {
        agent,
        automaton,
        states,
        motion_trans,
        task_trans,
        own,
        foreign,
        assisting: vec![SymSet::EMPTY; n],
        dep: vec![Coalition::singleton(agent); n],
    }
}

fn transition_index(tm: &TaskMotionProduct) -> HashSet<(StateId, SymSet, StateId)> {
    tm.automaton
        .transitions()
        .iter()
        .filter_map(|t| t.label.services().map(|s| (t.source, s, t.target)))
        .collect()
}

fn assisting_in(
    index: &HashSet<(StateId, SymSet, StateId)>,
    tm: &TaskMotionProduct,
    t: TransId,
    rho: usize,
) -> bool {
    let tr = tm.automaton.transition(t);
    let Some(sigma) = tr.label.services() else { return false };
    if !tm.foreign.contains(rho) {
        // never mentioned by the task: both toggles exist in the full product
        return false;
    }
    let with = index.contains(&(tr.source, sigma.with(rho), tr.target));
    let without = index.contains(&(tr.source, sigma.without(rho), tr.target));
    with != without
}

/// Whether the foreign service `rho` is assisting on transition `t`: exactly
/// one of `σ ∪ {rho}` and `σ \ {rho}` labels a transition between the same
/// endpoints.
pub fn compute_assisting(
    tm: &TaskMotionProduct,
    t: TransId,
    rho: usize,
    services: &Alphabet,
) -> Result<bool, TaskProdError> {
    if tm.own.contains(rho) {
        return Err(TaskProdError::OwnService(services.name(rho).to_string(), tm.agent));
    }
    Ok(assisting_in(&transition_index(tm), tm, t, rho))
}

/// Fills the assisting sets and dependency sets of every transition.
/// `owners[s]` is the agent providing service `s`.
pub fn compute_dep(tm: &mut TaskMotionProduct, owners: &[Option<usize>]) {
    let index = transition_index(tm);
    for t in 0..tm.automaton.num_transitions() {
        let mut assisting = SymSet::EMPTY;
        let mut dep = Coalition::singleton(tm.agent);
        for rho in tm.foreign.iter() {
            if assisting_in(&index, tm, t, rho) {
                assisting = assisting.with(rho);
                if let Some(o) = owners[rho] {
                    dep = dep.with(o);
                }
            }
        }
        tm.assisting[t] = assisting;
        tm.dep[t] = dep;
    }
}

/// Per agent, its services that assist on some transition of another agent's
/// product.
pub fn compute_globally_assisting(tms: &[TaskMotionProduct]) -> Vec<SymSet> {
    let used: Vec<SymSet> = tms
        .iter()
        .map(|tm| tm.assisting.iter().fold(SymSet::EMPTY, |acc, s| acc.union(*s)))
        .collect();
    tms.iter()
        .enumerate()
        .map(|(i, tm)| {
            used.iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .fold(SymSet::EMPTY, |acc, (_, u)| acc.union(u.intersect(tm.own)))
        })
        .collect()
}

/// Significance: initial, or some outgoing transition provides a globally
/// assisting service of the agent or depends on other agents.
pub fn classify_task_significance(tm: &TaskMotionProduct, globally_assisting: SymSet) -> Vec<bool> {
    let a = &tm.automaton;
    let alone = Coalition::singleton(tm.agent);
    (0..a.num_states())
        .map(|p| {
            p == a.initial()
                || a.outgoing(p).iter().any(|&t| {
                    let provides = a
                        .transition(t)
                        .label
                        .services()
                        .is_some_and(|s| !s.intersect(tm.own).intersect(globally_assisting).is_empty());
                    provides || tm.dep[t] != alone
                })
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct ReducedTaskMotion {
    pub agent: usize,
    pub reduction: Reduction<DepLabel>,
    /// Globally assisting services of this agent.
    pub globally_assisting: SymSet,
    /// Services a label of this product can mention.
    pub relevant: SymSet,
    pub own: SymSet,
}

impl ReducedTaskMotion {
    pub fn automaton(&self) -> &Buchi<DepLabel> {
        &self.reduction.automaton
    }
}

/// Silences every outgoing transition of an insignificant state, then applies
/// the state-removal reduction. Labels carry their dependency sets, so a
/// bypass inherits the dependency set of its head transition.
pub fn reduce_task_motion(tm: &TaskMotionProduct, globally_assisting: &[SymSet]) -> ReducedTaskMotion {
    let i = tm.agent;
    let sig = classify_task_significance(tm, globally_assisting[i]);
    let silent = (Label::Silent(i), Coalition::singleton(i));
    let relabeled = tm
        .automaton
        .map_labels(|t, l| if sig[tm.automaton.transition(t).source] { (*l, tm.dep[t]) } else { silent });
    ReducedTaskMotion {
        agent: i,
        reduction: reduce(&relabeled, &sig, &silent),
        globally_assisting: globally_assisting[i],
        relevant: tm.relevant(),
        own: tm.own,
    }
}

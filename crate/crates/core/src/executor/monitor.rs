use std::collections::HashMap;

use thiserror::Error;

use super::{Behavior, Simulation};
use crate::agents::Scenario;
use crate::automata::{check_lasso_membership, MembershipError};
use crate::global::Strategy;
use crate::logic::{eval_ltl, translate, TranslateError, UltimatelyPeriodicWord};
use crate::symbols::SymSet;

/// Local word of one agent, folded into prefix and period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalWord {
    pub word: UltimatelyPeriodicWord,
    /// The behavior produces finitely many letters; the period is `[∅]`.
    pub padded: bool,
    /// The simulated unrollings confirmed the period (seen at least twice).
    pub confirmed: bool,
}

/// Letters of agent `i`: at each of its non-silent action starts, the union
/// of the services started by every agent at the same event.
fn letters(sim: &Simulation, b: &Behavior) -> Vec<SymSet> {
    let mut at_event: HashMap<usize, SymSet> = HashMap::new();
    for other in &sim.behaviors {
        for s in &other.steps {
            if let Some(set) = s.services {
                let e = at_event.entry(s.event).or_default();
                *e = e.union(set);
            }
        }
    }
    b.steps.iter().filter(|s| s.services.is_some()).map(|s| at_event[&s.event]).collect()
}

pub fn extract_local_word(sim: &Simulation, agent: usize) -> LocalWord {
    let b = sim.behaviors.iter().find(|b| b.agent == agent).expect("agent was simulated");
    let all = letters(sim, b);
    // split the letters by the segment (prefix, cycle 0, cycle 1, ...) they fall in
    let cycles = b.completed_cycles();
    let mut segments: Vec<Vec<SymSet>> = vec![Vec::new(); cycles + 1];
    let mut next = all.iter();
    for (j, s) in b.steps.iter().enumerate() {
        if s.services.is_none() {
            continue;
        }
        let seg = if j < b.prefix_len { 0 } else { 1 + (j - b.prefix_len) / b.cycle_len };
        let letter = *next.next().unwrap();
        if seg <= cycles {
            segments[seg].push(letter);
        }
    }
    let cyc = &segments[1..];
    // smallest period p (in cycles) and then the earliest start k such that
    // the remaining cycles repeat with period p and show it at least twice
    let found = (1..=cycles / 2).find_map(|p| {
        (0..cycles)
            .take_while(|&k| cycles - k >= 2 * p)
            .find(|&k| (k..cycles - p).all(|c| cyc[c] == cyc[c + p]))
            .map(|k| (k, p))
    });
    let confirmed = found.is_some();
    let (k, p) = found.unwrap_or((cycles.saturating_sub(1), 1));
    let prefix: Vec<SymSet> = segments[..=k].iter().flatten().copied().collect();
    let period: Vec<SymSet> = cyc[k..k + p].iter().flatten().copied().collect();
    let padded = period.is_empty();
    let period = if padded { vec![SymSet::EMPTY] } else { period };
    LocalWord { word: UltimatelyPeriodicWord::new(prefix, period), padded, confirmed }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub agent: usize,
    /// The trace satisfies the motion formula.
    pub motion: bool,
    /// The local word satisfies the task formula.
    pub task: bool,
    /// Automaton membership agrees with both verdicts.
    pub agree: bool,
    pub local: LocalWord,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.motion && self.task && self.agree && !self.local.padded
    }
}

#[derive(Debug, Error)]
pub enum MonitorError {
    #[error("agent {0}: {1}")]
    Translate(String, TranslateError),
    #[error("agent {0}: {1}")]
    Membership(String, MembershipError),
}

/// Motion and task verdicts per simulated agent, each computed by the
/// direct semantics and cross-checked by automaton membership.
pub fn check_local_satisfaction(
    sim: &Simulation,
    strategies: &[Strategy],
    sc: &Scenario,
) -> Result<Vec<Verdict>, MonitorError> {
    strategies
        .iter()
        .map(|s| {
            let a = &sc.agents[s.agent];
            let name = || a.name.clone();
            let labels = |v: &[crate::global::Step]| v.iter().map(|st| a.ts.label(st.state)).collect::<Vec<_>>();
            let trace = UltimatelyPeriodicWord::new(labels(&s.prefix), labels(&s.cycle));
            let phi = &sc.motion[s.agent];
            let motion = eval_ltl(phi, &a.ts.props, &trace);
            let ba = translate(phi, &a.ts.props).map_err(|e| MonitorError::Translate(name(), e))?;
            let motion_ba = check_lasso_membership(&ba, &trace).map_err(|e| MonitorError::Membership(name(), e))?;

            let local = extract_local_word(sim, s.agent);
            let psi = &sc.task[s.agent];
            let task = eval_ltl(psi, &sc.services, &local.word);
            let ba = translate(psi, &sc.services).map_err(|e| MonitorError::Translate(name(), e))?;
            let task_ba = check_lasso_membership(&ba, &local.word).map_err(|e| MonitorError::Membership(name(), e))?;
            Ok(Verdict { agent: s.agent, motion, task, agree: motion == motion_ba && task == task_ba, local })
        })
        .collect()
}

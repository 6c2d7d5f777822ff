//! Agent models: transition systems with service-labeled actions, stay
//! self-loops and synchronization coalitions; scenarios and their validation.

mod grid;
mod ts;

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

pub use grid::{build_grid_agent, Cell, GridError, GridSpec, Room, ServiceCell, MOVES};
pub use ts::{ActionId, TransitionSystem, TsEdge, TsState};

use crate::automata::Label;
use crate::logic::Formula;
use crate::symbols::{Alphabet, SymSet};

/// A set of agent indices.
#[derive(
    Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct Coalition(pub u64);

impl Coalition {
    pub fn singleton(i: usize) -> Self {
        Coalition(1 << i)
    }

    pub fn from_agents(agents: impl IntoIterator<Item = usize>) -> Self {
        agents.into_iter().fold(Coalition(0), |c, i| c.with(i))
    }

    pub fn all(n: usize) -> Self {
        Coalition::from_agents(0..n)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        Coalition(self.0 | 1 << i)
    }

    pub fn union(self, o: Coalition) -> Self {
        Coalition(self.0 | o.0)
    }

    pub fn is_subset(self, o: Coalition) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_singleton(self) -> bool {
        self.0.count_ones() == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        SymSet(self.0).iter()
    }
}

impl fmt::Display for Coalition {
    /// One-based agent numbers, e.g. `{1,2,3}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.iter().map(|i| i + 1).join(","))
    }
}

/// `sync_i(I)`: agent `issuer` is ready to synchronize with `coalition`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct SyncRequest {
    pub issuer: usize,
    pub coalition: Coalition,
}

impl SyncRequest {
    pub fn new(issuer: usize, coalition: Coalition) -> Self {
        assert!(coalition.contains(issuer), "issuer must belong to its coalition");
        SyncRequest { issuer, coalition }
    }

    pub fn alone(issuer: usize) -> Self {
        SyncRequest::new(issuer, Coalition::singleton(issuer))
    }
}

/// One agent: its transition system, the services it can provide (a subset
/// of the scenario-wide service alphabet) and the service label of every
/// action.
#[derive(Clone, Debug)]
pub struct AgentModel {
    pub name: String,
    /// Zero-based position in the scenario.
    pub index: usize,
    pub ts: TransitionSystem,
    pub services: SymSet,
    /// Indexed by [`ActionId`].
    pub action_labels: Vec<Label>,
    pub stay: ActionId,
}

impl AgentModel {
    pub fn silent(&self) -> Label {
        Label::Silent(self.index)
    }

    pub fn label_of(&self, a: ActionId) -> Label {
        self.action_labels[a]
    }
}

/// A team of agents with one motion and one task formula each.
#[derive(Clone, Debug)]
pub struct Scenario {
    /// Union of all agents' service names.
    pub services: Alphabet,
    pub agents: Vec<AgentModel>,
    pub motion: Vec<Formula>,
    pub task: Vec<Formula>,
    /// Grid layout of each agent, when it was generated from one.
    pub grids: Vec<Option<GridSpec>>,
}

impl Scenario {
    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    /// Restriction to the given agents, re-indexed in order.
    pub fn subteam(&self, members: &[usize]) -> Scenario {
        let mut agents = Vec::new();
        for (k, &i) in members.iter().enumerate() {
            let mut a = self.agents[i].clone();
            a.index = k;
            for l in a.action_labels.iter_mut() {
                if l.is_silent() {
                    *l = Label::Silent(k);
                }
            }
            agents.push(a);
        }
        Scenario {
            services: self.services.clone(),
            agents,
            motion: members.iter().map(|&i| self.motion[i].clone()).collect(),
            task: members.iter().map(|&i| self.task[i].clone()).collect(),
            grids: members.iter().map(|&i| self.grids[i].clone()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    FormulaCount { agents: usize, motion: usize, task: usize },
    MissingStay { agent: String, state: String },
    StayNotSilent { agent: String },
    LabelCount { agent: String },
    ForeignLabel { agent: String, action: String },
    Nondeterministic { agent: String, state: String, action: String },
    ServiceOverlap { first: String, second: String, service: String },
    NextInMotion { agent: String },
    UndeclaredAtom { agent: String, formula: &'static str, atom: String },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Diagnostic::*;
        match self {
            FormulaCount { agents, motion, task } => write!(
                f,
                "{agents} agents but {motion} motion and {task} task formulas"
            ),
            MissingStay { agent, state } => {
                write!(f, "agent {agent}: state {state} lacks a stay self-loop")
            }
            StayNotSilent { agent } => write!(f, "agent {agent}: stay action must be silent"),
            LabelCount { agent } => write!(f, "agent {agent}: action label table does not cover every action"),
            ForeignLabel { agent, action } => write!(
                f,
                "agent {agent}: action {action} is labeled with services the agent does not own"
            ),
            Nondeterministic { agent, state, action } => write!(
                f,
                "agent {agent}: action {action} has several successors in state {state}"
            ),
            ServiceOverlap { first, second, service } => write!(
                f,
                "agents {first} and {second} both declare service {service}"
            ),
            NextInMotion { agent } => {
                write!(f, "agent {agent}: motion formula uses the next operator X")
            }
            UndeclaredAtom { agent, formula, atom } => {
                write!(f, "agent {agent}: {formula} formula uses undeclared atom {atom}")
            }
        }
    }
}

/// Checks every structural requirement of a scenario; empty iff valid.
pub fn validate(sc: &Scenario) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    if sc.motion.len() != sc.agents.len() || sc.task.len() != sc.agents.len() {
        diags.push(Diagnostic::FormulaCount {
            agents: sc.agents.len(),
            motion: sc.motion.len(),
            task: sc.task.len(),
        });
    }
    for a in &sc.agents {
        let name = || a.name.clone();
        if a.action_labels.len() != a.ts.num_actions() {
            diags.push(Diagnostic::LabelCount { agent: name() });
            continue;
        }
        if a.action_labels[a.stay] != a.silent() {
            diags.push(Diagnostic::StayNotSilent { agent: name() });
        }
        for s in 0..a.ts.num_states() {
            if a.ts.successor(s, a.stay) != Some(s) {
                diags.push(Diagnostic::MissingStay { agent: name(), state: a.ts.state_name(s).into() });
            }
        }
        for (act, l) in a.action_labels.iter().enumerate() {
            let ok = match l {
                Label::Silent(j) => *j == a.index,
                Label::Services(set) => set.is_subset(a.services),
            };
            if !ok {
                diags.push(Diagnostic::ForeignLabel { agent: name(), action: a.ts.action_name(act).into() });
            }
        }
        for (s, act) in a.ts.nondeterministic_pairs() {
            diags.push(Diagnostic::Nondeterministic {
                agent: name(),
                state: a.ts.state_name(s).into(),
                action: a.ts.action_name(act).into(),
            });
        }
    }
    for (i, a) in sc.agents.iter().enumerate() {
        for b in &sc.agents[i + 1..] {
            for s in a.services.intersect(b.services).iter() {
                diags.push(Diagnostic::ServiceOverlap {
                    first: a.name.clone(),
                    second: b.name.clone(),
                    service: sc.services.name(s).into(),
                });
            }
        }
    }
    for (a, f) in sc.agents.iter().zip(&sc.motion) {
        if f.contains_next() {
            diags.push(Diagnostic::NextInMotion { agent: a.name.clone() });
        }
        for atom in f.atoms() {
            if !a.ts.props.contains(atom) {
                diags.push(Diagnostic::UndeclaredAtom { agent: a.name.clone(), formula: "motion", atom: atom.into() });
            }
        }
    }
    for (a, f) in sc.agents.iter().zip(&sc.task) {
        for atom in f.atoms() {
            if !sc.services.contains(atom) {
                diags.push(Diagnostic::UndeclaredAtom { agent: a.name.clone(), formula: "task", atom: atom.into() });
            }
        }
    }
    diags
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_unchecked;

    fn two_agents(services: [&[&str]; 2]) -> Scenario {
        let names: Vec<&str> = services.iter().flat_map(|s| s.iter().copied()).collect();
        let mut uniq = Vec::new();
        for n in names {
            if !uniq.contains(&n) {
                uniq.push(n);
            }
        }
        let alphabet = Alphabet::new(uniq).unwrap();
        let agents = (0..2)
            .map(|i| {
                let g = GridSpec {
                    width: 2,
                    height: 1,
                    obstacles: vec![],
                    walls: vec![],
                    one_way: vec![],
                    rooms: vec![Room { name: "R1".into(), from: [0, 0], to: [0, 0] }],
                    service_cells: vec![ServiceCell {
                        cell: [1, 0],
                        services: services[i].iter().map(|s| s.to_string()).collect(),
                    }],
                    initial: [0, 0],
                };
                build_grid_agent(&format!("{}", i + 1), i, &g, &alphabet).unwrap()
            })
            .collect();
        Scenario {
            services: alphabet,
            agents,
            motion: vec![Formula::True, Formula::True],
            task: vec![Formula::True, Formula::True],
            grids: vec![None, None],
        }
    }

    #[test]
    fn clean_scenario_has_no_diagnostics() {
        assert!(validate(&two_agents([&["load"], &["help"]])).is_empty());
    }

    #[test]
    fn overlapping_services() {
        let d = validate(&two_agents([&["help"], &["help"]]));
        assert_eq!(
            d,
            vec![Diagnostic::ServiceOverlap { first: "1".into(), second: "2".into(), service: "help".into() }]
        );
    }

    #[test]
    fn next_in_motion() {
        let mut sc = two_agents([&["load"], &["help"]]);
        sc.motion[0] = parse_unchecked("X R1").unwrap();
        assert_eq!(validate(&sc), vec![Diagnostic::NextInMotion { agent: "1".into() }]);
        sc.task[1] = parse_unchecked("G inform").unwrap();
        assert!(validate(&sc).contains(&Diagnostic::UndeclaredAtom {
            agent: "2".into(),
            formula: "task",
            atom: "inform".into()
        }));
    }

    #[test]
    fn missing_stay_and_nondeterminism() {
        let mut sc = two_agents([&["load"], &["help"]]);
        let ts = &mut sc.agents[0].ts;
        let east = ts.action_by_name("east").unwrap();
        ts.add_edge(0, east, 0);
        let extra = ts.add_state("lonely", SymSet::EMPTY);
        let d = validate(&sc);
        assert!(d.contains(&Diagnostic::Nondeterministic { agent: "1".into(), state: "c0_0".into(), action: "east".into() }));
        assert!(d.contains(&Diagnostic::MissingStay { agent: "1".into(), state: "lonely".into() }));
        assert_eq!(extra, 2);
    }
}

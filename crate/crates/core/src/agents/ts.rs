use std::collections::HashMap;

use crate::symbols::{Alphabet, SymSet};

pub type TsState = usize;
pub type ActionId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TsEdge {
    pub source: TsState,
    pub action: ActionId,
    pub target: TsState,
}

/// Labeled transition system with named states and actions.
#[derive(Clone, Debug)]
pub struct TransitionSystem {
    state_names: Vec<String>,
    state_index: HashMap<String, TsState>,
    action_names: Vec<String>,
    action_index: HashMap<String, ActionId>,
    labels: Vec<SymSet>,
    edges: Vec<TsEdge>,
    out: Vec<Vec<usize>>,
    pub initial: TsState,
    pub props: Alphabet,
}

impl TransitionSystem {
    pub fn new(props: Alphabet) -> Self {
        TransitionSystem {
            state_names: Vec::new(),
            state_index: HashMap::new(),
            action_names: Vec::new(),
            action_index: HashMap::new(),
            labels: Vec::new(),
            edges: Vec::new(),
            out: Vec::new(),
            initial: 0,
            props,
        }
    }

    pub fn add_state(&mut self, name: impl Into<String>, label: SymSet) -> TsState {
        let name = name.into();
        let id = self.state_names.len();
        self.state_index.insert(name.clone(), id);
        self.state_names.push(name);
        self.labels.push(label);
        self.out.push(Vec::new());
        id
    }

    /// Interns an action name.
    pub fn action(&mut self, name: &str) -> ActionId {
        if let Some(&a) = self.action_index.get(name) {
            return a;
        }
        let id = self.action_names.len();
        self.action_index.insert(name.to_string(), id);
        self.action_names.push(name.to_string());
        id
    }

    /// Adds `source --action--> target`. Duplicated `(source, action)` pairs
    /// are kept so that validation can report them.
    pub fn add_edge(&mut self, source: TsState, action: ActionId, target: TsState) {
        self.out[source].push(self.edges.len());
        self.edges.push(TsEdge { source, action, target });
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn num_actions(&self) -> usize {
        self.action_names.len()
    }

    pub fn state_name(&self, s: TsState) -> &str {
        &self.state_names[s]
    }

    pub fn state_by_name(&self, name: &str) -> Option<TsState> {
        self.state_index.get(name).copied()
    }

    pub fn action_name(&self, a: ActionId) -> &str {
        &self.action_names[a]
    }

    pub fn action_by_name(&self, name: &str) -> Option<ActionId> {
        self.action_index.get(name).copied()
    }

    pub fn label(&self, s: TsState) -> SymSet {
        self.labels[s]
    }

    pub fn edges(&self) -> &[TsEdge] {
        &self.edges
    }

    pub fn edges_from(&self, s: TsState) -> impl Iterator<Item = &TsEdge> {
        self.out[s].iter().map(|&e| &self.edges[e])
    }

    pub fn successor(&self, s: TsState, a: ActionId) -> Option<TsState> {
        self.edges_from(s).find(|e| e.action == a).map(|e| e.target)
    }

    /// `(state, action)` pairs with more than one successor.
    pub fn nondeterministic_pairs(&self) -> Vec<(TsState, ActionId)> {
        let mut out = Vec::new();
        for s in 0..self.num_states() {
            let mut seen = Vec::new();
            for e in self.edges_from(s) {
                if seen.contains(&e.action) {
                    if !out.contains(&(s, e.action)) {
                        out.push((s, e.action));
                    }
                } else {
                    seen.push(e.action);
                }
            }
        }
        out
    }
}

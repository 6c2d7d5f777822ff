use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

pub type StateId = usize;
pub type TransId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition<L> {
    pub source: StateId,
    pub label: L,
    pub target: StateId,
}

/// Explicit-state Büchi automaton with dense state and transition ids.
///
/// State ids are assigned in construction order and the per-state adjacency
/// lists keep transitions in id order, so every traversal is deterministic.
#[derive(Clone, Debug)]
pub struct Buchi<L> {
    initial: StateId,
    accepting: Vec<bool>,
    transitions: Vec<Transition<L>>,
    outgoing: Vec<Vec<TransId>>,
    incoming: Vec<Vec<TransId>>,
}

/// Result of a rebuild operation: the new automaton plus the correspondence
/// back to the automaton it was derived from.
#[derive(Clone, Debug)]
pub struct Rebuilt<L> {
    pub automaton: Buchi<L>,
    /// Old state id -> new state id (`None` if removed).
    pub state_map: Vec<Option<StateId>>,
    /// New transition id -> old transition id.
    pub trans_origin: Vec<TransId>,
}

impl<L> Buchi<L> {
    /// An automaton with a single initial state.
    pub fn new(initial_accepting: bool) -> Self {
        Buchi {
            initial: 0,
            accepting: vec![initial_accepting],
            transitions: Vec::new(),
            outgoing: vec![Vec::new()],
            incoming: vec![Vec::new()],
        }
    }

    pub fn add_state(&mut self, accepting: bool) -> StateId {
        self.accepting.push(accepting);
        self.outgoing.push(Vec::new());
        self.incoming.push(Vec::new());
        self.accepting.len() - 1
    }

    pub fn add_transition(&mut self, source: StateId, label: L, target: StateId) -> TransId {
        assert!(source < self.num_states() && target < self.num_states());
        let id = self.transitions.len();
        self.transitions.push(Transition { source, label, target });
        self.outgoing[source].push(id);
        self.incoming[target].push(id);
        id
    }

    pub fn set_initial(&mut self, s: StateId) {
        assert!(s < self.num_states());
        self.initial = s;
    }

    pub fn set_accepting(&mut self, s: StateId, accepting: bool) {
        self.accepting[s] = accepting;
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_accepting(&self, s: StateId) -> bool {
        self.accepting[s]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states()).filter(|&s| self.accepting[s])
    }

    pub fn transition(&self, t: TransId) -> &Transition<L> {
        &self.transitions[t]
    }

    pub fn transitions(&self) -> &[Transition<L>] {
        &self.transitions
    }

    pub fn outgoing(&self, s: StateId) -> &[TransId] {
        &self.outgoing[s]
    }

    pub fn incoming(&self, s: StateId) -> &[TransId] {
        &self.incoming[s]
    }

    /// States reachable from the initial state.
    pub fn reachable(&self) -> Vec<bool> {
        self.search(&[self.initial], |s| self.outgoing[s].iter().map(|&t| self.transitions[t].target))
    }

    /// States from which some accepting state is reachable.
    pub fn coaccessible(&self) -> Vec<bool> {
        let roots: Vec<_> = self.accepting_states().collect();
        self.search(&roots, |s| self.incoming[s].iter().map(|&t| self.transitions[t].source))
    }

    fn search<I: Iterator<Item = StateId>>(
        &self,
        roots: &[StateId],
        next: impl Fn(StateId) -> I,
    ) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::new();
        for &r in roots {
            if !seen[r] {
                seen[r] = true;
                queue.push_back(r);
            }
        }
        while let Some(s) = queue.pop_front() {
            for n in next(s) {
                if !seen[n] {
                    seen[n] = true;
                    queue.push_back(n);
                }
            }
        }
        seen
    }

    pub fn map_labels<M>(&self, mut f: impl FnMut(TransId, &L) -> M) -> Buchi<M> {
        Buchi {
            initial: self.initial,
            accepting: self.accepting.clone(),
            transitions: self
                .transitions
                .iter()
                .enumerate()
                .map(|(i, t)| Transition { source: t.source, label: f(i, &t.label), target: t.target })
                .collect(),
            outgoing: self.outgoing.clone(),
            incoming: self.incoming.clone(),
        }
    }
}

impl<L: Clone> Buchi<L> {
    /// Keeps the states flagged in `keep` (the initial state always survives)
    /// and the transitions between them.
    pub fn restrict(&self, keep: &[bool]) -> Rebuilt<L> {
        let mut state_map = vec![None; self.num_states()];
        let mut order: Vec<StateId> = (0..self.num_states()).filter(|&s| keep[s]).collect();
        if !keep[self.initial] {
            order.insert(0, self.initial);
            order.sort_unstable();
        }
        let mut automaton: Option<Buchi<L>> = None;
        for &s in &order {
            let id = match automaton.as_mut() {
                None => {
                    automaton = Some(Buchi::new(self.accepting[s]));
                    0
                }
                Some(a) => a.add_state(self.accepting[s]),
            };
            state_map[s] = Some(id);
        }
        let mut automaton = automaton.expect("initial state always kept");
        automaton.initial = state_map[self.initial].unwrap();
        let mut trans_origin = Vec::new();
        for (i, t) in self.transitions.iter().enumerate() {
            if let (Some(a), Some(b)) = (state_map[t.source], state_map[t.target]) {
                automaton.add_transition(a, t.label.clone(), b);
                trans_origin.push(i);
            }
        }
        Rebuilt { automaton, state_map, trans_origin }
    }

    /// Removes every state from which no accepting state is reachable
    /// (the initial state is kept regardless).
    pub fn prune_non_coaccessible(&self) -> Rebuilt<L> {
        self.restrict(&self.coaccessible())
    }

    /// Keeps the states that are both reachable and co-accessible.
    pub fn trim(&self) -> Rebuilt<L> {
        let reach = self.reachable();
        let co = self.coaccessible();
        let keep: Vec<bool> = reach.iter().zip(&co).map(|(a, b)| *a && *b).collect();
        self.restrict(&keep)
    }
}

impl<L: Clone + Ord + Hash> Buchi<L> {
    /// Merges states with identical acceptance flag, outgoing `(label, target)`
    /// and incoming `(label, source)` sets; self-loops compare equal across
    /// states. One pass of signature hashing, no iteration to a fixpoint.
    pub fn merge_duplicate_states(&self) -> Rebuilt<L> {
        self.merge_duplicate_states_by(|t| t)
    }

    /// As [`Buchi::merge_duplicate_states`], and when two merged transitions
    /// coincide keeps the one with the smallest `preference` key.
    pub fn merge_duplicate_states_by<K: Ord>(&self, preference: impl Fn(TransId) -> K) -> Rebuilt<L> {
        type Edge<L> = (L, Option<StateId>);
        let mut classes: HashMap<(bool, Vec<Edge<L>>, Vec<Edge<L>>), StateId> = HashMap::new();
        let mut rep = vec![0; self.num_states()];
        for s in 0..self.num_states() {
            let other = |x: StateId| if x == s { None } else { Some(x) };
            let mut out: Vec<Edge<L>> = self.outgoing[s]
                .iter()
                .map(|&t| (self.transitions[t].label.clone(), other(self.transitions[t].target)))
                .collect();
            let mut inc: Vec<Edge<L>> = self.incoming[s]
                .iter()
                .map(|&t| (self.transitions[t].label.clone(), other(self.transitions[t].source)))
                .collect();
            out.sort();
            out.dedup();
            inc.sort();
            inc.dedup();
            rep[s] = *classes.entry((self.accepting[s], out, inc)).or_insert(s);
        }
        // if the initial state is a non-representative duplicate, it becomes
        // the representative of its class
        if rep[self.initial] != self.initial {
            let old = rep[self.initial];
            for r in rep.iter_mut() {
                if *r == old {
                    *r = self.initial;
                }
            }
        }
        let keep: Vec<bool> = (0..self.num_states()).map(|s| rep[s] == s).collect();
        let skeleton = self.restrict(&keep);
        let state_map: Vec<Option<StateId>> =
            (0..self.num_states()).map(|s| skeleton.state_map[rep[s]]).collect();

        let mut best: HashMap<(StateId, L, StateId), TransId> = HashMap::new();
        for (i, t) in self.transitions.iter().enumerate() {
            let key = (
                state_map[t.source].unwrap(),
                t.label.clone(),
                state_map[t.target].unwrap(),
            );
            best.entry(key)
                .and_modify(|cur| {
                    if preference(i) < preference(*cur) {
                        *cur = i;
                    }
                })
                .or_insert(i);
        }
        let mut chosen: Vec<TransId> = best.into_values().collect();
        chosen.sort_unstable();

        let mut automaton = skeleton.automaton;
        automaton.transitions.clear();
        automaton.outgoing.iter_mut().for_each(Vec::clear);
        automaton.incoming.iter_mut().for_each(Vec::clear);
        for &i in &chosen {
            let t = &self.transitions[i];
            automaton.add_transition(
                state_map[t.source].unwrap(),
                t.label.clone(),
                state_map[t.target].unwrap(),
            );
        }
        Rebuilt { automaton, state_map, trans_origin: chosen }
    }
}

impl<L> Rebuilt<L> {
    /// Composes `self` (derived from some `A`) with a rebuild of
    /// `self.automaton`, yielding maps straight back to `A`.
    pub fn then(self, next: Rebuilt<L>) -> Rebuilt<L> {
        let state_map = self
            .state_map
            .iter()
            .map(|s| s.and_then(|s| next.state_map[s]))
            .collect();
        let trans_origin = next.trans_origin.iter().map(|&t| self.trans_origin[t]).collect();
        Rebuilt { automaton: next.automaton, state_map, trans_origin }
    }
}

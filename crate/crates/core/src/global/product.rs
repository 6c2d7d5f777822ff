use std::collections::{HashMap, HashSet, VecDeque};

use crate::agents::Coalition;
use crate::automata::{find_accepting_lasso, find_lasso_by, Buchi, Label, Lasso, StateId, TransId};
use crate::symbols::SymSet;
use crate::taskprod::ReducedTaskMotion;

/// Product of the reduced task-and-motion products of a team (or of one
/// dependency class). Agent indices in labels and coalitions are the global
/// ones; `members[k]` is the agent of component `k`.
#[derive(Clone, Debug)]
pub struct GlobalProduct {
    pub automaton: Buchi<Label>,
    pub members: Vec<usize>,
    /// Product state -> (component states, counter in `1..=members.len() + 1`).
    pub states: Vec<(Vec<StateId>, usize)>,
    pub dep: Vec<Coalition>,
    /// Product transition -> the moving components and their transitions.
    pub moves: Vec<Vec<(usize, TransId)>>,
}

impl GlobalProduct {
    pub fn counter(&self, s: StateId) -> usize {
        self.states[s].1
    }

    /// Position of a global agent index among the members.
    pub fn component_of(&self, agent: usize) -> Option<usize> {
        self.members.iter().position(|&a| a == agent)
    }
}

struct Search<'a> {
    ps: &'a [ReducedTaskMotion],
    comp: &'a [StateId],
    /// `comp_of[agent]` for global agent indices.
    comp_of: &'a HashMap<usize, usize>,
    found: Vec<Vec<(usize, TransId)>>,
    seen: HashSet<Vec<(usize, TransId)>>,
}

impl Search<'_> {
    fn label(&self, k: usize, t: TransId) -> (SymSet, Coalition) {
        let (l, d) = self.ps[k].automaton().transition(t).label;
        (l.services().expect("joint moves are non-silent"), d)
    }

    fn consistent(&self, k: usize, tk: TransId, m: usize, tm: TransId) -> bool {
        let (pk, pm) = (&self.ps[k], &self.ps[m]);
        let (sk, _) = self.label(k, tk);
        let (sm, _) = self.label(m, tm);
        sk.intersect(pm.own) == sm.intersect(pm.own).intersect(pk.relevant)
            && sm.intersect(pk.own) == sk.intersect(pk.own).intersect(pm.relevant)
    }

    fn dfs(&mut self, assigned: &mut Vec<(usize, TransId)>, required: Coalition) {
        let pending = required.iter().find(|a| !assigned.iter().any(|&(k, _)| self.ps[k].agent == *a));
        let Some(agent) = pending else {
            let owned = assigned.iter().fold(SymSet::EMPTY, |acc, &(k, _)| acc.union(self.ps[k].own));
            if assigned.iter().all(|&(k, t)| self.label(k, t).0.is_subset(owned)) {
                let mut key = assigned.clone();
                key.sort_unstable();
                if self.seen.insert(key.clone()) {
                    self.found.push(key);
                }
            }
            return;
        };
        let Some(&k) = self.comp_of.get(&agent) else { return };
        let a = self.ps[k].automaton();
        for &t in a.outgoing(self.comp[k]) {
            if a.transition(t).label.0.is_silent() {
                continue;
            }
            if assigned.iter().all(|&(m, tm)| self.consistent(k, t, m, tm)) {
                assigned.push((k, t));
                let dep = self.label(k, t).1;
                self.dfs(assigned, required.union(dep));
                assigned.pop();
            }
        }
    }
}

fn next_counter(j: usize, n: usize, moved: impl Fn(usize) -> bool, accepting: impl Fn(usize) -> bool) -> usize {
    if j == n + 1 {
        1
    } else if moved(j - 1) && accepting(j - 1) {
        j + 1
    } else {
        j
    }
}

/// Reachable fragment of the global product. Local moves follow a silent
/// transition of one component. Joint moves are found by closing a seed
/// transition under the dependency sets of the chosen transitions, which
/// yields minimal closed coalitions. All members of a joint move read the
/// same service set: each member's label equals the union of the members'
/// own services restricted to the services that member can mention, and no
/// member's label demands services of a non-member.
pub fn build_global_product(ps: &[ReducedTaskMotion]) -> GlobalProduct {
    let n = ps.len();
    let members: Vec<usize> = ps.iter().map(|p| p.agent).collect();
    let comp_of: HashMap<usize, usize> = members.iter().enumerate().map(|(k, &a)| (a, k)).collect();
    let init: (Vec<StateId>, usize) = (ps.iter().map(|p| p.automaton().initial()).collect(), 1);
    let mut index: HashMap<(Vec<StateId>, usize), StateId> = HashMap::from([(init.clone(), 0)]);
    let mut states = vec![init];
    let mut automaton = Buchi::new(false);
    let mut dep = Vec::new();
    let mut moves = Vec::new();
    let mut queue = VecDeque::from([0]);
    let accepting = |q: &[StateId], j: usize| j == n && ps[n - 1].automaton().is_accepting(q[n - 1]);
    automaton.set_accepting(0, accepting(&states[0].0, 1));

    while let Some(p) = queue.pop_front() {
        let (comp, j) = states[p].clone();
        let mut succ: Vec<(Label, Vec<StateId>, Coalition, Vec<(usize, TransId)>)> = Vec::new();
        for k in 0..n {
            let a = ps[k].automaton();
            for &t in a.outgoing(comp[k]) {
                let tr = a.transition(t);
                if tr.label.0.is_silent() {
                    let mut next = comp.clone();
                    next[k] = tr.target;
                    succ.push((tr.label.0, next, Coalition::singleton(members[k]), vec![(k, t)]));
                }
            }
        }
        let mut search = Search { ps, comp: &comp, comp_of: &comp_of, found: Vec::new(), seen: HashSet::new() };
        for k in 0..n {
            let a = ps[k].automaton();
            for &t in a.outgoing(comp[k]) {
                if !a.transition(t).label.0.is_silent() {
                    let dep = a.transition(t).label.1;
                    search.dfs(&mut vec![(k, t)], dep.with(members[k]));
                }
            }
        }
        for mv in search.found {
            let mut next = comp.clone();
            let mut sigma = SymSet::EMPTY;
            let mut coalition = Coalition::default();
            for &(k, t) in &mv {
                let tr = ps[k].automaton().transition(t);
                next[k] = tr.target;
                sigma = sigma.union(tr.label.0.services().unwrap().intersect(ps[k].own));
                coalition = coalition.with(members[k]);
            }
            succ.push((Label::Services(sigma), next, coalition, mv));
        }
        for (label, next, coalition, mv) in succ {
            let jn = next_counter(
                j,
                n,
                |k| mv.iter().any(|&(m, _)| m == k),
                |k| ps[k].automaton().is_accepting(next[k]),
            );
            let key = (next, jn);
            let target = match index.get(&key) {
                Some(&s) => s,
                None => {
                    let s = automaton.add_state(accepting(&key.0, jn));
                    index.insert(key.clone(), s);
                    states.push(key);
                    queue.push_back(s);
                    s
                }
            };
            automaton.add_transition(p, label, target);
            dep.push(coalition);
            moves.push(mv);
        }
    }
    GlobalProduct { automaton, members, states, dep, moves }
}

/// An accepting lasso of the global product, and whether the literal
/// acceptance set had to be replaced by the counter wrap-around. The literal
/// set only names the last component; a lasso whose cycle never reaches
/// counter `N + 1` does not visit every component's accepting states, so
/// the search is repeated with the wrap-around states as acceptance.
pub fn find_global_lasso(gp: &GlobalProduct) -> Option<(Lasso, bool)> {
    let wrap = gp.members.len() + 1;
    let cycles = |l: &Lasso| {
        l.cycle.iter().any(|&t| gp.counter(gp.automaton.transition(t).source) == wrap)
    };
    if let Some(l) = find_accepting_lasso(&gp.automaton) {
        if cycles(&l) {
            return Some((l, false));
        }
    }
    find_lasso_by(&gp.automaton, |s| gp.counter(s) == wrap).map(|l| (l, true))
}

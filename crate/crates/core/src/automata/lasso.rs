use std::collections::VecDeque;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::{Buchi, StateId, TransId};

/// Finite representation of an accepting run: a path from the initial state
/// followed by a cycle repeated forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lasso {
    pub prefix: Vec<TransId>,
    pub cycle: Vec<TransId>,
}

impl Lasso {
    /// State where the cycle starts (and ends).
    pub fn loop_state<L>(&self, a: &Buchi<L>) -> StateId {
        a.transition(self.cycle[0]).source
    }

    /// Checks that prefix and cycle chain up, the prefix starts at the
    /// initial state and the cycle visits a state satisfying `accepting`.
    pub fn is_valid_with<L>(&self, a: &Buchi<L>, accepting: impl Fn(StateId) -> bool) -> bool {
        if self.cycle.is_empty() {
            return false;
        }
        let mut at = a.initial();
        for &t in self.prefix.iter().chain(&self.cycle) {
            if t >= a.num_transitions() || a.transition(t).source != at {
                return false;
            }
            at = a.transition(t).target;
        }
        at == self.loop_state(a)
            && self.cycle.iter().any(|&t| accepting(a.transition(t).source))
    }

    pub fn is_valid<L>(&self, a: &Buchi<L>) -> bool {
        self.is_valid_with(a, |s| a.is_accepting(s))
    }
}

/// Finds an accepting lasso: shortest prefix first, then shortest cycle, then
/// the smallest loop-state id. `None` iff the language is empty.
pub fn find_accepting_lasso<L>(a: &Buchi<L>) -> Option<Lasso> {
    find_lasso_by(a, |s| a.is_accepting(s))
}

/// [`find_accepting_lasso`] with acceptance given by a state predicate.
pub fn find_lasso_by<L>(a: &Buchi<L>, accepting: impl Fn(StateId) -> bool) -> Option<Lasso> {
    let n = a.num_states();
    let mut graph = DiGraph::<(), ()>::with_capacity(n, a.num_transitions());
    for _ in 0..n {
        graph.add_node(());
    }
    for t in a.transitions() {
        graph.add_edge(NodeIndex::new(t.source), NodeIndex::new(t.target), ());
    }
    let mut scc_of = vec![usize::MAX; n];
    let mut good_scc = Vec::new();
    for (k, comp) in tarjan_scc(&graph).into_iter().enumerate() {
        let cyclic = comp.len() > 1
            || a.outgoing(comp[0].index()).iter().any(|&t| a.transition(t).target == comp[0].index());
        let has_acc = comp.iter().any(|s| accepting(s.index()));
        for s in &comp {
            scc_of[s.index()] = k;
        }
        good_scc.push(cyclic && has_acc);
    }

    // BFS from the initial state for shortest prefixes.
    let mut dist = vec![usize::MAX; n];
    let mut parent: Vec<Option<TransId>> = vec![None; n];
    let mut queue = VecDeque::from([a.initial()]);
    dist[a.initial()] = 0;
    while let Some(s) = queue.pop_front() {
        for &t in a.outgoing(s) {
            let v = a.transition(t).target;
            if dist[v] == usize::MAX {
                dist[v] = dist[s] + 1;
                parent[v] = Some(t);
                queue.push_back(v);
            }
        }
    }

    let best_dist = (0..n)
        .filter(|&s| dist[s] != usize::MAX && good_scc[scc_of[s]])
        .map(|s| dist[s])
        .min()?;
    let mut best: Option<(usize, StateId, Vec<TransId>)> = None;
    for s in (0..n).filter(|&s| dist[s] == best_dist && good_scc[scc_of[s]]) {
        let Some(cycle) = shortest_accepting_cycle(a, s, &scc_of, &accepting) else {
            continue;
        };
        if best.as_ref().is_none_or(|(len, _, _)| cycle.len() < *len) {
            best = Some((cycle.len(), s, cycle));
        }
    }
    let (_, start, cycle) = best?;
    let mut prefix = Vec::with_capacity(best_dist);
    let mut at = start;
    while let Some(t) = parent[at] {
        prefix.push(t);
        at = a.transition(t).source;
    }
    prefix.reverse();
    Some(Lasso { prefix, cycle })
}

/// Shortest cycle through `start` that visits an accepting state, staying in
/// the SCC of `start`. BFS over `(state, seen_accepting)`.
fn shortest_accepting_cycle<L>(
    a: &Buchi<L>,
    start: StateId,
    scc_of: &[usize],
    accepting: &impl Fn(StateId) -> bool,
) -> Option<Vec<TransId>> {
    let comp = scc_of[start];
    let n = a.num_states();
    let idx = |s: StateId, f: bool| s * 2 + f as usize;
    let mut parent: Vec<Option<(usize, TransId)>> = vec![None; 2 * n];
    let mut seen = vec![false; 2 * n];
    let root = idx(start, accepting(start));
    seen[root] = true;
    let mut queue = VecDeque::from([(start, accepting(start))]);
    while let Some((s, f)) = queue.pop_front() {
        for &t in a.outgoing(s) {
            let v = a.transition(t).target;
            if scc_of[v] != comp {
                continue;
            }
            let fv = f || accepting(v);
            if v == start && fv {
                let mut cycle = vec![t];
                let mut node = idx(s, f);
                while node != root {
                    let (prev, pt) = parent[node].unwrap();
                    cycle.push(pt);
                    node = prev;
                }
                cycle.reverse();
                return Some(cycle);
            }
            let k = idx(v, fv);
            if !seen[k] {
                seen[k] = true;
                parent[k] = Some((idx(s, f), t));
                queue.push_back((v, fv));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_accepting_self_loop() {
        let mut a = Buchi::new(true);
        let t = a.add_transition(0, (), 0);
        assert_eq!(find_accepting_lasso(&a), Some(Lasso { prefix: vec![], cycle: vec![t] }));
    }

    #[test]
    fn unreachable_accepting_state() {
        let mut a = Buchi::new(false);
        let s = a.add_state(true);
        a.add_transition(0, (), 0);
        a.add_transition(s, (), s);
        assert_eq!(find_accepting_lasso(&a), None);
    }

    /// Exhaustive oracle: enumerate every (prefix, cycle) transition sequence
    /// up to a total length bound and keep the lexicographically smallest
    /// (|prefix|, |cycle|) valid lasso.
    fn brute_force<L>(a: &Buchi<L>, bound: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let mut paths: Vec<Vec<TransId>> = vec![vec![]];
        for _ in 0..bound {
            let mut next = Vec::new();
            for p in &paths {
                let at = p.last().map_or(a.initial(), |&t| a.transition(t).target);
                for &t in a.outgoing(at) {
                    let mut q = p.clone();
                    q.push(t);
                    next.push(q);
                }
            }
            for p in &next {
                for split in 0..p.len() {
                    let l = Lasso { prefix: p[..split].to_vec(), cycle: p[split..].to_vec() };
                    if l.is_valid(a) {
                        let key = (split, p.len() - split);
                        if best.is_none_or(|b| key < b) {
                            best = Some(key);
                        }
                    }
                }
            }
            paths = next;
        }
        best
    }

    #[test]
    fn chain_with_accepting_tail_loop() {
        let mut a = Buchi::new(false);
        let b = a.add_state(false);
        let c = a.add_state(true);
        let ab = a.add_transition(0, (), b);
        let bc = a.add_transition(b, (), c);
        let cc = a.add_transition(c, (), c);
        assert_eq!(brute_force(&a, 4), Some((2, 1)));
        assert_eq!(find_accepting_lasso(&a), Some(Lasso { prefix: vec![ab, bc], cycle: vec![cc] }));
    }

    #[test]
    fn cycle_may_start_before_accepting_state() {
        // 0 -> 1 -> 2(acc) -> 1
        let mut a = Buchi::new(false);
        let s1 = a.add_state(false);
        let s2 = a.add_state(true);
        a.add_transition(0, (), s1);
        a.add_transition(s1, (), s2);
        a.add_transition(s2, (), s1);
        let l = find_accepting_lasso(&a).unwrap();
        assert_eq!(brute_force(&a, 5), Some((l.prefix.len(), l.cycle.len())));
        assert_eq!(l.loop_state(&a), s1);
        assert!(l.is_valid(&a));
    }
}

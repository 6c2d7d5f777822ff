//! Removal of insignificant states with witness paths, generic over the label
//! type. Shared by the motion product and the task-and-motion product.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::hash::Hash;
use std::rc::Rc;

use crate::automata::{Buchi, Lasso, StateId, TransId};

#[derive(Debug)]
enum Path {
    Step(TransId),
    Cat(Rc<Path>, Rc<Path>),
}

/// Path of input transitions, concatenated in O(1).
#[derive(Clone, Debug)]
struct Witness {
    path: Rc<Path>,
    len: usize,
}

impl Witness {
    fn step(t: TransId) -> Self {
        Witness { path: Rc::new(Path::Step(t)), len: 1 }
    }

    fn cat(&self, o: &Witness) -> Witness {
        Witness { path: Rc::new(Path::Cat(self.path.clone(), o.path.clone())), len: self.len + o.len }
    }

    fn from_steps(steps: &[TransId]) -> Option<Witness> {
        let mut it = steps.iter().map(|&t| Witness::step(t));
        let first = it.next()?;
        Some(it.fold(first, |acc, w| acc.cat(&w)))
    }

    fn flatten(&self) -> Vec<TransId> {
        let mut out = Vec::with_capacity(self.len);
        let mut stack = vec![&self.path];
        while let Some(p) = stack.pop() {
            match p.as_ref() {
                Path::Step(t) => out.push(*t),
                Path::Cat(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
            }
        }
        out
    }
}

struct Edge<L> {
    src: StateId,
    label: L,
    tgt: StateId,
    witness: Witness,
}

/// Mutable graph over the input states. At most one edge per
/// `(source, label, target)`; the shortest witness wins.
struct Work<L> {
    edges: Vec<Option<Edge<L>>>,
    out: Vec<BTreeSet<usize>>,
    inc: Vec<BTreeSet<usize>>,
    index: HashMap<(StateId, L, StateId), usize>,
    alive: Vec<bool>,
}

impl<L: Clone + Eq + Hash> Work<L> {
    fn new(n: usize) -> Self {
        Work {
            edges: Vec::new(),
            out: vec![BTreeSet::new(); n],
            inc: vec![BTreeSet::new(); n],
            index: HashMap::new(),
            alive: vec![true; n],
        }
    }

    fn edge(&self, e: usize) -> &Edge<L> {
        self.edges[e].as_ref().unwrap()
    }

    fn add(&mut self, src: StateId, label: L, tgt: StateId, witness: Witness) {
        let key = (src, label, tgt);
        if let Some(&e) = self.index.get(&key) {
            let cur = self.edges[e].as_mut().unwrap();
            if witness.len < cur.witness.len {
                cur.witness = witness;
            }
            return;
        }
        let e = self.edges.len();
        self.index.insert(key.clone(), e);
        self.edges.push(Some(Edge { src, label: key.1, tgt, witness }));
        self.out[src].insert(e);
        self.inc[tgt].insert(e);
    }

    fn remove_state(&mut self, p: StateId) {
        let incident: Vec<usize> = self.out[p].iter().chain(&self.inc[p]).copied().collect();
        for e in incident {
            let Some(edge) = self.edges[e].take() else { continue };
            self.out[edge.src].remove(&e);
            self.inc[edge.tgt].remove(&e);
            self.index.remove(&(edge.src, edge.label, edge.tgt));
        }
        self.alive[p] = false;
    }

    /// Edges into `p` from other states, and out of `p` to other states.
    fn neighbours(&self, p: StateId) -> (Vec<usize>, Vec<usize>) {
        let ins = self.inc[p].iter().copied().filter(|&e| self.edge(e).src != p).collect();
        let outs = self.out[p].iter().copied().filter(|&e| self.edge(e).tgt != p).collect();
        (ins, outs)
    }
}

/// Output of [`reduce`]: the reduced automaton plus everything needed to map
/// its runs back to runs of the input automaton.
#[derive(Clone, Debug)]
pub struct Reduction<L> {
    pub automaton: Buchi<L>,
    /// Input state each reduced state stands for.
    pub origin: Vec<StateId>,
    /// Input state -> reduced state, for the states that survived.
    pub state_map: Vec<Option<StateId>>,
    pub significant: Vec<bool>,
    /// Per kept transition: input source, input target, witness.
    kept: Vec<(StateId, StateId, Vec<TransId>)>,
    /// Reduced transition -> kept transitions folded into it.
    members: Vec<Vec<usize>>,
    /// Reduced transition -> the kept transition chosen by the merge.
    chosen: Vec<usize>,
}

/// Expansion of a reduced lasso into a lasso of the input automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub lasso: Lasso,
    /// For each step of `lasso.prefix ++ lasso.cycle`: `Some(k)` if it is the
    /// first step of the witness of reduced step `k`, where `k` indexes
    /// `reduced.prefix ++ reduced.cycle`.
    pub heads: Vec<Option<usize>>,
}

impl<L> Reduction<L> {
    /// Witness of a reduced transition: the input path it abbreviates.
    pub fn witness(&self, t: TransId) -> &[TransId] {
        &self.kept[self.chosen[t]].2
    }

    pub fn num_significant(&self) -> usize {
        self.significant.iter().filter(|&&s| s).count()
    }

    fn expand_steps(
        &self,
        mut cur: StateId,
        steps: &[TransId],
        first_index: usize,
        out: &mut Vec<TransId>,
        heads: &mut Vec<Option<usize>>,
    ) -> StateId {
        for (k, &t) in steps.iter().enumerate() {
            let m = self.members[t]
                .iter()
                .copied()
                .filter(|&m| self.kept[m].0 == cur)
                .min_by_key(|&m| (self.kept[m].2.len(), m))
                .expect("duplicate states share their outgoing transitions");
            let (_, tgt, w) = &self.kept[m];
            out.extend_from_slice(w);
            heads.push(Some(first_index + k));
            heads.extend(std::iter::repeat_n(None, w.len() - 1));
            cur = *tgt;
        }
        cur
    }

    /// Replaces every reduced transition by its witness. When merged
    /// duplicates make one pass of the cycle end in a different input state,
    /// the cycle is unrolled until the start state repeats.
    pub fn expand_lasso(&self, input_initial: StateId, l: &Lasso) -> Expansion {
        let mut prefix = Vec::new();
        let mut heads = Vec::new();
        let mut cur = self.expand_steps(input_initial, &l.prefix, 0, &mut prefix, &mut heads);
        let mut starts: Vec<StateId> = Vec::new();
        let mut rounds: Vec<(Vec<TransId>, Vec<Option<usize>>)> = Vec::new();
        let j = loop {
            if let Some(j) = starts.iter().position(|&s| s == cur) {
                break j;
            }
            starts.push(cur);
            let (mut steps, mut hs) = (Vec::new(), Vec::new());
            cur = self.expand_steps(cur, &l.cycle, l.prefix.len(), &mut steps, &mut hs);
            rounds.push((steps, hs));
        };
        let mut cycle = Vec::new();
        let mut cycle_heads = Vec::new();
        for (k, (steps, hs)) in rounds.into_iter().enumerate() {
            if k < j {
                prefix.extend(steps);
                heads.extend(hs);
            } else {
                cycle.extend(steps);
                cycle_heads.extend(hs);
            }
        }
        heads.extend(cycle_heads);
        Expansion { lasso: Lasso { prefix, cycle }, heads }
    }
}

/// Shortest path from `from` to `to` over `silent`-labeled transitions.
fn silent_path<L: Eq>(a: &Buchi<L>, from: StateId, to: StateId, silent: &L) -> Option<Vec<TransId>> {
    let mut parent: Vec<Option<TransId>> = vec![None; a.num_states()];
    let mut seen = vec![false; a.num_states()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(s) = queue.pop_front() {
        if s == to {
            let mut path = Vec::new();
            let mut at = to;
            while at != from {
                let t = parent[at].unwrap();
                path.push(t);
                at = a.transition(t).source;
            }
            path.reverse();
            return Some(path);
        }
        for &t in a.outgoing(s) {
            let tr = a.transition(t);
            if tr.label == *silent && !seen[tr.target] {
                seen[tr.target] = true;
                parent[tr.target] = Some(t);
                queue.push_back(tr.target);
            }
        }
    }
    None
}

/// Removes insignificant states following the two elimination loops, then
/// prunes states that cannot reach acceptance and merges duplicates.
///
/// Every outgoing transition of an insignificant state must carry `silent`.
/// States are eliminated in ascending id order. Silent self-loops of
/// eliminated non-accepting states are dropped. A silent self-loop of an
/// eliminated accepting state `p` is lifted onto each predecessor `p'` with
/// the witness `p' -> p`, the loop, then the shortest silent path from `p`
/// back to `p'`; if some predecessor has no such path, `p` is kept.
pub fn reduce<L: Clone + Ord + Hash>(a: &Buchi<L>, significant: &[bool], silent: &L) -> Reduction<L> {
    let n = a.num_states();
    assert_eq!(significant.len(), n);
    let mut w = Work::new(n);
    for (i, t) in a.transitions().iter().enumerate() {
        debug_assert!(significant[t.source] || t.label == *silent);
        w.add(t.source, t.label.clone(), t.target, Witness::step(i));
    }

    for p in 0..n {
        if significant[p] || a.is_accepting(p) || p == a.initial() {
            continue;
        }
        let (ins, outs) = w.neighbours(p);
        let mut new = Vec::with_capacity(ins.len() * outs.len());
        for &e1 in &ins {
            for &e2 in &outs {
                let (x, y) = (w.edge(e1), w.edge(e2));
                new.push((x.src, x.label.clone(), y.tgt, x.witness.cat(&y.witness)));
            }
        }
        w.remove_state(p);
        for (s, l, t, wit) in new {
            w.add(s, l, t, wit);
        }
    }

    for p in 0..n {
        if significant[p] || !a.is_accepting(p) || p == a.initial() || !w.alive[p] {
            continue;
        }
        let (ins, outs) = w.neighbours(p);
        if ins.iter().any(|&e| significant[w.edge(e).src]) {
            continue;
        }
        let mut new = Vec::new();
        if let Some(&lp) = w.index.get(&(p, silent.clone(), p)) {
            let mut closable = true;
            for &e in &ins {
                let q = w.edge(e).src;
                match silent_path(a, p, q, silent).and_then(|b| Witness::from_steps(&b)) {
                    Some(back) => {
                        let wit = w.edge(e).witness.cat(&w.edge(lp).witness).cat(&back);
                        new.push((q, silent.clone(), q, wit));
                    }
                    None => {
                        closable = false;
                        break;
                    }
                }
            }
            if !closable {
                continue;
            }
        }
        for &e1 in &ins {
            for &e2 in &outs {
                let (x, y) = (w.edge(e1), w.edge(e2));
                new.push((x.src, silent.clone(), y.tgt, x.witness.cat(&y.witness)));
            }
        }
        w.remove_state(p);
        for (s, l, t, wit) in new {
            w.add(s, l, t, wit);
        }
    }

    // materialize the working graph over the surviving states
    let order: Vec<StateId> = (0..n).filter(|&s| w.alive[s]).collect();
    let mut to_work = vec![None; n];
    let mut work = Buchi::new(a.is_accepting(order[0]));
    to_work[order[0]] = Some(0);
    for &s in &order[1..] {
        to_work[s] = Some(work.add_state(a.is_accepting(s)));
    }
    work.set_initial(to_work[a.initial()].unwrap());
    let mut work_wit = Vec::new();
    for e in w.edges.iter().flatten() {
        work.add_transition(to_work[e.src].unwrap(), e.label.clone(), to_work[e.tgt].unwrap());
        work_wit.push(e.witness.flatten());
    }

    let pruned = work.prune_non_coaccessible();
    let pruned_wit: Vec<&Vec<TransId>> = pruned.trans_origin.iter().map(|&t| &work_wit[t]).collect();
    let merged = pruned.automaton.merge_duplicate_states_by(|t| (pruned_wit[t].len(), t));

    let pa = &pruned.automaton;
    let kept_states: Vec<StateId> = {
        let mut v = vec![0; pa.num_states()];
        for (ws, ps) in pruned.state_map.iter().enumerate() {
            if let Some(ps) = ps {
                v[*ps] = order[ws];
            }
        }
        v
    };
    let kept: Vec<(StateId, StateId, Vec<TransId>)> = pa
        .transitions()
        .iter()
        .enumerate()
        .map(|(k, t)| (kept_states[t.source], kept_states[t.target], pruned_wit[k].clone()))
        .collect();

    let r = merged.automaton;
    let mut by_key: HashMap<(StateId, &L, StateId), TransId> = HashMap::new();
    for (i, t) in r.transitions().iter().enumerate() {
        by_key.insert((t.source, &t.label, t.target), i);
    }
    let mut members = vec![Vec::new(); r.num_transitions()];
    for (k, t) in pa.transitions().iter().enumerate() {
        let key = (
            merged.state_map[t.source].unwrap(),
            &t.label,
            merged.state_map[t.target].unwrap(),
        );
        members[by_key[&key]].push(k);
    }
    let chosen = merged.trans_origin.clone();

    let mut state_map = vec![None; n];
    let mut origin = vec![usize::MAX; r.num_states()];
    for (ps, &input) in kept_states.iter().enumerate() {
        let rs = merged.state_map[ps].unwrap();
        state_map[input] = Some(rs);
        if origin[rs] == usize::MAX || input == a.initial() {
            origin[rs] = input;
        }
    }
    Reduction {
        automaton: r,
        origin,
        state_map,
        significant: significant.to_vec(),
        kept,
        members,
        chosen,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{find_accepting_lasso, Label};
    use crate::symbols::SymSet;

    const E: Label = Label::Silent(0);

    fn load() -> Label {
        Label::Services(SymSet(1))
    }

    fn classify(a: &Buchi<Label>) -> Vec<bool> {
        (0..a.num_states())
            .map(|s| s == a.initial() || a.outgoing(s).iter().any(|&t| !a.transition(t).label.is_silent()))
            .collect()
    }

    #[test]
    fn chain_of_insignificant_states_is_bypassed() {
        // p0 -load-> p1 -e-> p2 -e-> p3(acc) -load-> p3
        let mut a = Buchi::new(false);
        let p1 = a.add_state(false);
        let p2 = a.add_state(false);
        let p3 = a.add_state(true);
        let t01 = a.add_transition(0, load(), p1);
        let t12 = a.add_transition(p1, E, p2);
        let t23 = a.add_transition(p2, E, p3);
        a.add_transition(p3, load(), p3);
        let r = reduce(&a, &classify(&a), &E);
        assert_eq!(r.automaton.num_states(), 2);
        let bypass = r
            .automaton
            .transitions()
            .iter()
            .position(|t| t.source == 0 && t.target == r.state_map[p3].unwrap())
            .unwrap();
        assert_eq!(r.automaton.transition(bypass).label, load());
        assert_eq!(r.witness(bypass), &[t01, t12, t23]);
    }

    #[test]
    fn all_significant_is_identity() {
        let mut a = Buchi::new(false);
        let s = a.add_state(true);
        a.add_transition(0, load(), s);
        a.add_transition(s, load(), 0);
        let r = reduce(&a, &classify(&a), &E);
        assert_eq!(r.automaton.num_states(), 2);
        assert_eq!(r.automaton.num_transitions(), 2);
    }

    #[test]
    fn accepting_self_loop_is_lifted() {
        // 0 -load-> p'(acc) -e-> p(acc) -e-> p, and p -e-> p'
        let mut a = Buchi::new(false);
        let q = a.add_state(true);
        let p = a.add_state(true);
        a.add_transition(0, load(), q);
        let tqp = a.add_transition(q, E, p);
        let tpp = a.add_transition(p, E, p);
        let tpq = a.add_transition(p, E, q);
        let sig = classify(&a);
        assert!(!sig[q] && !sig[p]);
        let r = reduce(&a, &sig, &E);
        assert_eq!(r.state_map[p], None);
        let rq = r.state_map[q].unwrap();
        let lifted = r
            .automaton
            .transitions()
            .iter()
            .position(|t| t.source == rq && t.target == rq)
            .unwrap();
        // the bypass q -> p -> q is shorter than the lifted loop and wins
        assert_eq!(r.witness(lifted), &[tqp, tpq]);
        let l = find_accepting_lasso(&r.automaton).unwrap();
        let x = r.expand_lasso(a.initial(), &l);
        assert!(x.lasso.is_valid(&a));
        assert!(x.lasso.cycle.iter().all(|&t| [tqp, tpp, tpq].contains(&t)));
    }

    #[test]
    fn accepting_state_without_way_back_is_kept() {
        // 0 -load-> q(acc) -e-> p(acc) -e-> p; nothing leads from p back to q
        let mut a = Buchi::new(false);
        let q = a.add_state(true);
        let p = a.add_state(true);
        a.add_transition(0, load(), q);
        a.add_transition(q, E, p);
        a.add_transition(p, E, p);
        let r = reduce(&a, &classify(&a), &E);
        assert!(r.state_map[p].is_some());
        let l = find_accepting_lasso(&r.automaton).unwrap();
        assert!(r.expand_lasso(a.initial(), &l).lasso.is_valid(&a));
    }

    #[test]
    fn merged_duplicates_expand_into_closed_cycles() {
        // 0 -load-> a(acc), 0 -load-> b(acc), a -load-> 0, b -load-> 0:
        // a and b merge; every expansion must still be a valid lasso
        let mut a = Buchi::new(false);
        let x = a.add_state(true);
        let y = a.add_state(true);
        a.add_transition(0, load(), x);
        a.add_transition(0, load(), y);
        a.add_transition(x, load(), 0);
        a.add_transition(y, load(), 0);
        let r = reduce(&a, &classify(&a), &E);
        assert_eq!(r.automaton.num_states(), 2);
        let l = find_accepting_lasso(&r.automaton).unwrap();
        let ex = r.expand_lasso(a.initial(), &l);
        assert!(ex.lasso.is_valid(&a));
        assert_eq!(ex.heads.len(), ex.lasso.prefix.len() + ex.lasso.cycle.len());
    }
}

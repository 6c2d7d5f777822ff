//! Motion product of an agent's transition system with its motion
//! specification automaton, and its reduction.

mod reduce;

use std::collections::{HashMap, HashSet, VecDeque};

pub use reduce::{reduce, Expansion, Reduction};

use crate::agents::{ActionId, AgentModel, TsState};
use crate::automata::{Buchi, Label, StateId};
use crate::logic::Guard;

#[derive(Clone, Debug)]
pub struct MotionProduct {
    pub automaton: Buchi<Label>,
    /// Product state -> (TS state, specification state).
    pub states: Vec<(TsState, StateId)>,
    /// Product transition -> TS action.
    pub actions: Vec<ActionId>,
}

/// Reachable fragment of the motion product: `((s,q), L(a), (s',q'))` for
/// every TS edge `(s,a,s')` and specification transition `(q,g,q')` whose
/// guard holds on the label of `s`.
pub fn build_motion_product(agent: &AgentModel, spec: &Buchi<Guard>) -> MotionProduct {
    let ts = &agent.ts;
    let init = (ts.initial, spec.initial());
    let mut index: HashMap<(TsState, StateId), StateId> = HashMap::from([(init, 0)]);
    let mut states = vec![init];
    let mut automaton = Buchi::new(spec.is_accepting(init.1));
    let mut actions = Vec::new();
    let mut seen: HashSet<(StateId, ActionId, StateId)> = HashSet::new();
    let mut queue = VecDeque::from([0]);
    while let Some(p) = queue.pop_front() {
        let (s, q) = states[p];
        let label = ts.label(s);
        for e in ts.edges_from(s) {
            for &t in spec.outgoing(q) {
                let bt = spec.transition(t);
                if !bt.label.matches(label) {
                    continue;
                }
                let key = (e.target, bt.target);
                let target = *index.entry(key).or_insert_with(|| {
                    states.push(key);
                    queue.push_back(states.len() - 1);
                    automaton.add_state(spec.is_accepting(bt.target))
                });
                if seen.insert((p, e.action, target)) {
                    automaton.add_transition(p, agent.label_of(e.action), target);
                    actions.push(e.action);
                }
            }
        }
    }
    MotionProduct { automaton, states, actions }
}

/// A state is significant iff it is initial or has a non-silent outgoing
/// transition.
pub fn classify_significance<L>(a: &Buchi<L>, is_silent: impl Fn(&L) -> bool) -> Vec<bool> {
    (0..a.num_states())
        .map(|s| s == a.initial() || a.outgoing(s).iter().any(|&t| !is_silent(&a.transition(t).label)))
        .collect()
}

/// Reduced motion product.
pub fn reduce_motion(p: &MotionProduct, agent: usize) -> Reduction<Label> {
    let sig = classify_significance(&p.automaton, Label::is_silent);
    reduce(&p.automaton, &sig, &Label::Silent(agent))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::{build_grid_agent, GridSpec, Room, ServiceCell};
    use crate::automata::find_accepting_lasso;
    use crate::logic::{parse, translate};
    use crate::symbols::Alphabet;

    fn agent(w: usize, h: usize, rooms: Vec<Room>, cells: Vec<ServiceCell>) -> AgentModel {
        let g = GridSpec {
            width: w,
            height: h,
            obstacles: vec![],
            walls: vec![],
            one_way: vec![],
            rooms,
            service_cells: cells,
            initial: [0, 0],
        };
        build_grid_agent("a", 0, &g, &Alphabet::new(["load"]).unwrap()).unwrap()
    }

    fn spec(a: &AgentModel, f: &str) -> Buchi<Guard> {
        translate(&parse(f, &a.ts.props).unwrap(), &a.ts.props).unwrap()
    }

    #[test]
    fn single_state_times_true() {
        let a = agent(1, 1, vec![], vec![]);
        let p = build_motion_product(&a, &spec(&a, "true"));
        assert_eq!(p.automaton.num_states(), 1);
        assert_eq!(p.automaton.transitions()[0].label, Label::Silent(0));
        assert!(p.automaton.is_accepting(0));
    }

    #[test]
    fn starting_inside_forbidden_room_is_empty() {
        let r1 = Room { name: "R1".into(), from: [0, 0], to: [0, 0] };
        let a = agent(2, 1, vec![r1], vec![]);
        let p = build_motion_product(&a, &spec(&a, "G !R1"));
        assert!(find_accepting_lasso(&p.automaton).is_none());
    }

    #[test]
    fn size_is_bounded_by_product() {
        let r1 = Room { name: "R1".into(), from: [2, 2], to: [3, 3] };
        let a = agent(4, 4, vec![r1], vec![]);
        let b = spec(&a, "G F R1");
        let p = build_motion_product(&a, &b);
        assert!(p.automaton.num_states() <= a.ts.num_states() * b.num_states());
        assert_eq!(p.actions.len(), p.automaton.num_transitions());
    }

    #[test]
    fn significance_clauses() {
        let cell = ServiceCell { cell: [2, 0], services: vec!["load".into()] };
        let a = agent(3, 1, vec![], vec![cell]);
        let p = build_motion_product(&a, &spec(&a, "true"));
        let sig = classify_significance(&p.automaton, Label::is_silent);
        let at = |x: usize| p.states.iter().position(|&(s, _)| a.ts.state_name(s) == format!("c{x}_0")).unwrap();
        assert!(sig[at(0)], "initial");
        assert!(!sig[at(1)], "only silent moves");
        assert!(sig[at(2)], "load");
    }

    #[test]
    fn reduction_keeps_service_cells() {
        let cell = ServiceCell { cell: [4, 4], services: vec!["load".into()] };
        let a = agent(5, 5, vec![], vec![cell]);
        let p = build_motion_product(&a, &spec(&a, "true"));
        let r = reduce_motion(&p, 0);
        // every cell is accepting under `true`: the two service-free neighbours
        // of each significant cell have a significant predecessor and stay
        assert_eq!(r.automaton.num_states(), 6);
        assert_eq!(r.num_significant(), 2);
        let l = find_accepting_lasso(&r.automaton).unwrap();
        let x = r.expand_lasso(p.automaton.initial(), &l);
        assert!(x.lasso.is_valid(&p.automaton));
    }
}

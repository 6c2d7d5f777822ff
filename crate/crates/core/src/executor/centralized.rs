use std::collections::{HashSet, VecDeque};

use itertools::Itertools;
use serde::Serialize;

use crate::agents::{AgentModel, Scenario};
use crate::automata::Buchi;
use crate::logic::{translate, Guard, TranslateError};
use crate::symbols::SymSet;

/// Size of the centralized baseline: one synchronized transition system for
/// the whole team, intersected with every formula's automaton.
#[derive(Clone, Debug, Serialize)]
pub struct CentralizedReport {
    /// `|S_1| * ... * |S_N|`.
    pub ts_bound: u128,
    /// Product of the per-agent reachable state counts.
    pub ts_reachable: u128,
    /// Automaton sizes, motion formulas first, then task formulas.
    pub ba_sizes: Vec<usize>,
    /// Formulas whose automaton has a non-accepting state; only these need
    /// a slot in the intersection counter.
    pub nontrivial: usize,
    /// `ts_bound * prod(ba_sizes) * (nontrivial + 1)`.
    pub estimate: u128,
    pub estimate_formula: String,
    /// The same bound with the counter factor `2N + 1`.
    pub coarse_estimate: u128,
    /// Reachable states of the materialized product, when it fits the cap.
    pub materialized: Option<usize>,
}

pub const DEFAULT_CAP: u128 = 2_000_000;

pub fn estimate_centralized(sc: &Scenario, cap: u128) -> Result<CentralizedReport, TranslateError> {
    let n = sc.len();
    let mut bas: Vec<Buchi<Guard>> = Vec::new();
    for (a, phi) in sc.agents.iter().zip(&sc.motion) {
        bas.push(translate(phi, &a.ts.props)?);
    }
    for psi in &sc.task {
        bas.push(translate(psi, &sc.services)?);
    }
    let ba_sizes: Vec<usize> = bas.iter().map(Buchi::num_states).collect();
    let nontrivial = bas.iter().filter(|b| (0..b.num_states()).any(|s| !b.is_accepting(s))).count();
    let ts_bound: u128 = sc.agents.iter().map(|a| a.ts.num_states() as u128).product();
    let ts_reachable: u128 = sc.agents.iter().map(|a| reachable(a) as u128).product();
    let ba: u128 = ba_sizes.iter().map(|&s| s as u128).product();
    let estimate = ts_bound * ba * (nontrivial as u128 + 1);
    let coarse_estimate = ts_bound * ba * (2 * n as u128 + 1);
    let estimate_formula = format!("{ts_bound} * {} * ({nontrivial} + 1)", ba_sizes.iter().join("*"));
    let materialized = (estimate <= cap).then(|| materialize(sc, &bas, cap as usize));
    Ok(CentralizedReport {
        ts_bound,
        ts_reachable,
        ba_sizes,
        nontrivial,
        estimate,
        estimate_formula,
        coarse_estimate,
        materialized,
    })
}

fn reachable(a: &AgentModel) -> usize {
    let mut seen = HashSet::from([a.ts.initial]);
    let mut queue = VecDeque::from([a.ts.initial]);
    while let Some(s) = queue.pop_front() {
        for e in a.ts.edges_from(s) {
            if seen.insert(e.target) {
                queue.push_back(e.target);
            }
        }
    }
    seen.len()
}

/// Reachable states of the synchronized product: all agents move at once,
/// motion automata read the current state labels, task automata read the
/// union of the services of the joint action (and stutter if it is silent),
/// and a counter cycles through the nontrivial automata.
fn materialize(sc: &Scenario, bas: &[Buchi<Guard>], cap: usize) -> usize {
    let n = sc.len();
    let nontrivial: Vec<usize> =
        (0..bas.len()).filter(|&k| (0..bas[k].num_states()).any(|s| !bas[k].is_accepting(s))).collect();
    let init: Vec<usize> = sc
        .agents
        .iter()
        .map(|a| a.ts.initial)
        .chain(bas.iter().map(Buchi::initial))
        .chain([0])
        .collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::from([init.clone()]);
    let mut queue = VecDeque::from([init]);
    while let Some(st) = queue.pop_front() {
        if seen.len() >= cap {
            break;
        }
        let joint: Vec<Vec<(usize, Option<SymSet>)>> = (0..n)
            .map(|i| {
                let a = &sc.agents[i];
                a.ts.edges_from(st[i]).map(|e| (e.target, a.label_of(e.action).services())).collect()
            })
            .collect();
        let mut choice = vec![0usize; n];
        'joint: loop {
            if joint.iter().any(Vec::is_empty) {
                break;
            }
            let sigma: Option<SymSet> = choice
                .iter()
                .enumerate()
                .filter_map(|(i, &c)| joint[i][c].1)
                .reduce(SymSet::union);
            // successor automaton states per formula
            let mut options: Vec<Vec<usize>> = Vec::with_capacity(bas.len());
            for (k, b) in bas.iter().enumerate() {
                let q = st[n + k];
                let targets: Vec<usize> = if k < n {
                    let l = sc.agents[k].ts.label(st[k]);
                    b.outgoing(q).iter().map(|&t| b.transition(t)).filter(|t| t.label.matches(l)).map(|t| t.target).collect()
                } else {
                    match sigma {
                        None => vec![q],
                        Some(s) => b
                            .outgoing(q)
                            .iter()
                            .map(|&t| b.transition(t))
                            .filter(|t| t.label.matches(s))
                            .map(|t| t.target)
                            .collect(),
                    }
                };
                options.push(targets);
            }
            if options.iter().all(|o| !o.is_empty()) {
                let counter = st[n + bas.len()];
                let mut pick = vec![0usize; bas.len()];
                loop {
                    let mut next: Vec<usize> = (0..n).map(|i| joint[i][choice[i]].0).collect();
                    next.extend(pick.iter().enumerate().map(|(k, &p)| options[k][p]));
                    let c = match nontrivial.get(counter) {
                        Some(&k) if bas[k].is_accepting(next[n + k]) => (counter + 1) % (nontrivial.len() + 1),
                        None => 0,
                        _ => counter,
                    };
                    next.push(c);
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                        if seen.len() >= cap {
                            break 'joint;
                        }
                    }
                    if !advance(&mut pick, |k| options[k].len()) {
                        break;
                    }
                }
            }
            if !advance(&mut choice, |i| joint[i].len()) {
                break;
            }
        }
    }
    seen.len()
}

/// Odometer increment; false once every combination was produced.
fn advance(v: &mut [usize], len: impl Fn(usize) -> usize) -> bool {
    for k in 0..v.len() {
        v[k] += 1;
        if v[k] < len(k) {
            return true;
        }
        v[k] = 0;
    }
    false
}

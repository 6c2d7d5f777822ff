use serde::{Deserialize, Serialize};

use super::GlobalProduct;
use crate::agents::{ActionId, Coalition, Scenario, TsState};
use crate::automata::{Label, Lasso, TransId};
use crate::motion::{MotionProduct, Reduction};
use crate::taskprod::{ReducedTaskMotion, TaskMotionProduct};

/// Every intermediate automaton built for one agent.
#[derive(Clone, Debug)]
pub struct AgentStages {
    pub motion: MotionProduct,
    pub reduced_motion: Reduction<Label>,
    pub task: TaskMotionProduct,
    pub reduced_task: ReducedTaskMotion,
}

/// One step of a strategy: at `state`, request synchronization with `sync`,
/// then execute `action`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub state: TsState,
    pub action: ActionId,
    pub sync: Coalition,
}

/// Trace and synchronization sequence of one agent, as prefix and cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    pub agent: usize,
    pub prefix: Vec<Step>,
    pub cycle: Vec<Step>,
}

impl Strategy {
    pub fn steps(&self) -> impl Iterator<Item = &Step> {
        self.prefix.iter().chain(&self.cycle)
    }

    /// Step `j` of the infinite unrolling.
    pub fn step(&self, j: usize) -> &Step {
        if j < self.prefix.len() {
            &self.prefix[j]
        } else {
            &self.cycle[(j - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Checks that consecutive steps follow the agent's transition system,
    /// starting at its initial state, and that the cycle closes.
    pub fn is_valid(&self, sc: &Scenario) -> bool {
        let a = &sc.agents[self.agent];
        if self.cycle.is_empty() || self.steps().any(|s| !s.sync.contains(self.agent)) {
            return false;
        }
        let mut at = a.ts.initial;
        for s in self.steps() {
            if s.state != at {
                return false;
            }
            match a.ts.successor(s.state, s.action) {
                Some(n) => at = n,
                None => return false,
            }
        }
        at == self.cycle[0].state
    }
}

/// A run with one synchronization request per step.
struct SyncRun {
    lasso: Lasso,
    sync: Vec<Coalition>,
}

impl SyncRun {
    /// Expands through `heads`: a head step takes the request of the reduced
    /// step it comes from, any other step gets the singleton request.
    fn expand(&self, lasso: Lasso, heads: &[Option<usize>], alone: Coalition) -> SyncRun {
        let sync = heads.iter().map(|h| h.map_or(alone, |k| self.sync[k])).collect();
        SyncRun { lasso, sync }
    }
}

/// Projects an accepting lasso of the global product onto every member and
/// expands it stage by stage down to the agents' transition systems.
pub fn synthesize(gp: &GlobalProduct, lasso: &Lasso, stages: &[&AgentStages]) -> Vec<Strategy> {
    gp.members
        .iter()
        .enumerate()
        .map(|(k, &agent)| {
            let st = stages[k];
            let alone = Coalition::singleton(agent);
            // (i) steps of the global run this agent takes part in
            let project = |ts: &[TransId]| -> (Vec<TransId>, Vec<Coalition>) {
                ts.iter()
                    .filter(|&&t| gp.dep[t].contains(agent))
                    .map(|&t| {
                        let &(_, lt) = gp.moves[t].iter().find(|&&(m, _)| m == k).expect("members move");
                        (lt, gp.dep[t])
                    })
                    .unzip()
            };
            let (prefix, mut sync) = project(&lasso.prefix);
            let (cycle, cs) = project(&lasso.cycle);
            assert!(!cycle.is_empty(), "every member moves on the accepting cycle");
            sync.extend(cs);
            let hat = SyncRun { lasso: Lasso { prefix, cycle }, sync };

            // (ii) through the witnesses of the second reduction
            let x = st.reduced_task.reduction.expand_lasso(st.task.automaton.initial(), &hat.lasso);
            let bar = hat.expand(x.lasso, &x.heads, alone);

            // (iii) drop the task component
            let to_motion = |ts: &[TransId]| ts.iter().map(|&t| st.task.motion_trans[t]).collect();
            let ddot = SyncRun {
                lasso: Lasso { prefix: to_motion(&bar.lasso.prefix), cycle: to_motion(&bar.lasso.cycle) },
                sync: bar.sync,
            };

            // (iv) through the witnesses of the first reduction
            let x = st.reduced_motion.expand_lasso(st.motion.automaton.initial(), &ddot.lasso);
            let full = ddot.expand(x.lasso, &x.heads, alone);

            // (v) project onto the transition system
            let p = &st.motion;
            let mut steps = full.lasso.prefix.iter().chain(&full.lasso.cycle).zip(&full.sync).map(|(&t, &sync)| {
                Step { state: p.states[p.automaton.transition(t).source].0, action: p.actions[t], sync }
            });
            let prefix: Vec<Step> = steps.by_ref().take(full.lasso.prefix.len()).collect();
            Strategy { agent, prefix, cycle: steps.collect() }
        })
        .collect()
}

/// Drops `stay` steps that carry a singleton request, and downgrades to
/// singletons the requests of a coalition whose barriers are silent for
/// every member. A cycle made only of removable stays keeps one of them.
pub fn minimize_synchronizations(strategies: &[Strategy], sc: &Scenario) -> Vec<Strategy> {
    let downgraded = downgrade_silent_barriers(strategies, sc);
    downgraded
        .into_iter()
        .map(|s| {
            let a = &sc.agents[s.agent];
            let keep = |st: &Step| !(st.action == a.stay && st.sync.is_singleton());
            let prefix: Vec<Step> = s.prefix.iter().copied().filter(keep).collect();
            let mut cycle: Vec<Step> = s.cycle.iter().copied().filter(keep).collect();
            if cycle.is_empty() {
                cycle.push(s.cycle[0]);
            }
            Strategy { agent: s.agent, prefix, cycle }
        })
        .collect()
}

/// Positions in `prefix ++ cycle` of the requests for `coalition`, split
/// into prefix and cycle.
fn occurrences(s: &Strategy, coalition: Coalition) -> (Vec<usize>, Vec<usize>) {
    let pos = |v: &[Step], off: usize| -> Vec<usize> {
        v.iter().enumerate().filter(|(_, st)| st.sync == coalition).map(|(j, _)| j + off).collect()
    };
    (pos(&s.prefix, 0), pos(&s.cycle, s.prefix.len()))
}

fn downgrade_silent_barriers(strategies: &[Strategy], sc: &Scenario) -> Vec<Strategy> {
    let mut out = strategies.to_vec();
    let by_agent = |i: usize| strategies.iter().position(|s| s.agent == i);
    let mut coalitions: Vec<Coalition> =
        strategies.iter().flat_map(|s| s.steps().map(|st| st.sync)).filter(|c| !c.is_singleton()).collect();
    coalitions.sort_unstable();
    coalitions.dedup();
    for c in coalitions {
        let idx: Vec<usize> = match c.iter().map(by_agent).collect::<Option<Vec<_>>>() {
            Some(v) => v,
            None => continue,
        };
        let occ: Vec<(Vec<usize>, Vec<usize>)> = idx.iter().map(|&k| occurrences(&strategies[k], c)).collect();
        if occ.iter().any(|(_, cyc)| cyc.is_empty()) {
            continue;
        }
        // the n-th requests of all members form one barrier; the pattern is
        // periodic after the longest prefix, with the lcm of cycle counts
        let lcm = occ.iter().fold(1usize, |acc, (_, cyc)| lcm(acc, cyc.len()));
        let horizon = occ.iter().map(|(p, _)| p.len()).max().unwrap() + lcm;
        let nth = |m: usize, n: usize| -> usize {
            let (p, cyc) = &occ[m];
            if n < p.len() { p[n] } else { cyc[(n - p.len()) % cyc.len()] }
        };
        let silent_at = |m: usize, pos: usize| {
            let s = &strategies[idx[m]];
            let step = if pos < s.prefix.len() { s.prefix[pos] } else { s.cycle[pos - s.prefix.len()] };
            sc.agents[s.agent].label_of(step.action).is_silent()
        };
        // downgrading only some barriers of a coalition could shift the
        // matching of the remaining ones, so it is all or nothing
        if (0..horizon).all(|n| (0..idx.len()).all(|m| silent_at(m, nth(m, n)))) {
            for &k in &idx {
                let s = &mut out[k];
                let agent = s.agent;
                for step in s.prefix.iter_mut().chain(s.cycle.iter_mut()) {
                    if step.sync == c {
                        step.sync = Coalition::singleton(agent);
                    }
                }
            }
        }
    }
    out
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    a / gcd(a, b) * b
}

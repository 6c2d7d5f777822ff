//! End-to-end synthesis: specification automata, per-agent products and
//! reductions, global product, strategies.

use std::time::{Duration, Instant};

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::agents::{validate, Diagnostic, Scenario};
use crate::automata::{find_accepting_lasso, Lasso};
use crate::executor::{estimate_centralized, CentralizedReport};
use crate::global::{
    build_global_product, compute_dependency_classes, find_global_lasso, minimize_synchronizations, synthesize,
    AgentStages, GlobalProduct, Strategy,
};
use crate::logic::{translate, TranslateError};
use crate::motion::{build_motion_product, reduce_motion};
use crate::taskprod::{
    build_task_motion_product, compute_dep, compute_globally_assisting, reduce_task_motion, TaskMotionProduct,
};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid scenario:\n{}", .0.iter().map(|d| format!("  {d}")).join("\n"))]
    Invalid(Vec<Diagnostic>),
    #[error("agent {agent}: {which} formula: {err}")]
    Translate { agent: String, which: &'static str, err: TranslateError },
    #[error("agent {agent}: the {stage} has no accepting run")]
    Empty { agent: String, stage: &'static str },
    #[error("the global product of agents {0} has no accepting run")]
    EmptyGlobal(String),
}

impl PipelineError {
    /// True for errors that mean the specification cannot be met.
    pub fn is_emptiness(&self) -> bool {
        matches!(self, PipelineError::Empty { .. } | PipelineError::EmptyGlobal(_))
    }
}

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    /// Build one global product per dependency class instead of one for the
    /// whole team.
    pub per_class: bool,
    /// Materialization budget of the centralized estimate; `None` skips it.
    pub centralized_cap: Option<u128>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { per_class: false, centralized_cap: Some(crate::executor::DEFAULT_CAP) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AgentStats {
    pub name: String,
    pub ts_states: usize,
    pub motion_ba: usize,
    pub task_ba: usize,
    pub motion_product: usize,
    pub reduced_motion: usize,
    pub task_product: usize,
    pub reduced_task: usize,
    pub globally_assisting: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineStats {
    pub agents: Vec<AgentStats>,
    pub classes: Vec<Vec<String>>,
    /// Reachable states of each global product built.
    pub global_states: Vec<usize>,
    /// The acceptance of some global product fell back to the counter
    /// wrap-around.
    pub fallback: bool,
    pub centralized: Option<CentralizedReport>,
    /// Centralized estimate over the total global product size.
    pub reduction_ratio: Option<f64>,
    #[serde(serialize_with = "secs")]
    pub elapsed: Duration,
}

fn secs<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl PipelineStats {
    pub fn global_total(&self) -> usize {
        self.global_states.iter().sum()
    }
}

#[derive(Clone, Debug)]
pub struct Synthesis {
    pub stages: Vec<AgentStages>,
    pub products: Vec<GlobalProduct>,
    pub lassos: Vec<Lasso>,
    /// Strategies as extracted from the global runs.
    pub raw: Vec<Strategy>,
    /// Strategies after removing unneeded synchronizations and stays.
    pub strategies: Vec<Strategy>,
    pub stats: PipelineStats,
}

pub fn run_pipeline(sc: &Scenario, opts: &PipelineOptions) -> Result<Synthesis, PipelineError> {
    let start = Instant::now();
    let diags = validate(sc);
    if !diags.is_empty() {
        return Err(PipelineError::Invalid(diags));
    }
    let mut owners = vec![None; sc.services.len()];
    for a in &sc.agents {
        for s in a.services.iter() {
            owners[s] = Some(a.index);
        }
    }

    let mut partial = Vec::new();
    let mut tms: Vec<TaskMotionProduct> = Vec::new();
    let mut sizes = Vec::new();
    for (i, a) in sc.agents.iter().enumerate() {
        let err = |which, err| PipelineError::Translate { agent: a.name.clone(), which, err };
        let empty = |stage| PipelineError::Empty { agent: a.name.clone(), stage };
        let phi = translate(&sc.motion[i], &a.ts.props).map_err(|e| err("motion", e))?;
        let psi = translate(&sc.task[i], &sc.services).map_err(|e| err("task", e))?;
        let motion = build_motion_product(a, &phi);
        if find_accepting_lasso(&motion.automaton).is_none() {
            return Err(empty("motion product"));
        }
        let reduced_motion = reduce_motion(&motion, i);
        let mut tm = build_task_motion_product(i, a.services, &reduced_motion.automaton, &sc.task[i], &psi, &sc.services);
        if find_accepting_lasso(&tm.automaton).is_none() {
            return Err(empty("task-and-motion product"));
        }
        compute_dep(&mut tm, &owners);
        sizes.push((phi.num_states(), psi.num_states()));
        partial.push((motion, reduced_motion));
        tms.push(tm);
    }
    let globally = compute_globally_assisting(&tms);
    let stages: Vec<AgentStages> = partial
        .into_iter()
        .zip(&tms)
        .map(|((motion, reduced_motion), tm)| AgentStages {
            motion,
            reduced_motion,
            task: tm.clone(),
            reduced_task: reduce_task_motion(tm, &globally),
        })
        .collect();
    for (st, a) in stages.iter().zip(&sc.agents) {
        if find_accepting_lasso(st.reduced_task.automaton()).is_none() {
            return Err(PipelineError::Empty { agent: a.name.clone(), stage: "reduced task-and-motion product" });
        }
    }

    let classes = compute_dependency_classes(&tms);
    let groups: Vec<Vec<usize>> = if opts.per_class { classes.clone() } else { vec![(0..sc.len()).collect()] };
    let names = |g: &[usize]| g.iter().map(|&i| sc.agents[i].name.clone()).collect::<Vec<_>>();
    let mut products = Vec::new();
    let mut lassos = Vec::new();
    let mut raw = Vec::new();
    let mut fallback = false;
    for g in &groups {
        let reduced: Vec<_> = g.iter().map(|&i| stages[i].reduced_task.clone()).collect();
        let gp = build_global_product(&reduced);
        let (lasso, fb) = find_global_lasso(&gp).ok_or_else(|| PipelineError::EmptyGlobal(names(g).join(",")))?;
        fallback |= fb;
        let members: Vec<&AgentStages> = g.iter().map(|&i| &stages[i]).collect();
        raw.extend(synthesize(&gp, &lasso, &members));
        products.push(gp);
        lassos.push(lasso);
    }
    raw.sort_by_key(|s| s.agent);
    let strategies = minimize_synchronizations(&raw, sc);

    let centralized = match opts.centralized_cap {
        Some(cap) => Some(estimate_centralized(sc, cap).map_err(|err| PipelineError::Translate {
            agent: "team".into(),
            which: "centralized",
            err,
        })?),
        None => None,
    };
    let global_states: Vec<usize> = products.iter().map(|p| p.automaton.num_states()).collect();
    let total: usize = global_states.iter().sum();
    let reduction_ratio = centralized.as_ref().map(|c| c.estimate as f64 / total as f64);
    let agents = stages
        .iter()
        .zip(&sc.agents)
        .zip(&sizes)
        .map(|((st, a), &(motion_ba, task_ba))| AgentStats {
            name: a.name.clone(),
            ts_states: a.ts.num_states(),
            motion_ba,
            task_ba,
            motion_product: st.motion.automaton.num_states(),
            reduced_motion: st.reduced_motion.automaton.num_states(),
            task_product: st.task.automaton.num_states(),
            reduced_task: st.reduced_task.automaton().num_states(),
            globally_assisting: sc.services.names_of(st.reduced_task.globally_assisting).into_iter().map(String::from).collect(),
        })
        .collect();
    let stats = PipelineStats {
        agents,
        classes: classes.iter().map(|c| names(c)).collect(),
        global_states,
        fallback,
        centralized,
        reduction_ratio,
        elapsed: start.elapsed(),
    };
    Ok(Synthesis { stages, products, lassos, raw, strategies, stats })
}

//! JSON scenario and strategy files.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agents::{
    build_grid_agent, AgentModel, Coalition, GridError, GridSpec, Room, Scenario, TransitionSystem,
};
use crate::automata::Label;
use crate::executor::SimulationConfig;
use crate::global::{Step, Strategy};
use crate::logic::{parse_unchecked, ParseError};
use crate::symbols::{Alphabet, AlphabetError, SymSet};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    /// Room layout shared by grid agents that do not declare their own.
    #[serde(default)]
    pub rooms: Vec<Room>,
    pub agents: Vec<AgentFile>,
    pub motion_formulas: Vec<String>,
    pub task_formulas: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationConfig>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentFile {
    pub id: String,
    pub services: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explicit_ts: Option<ExplicitTs>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitTs {
    pub propositions: Vec<String>,
    pub states: Vec<ExplicitState>,
    pub initial: String,
    /// Actions and their service sets; `null` marks a silent action.
    pub actions: Vec<ExplicitAction>,
    /// `[source, action, target]` triples.
    pub transitions: Vec<[String; 3]>,
    #[serde(default = "default_stay")]
    pub stay_name: String,
}

fn default_stay() -> String {
    "stay".to_string()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitState {
    pub name: String,
    #[serde(default)]
    pub props: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitAction {
    pub name: String,
    pub services: Option<Vec<String>>,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("agent {agent}: {which} formula: {err}")]
    Formula { agent: String, which: &'static str, err: ParseError },
    #[error("agent {0}: exactly one of `grid` and `explicit_ts` is required")]
    Model(String),
    #[error("agent {agent}: {err}")]
    Grid { agent: String, err: GridError },
    #[error("agent {agent}: unknown {kind} `{name}`")]
    Unknown { agent: String, kind: &'static str, name: String },
    #[error("{0}")]
    Alphabet(#[from] AlphabetError),
    #[error("{0} motion formulas and {1} task formulas for {2} agents")]
    Count(usize, usize, usize),
    #[error("strategy file: {0}")]
    Strategy(String),
}

pub fn parse_scenario_file(text: &str) -> Result<ScenarioFile, LoadError> {
    Ok(serde_json::from_str(text)?)
}

pub fn load_scenario(text: &str) -> Result<(Scenario, Option<SimulationConfig>), LoadError> {
    let file = parse_scenario_file(text)?;
    Ok((build_scenario(&file)?, file.simulation))
}

/// Builds the models. Structural problems that [`crate::agents::validate`]
/// can report (overlapping services, undeclared atoms, missing stay loops...)
/// are left for it.
pub fn build_scenario(file: &ScenarioFile) -> Result<Scenario, LoadError> {
    let n = file.agents.len();
    if file.motion_formulas.len() != n || file.task_formulas.len() != n {
        return Err(LoadError::Count(file.motion_formulas.len(), file.task_formulas.len(), n));
    }
    let mut services = Alphabet::default();
    for a in &file.agents {
        for s in &a.services {
            if !services.contains(s) {
                services.push(s.clone())?;
            }
        }
    }
    let mut agents = Vec::new();
    let mut grids = Vec::new();
    for (i, a) in file.agents.iter().enumerate() {
        let declared = services.set_of(a.services.iter().map(String::as_str))?;
        let mut model = match (&a.grid, &a.explicit_ts) {
            (Some(g), None) => {
                let mut g = g.clone();
                if g.rooms.is_empty() {
                    g.rooms = file.rooms.clone();
                }
                let m = build_grid_agent(&a.id, i, &g, &services)
                    .map_err(|err| LoadError::Grid { agent: a.id.clone(), err })?;
                grids.push(Some(g));
                m
            }
            (None, Some(ts)) => {
                grids.push(None);
                build_explicit(&a.id, i, ts, &services)?
            }
            _ => return Err(LoadError::Model(a.id.clone())),
        };
        model.services = declared;
        agents.push(model);
    }
    let formula = |f: &str, agent: &str, which| {
        parse_unchecked(f).map_err(|err| LoadError::Formula { agent: agent.to_string(), which, err })
    };
    let motion = file
        .motion_formulas
        .iter()
        .zip(&file.agents)
        .map(|(f, a)| formula(f, &a.id, "motion"))
        .collect::<Result<_, _>>()?;
    let task = file
        .task_formulas
        .iter()
        .zip(&file.agents)
        .map(|(f, a)| formula(f, &a.id, "task"))
        .collect::<Result<_, _>>()?;
    Ok(Scenario { services, agents, motion, task, grids })
}

fn build_explicit(id: &str, index: usize, f: &ExplicitTs, services: &Alphabet) -> Result<AgentModel, LoadError> {
    let unknown = |kind, name: &str| LoadError::Unknown { agent: id.to_string(), kind, name: name.to_string() };
    let props = Alphabet::new(f.propositions.iter().cloned())?;
    let mut ts = TransitionSystem::new(props.clone());
    for s in &f.states {
        let label = props
            .set_of(s.props.iter().map(String::as_str))
            .map_err(|_| unknown("proposition", s.props.iter().find(|p| !props.contains(p)).unwrap()))?;
        ts.add_state(s.name.clone(), label);
    }
    ts.initial = ts.state_by_name(&f.initial).ok_or_else(|| unknown("state", &f.initial))?;
    let mut action_labels = Vec::new();
    for a in &f.actions {
        ts.action(&a.name);
        action_labels.push(match &a.services {
            None => Label::Silent(index),
            Some(names) => Label::Services(
                services
                    .set_of(names.iter().map(String::as_str))
                    .map_err(|_| unknown("service", names.iter().find(|n| !services.contains(n)).unwrap()))?,
            ),
        });
    }
    for [s, a, t] in &f.transitions {
        let s = ts.state_by_name(s).ok_or_else(|| unknown("state", s))?;
        let a = ts.action_by_name(a).ok_or_else(|| unknown("action", a))?;
        let t = ts.state_by_name(t).ok_or_else(|| unknown("state", t))?;
        ts.add_edge(s, a, t);
    }
    let stay = ts.action_by_name(&f.stay_name).ok_or_else(|| unknown("action", &f.stay_name))?;
    Ok(AgentModel { name: id.to_string(), index, ts, services: SymSet::EMPTY, action_labels, stay })
}

/// Strategy file contents: one entry per agent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyFile {
    pub agent: String,
    pub prefix: Vec<StepRecord>,
    pub cycle: Vec<StepRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepRecord {
    pub state: String,
    pub action: String,
    /// Agent ids of the synchronization request.
    pub sync: Vec<String>,
}

pub fn strategy_to_file(s: &Strategy, sc: &Scenario) -> StrategyFile {
    let a = &sc.agents[s.agent];
    let rec = |st: &Step| StepRecord {
        state: a.ts.state_name(st.state).to_string(),
        action: a.ts.action_name(st.action).to_string(),
        sync: st.sync.iter().map(|i| sc.agents[i].name.clone()).collect(),
    };
    StrategyFile { agent: a.name.clone(), prefix: s.prefix.iter().map(rec).collect(), cycle: s.cycle.iter().map(rec).collect() }
}

pub fn strategy_from_file(f: &StrategyFile, sc: &Scenario) -> Result<Strategy, LoadError> {
    let err = |m: String| LoadError::Strategy(m);
    let by_name: HashMap<&str, usize> = sc.agents.iter().map(|a| (a.name.as_str(), a.index)).collect();
    let agent = *by_name.get(f.agent.as_str()).ok_or_else(|| err(format!("unknown agent {}", f.agent)))?;
    let a = &sc.agents[agent];
    let step = |r: &StepRecord| -> Result<Step, LoadError> {
        let state = a.ts.state_by_name(&r.state).ok_or_else(|| err(format!("unknown state {}", r.state)))?;
        let action = a.ts.action_by_name(&r.action).ok_or_else(|| err(format!("unknown action {}", r.action)))?;
        let mut sync = Coalition::default();
        for n in &r.sync {
            sync = sync.with(*by_name.get(n.as_str()).ok_or_else(|| err(format!("unknown agent {n}")))?);
        }
        Ok(Step { state, action, sync })
    };
    let strategy = Strategy {
        agent,
        prefix: f.prefix.iter().map(step).collect::<Result<_, _>>()?,
        cycle: f.cycle.iter().map(step).collect::<Result<_, _>>()?,
    };
    if !strategy.is_valid(sc) {
        return Err(err(format!("strategy of agent {} is not a valid lasso of its transition system", f.agent)));
    }
    Ok(strategy)
}

pub fn strategies_to_json(ss: &[Strategy], sc: &Scenario) -> String {
    let files: Vec<StrategyFile> = ss.iter().map(|s| strategy_to_file(s, sc)).collect();
    serde_json::to_string_pretty(&files).expect("strategy records serialize")
}

pub fn strategies_from_json(text: &str, sc: &Scenario) -> Result<Vec<Strategy>, LoadError> {
    let files: Vec<StrategyFile> = serde_json::from_str(text)?;
    files.iter().map(|f| strategy_from_file(f, sc)).collect()
}

/// The three-robot warehouse example: 10x10 grids, four rooms, loading in
/// the bottom-left corner and unloading in the bottom-right corner.
pub const WAREHOUSE: &str = include_str!("../scenarios/warehouse.json");

pub fn warehouse() -> Scenario {
    load_scenario(WAREHOUSE).expect("bundled scenario loads").0
}

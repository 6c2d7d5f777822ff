//! Timed asynchronous execution of strategies with barrier synchronization,
//! local words, satisfaction verdicts and the centralized size estimate.

mod centralized;
mod monitor;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use itertools::Itertools;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use centralized::{estimate_centralized, CentralizedReport, DEFAULT_CAP};
pub use monitor::{check_local_satisfaction, extract_local_word, LocalWord, MonitorError, Verdict};

use crate::agents::{ActionId, Coalition, Scenario, TsState};
use crate::global::Strategy;
use crate::symbols::SymSet;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    #[serde(default)]
    pub seed: u64,
    /// Action durations are uniform over `[duration_min, duration_max]` s.
    pub duration_min: f64,
    pub duration_max: f64,
    /// Per-action overrides `[min, max]`, keyed by action name.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub action_durations: BTreeMap<String, [f64; 2]>,
    /// Cycle unrollings to simulate per agent.
    pub unrollings: usize,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig { seed: 0, duration_min: 1.0, duration_max: 5.0, action_durations: BTreeMap::new(), unrollings: 3 }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    Config(String),
    #[error("deadlock: agents {waiting} wait for coalition {coalition} that is never completed")]
    Deadlock { coalition: String, waiting: String },
}

/// One executed step: arrival in `state` at `arrive`, action start at
/// `start`, next arrival at `start + duration`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct TimedStep {
    pub state: TsState,
    pub action: ActionId,
    pub sync: Coalition,
    pub arrive: f64,
    pub start: f64,
    pub duration: f64,
    /// Identity of the action-start event; shared by the members of one
    /// barrier release and unique otherwise.
    pub event: usize,
    /// Services provided by the action, `None` if silent.
    pub services: Option<SymSet>,
}

impl TimedStep {
    pub fn wait(&self) -> f64 {
        self.start - self.arrive
    }
}

/// Timed execution of one agent's strategy.
#[derive(Clone, Debug, PartialEq)]
pub struct Behavior {
    pub agent: usize,
    pub steps: Vec<TimedStep>,
    pub prefix_len: usize,
    pub cycle_len: usize,
}

impl Behavior {
    /// Number of fully executed cycle unrollings.
    pub fn completed_cycles(&self) -> usize {
        (self.steps.len().saturating_sub(self.prefix_len)) / self.cycle_len
    }

    /// Largest deviation from the timing identities: first arrival at 0,
    /// `start - arrive = wait >= 0`, `next arrive - start = duration`.
    pub fn timing_error(&self) -> f64 {
        let mut err = self.steps.first().map_or(0.0, |s| s.arrive.abs());
        for (k, s) in self.steps.iter().enumerate() {
            err = err.max((-s.wait()).max(0.0));
            if let Some(n) = self.steps.get(k + 1) {
                err = err.max((n.arrive - s.start - s.duration).abs());
            }
        }
        err
    }
}

/// A released barrier: its members' arrival times and the release time.
#[derive(Clone, Debug, PartialEq)]
pub struct Barrier {
    pub coalition: Coalition,
    pub event: usize,
    pub release: f64,
    pub arrivals: Vec<(usize, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Simulation {
    pub behaviors: Vec<Behavior>,
    pub barriers: Vec<Barrier>,
}

struct Runner<'a> {
    strategy: &'a Strategy,
    rng: ChaCha8Rng,
    j: usize,
    time: f64,
    /// Barrier this agent waits at: (coalition, occurrence).
    waiting: Option<(Coalition, usize)>,
    counts: HashMap<Coalition, usize>,
    steps: Vec<TimedStep>,
}

/// Discrete-event execution. Each agent runs its strategy; a request for a
/// non-singleton coalition blocks until every member has issued its matching
/// (same occurrence count) request, and the barrier releases at the latest
/// arrival. Agents run `cfg.unrollings` cycles, and further only while a
/// pending barrier needs them.
pub fn simulate(strategies: &[Strategy], sc: &Scenario, cfg: &SimulationConfig) -> Result<Simulation, SimError> {
    let range_ok = |lo: f64, hi: f64| lo >= 0.0 && hi >= lo && hi.is_finite();
    if !range_ok(cfg.duration_min, cfg.duration_max) {
        return Err(SimError::Config("durations need 0 <= min <= max".into()));
    }
    if let Some((name, _)) = cfg.action_durations.iter().find(|(_, r)| !range_ok(r[0], r[1])) {
        return Err(SimError::Config(format!("durations of `{name}` need 0 <= min <= max")));
    }
    if cfg.unrollings < 2 {
        return Err(SimError::Config("at least 2 unrollings are needed".into()));
    }
    let default = Uniform::new_inclusive(cfg.duration_min, cfg.duration_max);
    let overrides: HashMap<&str, Uniform<f64>> =
        cfg.action_durations.iter().map(|(k, r)| (k.as_str(), Uniform::new_inclusive(r[0], r[1]))).collect();
    let mut runners: Vec<Runner> = strategies
        .iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(s.agent as u64);
            Runner { strategy: s, rng, j: 0, time: 0.0, waiting: None, counts: HashMap::new(), steps: Vec::new() }
        })
        .collect();
    let slot: HashMap<usize, usize> = strategies.iter().enumerate().map(|(k, s)| (s.agent, k)).collect();
    let horizon: Vec<usize> = strategies.iter().map(|s| s.prefix.len() + cfg.unrollings * s.cycle.len()).collect();
    let limit: Vec<usize> = horizon.iter().map(|h| 20 * h + 1000).collect();
    let mut pending: HashMap<(Coalition, usize), Vec<(usize, f64)>> = HashMap::new();
    let mut barriers = Vec::new();
    let mut next_event = 0usize;

    let execute = |r: &mut Runner, start: f64, event: usize| {
        let step = *r.strategy.step(r.j);
        let a = &sc.agents[r.strategy.agent];
        let dist = overrides.get(a.ts.action_name(step.action)).unwrap_or(&default);
        let duration = dist.sample(&mut r.rng);
        r.steps.push(TimedStep {
            state: step.state,
            action: step.action,
            sync: step.sync,
            arrive: r.time,
            start,
            duration,
            event,
            services: a.label_of(step.action).services(),
        });
        r.time = start + duration;
        r.j += 1;
    };

    loop {
        let mut progress = false;
        for k in 0..runners.len() {
            loop {
                if let Some(key) = runners[k].waiting {
                    let arrived = &pending[&key];
                    if arrived.len() < key.0.len() {
                        break;
                    }
                    let arrivals = pending.remove(&key).unwrap();
                    let release = arrivals.iter().map(|a| a.1).fold(f64::MIN, f64::max);
                    let event = next_event;
                    next_event += 1;
                    for &(agent, _) in &arrivals {
                        let r = &mut runners[slot[&agent]];
                        r.waiting = None;
                        execute(r, release, event);
                    }
                    barriers.push(Barrier { coalition: key.0, event, release, arrivals });
                    progress = true;
                    continue;
                }
                let r = &runners[k];
                let agent = r.strategy.agent;
                let demanded = pending
                    .iter()
                    .any(|(&(c, n), _)| c.contains(agent) && r.counts.get(&c).copied().unwrap_or(0) <= n);
                if (r.j >= horizon[k] && !demanded) || r.j >= limit[k] {
                    break;
                }
                let sync = r.strategy.step(r.j).sync;
                let r = &mut runners[k];
                if sync.is_singleton() {
                    let (t, e) = (r.time, next_event);
                    next_event += 1;
                    execute(r, t, e);
                } else {
                    if sync.iter().any(|m| !slot.contains_key(&m)) {
                        return Err(SimError::Deadlock {
                            coalition: display(sync, sc),
                            waiting: sc.agents[agent].name.clone(),
                        });
                    }
                    let n = r.counts.entry(sync).or_insert(0);
                    let key = (sync, *n);
                    *n += 1;
                    pending.entry(key).or_default().push((agent, r.time));
                    r.waiting = Some(key);
                }
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }

    if let Some(((c, _), arrived)) = pending.iter().min_by_key(|((c, n), _)| (c.0, *n)) {
        let waiting = arrived.iter().map(|(a, _)| &sc.agents[*a].name).join(",");
        return Err(SimError::Deadlock { coalition: display(*c, sc), waiting });
    }
    let behaviors = runners
        .into_iter()
        .map(|r| Behavior {
            agent: r.strategy.agent,
            steps: r.steps,
            prefix_len: r.strategy.prefix.len(),
            cycle_len: r.strategy.cycle.len(),
        })
        .collect();
    Ok(Simulation { behaviors, barriers })
}

fn display(c: Coalition, sc: &Scenario) -> String {
    format!("{{{}}}", c.iter().map(|i| &sc.agents[i].name).join(","))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum EventKind {
    SyncRequest,
    BarrierRelease,
    ActionStart,
    Service,
    ActionEnd,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventKind::SyncRequest => "sync-request",
            EventKind::BarrierRelease => "barrier-release",
            EventKind::ActionStart => "action-start",
            EventKind::Service => "service",
            EventKind::ActionEnd => "action-end",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LogEvent {
    pub time: f64,
    pub agent: usize,
    pub kind: EventKind,
    pub payload: String,
}

/// Behavior log ordered by time, then agent, then event kind.
pub fn behavior_log(sim: &Simulation, sc: &Scenario) -> Vec<LogEvent> {
    let mut out = Vec::new();
    for b in &sim.behaviors {
        let a = &sc.agents[b.agent];
        for s in &b.steps {
            let push = |out: &mut Vec<LogEvent>, time, kind, payload: String| {
                out.push(LogEvent { time, agent: b.agent, kind, payload })
            };
            if !s.sync.is_singleton() {
                push(&mut out, s.arrive, EventKind::SyncRequest, display(s.sync, sc));
                push(&mut out, s.start, EventKind::BarrierRelease, format!("{} event={}", display(s.sync, sc), s.event));
            }
            let action = format!("{} at {}", a.ts.action_name(s.action), a.ts.state_name(s.state));
            push(&mut out, s.start, EventKind::ActionStart, action.clone());
            if let Some(set) = s.services {
                push(&mut out, s.start, EventKind::Service, format!("{} event={}", sc.services.display(set), s.event));
            }
            push(&mut out, s.start + s.duration, EventKind::ActionEnd, action);
        }
    }
    out.sort_by(|x, y| x.time.total_cmp(&y.time).then(x.agent.cmp(&y.agent)).then(x.kind.cmp(&y.kind)));
    out
}

pub fn format_log(events: &[LogEvent], sc: &Scenario) -> String {
    events
        .iter()
        .map(|e| format!("{:.6}\t{}\t{}\t{}\n", e.time, sc.agents[e.agent].name, e.kind, e.payload))
        .collect()
}

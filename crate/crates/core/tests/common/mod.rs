#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use teamsynth::agents::Coalition;
use teamsynth::automata::{find_accepting_lasso, Buchi, Label, Lasso};
use teamsynth::logic::{translate, Formula, UltimatelyPeriodicWord};
use teamsynth::motion::{classify_significance, reduce, Expansion, Reduction};
use teamsynth::symbols::{Alphabet, SymSet};
use teamsynth::taskprod::{build_task_motion_product, classify_task_significance, compute_dep, reduce_task_motion};

pub const ATOMS: [&str; 3] = ["a", "b", "c"];

pub fn alphabet() -> Alphabet {
    Alphabet::new(ATOMS).unwrap()
}

pub fn random_formula(rng: &mut impl Rng, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..8) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::atom(*ATOMS.choose(rng).unwrap()),
        };
    }
    let op = rng.gen_range(0..7);
    let mut sub = || random_formula(rng, depth - 1);
    match op {
        0 => Formula::not(sub()),
        1 => Formula::next(sub()),
        2 => Formula::eventually(sub()),
        3 => Formula::always(sub()),
        4 => Formula::and(sub(), sub()),
        5 => Formula::or(sub(), sub()),
        _ => Formula::until(sub(), sub()),
    }
}

pub fn random_word(rng: &mut impl Rng) -> UltimatelyPeriodicWord {
    let (np, nc) = (rng.gen_range(0..=5), rng.gen_range(1..=5));
    let mut sym = |n| (0..n).map(|_| SymSet(rng.gen_range(0..8))).collect::<Vec<_>>();
    let p = sym(np);
    let c = sym(nc);
    UltimatelyPeriodicWord::new(p, c)
}

/// Random automaton with up to `max_states` states whose labels are silent
/// or subsets of `services`.
pub fn random_automaton(rng: &mut impl Rng, max_states: usize, services: SymSet, agent: usize) -> Buchi<Label> {
    let n = rng.gen_range(2..=max_states);
    let mut a = Buchi::new(rng.gen_bool(0.3));
    for _ in 1..n {
        a.add_state(rng.gen_bool(0.3));
    }
    let subsets: Vec<SymSet> = services.subsets().filter(|s| !s.is_empty()).collect();
    for s in 0..n {
        for _ in 0..rng.gen_range(1..=3) {
            let label = if rng.gen_bool(0.5) { Label::Silent(agent) } else { Label::Services(*subsets.choose(rng).unwrap()) };
            a.add_transition(s, label, rng.gen_range(0..n));
        }
    }
    a
}

fn valid_lasso<L>(a: &Buchi<L>, l: &Lasso) -> bool {
    if l.cycle.is_empty() {
        return false;
    }
    let mut at = a.initial();
    for &t in l.prefix.iter().chain(&l.cycle) {
        if a.transition(t).source != at {
            return false;
        }
        at = a.transition(t).target;
    }
    at == l.loop_state(a) && l.cycle.iter().any(|&t| a.is_accepting(a.transition(t).source))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn at<'a, T>(p: &'a [T], c: &'a [T], i: usize) -> &'a T {
    if i < p.len() { &p[i] } else { &c[(i - p.len()) % c.len()] }
}

/// Compares `p1 c1^ω` with `p2 c2^ω`; an empty cycle means a finite word.
fn same_word<T: PartialEq>(p1: &[T], c1: &[T], p2: &[T], c2: &[T]) -> bool {
    match (c1.is_empty(), c2.is_empty()) {
        (true, true) => p1 == p2,
        (false, false) => {
            let len = p1.len().max(p2.len()) + c1.len() / gcd(c1.len(), c2.len()) * c2.len();
            (0..len).all(|i| at(p1, c1, i) == at(p2, c2, i))
        }
        _ => false,
    }
}

/// Checks that the expansion is an accepting lasso of `input` reading the
/// same non-silent labels as the reduced lasso.
fn replays<L: Clone + PartialEq>(
    input: &Buchi<L>,
    reduced: &Buchi<L>,
    r: &Lasso,
    x: &Expansion,
    silent: impl Fn(&L) -> bool,
) -> bool {
    let word = |a: &Buchi<L>, ts: &[usize]| -> Vec<L> {
        ts.iter().map(|&t| a.transition(t).label.clone()).filter(|l| !silent(l)).collect()
    };
    valid_lasso(input, &x.lasso)
        && same_word(
            &word(input, &x.lasso.prefix),
            &word(input, &x.lasso.cycle),
            &word(reduced, &r.prefix),
            &word(reduced, &r.cycle),
        )
}

#[derive(Default, Debug)]
pub struct SuiteReport {
    pub instances: usize,
    pub nonempty: usize,
    pub emptiness_agree: usize,
    pub replay_ok: usize,
    pub bound_ok: usize,
    /// Worst `|reduced| / #significant` seen.
    pub worst_ratio: f64,
}

impl SuiteReport {
    pub fn sound(&self) -> bool {
        self.emptiness_agree == self.instances && self.replay_ok == self.nonempty
    }

    pub fn bounded(&self) -> bool {
        self.bound_ok == self.instances
    }

    fn record<L: Clone + PartialEq>(
        &mut self,
        input: &Buchi<L>,
        red: &Reduction<L>,
        significant: usize,
        silent: impl Fn(&L) -> bool,
    ) {
        self.instances += 1;
        let l_in = find_accepting_lasso(input);
        let l_red = find_accepting_lasso(&red.automaton);
        if l_in.is_some() == l_red.is_some() {
            self.emptiness_agree += 1;
        }
        if let Some(l) = &l_red {
            self.nonempty += 1;
            let x = red.expand_lasso(input.initial(), l);
            if replays(input, &red.automaton, l, &x, silent) {
                self.replay_ok += 1;
            }
        }
        let n = red.automaton.num_states();
        if n <= 2 * significant {
            self.bound_ok += 1;
        }
        self.worst_ratio = self.worst_ratio.max(n as f64 / significant.max(1) as f64);
    }
}

/// Random motion products reduced by state elimination.
pub fn motion_suite(rng: &mut impl Rng, instances: usize) -> SuiteReport {
    let mut report = SuiteReport::default();
    for _ in 0..instances {
        let a = random_automaton(rng, 12, SymSet(0b111), 0);
        let sig = classify_significance(&a, Label::is_silent);
        let red = reduce(&a, &sig, &Label::Silent(0));
        let significant = sig.iter().filter(|&&s| s).count();
        report.record(&a, &red, significant, Label::is_silent);
    }
    report
}

/// Random task-and-motion products: agent 0 owns `a`, agents 1 and 2 own
/// `b` and `c`, the task formula is random over all three.
pub fn task_suite(rng: &mut impl Rng, instances: usize) -> SuiteReport {
    let sv = alphabet();
    let own = SymSet(0b001);
    let mut report = SuiteReport::default();
    while report.instances < instances {
        let motion = random_automaton(rng, 12, own, 0);
        let f = random_formula(rng, 3);
        let ba = translate(&f, &sv).unwrap();
        let mut tm = build_task_motion_product(0, own, &motion, &f, &ba, &sv);
        if tm.automaton.num_states() > 400 {
            continue;
        }
        compute_dep(&mut tm, &[Some(0), Some(1), Some(2)]);
        let globally = if rng.gen_bool(0.5) { own } else { SymSet::EMPTY };
        let r = reduce_task_motion(&tm, &[globally]);
        let sig = classify_task_significance(&tm, globally);
        let silent = (Label::Silent(0), Coalition::singleton(0));
        let input = tm.automaton.map_labels(|t, l| if sig[tm.automaton.transition(t).source] { (*l, tm.dep[t]) } else { silent });
        let significant = sig.iter().filter(|&&s| s).count();
        report.record(&input, &r.reduction, significant, |l| l.0.is_silent());
    }
    report
}

/// JSON for an agent with states `s0 -go-> s1`, silent `stay` loops and a
/// `serve` loop at `s1` providing `service`.
pub fn explicit_agent(id: &str, service: &str) -> serde_json::Value {
    let go = format!("go_{id}");
    let serve = format!("serve_{id}");
    serde_json::json!({
        "id": id,
        "services": [service],
        "explicit_ts": {
            "propositions": ["p"],
            "states": [{"name": "s0"}, {"name": "s1", "props": ["p"]}],
            "initial": "s0",
            "actions": [
                {"name": "stay", "services": null},
                {"name": go, "services": null},
                {"name": serve, "services": [service]}
            ],
            "transitions": [["s0", "stay", "s0"], ["s1", "stay", "s1"], ["s0", go, "s1"], ["s1", serve, "s1"]]
        }
    })
}

pub fn explicit_team(agents: &[(&str, &str)], motion: &[&str], task: &[&str]) -> teamsynth::agents::Scenario {
    let file = serde_json::json!({
        "agents": agents.iter().map(|(id, s)| explicit_agent(id, s)).collect::<Vec<_>>(),
        "motion_formulas": motion,
        "task_formulas": task,
    });
    teamsynth::io::load_scenario(&file.to_string()).unwrap().0
}

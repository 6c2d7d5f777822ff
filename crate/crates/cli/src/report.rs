//! Text output: the statistics block, verdict rows and Graphviz files.

use std::fmt::Write;

use teamsynth::agents::Scenario;
use teamsynth::automata::{to_dot, Label};
use teamsynth::executor::Verdict;
use teamsynth::pipeline::{PipelineStats, Synthesis};
use teamsynth::symbols::SymSet;

pub fn stats_block(stats: &PipelineStats) -> String {
    let mut out = String::new();
    let w = &mut out;
    writeln!(
        w,
        "{:<10} {:>6} {:>6} {:>6} {:>8} {:>8} {:>8} {:>8}  globally assisting",
        "agent", "|TS|", "|Bphi|", "|Bpsi|", "|P|", "|P_red|", "|P_bar|", "|P_hat|"
    )
    .unwrap();
    for a in &stats.agents {
        writeln!(
            w,
            "{:<10} {:>6} {:>6} {:>6} {:>8} {:>8} {:>8} {:>8}  {{{}}}",
            a.name,
            a.ts_states,
            a.motion_ba,
            a.task_ba,
            a.motion_product,
            a.reduced_motion,
            a.task_product,
            a.reduced_task,
            a.globally_assisting.join(",")
        )
        .unwrap();
    }
    let classes: Vec<String> = stats.classes.iter().map(|c| format!("{{{}}}", c.join(","))).collect();
    writeln!(w, "dependency classes: {}", classes.join(" ")).unwrap();
    let sizes: Vec<String> = stats.global_states.iter().map(usize::to_string).collect();
    writeln!(w, "global product states: {} (total {})", sizes.join(" + "), stats.global_total()).unwrap();
    if stats.fallback {
        writeln!(w, "global acceptance: counter wrap-around").unwrap();
    }
    match &stats.centralized {
        Some(c) => {
            writeln!(w, "centralized estimate: {} = {:.3e}", c.estimate_formula, c.estimate as f64).unwrap();
            writeln!(w, "centralized estimate (2N+1 counter): {:.3e}", c.coarse_estimate as f64).unwrap();
            match c.materialized {
                Some(n) => writeln!(w, "centralized product reachable states: {n}").unwrap(),
                None => writeln!(w, "centralized product reachable states: over budget").unwrap(),
            }
        }
        None => writeln!(w, "centralized estimate: skipped").unwrap(),
    }
    if let Some(r) = stats.reduction_ratio {
        writeln!(w, "reduction ratio: {r:.1}").unwrap();
    }
    writeln!(w, "elapsed: {:.3} s", stats.elapsed.as_secs_f64()).unwrap();
    out
}

pub const VERDICT_HEADER: &str = "seed\tagent\tmotion\ttask\tagree\tlocal word";

pub fn verdict_row(seed: u64, v: &Verdict, sc: &Scenario) -> String {
    let word = |ls: &[SymSet]| ls.iter().map(|&l| sc.services.display(l).to_string()).collect::<Vec<_>>().join(" ");
    let mut local = format!("{} ({})^w", word(&v.local.word.prefix), word(&v.local.word.period));
    if v.local.padded {
        local.push_str(" [no services in the cycle]");
    }
    format!("{seed}\t{}\t{}\t{}\t{}\t{}", sc.agents[v.agent].name, v.motion, v.task, v.agree, local.trim_start())
}

fn label_text(l: &Label, sc: &Scenario) -> String {
    match l {
        Label::Silent(i) => format!("eps_{}", i + 1),
        Label::Services(s) => sc.services.display(*s).to_string(),
    }
}

/// Graphviz files for every stage of every agent and for the global
/// products.
pub fn dot_files(syn: &Synthesis, sc: &Scenario) -> Vec<(String, String)> {
    let mut out = Vec::new();
    let plain = |l: &Label| label_text(l, sc);
    for (st, a) in syn.stages.iter().zip(&sc.agents) {
        let n = &a.name;
        out.push((format!("{n}_motion.dot"), to_dot(&st.motion.automaton, n, plain, |_| None)));
        out.push((format!("{n}_motion_reduced.dot"), to_dot(&st.reduced_motion.automaton, n, plain, |_| None)));
        out.push((format!("{n}_task.dot"), to_dot(&st.task.automaton, n, plain, |_| None)));
        let dep = |(l, c): &(Label, teamsynth::agents::Coalition)| format!("{} {c}", label_text(l, sc));
        out.push((format!("{n}_task_reduced.dot"), to_dot(st.reduced_task.automaton(), n, dep, |_| None)));
    }
    for (k, gp) in syn.products.iter().enumerate() {
        out.push((format!("global_{k}.dot"), to_dot(&gp.automaton, &format!("global_{k}"), plain, |_| None)));
    }
    out
}

use std::fmt::Write;

use super::Buchi;

/// Graphviz rendering: accepting states are drawn as double circles; `label`
/// renders an edge label and `extra` may add edge attributes (e.g. a tooltip).
pub fn to_dot<L>(
    a: &Buchi<L>,
    name: &str,
    label: impl Fn(&L) -> String,
    extra: impl Fn(usize) -> Option<String>,
) -> String {
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", escape(name)).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  __init [shape=point];").unwrap();
    for s in 0..a.num_states() {
        let shape = if a.is_accepting(s) { "doublecircle" } else { "circle" };
        writeln!(out, "  {s} [shape={shape}];").unwrap();
    }
    writeln!(out, "  __init -> {};", a.initial()).unwrap();
    for (i, t) in a.transitions().iter().enumerate() {
        let mut attrs = format!("label=\"{}\"", escape(&label(&t.label)));
        if let Some(x) = extra(i) {
            attrs.push_str(", ");
            attrs.push_str(&x);
        }
        writeln!(out, "  {} -> {} [{attrs}];", t.source, t.target).unwrap();
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_states_and_edges() {
        let mut a = Buchi::new(false);
        let s = a.add_state(true);
        a.add_transition(0, "eps_1", s);
        let dot = to_dot(&a, "p", |l| l.to_string(), |_| None);
        assert!(dot.contains("1 [shape=doublecircle]"));
        assert!(dot.contains("0 -> 1 [label=\"eps_1\"]"));
    }
}

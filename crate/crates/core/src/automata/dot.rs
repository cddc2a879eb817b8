//! Graphviz export for manual inspection.

use std::fmt::Write;

use super::Nfa;
use crate::syntax::render_class;

/// Renders `nfa` in Graphviz DOT. Each state is one `sN` line (double circle
/// when accepting, with `/w` appended to the label when the final weight
/// exceeds one); each transition is one edge labeled with its character
/// class, suffixed `xM` when it stands for M parallel transitions.
pub fn to_dot(nfa: &Nfa) -> String {
    let mut out =
        String::from("digraph nfa {\n  rankdir=LR;\n  start [shape=point];\n  start -> s0;\n");
    for s in 0..nfa.num_states() {
        let shape = if nfa.is_accepting(s) {
            "doublecircle"
        } else {
            "circle"
        };
        let w = nfa.final_weight(s);
        let label = if w > 1 {
            format!("{s}/{w}")
        } else {
            s.to_string()
        };
        let _ = writeln!(out, "  s{s} [shape={shape}, label=\"{label}\"];");
    }
    for (s, e) in nfa.transitions() {
        let class = render_class(&nfa.minterms()[e.label as usize], nfa.alphabet(), false);
        let mut label = class.replace('\\', "\\\\").replace('"', "\\\"");
        if e.mult > 1 {
            let _ = write!(label, " x{}", e.mult);
        }
        let _ = writeln!(out, "  s{s} -> s{} [label=\"{label}\"];", e.to);
    }
    out.push_str("}\n");
    out
}

//! Graphviz DOT export with a stable state order.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::generator::Generator;

/// Renders a generator as DOT. States appear in breadth-first order from
/// the initial state (tie-break by event order), marked states are drawn
/// double-circled, and the initial state gets an arrow from a point node.
/// Parallel edges are folded into one edge with a comma-joined label.
pub fn export_dot(g: &Generator) -> String {
    let mut out = String::new();
    let name = if g.name().is_empty() { "G" } else { g.name() };
    writeln!(out, "digraph \"{}\" {{", escape(name)).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();

    let order = g.bfs_order();
    if let Some(&init) = order.first() {
        writeln!(out, "  node [shape=circle];").unwrap();
        writeln!(out, "  __init [shape=point, label=\"\"];").unwrap();
        for &s in &order {
            let shape = if g.is_marked(s) { "doublecircle" } else { "circle" };
            writeln!(
                out,
                "  \"{}\" [shape={}];",
                escape(g.state_name(s)),
                shape
            )
            .unwrap();
        }
        writeln!(out, "  __init -> \"{}\";", escape(g.state_name(init))).unwrap();

        let pos: BTreeMap<usize, usize> = order.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        for &s in &order {
            // Group labels per destination, events in alphabet order.
            let mut edges: BTreeMap<usize, Vec<String>> = BTreeMap::new();
            for (e, d) in g.enabled(s) {
                if pos.contains_key(&d) {
                    edges
                        .entry(pos[&d])
                        .or_default()
                        .push(g.alphabet().name(e).to_string());
                }
            }
            for (dst_pos, labels) in edges {
                let dst = order[dst_pos];
                writeln!(
                    out,
                    "  \"{}\" -> \"{}\" [label=\"{}\"];",
                    escape(g.state_name(s)),
                    escape(g.state_name(dst)),
                    escape(&labels.join(","))
                )
                .unwrap();
            }
        }
    }
    writeln!(out, "}}").unwrap();
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::EventSet;

    #[test]
    fn empty_generator_has_no_state_nodes() {
        let g = Generator::empty(EventSet::controllable_from_names(["a"]).unwrap());
        let dot = export_dot(&g);
        assert!(!dot.contains("__init"));
        assert!(!dot.contains("circle]"));
        assert!(dot.starts_with("digraph"));
    }

    #[test]
    fn two_state_path_exports_one_labeled_edge() {
        let alphabet = EventSet::controllable_from_names(["a"]).unwrap();
        let mut b = Generator::builder("p", alphabet);
        let s0 = b.add_state("s0", false);
        let s1 = b.add_state("s1", true);
        b.set_initial(s0);
        b.add_transition_idx(s0, "a", s1).unwrap();
        let dot = export_dot(&b.build());
        assert!(dot.contains("\"s0\" -> \"s1\" [label=\"a\"];"));
        assert!(dot.contains("\"s1\" [shape=doublecircle];"));
        assert!(dot.contains("__init -> \"s0\";"));
    }

    #[test]
    fn export_is_deterministic() {
        let alphabet = EventSet::controllable_from_names(["a", "b"]).unwrap();
        let mut b = Generator::builder("p", alphabet);
        let s0 = b.add_state("s0", true);
        b.set_initial(s0);
        b.add_transition_idx(s0, "b", s0).unwrap();
        b.add_transition_idx(s0, "a", s0).unwrap();
        let g = b.build();
        assert_eq!(export_dot(&g), export_dot(&g.clone()));
        assert!(export_dot(&g).contains("label=\"a,b\""));
    }
}

//! DOT export. Nodes are ranked by grade and only irreducible flags are
//! drawn; the rest are composites.

use std::fmt::Write;

use crate::graph::NestedGraph;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn to_dot(graph: &NestedGraph) -> String {
    let mut out = String::from("digraph nested {\n  rankdir=BT;\n");
    let grading = graph.grading();
    for grade in 0..grading.ordinal() {
        let members: Vec<usize> = (0..graph.node_count()).filter(|&n| grading.grade(n) == grade).collect();
        if members.is_empty() {
            continue;
        }
        writeln!(out, "  {{ rank=same;").unwrap();
        for n in members {
            let id = graph.node_id(n);
            writeln!(out, "    {} [label={}];", quote(id), quote(&format!("{id} ({grade})"))).unwrap();
        }
        writeln!(out, "  }}").unwrap();
    }
    for f in graph.irreducible_flags() {
        let fl = graph.flag(f);
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(graph.node_id(fl.dom)),
            quote(graph.node_id(fl.cod)),
            quote(&fl.id)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    #[test]
    fn triangle_omits_the_composite() {
        let dot = to_dot(&triangle());
        assert!(dot.contains("\"p\" -> \"c\" [label=\"pc\"]"));
        assert!(dot.contains("\"c\" -> \"s\" [label=\"cs\"]"));
        assert!(!dot.contains("\"ps\""));
        assert!(dot.contains("\"s\" [label=\"s (2)\"]"));
        assert_eq!(dot.matches("rank=same").count(), 3);
    }

    #[test]
    fn ids_are_escaped() {
        let g = NestedGraph::discrete(["a\"b"]).unwrap();
        assert!(to_dot(&g).contains("\"a\\\"b\""));
    }
}

//! Small named graphs used throughout the docs, tests and CLI examples.

use crate::graph::NestedGraph;

/// A single node `a`.
pub fn point() -> NestedGraph {
    point_named("a")
}

pub fn point_named(id: &str) -> NestedGraph {
    NestedGraph::discrete([id]).expect("point")
}

/// A point `p` on a curve `c` on a surface `s`, with `ps = cs∘pc`.
pub fn triangle() -> NestedGraph {
    NestedGraph::new(["p", "c", "s"], [("pc", "p", "c"), ("cs", "c", "s"), ("ps", "p", "s")], [("pc", "cs", "ps")])
        .expect("triangle")
}

/// A surface `s` with two marked curves `c1`, `c2` meeting in a point `p`.
pub fn surface() -> NestedGraph {
    NestedGraph::new(
        ["p", "c1", "c2", "s"],
        [("pc1", "p", "c1"), ("pc2", "p", "c2"), ("c1s", "c1", "s"), ("c2s", "c2", "s"), ("ps", "p", "s")],
        [("pc1", "c1s", "ps"), ("pc2", "c2s", "ps")],
    )
    .expect("surface")
}

/// One-dimensional corolla: center `v` with leaves `l1..lk`, flags `li -> v`.
pub fn corolla_star(k: usize) -> NestedGraph {
    corolla_star_named("v", "l", k)
}

/// Corolla with center `center` and leaves `{leaf}1..{leaf}k`.
pub fn corolla_star_named(center: &str, leaf: &str, k: usize) -> NestedGraph {
    let leaves: Vec<String> = (1..=k).map(|i| format!("{leaf}{i}")).collect();
    let mut nodes = vec![center.to_string()];
    nodes.extend(leaves.iter().cloned());
    let flags: Vec<(String, String, String)> =
        leaves.iter().map(|l| (format!("{l}{center}"), l.clone(), center.to_string())).collect();
    NestedGraph::new(nodes, flags, Vec::<(String, String, String)>::new()).expect("corolla")
}

/// A leaf `p` decorating two flags, to `c1` and to `c2`: a single edge.
pub fn edge() -> NestedGraph {
    NestedGraph::new(["p", "c1", "c2"], [("pc1", "p", "c1"), ("pc2", "p", "c2")], []).expect("edge")
}

/// Two one-leaf corollas `l1 -> v1` and `l2 -> v2`.
pub fn two_corollas() -> NestedGraph {
    NestedGraph::new(["l1", "v1", "l2", "v2"], [("a1", "l1", "v1"), ("a2", "l2", "v2")], []).expect("two corollas")
}

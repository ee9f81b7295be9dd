//! Test-side oracles. They work from raw node and flag maps and the
//! composition table only, without the library's classification code.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use nestgraph::{FlagImage, GraphFunctor, NestedGraph};

/// Composite of two morphisms of `g` given as images, `second ∘ first`.
pub fn then(g: &NestedGraph, first: FlagImage, second: FlagImage) -> FlagImage {
    match (first, second) {
        (FlagImage::Identity(_), s) => s,
        (f, FlagImage::Identity(_)) => f,
        (FlagImage::Flag(a), FlagImage::Flag(b)) => FlagImage::Flag(g.compose(a, b).expect("composable")),
    }
}

fn reducible(g: &NestedGraph) -> Vec<bool> {
    let mut r = vec![false; g.flag_count()];
    for a in 0..g.flag_count() {
        for &b in g.out_flags(g.flag(a).cod) {
            r[g.compose(a, b).unwrap()] = true;
        }
    }
    r
}

pub fn admissible(phi: &GraphFunctor) -> bool {
    let (s, t) = (phi.source(), phi.target());
    let (rs, rt) = (reducible(s), reducible(t));
    for (f, &reducible) in rs.iter().enumerate() {
        if reducible {
            continue;
        }
        if let FlagImage::Flag(x) = phi.flag(f) {
            if rt[x] {
                return false;
            }
        }
    }
    for n in 0..s.node_count() {
        let irr: Vec<usize> = s.out_flags(n).iter().copied().filter(|&f| !rs[f]).collect();
        let contracted = irr.iter().filter(|&&f| phi.flag(f).is_identity()).count();
        if contracted != 0 && contracted != irr.len() {
            return false;
        }
    }
    true
}

pub fn epi(phi: &GraphFunctor) -> bool {
    let t = phi.target();
    let nodes: BTreeSet<usize> = phi.node_map().iter().copied().collect();
    if nodes.len() != t.node_count() {
        return false;
    }
    let mut have = vec![false; t.flag_count()];
    for img in phi.flag_map() {
        if let FlagImage::Flag(x) = img {
            have[*x] = true;
        }
    }
    loop {
        let mut grew = false;
        for a in 0..t.flag_count() {
            for &b in t.out_flags(t.flag(a).cod) {
                let h = t.compose(a, b).unwrap();
                if have[a] && have[b] && !have[h] {
                    have[h] = true;
                    grew = true;
                }
            }
        }
        if !grew {
            return have.iter().all(|&x| x);
        }
    }
}

/// Nodes of the fiber over `n` with no fiber flag leaving them.
pub fn fiber_vertices(phi: &GraphFunctor, n: usize) -> Vec<usize> {
    let s = phi.source();
    (0..s.node_count())
        .filter(|&x| phi.node(x) == n)
        .filter(|&x| s.out_flags(x).iter().all(|&f| phi.flag(f) != FlagImage::Identity(n)))
        .collect()
}

pub fn contraction(phi: &GraphFunctor) -> bool {
    admissible(phi) && epi(phi) && (0..phi.target().node_count()).all(|n| fiber_vertices(phi, n).len() == 1)
}

/// Chains of source flags composable after applying `mu`, with the target
/// flag each composes to. `mu` must contract nothing.
pub fn image_chains(mu: &GraphFunctor) -> Vec<(Vec<usize>, usize)> {
    let (s, t) = (mu.source(), mu.target());
    let image = |f: usize| mu.flag(f).as_flag().expect("contracts nothing");
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<usize>, usize)> = (0..s.flag_count()).map(|f| (vec![f], image(f))).collect();
    while let Some((chain, value)) = stack.pop() {
        let end = mu.node(s.flag(*chain.last().unwrap()).cod);
        for f in 0..s.flag_count() {
            if mu.node(s.flag(f).dom) == end {
                let mut longer = chain.clone();
                longer.push(f);
                stack.push((longer, t.compose(value, image(f)).expect("composable in target")));
            }
        }
        out.push((chain, value));
    }
    out
}

/// A merger: admissible, epi, contracts nothing, and two chains compose to
/// the same target flag exactly when source relations connect them.
pub fn merger(mu: &GraphFunctor) -> bool {
    if !admissible(mu) || !epi(mu) || mu.flag_map().iter().any(|i| i.is_identity()) {
        return false;
    }
    let s = mu.source();
    let chains = image_chains(mu);
    let index: HashMap<&Vec<usize>, usize> = chains.iter().enumerate().map(|(i, (c, _))| (c, i)).collect();
    let mut parent: Vec<usize> = (0..chains.len()).collect();
    fn root(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for (i, (chain, _)) in chains.iter().enumerate() {
        for k in 0..chain.len() - 1 {
            if let Some(h) = s.compose(chain[k], chain[k + 1]) {
                let mut shorter = chain[..k].to_vec();
                shorter.push(h);
                shorter.extend_from_slice(&chain[k + 2..]);
                let j = index[&shorter];
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut class_value: HashMap<usize, usize> = HashMap::new();
    let mut value_class: HashMap<usize, usize> = HashMap::new();
    for (i, (_, v)) in chains.iter().enumerate() {
        let c = root(&mut parent, i);
        if *class_value.entry(c).or_insert(*v) != *v || *value_class.entry(*v).or_insert(c) != c {
            return false;
        }
    }
    true
}

/// The functor `κ` with `κ ∘ μ = φ`, rebuilt chain by chain.
pub fn reconstruct_through(mu: &GraphFunctor, phi: &GraphFunctor) -> (Vec<usize>, Vec<FlagImage>) {
    let (q, t) = (mu.target(), phi.target());
    let mut nodes = vec![usize::MAX; q.node_count()];
    for n in 0..mu.source().node_count() {
        nodes[mu.node(n)] = phi.node(n);
    }
    let mut flags = vec![None; q.flag_count()];
    for (chain, value) in image_chains(mu) {
        if flags[value].is_some() {
            continue;
        }
        let mut image = FlagImage::Identity(phi.node(mu.source().flag(chain[0]).dom));
        for &f in &chain {
            image = then(t, image, phi.flag(f));
        }
        flags[value] = Some(image);
    }
    (nodes, flags.into_iter().map(|f| f.expect("epi")).collect())
}

pub fn dependency(delta: &GraphFunctor) -> bool {
    let t = delta.target();
    let nodes: BTreeSet<usize> = delta.node_map().iter().copied().collect();
    let flags: BTreeSet<usize> = delta.flag_map().iter().filter_map(|i| i.as_flag()).collect();
    nodes.len() == delta.source().node_count()
        && flags.len() == delta.source().flag_count()
        && (0..t.flag_count()).all(|f| !nodes.contains(&t.flag(f).cod) || flags.contains(&f))
}

/// Source nodes and flags landing in the given part of the target.
pub fn preimage(
    phi: &GraphFunctor,
    nodes: &BTreeSet<usize>,
    flags: &BTreeSet<usize>,
) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let s = phi.source();
    let pn = (0..s.node_count()).filter(|&n| nodes.contains(&phi.node(n))).collect();
    let pf = (0..s.flag_count())
        .filter(|&f| match phi.flag(f) {
            FlagImage::Flag(x) => flags.contains(&x),
            FlagImage::Identity(n) => nodes.contains(&n),
        })
        .collect();
    (pn, pf)
}

pub fn image(delta: &GraphFunctor) -> (BTreeSet<usize>, BTreeSet<usize>) {
    (delta.node_map().iter().copied().collect(), delta.flag_map().iter().filter_map(|i| i.as_flag()).collect())
}

pub fn same_maps(a: &GraphFunctor, b: &GraphFunctor) -> bool {
    a.node_map() == b.node_map() && a.flag_map() == b.flag_map()
}

/// `second ∘ first` on raw maps.
pub fn compose_maps(second: &GraphFunctor, first: &GraphFunctor) -> (Vec<usize>, Vec<FlagImage>) {
    let nodes = first.node_map().iter().map(|&n| second.node(n)).collect();
    let flags = first
        .flag_map()
        .iter()
        .map(|i| match *i {
            FlagImage::Flag(f) => second.flag(f),
            FlagImage::Identity(n) => FlagImage::Identity(second.node(n)),
        })
        .collect();
    (nodes, flags)
}

/// Longest-path grades, computed by repeated relaxation.
pub fn longest_path_grades(g: &NestedGraph) -> Vec<usize> {
    let mut grade = vec![0; g.node_count()];
    for _ in 0..g.node_count() {
        for f in g.flags() {
            grade[f.cod] = grade[f.cod].max(grade[f.dom] + 1);
        }
    }
    grade
}

//! Isomorphism search between small nested graphs.
//!
//! Nodes are matched by backtracking, pruned by grade and degree
//! signatures and by flag counts between already matched nodes. Once the
//! nodes are fixed only irreducible flags need choosing: every reducible
//! flag is a composite of irreducible ones, so its image is forced.

use std::sync::Arc;

use crate::functor::{FlagImage, GraphFunctor};
use crate::graph::NestedGraph;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Signature {
    grade: usize,
    in_degree: usize,
    out_degree: usize,
    irreducible_in: usize,
    irreducible_out: usize,
}

fn signature(g: &NestedGraph, n: usize) -> Signature {
    Signature {
        grade: g.grading().grade(n),
        in_degree: g.in_flags(n).len(),
        out_degree: g.out_flags(n).len(),
        irreducible_in: g.in_flags(n).iter().filter(|&&f| g.is_irreducible(f)).count(),
        irreducible_out: g.out_flags(n).iter().filter(|&&f| g.is_irreducible(f)).count(),
    }
}

struct Search<'a> {
    a: &'a NestedGraph,
    b: &'a NestedGraph,
    sig_a: Vec<Signature>,
    sig_b: Vec<Signature>,
    order: Vec<usize>,
    node_map: Vec<Option<usize>>,
    used: Vec<bool>,
    irreducible: Vec<usize>,
    reducible: Vec<usize>,
    flag_map: Vec<Option<usize>>,
    flag_used: Vec<bool>,
}

impl Search<'_> {
    fn nodes(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return self.flags(0);
        }
        let u = self.order[depth];
        for v in 0..self.b.node_count() {
            if self.used[v] || self.sig_a[u] != self.sig_b[v] || !self.consistent(u, v) {
                continue;
            }
            self.node_map[u] = Some(v);
            self.used[v] = true;
            if self.nodes(depth + 1) {
                return true;
            }
            self.node_map[u] = None;
            self.used[v] = false;
        }
        false
    }

    fn consistent(&self, u: usize, v: usize) -> bool {
        let count = |g: &NestedGraph, x: usize, y: usize| g.flags_between(x, y).count();
        self.order
            .iter()
            .filter_map(|&w| self.node_map[w].map(|mw| (w, mw)))
            .all(|(w, mw)| count(self.a, u, w) == count(self.b, v, mw) && count(self.a, w, u) == count(self.b, mw, v))
    }

    fn flags(&mut self, depth: usize) -> bool {
        if depth == self.irreducible.len() {
            return self.complete();
        }
        let f = self.irreducible[depth];
        let fl = self.a.flag(f);
        let (dom, cod) = (self.node_map[fl.dom].unwrap(), self.node_map[fl.cod].unwrap());
        let candidates: Vec<usize> = self.b.flags_between(dom, cod).filter(|&t| self.b.is_irreducible(t)).collect();
        for t in candidates {
            if self.flag_used[t] {
                continue;
            }
            self.flag_map[f] = Some(t);
            self.flag_used[t] = true;
            if self.flags(depth + 1) {
                return true;
            }
            self.flag_map[f] = None;
            self.flag_used[t] = false;
        }
        false
    }

    fn complete(&mut self) -> bool {
        let saved = self.flag_map.clone();
        let saved_used = self.flag_used.clone();
        let mut ok = true;
        'reducible: for &h in &self.reducible {
            // any decomposition works; the comp check below catches clashes
            for &g in self.a.out_flags(self.a.flag(h).dom) {
                for &f in self.a.out_flags(self.a.flag(g).cod) {
                    if self.a.compose(g, f) != Some(h) {
                        continue;
                    }
                    let (Some(tg), Some(tf)) = (self.flag_map[g], self.flag_map[f]) else { continue };
                    match self.b.compose(tg, tf) {
                        Some(t) if !self.flag_used[t] => {
                            self.flag_map[h] = Some(t);
                            self.flag_used[t] = true;
                            continue 'reducible;
                        }
                        _ => {
                            ok = false;
                            break 'reducible;
                        }
                    }
                }
            }
            ok = false;
            break;
        }
        ok = ok
            && self.a.comp_entries().all(|(g, f, h)| {
                self.b.compose(self.flag_map[g].unwrap(), self.flag_map[f].unwrap()) == self.flag_map[h]
            });
        if !ok {
            self.flag_map = saved;
            self.flag_used = saved_used;
        }
        ok
    }
}

/// An isomorphism `a -> b`, if one exists.
pub fn graph_iso(a: &NestedGraph, b: &NestedGraph) -> Option<(Vec<usize>, Vec<usize>)> {
    if a.node_count() != b.node_count()
        || a.flag_count() != b.flag_count()
        || a.grading().ordinal() != b.grading().ordinal()
    {
        return None;
    }
    let sig_a: Vec<Signature> = (0..a.node_count()).map(|n| signature(a, n)).collect();
    let sig_b: Vec<Signature> = (0..b.node_count()).map(|n| signature(b, n)).collect();
    let (mut sa, mut sb) = (sig_a.clone(), sig_b.clone());
    sa.sort();
    sb.sort();
    if sa != sb {
        return None;
    }
    // rare signatures first
    let mut order: Vec<usize> = (0..a.node_count()).collect();
    order.sort_by_key(|&n| (sig_a.iter().filter(|s| **s == sig_a[n]).count(), sig_a[n].grade, n));
    let mut reducible: Vec<usize> = (0..a.flag_count()).filter(|&f| !a.is_irreducible(f)).collect();
    reducible.sort_by_key(|&f| a.span(f));
    let mut search = Search {
        a,
        b,
        sig_a,
        sig_b,
        order,
        node_map: vec![None; a.node_count()],
        used: vec![false; b.node_count()],
        irreducible: a.irreducible_flags(),
        reducible,
        flag_map: vec![None; a.flag_count()],
        flag_used: vec![false; b.flag_count()],
    };
    if !search.nodes(0) {
        return None;
    }
    Some((
        search.node_map.into_iter().map(Option::unwrap).collect(),
        search.flag_map.into_iter().map(Option::unwrap).collect(),
    ))
}

/// [`graph_iso`] packaged as an isomorphism functor.
pub fn iso_functor(a: &Arc<NestedGraph>, b: &Arc<NestedGraph>) -> Option<GraphFunctor> {
    let (nodes, flags) = graph_iso(a, b)?;
    let flags = flags.into_iter().map(FlagImage::Flag).collect();
    GraphFunctor::new(a.clone(), b.clone(), nodes, flags).ok()
}

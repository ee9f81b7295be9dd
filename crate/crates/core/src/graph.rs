//! Nested graphs: finite direct categories stored as an explicit, total
//! composition table over their non-identity morphisms ("flags").
//!
//! Nodes and flags are kept sorted by id, and every index handed out by this
//! module refers to that order. Identities are never stored.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Separator used when a derived node stands for a block of source nodes.
pub const BLOCK_SEPARATOR: &str = "+";
/// Separator used when a derived flag stands for a chain of source flags.
pub const CHAIN_SEPARATOR: &str = ";";

/// A non-identity morphism `dom -> cod`, indices into the owning graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Flag {
    pub id: String,
    pub dom: usize,
    pub cod: usize,
}

/// A functor into a finite ordinal, strictly increasing along every flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    ordinal: usize,
    grades: Vec<usize>,
}

impl Grading {
    /// Size `n` of the ordinal the grading lands in.
    pub fn ordinal(&self) -> usize {
        self.ordinal
    }

    pub fn grade(&self, node: usize) -> usize {
        self.grades[node]
    }

    pub fn grades(&self) -> &[usize] {
        &self.grades
    }
}

#[derive(Clone)]
pub struct NestedGraph {
    nodes: Vec<String>,
    flags: Vec<Flag>,
    // (g, f) -> f∘g, with cod(g) = dom(f)
    comp: BTreeMap<(usize, usize), usize>,
    node_index: HashMap<String, usize>,
    flag_index: HashMap<String, usize>,
    out_flags: Vec<Vec<usize>>,
    in_flags: Vec<Vec<usize>>,
    irreducible: Vec<bool>,
    grading: Grading,
}

impl PartialEq for NestedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.flags == other.flags && self.comp == other.comp
    }
}

impl Eq for NestedGraph {}

impl fmt::Debug for NestedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flags: Vec<String> =
            self.flags.iter().map(|fl| format!("{}:{}->{}", fl.id, self.nodes[fl.dom], self.nodes[fl.cod])).collect();
        let comp: Vec<String> = self
            .comp
            .iter()
            .map(|(&(g, h), &c)| format!("{};{}={}", self.flags[g].id, self.flags[h].id, self.flags[c].id))
            .collect();
        f.debug_struct("NestedGraph").field("nodes", &self.nodes).field("flags", &flags).field("comp", &comp).finish()
    }
}

/// Index permutations produced when a graph is built from unsorted parts.
pub(crate) struct Reindex {
    pub node: Vec<usize>,
    pub flag: Vec<usize>,
}

impl NestedGraph {
    /// Validates a graph given by ids. `flags` are `(id, dom, cod)` and
    /// `comp` entries are `(g, f, f∘g)`.
    pub fn new<I, F, C, S>(nodes: I, flags: F, comp: C) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        F: IntoIterator<Item = (S, S, S)>,
        C: IntoIterator<Item = (S, S, S)>,
        S: Into<String>,
    {
        let nodes: Vec<String> = nodes.into_iter().map(Into::into).collect();
        let mut node_index = HashMap::new();
        for (i, n) in nodes.iter().enumerate() {
            if node_index.insert(n.clone(), i).is_some() {
                return Err(Error::DuplicateId { id: n.clone() });
            }
        }
        let lookup_node =
            |id: &String| node_index.get(id).copied().ok_or_else(|| Error::DanglingReference { id: id.clone() });
        let mut raw_flags = Vec::new();
        for (id, dom, cod) in flags {
            let (id, dom, cod): (String, String, String) = (id.into(), dom.into(), cod.into());
            raw_flags.push((id, lookup_node(&dom)?, lookup_node(&cod)?));
        }
        let mut flag_index = HashMap::new();
        for (i, (id, _, _)) in raw_flags.iter().enumerate() {
            if flag_index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateId { id: id.clone() });
            }
        }
        let lookup_flag =
            |id: &String| flag_index.get(id).copied().ok_or_else(|| Error::DanglingReference { id: id.clone() });
        let mut raw_comp = Vec::new();
        for (g, f, h) in comp {
            let (g, f, h): (String, String, String) = (g.into(), f.into(), h.into());
            raw_comp.push((lookup_flag(&g)?, lookup_flag(&f)?, lookup_flag(&h)?));
        }
        Self::from_indexed(nodes, raw_flags, raw_comp).map(|(g, _)| g)
    }

    /// Builds a graph from index-based parts, sorting nodes and flags by id.
    pub(crate) fn from_indexed(
        nodes: Vec<String>,
        flags: Vec<(String, usize, usize)>,
        comp: Vec<(usize, usize, usize)>,
    ) -> Result<(Self, Reindex)> {
        let mut node_order: Vec<usize> = (0..nodes.len()).collect();
        node_order.sort_by(|&a, &b| nodes[a].cmp(&nodes[b]));
        let mut node_perm = vec![0; nodes.len()];
        for (new, &old) in node_order.iter().enumerate() {
            node_perm[old] = new;
        }
        let sorted_nodes: Vec<String> = node_order.iter().map(|&i| nodes[i].clone()).collect();
        for w in sorted_nodes.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateId { id: w[0].clone() });
            }
        }

        let mut flag_order: Vec<usize> = (0..flags.len()).collect();
        flag_order.sort_by(|&a, &b| flags[a].0.cmp(&flags[b].0));
        let mut flag_perm = vec![0; flags.len()];
        for (new, &old) in flag_order.iter().enumerate() {
            flag_perm[old] = new;
        }
        let sorted_flags: Vec<Flag> = flag_order
            .iter()
            .map(|&i| Flag { id: flags[i].0.clone(), dom: node_perm[flags[i].1], cod: node_perm[flags[i].2] })
            .collect();
        for w in sorted_flags.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::DuplicateId { id: w[0].id.clone() });
            }
        }

        let mut table = BTreeMap::new();
        for (g, f, h) in comp {
            let (g, f, h) = (flag_perm[g], flag_perm[f], flag_perm[h]);
            if let Some(&prev) = table.get(&(g, f)) {
                if prev != h {
                    return Err(Error::CompositionConflict {
                        g: sorted_flags[g].id.clone(),
                        f: sorted_flags[f].id.clone(),
                    });
                }
            }
            table.insert((g, f), h);
        }

        let graph = Self::assemble(sorted_nodes, sorted_flags, table)?;
        Ok((graph, Reindex { node: node_perm, flag: flag_perm }))
    }

    fn assemble(nodes: Vec<String>, flags: Vec<Flag>, comp: BTreeMap<(usize, usize), usize>) -> Result<Self> {
        let node_index: HashMap<String, usize> = nodes.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let flag_index: HashMap<String, usize> = flags.iter().enumerate().map(|(i, f)| (f.id.clone(), i)).collect();
        let mut out_flags = vec![Vec::new(); nodes.len()];
        let mut in_flags = vec![Vec::new(); nodes.len()];
        for (i, f) in flags.iter().enumerate() {
            out_flags[f.dom].push(i);
            in_flags[f.cod].push(i);
        }
        let grading = longest_path_grading(&nodes, &flags)?;

        let id = |i: usize| flags[i].id.clone();
        for (&(g, f), &h) in &comp {
            if flags[g].cod != flags[f].dom {
                return Err(Error::NotComposable { g: id(g), f: id(f) });
            }
            if flags[h].dom != flags[g].dom || flags[h].cod != flags[f].cod {
                return Err(Error::CompositionMismatch { g: id(g), f: id(f), h: id(h) });
            }
        }
        for (g, fg) in flags.iter().enumerate() {
            for &f in &out_flags[fg.cod] {
                if !comp.contains_key(&(g, f)) {
                    return Err(Error::CompositionIncomplete { g: id(g), f: id(f) });
                }
            }
        }
        for (&(g, f), &fg) in &comp {
            for &e in &out_flags[flags[f].cod] {
                let left = comp[&(fg, e)];
                let right = comp[&(g, comp[&(f, e)])];
                if left != right {
                    return Err(Error::AssociativityViolation { g: id(g), f: id(f), h: id(e) });
                }
            }
        }

        let mut irreducible = vec![true; flags.len()];
        for &h in comp.values() {
            irreducible[h] = false;
        }

        Ok(NestedGraph { nodes, flags, comp, node_index, flag_index, out_flags, in_flags, irreducible, grading })
    }

    /// The graph with no nodes.
    pub fn empty() -> Self {
        Self::assemble(Vec::new(), Vec::new(), BTreeMap::new()).expect("empty graph is valid")
    }

    /// A graph with the given nodes and no flags.
    pub fn discrete<S: Into<String>>(nodes: impl IntoIterator<Item = S>) -> Result<Self> {
        let nodes: Vec<String> = nodes.into_iter().map(Into::into).collect();
        Self::new(nodes, std::iter::empty::<(String, String, String)>(), std::iter::empty())
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn flag_count(&self) -> usize {
        self.flags.len()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn flags(&self) -> &[Flag] {
        &self.flags
    }

    pub fn flag(&self, f: usize) -> &Flag {
        &self.flags[f]
    }

    pub fn node_id(&self, n: usize) -> &str {
        &self.nodes[n]
    }

    pub fn flag_id(&self, f: usize) -> &str {
        &self.flags[f].id
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.node_index.get(id).copied()
    }

    pub fn flag_index(&self, id: &str) -> Option<usize> {
        self.flag_index.get(id).copied()
    }

    /// Flags decorated by `node`, i.e. with `node` as domain.
    pub fn out_flags(&self, node: usize) -> &[usize] {
        &self.out_flags[node]
    }

    /// Flags attached to `node`, i.e. with `node` as codomain.
    pub fn in_flags(&self, node: usize) -> &[usize] {
        &self.in_flags[node]
    }

    /// Composite `f∘g` of `g` followed by `f`, if they are composable.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.comp.get(&(g, f)).copied()
    }

    /// All entries `(g, f, f∘g)` of the composition table.
    pub fn comp_entries(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.comp.iter().map(|(&(g, f), &h)| (g, f, h))
    }

    /// Flags between two nodes, in id order.
    pub fn flags_between(&self, dom: usize, cod: usize) -> impl Iterator<Item = usize> + '_ {
        self.out_flags[dom].iter().copied().filter(move |&f| self.flags[f].cod == cod)
    }

    /// The minimal grading, by longest-path layering.
    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn is_irreducible(&self, f: usize) -> bool {
        self.irreducible[f]
    }

    pub fn irreducible_flags(&self) -> Vec<usize> {
        (0..self.flags.len()).filter(|&f| self.irreducible[f]).collect()
    }

    /// Nodes decorating no flag.
    pub fn vertices(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&n| self.out_flags[n].is_empty()).collect()
    }

    pub fn is_corolla(&self) -> bool {
        self.vertices().len() == 1
    }

    /// True iff the minimal grading lands in `{0, 1}`; with `classic` every
    /// node must also decorate at most two flags (edges, no hyper-edges).
    pub fn is_one_dimensional(&self, classic: bool) -> bool {
        if self.grading.ordinal > 2 {
            return false;
        }
        !classic || self.out_flags.iter().all(|out| out.len() <= 2)
    }

    /// Flags generated by `seeds` under composition.
    pub fn generated_by(&self, seeds: impl IntoIterator<Item = usize>) -> Vec<bool> {
        let mut member = vec![false; self.flags.len()];
        for s in seeds {
            member[s] = true;
        }
        // flags only compose upward in the grading, so one pass in order of
        // increasing grade span reaches the closure
        let mut order: Vec<usize> = (0..self.flags.len()).collect();
        order.sort_by_key(|&f| self.span(f));
        for &h in &order {
            if member[h] {
                continue;
            }
            let dom = self.flags[h].dom;
            'search: for &g in &self.out_flags[dom] {
                if !member[g] {
                    continue;
                }
                for &f in &self.out_flags[self.flags[g].cod] {
                    if member[f] && self.comp[&(g, f)] == h {
                        member[h] = true;
                        break 'search;
                    }
                }
            }
        }
        member
    }

    /// Difference of grades across a flag.
    pub(crate) fn span(&self, f: usize) -> usize {
        self.grading.grades[self.flags[f].cod] - self.grading.grades[self.flags[f].dom]
    }

    /// The node set of the smallest full subgraph containing `seeds`.
    pub fn closure_nodes(&self, seeds: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        let mut set: BTreeSet<usize> = seeds.into_iter().collect();
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(n) = stack.pop() {
            for &f in &self.in_flags[n] {
                let d = self.flags[f].dom;
                if set.insert(d) {
                    stack.push(d);
                }
            }
        }
        set
    }

    /// Whether the node set is closed under attachment.
    pub fn is_attachment_closed(&self, nodes: &BTreeSet<usize>) -> bool {
        nodes.iter().all(|&n| self.in_flags[n].iter().all(|&f| nodes.contains(&self.flags[f].dom)))
    }

    /// The smallest full subgraph containing `seeds`, ids preserved.
    pub fn full_subgraph_closure(&self, seeds: impl IntoIterator<Item = usize>) -> NestedGraph {
        let nodes = self.closure_nodes(seeds);
        self.full_subgraph_on(&nodes)
    }

    /// The full subgraph on an attachment-closed node set: every flag into
    /// one of the nodes.
    pub(crate) fn full_subgraph_on(&self, nodes: &BTreeSet<usize>) -> NestedGraph {
        let flags: BTreeSet<usize> = (0..self.flags.len()).filter(|&f| nodes.contains(&self.flags[f].cod)).collect();
        self.subcategory(nodes, &flags).expect("full subgraph of a nested graph is a nested graph")
    }

    /// The subcategory on the given nodes and flags, composition restricted.
    /// Fails if the flags are not closed under composition.
    pub fn subcategory(&self, nodes: &BTreeSet<usize>, flags: &BTreeSet<usize>) -> Result<NestedGraph> {
        let node_list: Vec<usize> = nodes.iter().copied().collect();
        let mut node_new = HashMap::new();
        for (i, &n) in node_list.iter().enumerate() {
            node_new.insert(n, i);
        }
        let flag_list: Vec<usize> = flags.iter().copied().collect();
        let mut flag_new = HashMap::new();
        let mut raw_flags = Vec::new();
        for (i, &f) in flag_list.iter().enumerate() {
            let fl = &self.flags[f];
            let (Some(&d), Some(&c)) = (node_new.get(&fl.dom), node_new.get(&fl.cod)) else {
                return Err(Error::DanglingReference { id: fl.id.clone() });
            };
            flag_new.insert(f, i);
            raw_flags.push((fl.id.clone(), d, c));
        }
        let mut raw_comp = Vec::new();
        for (&(g, f), &h) in &self.comp {
            if let (Some(&g2), Some(&f2)) = (flag_new.get(&g), flag_new.get(&f)) {
                let h2 = *flag_new.get(&h).ok_or_else(|| Error::CompositionIncomplete {
                    g: self.flags[g].id.clone(),
                    f: self.flags[f].id.clone(),
                })?;
                raw_comp.push((g2, f2, h2));
            }
        }
        let names = node_list.iter().map(|&n| self.nodes[n].clone()).collect();
        Self::from_indexed(names, raw_flags, raw_comp).map(|(g, _)| g)
    }

    /// Whether `sub` is a full subgraph of `self`, matching by id.
    pub fn is_full_subgraph(&self, sub: &NestedGraph) -> bool {
        let mut nodes = BTreeSet::new();
        for n in &sub.nodes {
            match self.node_index(n) {
                Some(i) => {
                    nodes.insert(i);
                }
                None => return false,
            }
        }
        if !self.is_attachment_closed(&nodes) {
            return false;
        }
        let expected = self.full_subgraph_on(&nodes);
        expected == *sub
    }

    /// Fresh id for a node standing for a block of nodes of this graph.
    pub(crate) fn block_id(&self, block: &[usize]) -> String {
        let mut ids: Vec<&str> = block.iter().map(|&n| self.nodes[n].as_str()).collect();
        ids.sort_unstable();
        ids.join(BLOCK_SEPARATOR)
    }
}

fn longest_path_grading(nodes: &[String], flags: &[Flag]) -> Result<Grading> {
    let n = nodes.len();
    let mut indegree = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for f in flags {
        indegree[f.cod] += 1;
        out[f.dom].push(f.cod);
    }
    let mut grades = vec![0usize; n];
    let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = ready.pop() {
        seen += 1;
        for &w in &out[v] {
            grades[w] = grades[w].max(grades[v] + 1);
            indegree[w] -= 1;
            if indegree[w] == 0 {
                ready.push(w);
            }
        }
    }
    if seen < n {
        let mut stuck: Vec<String> = (0..n).filter(|&v| indegree[v] > 0).map(|v| nodes[v].clone()).collect();
        stuck.sort();
        return Err(Error::CycleDetected { nodes: stuck });
    }
    let ordinal = grades.iter().map(|g| g + 1).max().unwrap_or(0);
    Ok(Grading { ordinal, grades })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    #[test]
    fn point_is_valid() {
        let pt = point();
        assert_eq!(pt.node_count(), 1);
        assert_eq!(pt.grading().grades(), &[0]);
        assert_eq!(pt.grading().ordinal(), 1);
        assert!(pt.irreducible_flags().is_empty());
        assert_eq!(pt.vertices(), vec![0]);
        assert!(pt.is_corolla());
    }

    #[test]
    fn loop_has_no_grading() {
        let err = NestedGraph::new(["a", "b"], [("f", "a", "b"), ("g", "b", "a")], []).unwrap_err();
        assert_eq!(err, Error::CycleDetected { nodes: vec!["a".into(), "b".into()] });
        let err = NestedGraph::new(["a"], [("e", "a", "a")], []).unwrap_err();
        assert_eq!(err.code(), "CycleDetected");
    }

    #[test]
    fn validation_errors() {
        let err = NestedGraph::new(["a"], [("f", "a", "b")], []).unwrap_err();
        assert_eq!(err, Error::DanglingReference { id: "b".into() });
        let err =
            NestedGraph::new(["p", "c", "s"], [("pc", "p", "c"), ("cs", "c", "s"), ("ps", "p", "s")], []).unwrap_err();
        assert_eq!(err, Error::CompositionIncomplete { g: "pc".into(), f: "cs".into() });
        let err = NestedGraph::new(
            ["p", "c", "s"],
            [("pc", "p", "c"), ("cs", "c", "s"), ("ps", "p", "s")],
            [("pc", "cs", "pc")],
        )
        .unwrap_err();
        assert_eq!(err.code(), "CompositionMismatch");
        let err = NestedGraph::new(["a", "a"], Vec::<(&str, &str, &str)>::new(), []).unwrap_err();
        assert_eq!(err.code(), "DuplicateId");
    }

    #[test]
    fn associativity_violation_detected() {
        // a -x-> b -y-> c -z-> d with two parallel a->d flags picked
        // inconsistently by the two bracketings
        let err = NestedGraph::new(
            ["a", "b", "c", "d"],
            [
                ("x", "a", "b"),
                ("y", "b", "c"),
                ("z", "c", "d"),
                ("xy", "a", "c"),
                ("yz", "b", "d"),
                ("u", "a", "d"),
                ("v", "a", "d"),
            ],
            [("x", "y", "xy"), ("y", "z", "yz"), ("xy", "z", "u"), ("x", "yz", "v")],
        )
        .unwrap_err();
        assert_eq!(err.code(), "AssociativityViolation");
    }

    #[test]
    fn triangle_derived_notions() {
        let tri = triangle();
        let g = tri.grading();
        let grade = |id: &str| g.grade(tri.node_index(id).unwrap());
        assert_eq!((grade("p"), grade("c"), grade("s")), (0, 1, 2));
        let irr: Vec<&str> = tri.irreducible_flags().into_iter().map(|f| tri.flag_id(f)).collect();
        assert_eq!(irr, vec!["cs", "pc"]);
        let verts: Vec<&str> = tri.vertices().into_iter().map(|n| tri.node_id(n)).collect();
        assert_eq!(verts, vec!["s"]);
        assert!(tri.is_corolla());
        assert!(!tri.is_one_dimensional(false));
    }

    #[test]
    fn two_isolated_nodes() {
        let two = NestedGraph::discrete(["a", "b"]).unwrap();
        assert_eq!(two.grading().grades(), &[0, 0]);
        assert!(!two.is_corolla());
    }

    #[test]
    fn surface_vertices_and_closure() {
        let surf = surface();
        let verts: Vec<&str> = surf.vertices().into_iter().map(|n| surf.node_id(n)).collect();
        assert_eq!(verts, vec!["s"]);
        let c1 = surf.node_index("c1").unwrap();
        let closure = surf.full_subgraph_closure([c1]);
        assert_eq!(closure.nodes(), &["c1".to_string(), "p".to_string()]);
        assert_eq!(closure.flag_count(), 1);
        assert_eq!(closure.flag(0).id, "pc1");
    }

    #[test]
    fn full_subgraphs_of_triangle() {
        let tri = triangle();
        let s = tri.node_index("s").unwrap();
        let p = tri.node_index("p").unwrap();
        assert_eq!(tri.full_subgraph_closure([s]), tri);
        let just_p = tri.full_subgraph_closure([p]);
        assert_eq!(just_p, point_named("p"));
        assert!(tri.is_full_subgraph(&just_p));
        assert!(tri.is_full_subgraph(&tri));
        let surf = surface();
        assert!(!surf.is_full_subgraph(&point_named("s")));
    }

    #[test]
    fn one_dimensional_checks() {
        let star = corolla_star(3);
        assert!(star.is_one_dimensional(false));
        assert!(star.is_one_dimensional(true));
        let hyper =
            NestedGraph::new(["l", "a", "b", "c"], [("la", "l", "a"), ("lb", "l", "b"), ("lc", "l", "c")], []).unwrap();
        assert!(hyper.is_one_dimensional(false));
        assert!(!hyper.is_one_dimensional(true));
        // every flag of a one-dimensional graph is irreducible
        assert_eq!(hyper.irreducible_flags().len(), hyper.flag_count());
    }
}

//! Functors between nested graphs and their classification.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::NestedGraph;
use crate::quotient::{quotient_by_partition, NodePartition};

/// Where a functor sends a flag: to a flag, or to the identity at a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FlagImage {
    Flag(usize),
    Identity(usize),
}

impl FlagImage {
    pub fn is_identity(self) -> bool {
        matches!(self, FlagImage::Identity(_))
    }

    pub fn as_flag(self) -> Option<usize> {
        match self {
            FlagImage::Flag(f) => Some(f),
            FlagImage::Identity(_) => None,
        }
    }

    pub fn dom(self, graph: &NestedGraph) -> usize {
        match self {
            FlagImage::Flag(f) => graph.flag(f).dom,
            FlagImage::Identity(n) => n,
        }
    }

    pub fn cod(self, graph: &NestedGraph) -> usize {
        match self {
            FlagImage::Flag(f) => graph.flag(f).cod,
            FlagImage::Identity(n) => n,
        }
    }
}

/// `second ∘ first` in `graph`, absorbing identities. `None` if the two
/// morphisms do not compose.
pub fn compose_images(graph: &NestedGraph, first: FlagImage, second: FlagImage) -> Option<FlagImage> {
    if first.cod(graph) != second.dom(graph) {
        return None;
    }
    match (first, second) {
        (FlagImage::Identity(_), s) => Some(s),
        (f, FlagImage::Identity(_)) => Some(f),
        (FlagImage::Flag(g), FlagImage::Flag(f)) => graph.compose(g, f).map(FlagImage::Flag),
    }
}

/// A functor between nested graphs. Identities are implicit on both sides.
#[derive(Debug, Clone)]
pub struct GraphFunctor {
    source: Arc<NestedGraph>,
    target: Arc<NestedGraph>,
    node_map: Vec<usize>,
    flag_map: Vec<FlagImage>,
}

impl PartialEq for GraphFunctor {
    fn eq(&self, other: &Self) -> bool {
        self.node_map == other.node_map
            && self.flag_map == other.flag_map
            && same_graph(&self.source, &other.source)
            && same_graph(&self.target, &other.target)
    }
}

impl Eq for GraphFunctor {}

pub(crate) fn same_graph(a: &Arc<NestedGraph>, b: &Arc<NestedGraph>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl GraphFunctor {
    /// Checks endpoint compatibility and functoriality.
    pub fn new(
        source: Arc<NestedGraph>,
        target: Arc<NestedGraph>,
        node_map: Vec<usize>,
        flag_map: Vec<FlagImage>,
    ) -> Result<Self> {
        if node_map.len() != source.node_count() {
            let missing = source.nodes().get(node_map.len()).cloned().unwrap_or_default();
            return Err(Error::DanglingReference { id: missing });
        }
        if flag_map.len() != source.flag_count() {
            let missing = source.flags().get(flag_map.len()).map(|f| f.id.clone()).unwrap_or_default();
            return Err(Error::DanglingReference { id: missing });
        }
        for &n in &node_map {
            if n >= target.node_count() {
                return Err(Error::DanglingReference { id: n.to_string() });
            }
        }
        for (f, image) in flag_map.iter().enumerate() {
            let fl = source.flag(f);
            let ok = match *image {
                FlagImage::Flag(t) if t < target.flag_count() => {
                    let tf = target.flag(t);
                    tf.dom == node_map[fl.dom] && tf.cod == node_map[fl.cod]
                }
                FlagImage::Flag(t) => return Err(Error::DanglingReference { id: t.to_string() }),
                FlagImage::Identity(n) => n == node_map[fl.dom] && n == node_map[fl.cod],
            };
            if !ok {
                return Err(Error::EndpointMismatch { flag: fl.id.clone() });
            }
        }
        for (g, f, h) in source.comp_entries() {
            let composite = compose_images(&target, flag_map[g], flag_map[f]);
            if composite != Some(flag_map[h]) {
                return Err(Error::FunctorialityViolation {
                    g: source.flag_id(g).to_string(),
                    f: source.flag_id(f).to_string(),
                });
            }
        }
        Ok(GraphFunctor { source, target, node_map, flag_map })
    }

    pub fn identity(graph: Arc<NestedGraph>) -> Self {
        let node_map = (0..graph.node_count()).collect();
        let flag_map = (0..graph.flag_count()).map(FlagImage::Flag).collect();
        GraphFunctor { source: graph.clone(), target: graph, node_map, flag_map }
    }

    /// Inclusion of a graph whose ids all occur in `target` with the same
    /// endpoints, e.g. a full subgraph.
    pub fn inclusion(sub: Arc<NestedGraph>, target: Arc<NestedGraph>) -> Result<Self> {
        let node_map = sub
            .nodes()
            .iter()
            .map(|n| target.node_index(n).ok_or_else(|| Error::DanglingReference { id: n.clone() }))
            .collect::<Result<Vec<_>>>()?;
        let flag_map = sub
            .flags()
            .iter()
            .map(|f| {
                target
                    .flag_index(&f.id)
                    .map(FlagImage::Flag)
                    .ok_or_else(|| Error::DanglingReference { id: f.id.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(sub, target, node_map, flag_map)
    }

    pub fn source(&self) -> &Arc<NestedGraph> {
        &self.source
    }

    pub fn target(&self) -> &Arc<NestedGraph> {
        &self.target
    }

    pub fn node(&self, n: usize) -> usize {
        self.node_map[n]
    }

    pub fn flag(&self, f: usize) -> FlagImage {
        self.flag_map[f]
    }

    pub fn node_map(&self) -> &[usize] {
        &self.node_map
    }

    pub fn flag_map(&self) -> &[FlagImage] {
        &self.flag_map
    }

    pub fn contracts(&self, f: usize) -> bool {
        self.flag_map[f].is_identity()
    }

    /// Image of a composable chain of source flags (first applied first).
    pub fn chain_image(&self, chain: &[usize]) -> Option<FlagImage> {
        let (&first, rest) = chain.split_first()?;
        rest.iter().try_fold(self.flag_map[first], |acc, &f| compose_images(&self.target, acc, self.flag_map[f]))
    }

    /// Nodes decorating at least one contracted flag.
    pub fn contracted_nodes(&self) -> BTreeSet<usize> {
        (0..self.flag_map.len()).filter(|&f| self.contracts(f)).map(|f| self.source.flag(f).dom).collect()
    }

    /// The first source flag at which admissibility fails, if any.
    pub fn admissibility_violation(&self) -> Option<usize> {
        for f in self.source.irreducible_flags() {
            if let FlagImage::Flag(t) = self.flag_map[f] {
                if !self.target.is_irreducible(t) {
                    return Some(f);
                }
            }
        }
        for f in self.source.irreducible_flags() {
            if !self.contracts(f) {
                continue;
            }
            let dom = self.source.flag(f).dom;
            if let Some(&g) =
                self.source.out_flags(dom).iter().find(|&&g| self.source.is_irreducible(g) && !self.contracts(g))
            {
                return Some(g);
            }
        }
        None
    }

    /// Irreducible flags go to identities or irreducible flags, and
    /// contracting one irreducible flag out of a node contracts all of them.
    pub fn is_admissible(&self) -> bool {
        self.admissibility_violation().is_none()
    }

    /// The first target node or flag not generated by the image, if any.
    pub fn epi_violation(&self) -> Option<String> {
        let mut hit = vec![false; self.target.node_count()];
        for &n in &self.node_map {
            hit[n] = true;
        }
        if let Some(n) = hit.iter().position(|&h| !h) {
            return Some(self.target.node_id(n).to_string());
        }
        let generated = self.target.generated_by(self.flag_map.iter().filter_map(|i| i.as_flag()));
        generated.iter().position(|&g| !g).map(|f| self.target.flag_id(f).to_string())
    }

    /// Surjective on nodes, and the image flags generate every target flag.
    pub fn is_epi(&self) -> bool {
        self.epi_violation().is_none()
    }

    /// Source nodes over `node` together with the flags sent to its identity.
    pub fn fiber(&self, node: usize) -> NestedGraph {
        let (nodes, flags) = self.fiber_parts(node);
        self.source.subcategory(&nodes, &flags).expect("fibers of a functor are subcategories")
    }

    fn fiber_parts(&self, node: usize) -> (BTreeSet<usize>, BTreeSet<usize>) {
        let nodes: BTreeSet<usize> = (0..self.node_map.len()).filter(|&n| self.node_map[n] == node).collect();
        let flags: BTreeSet<usize> =
            (0..self.flag_map.len()).filter(|&f| self.flag_map[f] == FlagImage::Identity(node)).collect();
        (nodes, flags)
    }

    /// Vertices of the fiber over `node`: nodes over it decorating no
    /// contracted flag.
    pub fn fiber_vertices(&self, node: usize) -> Vec<usize> {
        (0..self.node_map.len())
            .filter(|&n| self.node_map[n] == node && !self.source.out_flags(n).iter().any(|&f| self.contracts(f)))
            .collect()
    }

    /// The partition of source nodes induced by `node_map`.
    pub fn node_partition(&self) -> NodePartition {
        let mut blocks = vec![Vec::new(); self.target.node_count()];
        for (n, &t) in self.node_map.iter().enumerate() {
            blocks[t].push(n);
        }
        blocks.retain(|b| !b.is_empty());
        NodePartition::from_blocks_unchecked(blocks)
    }

    /// An admissible epi-functor whose target is, compatibly with the
    /// projection, the quotient of the source by the induced node partition.
    pub fn is_merger(&self) -> bool {
        if self.flag_map.iter().any(|i| i.is_identity()) || !self.is_admissible() || !self.is_epi() {
            return false;
        }
        let Ok((_, projection)) = quotient_by_partition(&self.source, &self.node_partition()) else {
            return false;
        };
        match induced_through_epi(&projection, self) {
            Ok(iota) => iota.is_isomorphism(),
            Err(_) => false,
        }
    }

    /// An admissible epi-functor all of whose fibers are corollas.
    pub fn is_contraction(&self) -> bool {
        self.is_admissible()
            && self.is_epi()
            && (0..self.target.node_count()).all(|n| self.fiber_vertices(n).len() == 1)
    }

    /// Bijective on nodes and on flags, never hitting an identity.
    pub fn is_isomorphism(&self) -> bool {
        let mut seen = vec![false; self.target.node_count()];
        if self.node_map.len() != seen.len() || self.flag_map.len() != self.target.flag_count() {
            return false;
        }
        for &n in &self.node_map {
            if std::mem::replace(&mut seen[n], true) {
                return false;
            }
        }
        let mut seen = vec![false; self.target.flag_count()];
        for image in &self.flag_map {
            match image {
                FlagImage::Flag(t) if !seen[*t] => seen[*t] = true,
                _ => return false,
            }
        }
        true
    }

    /// Injective on nodes and flags, never contracting.
    pub fn is_injective(&self) -> bool {
        let mut nodes: Vec<usize> = self.node_map.clone();
        nodes.sort_unstable();
        nodes.dedup();
        if nodes.len() != self.node_map.len() {
            return false;
        }
        let mut flags = Vec::with_capacity(self.flag_map.len());
        for image in &self.flag_map {
            match image {
                FlagImage::Flag(t) => flags.push(*t),
                FlagImage::Identity(_) => return false,
            }
        }
        flags.sort_unstable();
        flags.dedup();
        flags.len() == self.flag_map.len()
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Option<GraphFunctor> {
        if !self.is_isomorphism() {
            return None;
        }
        let mut node_map = vec![0; self.node_map.len()];
        for (n, &t) in self.node_map.iter().enumerate() {
            node_map[t] = n;
        }
        let mut flag_map = vec![FlagImage::Identity(0); self.flag_map.len()];
        for (f, image) in self.flag_map.iter().enumerate() {
            if let FlagImage::Flag(t) = image {
                flag_map[*t] = FlagImage::Flag(f);
            }
        }
        Some(GraphFunctor { source: self.target.clone(), target: self.source.clone(), node_map, flag_map })
    }

    pub(crate) fn with_source(mut self, source: Arc<NestedGraph>) -> Self {
        debug_assert!(*self.source == *source);
        self.source = source;
        self
    }
}

/// `psi ∘ phi`: apply `phi` first.
pub fn compose_functors(psi: &GraphFunctor, phi: &GraphFunctor) -> Result<GraphFunctor> {
    if !same_graph(&phi.target, &psi.source) {
        return Err(Error::SourceTargetMismatch);
    }
    let node_map = phi.node_map.iter().map(|&n| psi.node_map[n]).collect();
    let flag_map = phi
        .flag_map
        .iter()
        .map(|image| match *image {
            FlagImage::Flag(f) => psi.flag_map[f],
            FlagImage::Identity(n) => FlagImage::Identity(psi.node_map[n]),
        })
        .collect();
    Ok(GraphFunctor { source: phi.source.clone(), target: psi.target.clone(), node_map, flag_map })
}

/// The unique functor `ι` with `ι ∘ epi = other`, given that `epi` is an
/// epi-functor out of the same source as `other`.
pub fn induced_through_epi(epi: &GraphFunctor, other: &GraphFunctor) -> Result<GraphFunctor> {
    if !same_graph(&epi.source, &other.source) {
        return Err(Error::SourceTargetMismatch);
    }
    let mid = &epi.target;
    let ill = |id: &str| Error::InducedMapIllDefined { id: id.to_string() };

    let mut node_map: Vec<Option<usize>> = vec![None; mid.node_count()];
    for (n, &m) in epi.node_map.iter().enumerate() {
        let want = other.node_map[n];
        match node_map[m] {
            Some(prev) if prev != want => return Err(ill(mid.node_id(m))),
            _ => node_map[m] = Some(want),
        }
    }
    let node_map = node_map
        .into_iter()
        .enumerate()
        .map(|(m, n)| n.ok_or_else(|| Error::NotEpi { id: mid.node_id(m).to_string() }))
        .collect::<Result<Vec<_>>>()?;

    let mut flag_map: Vec<Option<FlagImage>> = vec![None; mid.flag_count()];
    for (f, image) in epi.flag_map.iter().enumerate() {
        let want = other.flag_map[f];
        match *image {
            FlagImage::Flag(m) => match flag_map[m] {
                Some(prev) if prev != want => return Err(ill(mid.flag_id(m))),
                _ => flag_map[m] = Some(want),
            },
            FlagImage::Identity(_) => {
                if !want.is_identity() {
                    return Err(ill(epi.source.flag_id(f)));
                }
            }
        }
    }
    // fill in composites in order of increasing span so both factors are known
    let mut order: Vec<usize> = (0..mid.flag_count()).collect();
    order.sort_by_key(|&f| mid.span(f));
    let mut by_composite: Vec<Vec<(usize, usize)>> = vec![Vec::new(); mid.flag_count()];
    for (g, f, h) in mid.comp_entries() {
        by_composite[h].push((g, f));
    }
    for &h in &order {
        for &(g, f) in &by_composite[h] {
            let (Some(a), Some(b)) = (flag_map[g], flag_map[f]) else { continue };
            let Some(c) = compose_images(&other.target, a, b) else {
                return Err(ill(mid.flag_id(h)));
            };
            match flag_map[h] {
                Some(prev) if prev != c => return Err(ill(mid.flag_id(h))),
                _ => flag_map[h] = Some(c),
            }
        }
    }
    let flag_map = flag_map
        .into_iter()
        .enumerate()
        .map(|(m, f)| f.ok_or_else(|| Error::NotEpi { id: mid.flag_id(m).to_string() }))
        .collect::<Result<Vec<_>>>()?;

    GraphFunctor::new(mid.clone(), other.target.clone(), node_map, flag_map).map_err(|e| match e {
        Error::EndpointMismatch { flag } => Error::InducedMapIllDefined { id: flag },
        Error::FunctorialityViolation { g, .. } => Error::InducedMapIllDefined { id: g },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    fn collapse(graph: NestedGraph) -> GraphFunctor {
        let graph = Arc::new(graph);
        let pt = Arc::new(point());
        GraphFunctor::new(
            graph.clone(),
            pt,
            vec![0; graph.node_count()],
            vec![FlagImage::Identity(0); graph.flag_count()],
        )
        .unwrap()
    }

    fn ids(g: &NestedGraph, set: impl IntoIterator<Item = usize>) -> Vec<String> {
        set.into_iter().map(|n| g.node_id(n).to_string()).collect()
    }

    #[test]
    fn identity_is_everything() {
        let tri = Arc::new(triangle());
        let id = GraphFunctor::identity(tri.clone());
        assert!(id.contracted_nodes().is_empty());
        assert!(id.is_admissible() && id.is_epi() && id.is_merger() && id.is_contraction());
        for n in 0..tri.node_count() {
            let fiber = id.fiber(n);
            assert_eq!(fiber.node_count(), 1);
            assert_eq!(fiber.flag_count(), 0);
        }
    }

    #[test]
    fn collapse_of_triangle() {
        let phi = collapse(triangle());
        let tri = phi.source().clone();
        assert_eq!(ids(&tri, phi.contracted_nodes()), vec!["c", "p"]);
        assert!(phi.is_admissible());
        assert_eq!(phi.fiber(0), *tri);
        assert!(phi.is_contraction());
        assert!(!phi.is_merger());
    }

    #[test]
    fn endpoint_mismatch() {
        let tri = Arc::new(triangle());
        let pc = tri.flag_index("pc").unwrap();
        let cs = tri.flag_index("cs").unwrap();
        let mut flag_map: Vec<FlagImage> = (0..tri.flag_count()).map(FlagImage::Flag).collect();
        flag_map[pc] = FlagImage::Flag(cs);
        let err = GraphFunctor::new(tri.clone(), tri.clone(), (0..3).collect(), flag_map).unwrap_err();
        assert_eq!(err, Error::EndpointMismatch { flag: "pc".into() });
    }

    #[test]
    fn functoriality_violation() {
        // send ps to a parallel flag that is not the composite
        let tri = Arc::new(triangle());
        let wide = Arc::new(
            NestedGraph::new(
                ["p", "c", "s"],
                [("pc", "p", "c"), ("cs", "c", "s"), ("ps", "p", "s"), ("ps2", "p", "s")],
                [("pc", "cs", "ps")],
            )
            .unwrap(),
        );
        let mut phi_flags: Vec<FlagImage> =
            tri.flags().iter().map(|f| FlagImage::Flag(wide.flag_index(&f.id).unwrap())).collect();
        let node_map: Vec<usize> = tri.nodes().iter().map(|n| wide.node_index(n).unwrap()).collect();
        assert!(GraphFunctor::new(tri.clone(), wide.clone(), node_map.clone(), phi_flags.clone()).is_ok());
        phi_flags[tri.flag_index("ps").unwrap()] = FlagImage::Flag(wide.flag_index("ps2").unwrap());
        let err = GraphFunctor::new(tri, wide, node_map, phi_flags).unwrap_err();
        assert_eq!(err, Error::FunctorialityViolation { g: "pc".into(), f: "cs".into() });
    }

    #[test]
    fn condition_one_fails_when_irreducible_hits_composite() {
        // Tri' inserts m between c and s; send cs to the composite c->m->s
        let tri = Arc::new(triangle());
        let tri2 = Arc::new(
            NestedGraph::new(
                ["p", "c", "m", "s"],
                [
                    ("pc", "p", "c"),
                    ("cm", "c", "m"),
                    ("ms", "m", "s"),
                    ("cs", "c", "s"),
                    ("pm", "p", "m"),
                    ("ps", "p", "s"),
                ],
                [("pc", "cm", "pm"), ("cm", "ms", "cs"), ("pm", "ms", "ps"), ("pc", "cs", "ps")],
            )
            .unwrap(),
        );
        let phi = GraphFunctor::inclusion(tri.clone(), tri2).unwrap();
        assert!(!phi.is_admissible());
        assert_eq!(phi.admissibility_violation(), tri.flag_index("cs"));
    }

    #[test]
    fn condition_two_fails_on_half_contracted_point() {
        // contract pc1 only: p and c1 become one node, pc2 survives
        let surf = Arc::new(surface());
        let target = Arc::new(
            NestedGraph::new(
                ["x", "c2", "s"],
                [("xc2", "x", "c2"), ("c2s", "c2", "s"), ("xs", "x", "s")],
                [("xc2", "c2s", "xs")],
            )
            .unwrap(),
        );
        let t = |id: &str| target.node_index(id).unwrap();
        let tf = |id: &str| target.flag_index(id).unwrap();
        let node_map = surf
            .nodes()
            .iter()
            .map(|n| match n.as_str() {
                "p" | "c1" => t("x"),
                other => t(other),
            })
            .collect();
        let flag_map = surf
            .flags()
            .iter()
            .map(|f| match f.id.as_str() {
                "pc1" => FlagImage::Identity(t("x")),
                "pc2" => FlagImage::Flag(tf("xc2")),
                "c1s" | "ps" => FlagImage::Flag(tf("xs")),
                "c2s" => FlagImage::Flag(tf("c2s")),
                _ => unreachable!(),
            })
            .collect();
        let phi = GraphFunctor::new(surf.clone(), target, node_map, flag_map).unwrap();
        assert!(!phi.is_admissible());
    }

    #[test]
    fn epi_needs_all_nodes() {
        let tri = Arc::new(triangle());
        let p = Arc::new(point_named("p"));
        let inc = GraphFunctor::inclusion(p, tri).unwrap();
        assert!(!inc.is_epi());
        assert_eq!(inc.epi_violation().as_deref(), Some("c"));
    }

    #[test]
    fn merging_two_points() {
        let two = Arc::new(NestedGraph::discrete(["a", "b"]).unwrap());
        let pt = Arc::new(point());
        let mu = GraphFunctor::new(two, pt, vec![0, 0], vec![]).unwrap();
        assert!(mu.is_merger());
        assert!(!mu.is_contraction());
        assert_eq!(mu.fiber(0).flag_count(), 0);
    }

    #[test]
    fn compose_with_identity() {
        let phi = collapse(triangle());
        let id = GraphFunctor::identity(phi.source().clone());
        assert_eq!(compose_functors(&phi, &id).unwrap(), phi);
        let err = compose_functors(&id, &phi).unwrap_err();
        assert_eq!(err, Error::SourceTargetMismatch);
    }

    #[test]
    fn inverse_round_trip() {
        let tri = Arc::new(triangle());
        let id = GraphFunctor::identity(tri);
        let inv = id.inverse().unwrap();
        assert_eq!(inv, id);
    }
}

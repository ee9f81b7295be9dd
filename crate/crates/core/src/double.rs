//! Dependencies (embeddings onto full subgraphs) and the commutative squares
//! relating a morphism to its restriction along them.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::functor::{compose_functors, induced_through_epi, same_graph, FlagImage, GraphFunctor};
use crate::graph::NestedGraph;
use crate::ngr::{ngr_compose, shift_iso, NGrMorphism};

/// An injective functor whose image is a full subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dependency(GraphFunctor);

impl Dependency {
    pub fn new(functor: GraphFunctor) -> Result<Self> {
        if let Some(id) = dependency_violation(&functor) {
            return Err(Error::NotDependency { id });
        }
        Ok(Dependency(functor))
    }

    pub fn identity(graph: Arc<NestedGraph>) -> Self {
        Dependency(GraphFunctor::identity(graph))
    }

    /// The inclusion of a full subgraph given by id.
    pub fn inclusion(sub: Arc<NestedGraph>, graph: Arc<NestedGraph>) -> Result<Self> {
        Self::new(GraphFunctor::inclusion(sub, graph)?)
    }

    pub fn functor(&self) -> &GraphFunctor {
        &self.0
    }

    pub fn into_functor(self) -> GraphFunctor {
        self.0
    }

    pub fn source(&self) -> &Arc<NestedGraph> {
        self.0.source()
    }

    pub fn target(&self) -> &Arc<NestedGraph> {
        self.0.target()
    }

    /// Image as node and flag index sets of the target.
    pub fn image(&self) -> (BTreeSet<usize>, BTreeSet<usize>) {
        let nodes = self.0.node_map().iter().copied().collect();
        let flags = self.0.flag_map().iter().filter_map(|i| i.as_flag()).collect();
        (nodes, flags)
    }

    fn compose(&self, inner: &Dependency) -> Result<Dependency> {
        Ok(Dependency(compose_functors(&self.0, &inner.0)?))
    }
}

pub fn is_dependency(functor: &GraphFunctor) -> bool {
    dependency_violation(functor).is_none()
}

fn dependency_violation(functor: &GraphFunctor) -> Option<String> {
    let target = functor.target();
    if !functor.is_injective() {
        let src = functor.source();
        let mut seen = HashMap::new();
        for (n, &t) in functor.node_map().iter().enumerate() {
            if seen.insert(t, n).is_some() {
                return Some(target.node_id(t).to_string());
            }
        }
        return Some(
            (0..src.flag_count())
                .find(|&f| functor.contracts(f))
                .map(|f| src.flag_id(f).to_string())
                .unwrap_or_else(|| "flags".to_string()),
        );
    }
    let nodes: BTreeSet<usize> = functor.node_map().iter().copied().collect();
    let flags: BTreeSet<usize> = functor.flag_map().iter().filter_map(|i| i.as_flag()).collect();
    for &n in &nodes {
        for &f in target.in_flags(n) {
            if !flags.contains(&f) {
                return Some(target.flag_id(f).to_string());
            }
        }
    }
    None
}

/// Nodes and flags of `functor`'s source landing in the given part of its
/// target: flags mapped into `flags` or to an identity at one of `nodes`.
pub fn preimage(
    functor: &GraphFunctor,
    nodes: &BTreeSet<usize>,
    flags: &BTreeSet<usize>,
) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let pre_nodes = (0..functor.source().node_count()).filter(|&n| nodes.contains(&functor.node(n))).collect();
    let pre_flags = (0..functor.source().flag_count())
        .filter(|&f| match functor.flag(f) {
            FlagImage::Flag(t) => flags.contains(&t),
            FlagImage::Identity(n) => nodes.contains(&n),
        })
        .collect();
    (pre_nodes, pre_flags)
}

/// A morphism of the double category: `top` over `bottom`, linked by
/// dependencies at the source, the middle and the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismSquare {
    top: NGrMorphism,
    bottom: NGrMorphism,
    deps: [Dependency; 3],
}

impl MorphismSquare {
    /// Checks that both squares commute and that each dependency's image is
    /// the full preimage of the next one's.
    pub fn new(top: NGrMorphism, bottom: NGrMorphism, deps: [Dependency; 3]) -> Result<Self> {
        let boundary = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::BoundaryMismatch { what: what.to_string() })
            }
        };
        let [d1, d2, d3] = &deps;
        boundary(
            same_graph(d1.source(), bottom.source()) && same_graph(d1.target(), top.source()),
            "source dependency",
        )?;
        boundary(
            same_graph(d2.source(), bottom.middle()) && same_graph(d2.target(), top.middle()),
            "middle dependency",
        )?;
        boundary(
            same_graph(d3.source(), bottom.target()) && same_graph(d3.target(), top.target()),
            "target dependency",
        )?;

        commutes(&compose_functors(top.merger(), d1.functor())?, &compose_functors(d2.functor(), bottom.merger())?)?;
        commutes(
            &compose_functors(top.contraction(), d2.functor())?,
            &compose_functors(d3.functor(), bottom.contraction())?,
        )?;

        let (n3, f3) = d3.image();
        let (n2, f2) = preimage(top.contraction(), &n3, &f3);
        same_part(top.middle(), (n2, f2), d2.image(), "contraction")?;
        let (n2, f2) = d2.image();
        let (n1, f1) = preimage(top.merger(), &n2, &f2);
        same_part(top.source(), (n1, f1), d1.image(), "merger")?;
        Ok(MorphismSquare { top, bottom, deps })
    }

    /// The square with identity dependencies over `morphism`.
    pub fn identity(morphism: NGrMorphism) -> Self {
        let deps = [
            Dependency::identity(morphism.source().clone()),
            Dependency::identity(morphism.middle().clone()),
            Dependency::identity(morphism.target().clone()),
        ];
        MorphismSquare { top: morphism.clone(), bottom: morphism, deps }
    }

    pub fn top(&self) -> &NGrMorphism {
        &self.top
    }

    pub fn bottom(&self) -> &NGrMorphism {
        &self.bottom
    }

    pub fn deps(&self) -> &[Dependency; 3] {
        &self.deps
    }
}

pub fn validate_square(top: NGrMorphism, bottom: NGrMorphism, deps: [Dependency; 3]) -> Result<MorphismSquare> {
    MorphismSquare::new(top, bottom, deps)
}

fn commutes(a: &GraphFunctor, b: &GraphFunctor) -> Result<()> {
    let src = a.source();
    if let Some(n) = (0..src.node_count()).find(|&n| a.node(n) != b.node(n)) {
        return Err(Error::NotCommuting { id: src.node_id(n).to_string() });
    }
    if let Some(f) = (0..src.flag_count()).find(|&f| a.flag(f) != b.flag(f)) {
        return Err(Error::NotCommuting { id: src.flag_id(f).to_string() });
    }
    Ok(())
}

type Part = (BTreeSet<usize>, BTreeSet<usize>);

fn same_part(graph: &NestedGraph, expected: Part, actual: Part, side: &'static str) -> Result<()> {
    if let Some(&n) = expected.0.symmetric_difference(&actual.0).next() {
        return Err(Error::PreimageMismatch { side, id: graph.node_id(n).to_string() });
    }
    if let Some(&f) = expected.1.symmetric_difference(&actual.1).next() {
        return Err(Error::PreimageMismatch { side, id: graph.flag_id(f).to_string() });
    }
    Ok(())
}

/// Restricts `morphism` to the full preimages of `dep`'s image, giving the
/// unique square with `dep` as target dependency.
pub fn restrict_morphism(morphism: &NGrMorphism, dep: &Dependency) -> Result<MorphismSquare> {
    if !same_graph(dep.target(), morphism.target()) {
        return Err(Error::BoundaryMismatch { what: "dependency does not land in the target".into() });
    }
    let (n3, f3) = dep.image();
    let (n2, f2) = preimage(morphism.contraction(), &n3, &f3);
    let (n1, f1) = preimage(morphism.merger(), &n2, &f2);
    let sub_middle = Arc::new(morphism.middle().subcategory(&n2, &f2)?);
    let sub_source = Arc::new(morphism.source().subcategory(&n1, &f1)?);
    let d2 = GraphFunctor::inclusion(sub_middle.clone(), morphism.middle().clone())?;
    let d1 = Dependency::inclusion(sub_source.clone(), morphism.source().clone())?;

    let merger = restrict(morphism.merger(), d1.functor(), &d2)?;
    if !merger.is_merger() {
        return Err(Error::RestrictionNotMerger);
    }
    let contraction = restrict(morphism.contraction(), &d2, dep.functor())?;
    if !contraction.is_contraction() {
        return Err(Error::RestrictionNotContraction);
    }

    let (bottom, _) = NGrMorphism::canonicalize(merger.clone(), contraction.clone())?;
    let iota = shift_iso(&merger, &contraction, bottom.merger(), bottom.contraction())
        .ok_or_else(|| Error::BoundaryMismatch { what: "restricted pair is not canonical".into() })?;
    let d2 = Dependency::new(compose_functors(&d2, &iota.inverse().expect("isomorphism"))?)?;
    let d1 = Dependency::new(d1.into_functor().with_source(bottom.source().clone()))?;
    let d3 = Dependency::new(dep.functor().clone().with_source(bottom.target().clone()))?;
    MorphismSquare::new(morphism.clone(), bottom, [d1, d2, d3])
}

/// `functor` restricted along the injection `inner` of its source, landing
/// in the source of the injection `outer` of its target.
fn restrict(functor: &GraphFunctor, inner: &GraphFunctor, outer: &GraphFunctor) -> Result<GraphFunctor> {
    let sub = inner.source();
    let back_nodes: HashMap<usize, usize> = outer.node_map().iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let back_flags: HashMap<usize, usize> =
        outer.flag_map().iter().enumerate().filter_map(|(i, img)| img.as_flag().map(|t| (t, i))).collect();
    let miss = || Error::BoundaryMismatch { what: "restriction leaves the dependency image".into() };
    let node_map = (0..sub.node_count())
        .map(|n| back_nodes.get(&functor.node(inner.node(n))).copied().ok_or_else(miss))
        .collect::<Result<Vec<_>>>()?;
    let flag_map = (0..sub.flag_count())
        .map(|f| {
            let FlagImage::Flag(outer_f) = inner.flag(f) else { unreachable!("injections never contract") };
            match functor.flag(outer_f) {
                FlagImage::Flag(t) => back_flags.get(&t).copied().map(FlagImage::Flag).ok_or_else(miss),
                FlagImage::Identity(n) => back_nodes.get(&n).copied().map(FlagImage::Identity).ok_or_else(miss),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    GraphFunctor::new(sub.clone(), outer.source().clone(), node_map, flag_map)
}

/// Horizontal composite: `second` after `first`, sharing the dependency
/// between `first`'s target and `second`'s source.
pub fn hcompose_squares(second: &MorphismSquare, first: &MorphismSquare) -> Result<MorphismSquare> {
    if first.deps[2] != second.deps[0] {
        return Err(Error::BoundaryMismatch { what: "shared dependency differs".into() });
    }
    let top = ngr_compose(&second.top, &first.top)?;
    let bottom = ngr_compose(&second.bottom, &first.bottom)?;
    let along = compose_functors(top.merger(), first.deps[0].functor())?;
    let middle = Dependency::new(induced_through_epi(bottom.merger(), &along)?)?;
    MorphismSquare::new(top, bottom, [first.deps[0].clone(), middle, second.deps[2].clone()])
}

/// Vertical composite: `lower` stacked under `upper`, whose bottom must be
/// `lower`'s top.
pub fn vcompose_squares(lower: &MorphismSquare, upper: &MorphismSquare) -> Result<MorphismSquare> {
    if lower.top != upper.bottom {
        return Err(Error::BoundaryMismatch { what: "upper bottom differs from lower top".into() });
    }
    let deps = [
        upper.deps[0].compose(&lower.deps[0])?,
        upper.deps[1].compose(&lower.deps[1])?,
        upper.deps[2].compose(&lower.deps[2])?,
    ];
    MorphismSquare::new(upper.top.clone(), lower.bottom.clone(), deps)
}

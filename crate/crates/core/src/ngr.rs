//! The category of nested graphs: morphisms are a merger followed by a
//! contraction, stored in canonical form.
//!
//! The canonical form of an admissible epi-functor `φ` identifies two nodes
//! exactly when they have the same image and are both vertices of the fiber
//! over it; this is the smallest merger through which `φ` factors with a
//! contraction as second leg.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::functor::{compose_functors, induced_through_epi, same_graph, GraphFunctor};
use crate::graph::NestedGraph;
use crate::quotient::{quotient_by_partition, NodePartition};

/// Splits an admissible epi-functor into its minimal merger and the induced
/// contraction, with `contraction ∘ merger = φ` on the nose.
pub fn decompose(phi: &GraphFunctor) -> Result<(GraphFunctor, GraphFunctor)> {
    if let Some(f) = phi.admissibility_violation() {
        return Err(Error::NotAdmissible { flag: phi.source().flag_id(f).to_string() });
    }
    if let Some(id) = phi.epi_violation() {
        return Err(Error::NotEpi { id });
    }
    let source = phi.source();
    let mut blocks = Vec::new();
    let mut in_block = vec![false; source.node_count()];
    for node in 0..phi.target().node_count() {
        let vertices = phi.fiber_vertices(node);
        for &v in &vertices {
            in_block[v] = true;
        }
        blocks.push(vertices);
    }
    blocks.extend((0..source.node_count()).filter(|&n| !in_block[n]).map(|n| vec![n]));
    blocks.retain(|b| !b.is_empty());
    let partition = NodePartition::new(source, blocks)?;
    let (_, merger) = quotient_by_partition(source, &partition)?;
    let contraction = induced_through_epi(&merger, phi)?;
    Ok((merger, contraction))
}

/// A morphism of nested graphs in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NGrMorphism {
    merger: GraphFunctor,
    contraction: GraphFunctor,
}

impl NGrMorphism {
    /// Canonicalizes a (merger, contraction) pair.
    pub fn new(merger: GraphFunctor, contraction: GraphFunctor) -> Result<Self> {
        Self::canonicalize(merger, contraction).map(|(m, _)| m)
    }

    /// Like [`NGrMorphism::new`], also reporting whether the pair was already
    /// canonical up to an isomorphism of the middle graph.
    pub fn canonicalize(merger: GraphFunctor, contraction: GraphFunctor) -> Result<(Self, bool)> {
        if !same_graph(merger.target(), contraction.source()) {
            return Err(Error::SourceTargetMismatch);
        }
        if !merger.is_merger() {
            return Err(Error::NotMerger);
        }
        if !contraction.is_contraction() {
            return Err(Error::NotContraction);
        }
        let phi = compose_functors(&contraction, &merger)?;
        let canonical = Self::from_functor(&phi)?;
        let was_canonical = shift_iso(&merger, &contraction, &canonical.merger, &canonical.contraction).is_some();
        Ok((canonical, was_canonical))
    }

    /// The morphism represented by an admissible epi-functor.
    pub fn from_functor(phi: &GraphFunctor) -> Result<Self> {
        let (merger, contraction) = decompose(phi)?;
        Ok(NGrMorphism { merger, contraction })
    }

    pub fn identity(graph: Arc<NestedGraph>) -> Self {
        let id = GraphFunctor::identity(graph);
        NGrMorphism { merger: id.clone(), contraction: id }
    }

    pub fn merger(&self) -> &GraphFunctor {
        &self.merger
    }

    pub fn contraction(&self) -> &GraphFunctor {
        &self.contraction
    }

    pub fn source(&self) -> &Arc<NestedGraph> {
        self.merger.source()
    }

    pub fn middle(&self) -> &Arc<NestedGraph> {
        self.merger.target()
    }

    pub fn target(&self) -> &Arc<NestedGraph> {
        self.contraction.target()
    }

    /// The underlying functor `contraction ∘ merger`.
    pub fn composite(&self) -> GraphFunctor {
        compose_functors(&self.contraction, &self.merger).expect("middle graphs agree")
    }
}

pub fn ngr_identity(graph: Arc<NestedGraph>) -> NGrMorphism {
    NGrMorphism::identity(graph)
}

pub fn make_morphism(merger: GraphFunctor, contraction: GraphFunctor) -> Result<NGrMorphism> {
    NGrMorphism::new(merger, contraction)
}

/// `second ∘ first`. The contraction of `first` followed by the merger of
/// `second` is decomposed again and the outer legs are composed.
pub fn ngr_compose(second: &NGrMorphism, first: &NGrMorphism) -> Result<NGrMorphism> {
    let (merger, contraction) = compose_pairs(second, first)?;
    NGrMorphism::new(merger, contraction)
}

/// The composite pair before canonicalization: `(μ′∘μ₁, κ₂∘κ′)` where
/// `(μ′, κ′)` decomposes `μ₂∘κ₁`.
pub fn compose_pairs(second: &NGrMorphism, first: &NGrMorphism) -> Result<(GraphFunctor, GraphFunctor)> {
    if !same_graph(first.target(), second.source()) {
        return Err(Error::SourceTargetMismatch);
    }
    let swapped = compose_functors(&second.merger, &first.contraction)?;
    let (inner_merger, inner_contraction) = decompose(&swapped)?;
    let merger = compose_functors(&inner_merger, &first.merger)?;
    let contraction = compose_functors(&second.contraction, &inner_contraction)?;
    Ok((merger, contraction))
}

/// The isomorphism `ι` of middles with `ι∘μ₁ = μ₂` and `κ₂∘ι = κ₁`, if it
/// exists. Since mergers are epi, `ι` is determined by `μ₁` and `μ₂`.
pub fn shift_iso(
    merger1: &GraphFunctor,
    contraction1: &GraphFunctor,
    merger2: &GraphFunctor,
    contraction2: &GraphFunctor,
) -> Option<GraphFunctor> {
    if !same_graph(merger1.source(), merger2.source()) || !same_graph(contraction1.target(), contraction2.target()) {
        return None;
    }
    let iota = induced_through_epi(merger1, merger2).ok()?;
    if !iota.is_isomorphism() {
        return None;
    }
    let shifted = compose_functors(contraction2, &iota).ok()?;
    (shifted == *contraction1).then_some(iota)
}

/// Equality of morphisms: the two pairs differ by an isomorphism of middles.
pub fn ngr_equal(a: &NGrMorphism, b: &NGrMorphism) -> Result<bool> {
    if !same_graph(a.source(), b.source()) || !same_graph(a.target(), b.target()) {
        return Err(Error::SourceTargetMismatch);
    }
    Ok(shift_iso(&a.merger, &a.contraction, &b.merger, &b.contraction).is_some())
}

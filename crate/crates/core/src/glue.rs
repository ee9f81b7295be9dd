//! Colimits of finite diagrams of nested graphs along dependencies, and of
//! diagrams of morphisms along squares.
//!
//! Glued ids are namespaced: a node or flag `x` of member `m` becomes
//! `m/x`, and an identified class joins its sorted members with `+`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use crate::double::{Dependency, MorphismSquare};
use crate::error::{Error, Result};
use crate::functor::{same_graph, FlagImage, GraphFunctor};
use crate::graph::{NestedGraph, BLOCK_SEPARATOR};
use crate::ngr::NGrMorphism;

#[derive(Debug, Clone)]
pub struct GlueArrow {
    pub from: String,
    pub to: String,
    pub dep: Dependency,
}

/// Named graphs and dependencies between them.
#[derive(Debug, Clone, Default)]
pub struct GlueDiagram {
    graphs: BTreeMap<String, Arc<NestedGraph>>,
    arrows: Vec<GlueArrow>,
}

impl GlueDiagram {
    pub fn new(graphs: BTreeMap<String, Arc<NestedGraph>>, arrows: Vec<GlueArrow>) -> Result<Self> {
        for a in &arrows {
            let from = member(&graphs, &a.from)?;
            let to = member(&graphs, &a.to)?;
            if !same_graph(from, a.dep.source()) || !same_graph(to, a.dep.target()) {
                return Err(Error::BoundaryMismatch { what: format!("arrow {} -> {}", a.from, a.to) });
            }
        }
        Ok(GlueDiagram { graphs, arrows })
    }

    pub fn graphs(&self) -> &BTreeMap<String, Arc<NestedGraph>> {
        &self.graphs
    }

    pub fn arrows(&self) -> &[GlueArrow] {
        &self.arrows
    }
}

fn member<'a, T>(members: &'a BTreeMap<String, T>, name: &str) -> Result<&'a T> {
    members.get(name).ok_or_else(|| Error::DanglingReference { id: name.to_string() })
}

/// A colimit with its cocone legs, keyed by member name.
#[derive(Debug, Clone)]
pub struct Glued {
    pub graph: Arc<NestedGraph>,
    pub legs: BTreeMap<String, GraphFunctor>,
}

pub fn glue(diagram: &GlueDiagram) -> Result<Glued> {
    let arrows: Vec<(&str, &str, &GraphFunctor)> =
        diagram.arrows.iter().map(|a| (a.from.as_str(), a.to.as_str(), a.dep.functor())).collect();
    colimit(&diagram.graphs, &arrows)
}

/// Coproduct with its injections, members named by position.
pub fn disjoint_union(graphs: &[Arc<NestedGraph>]) -> (Arc<NestedGraph>, Vec<Dependency>) {
    let members: BTreeMap<String, Arc<NestedGraph>> =
        graphs.iter().enumerate().map(|(i, g)| (i.to_string(), g.clone())).collect();
    let glued = colimit(&members, &[]).expect("a coproduct always exists");
    let mut legs = glued.legs;
    let deps = (0..graphs.len())
        .map(|i| Dependency::new(legs.remove(&i.to_string()).expect("leg")).expect("injections are dependencies"))
        .collect();
    (glued.graph, deps)
}

/// Quotient of the disjoint union by the identifications the arrows make.
/// Arrows must be injective on flags.
fn colimit(graphs: &BTreeMap<String, Arc<NestedGraph>>, arrows: &[(&str, &str, &GraphFunctor)]) -> Result<Glued> {
    let names: Vec<&String> = graphs.keys().collect();
    let position: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let members: Vec<&Arc<NestedGraph>> = graphs.values().collect();
    let mut node_offset = vec![0];
    let mut flag_offset = vec![0];
    for g in &members {
        node_offset.push(node_offset.last().unwrap() + g.node_count());
        flag_offset.push(flag_offset.last().unwrap() + g.flag_count());
    }
    let (total_nodes, total_flags) = (*node_offset.last().unwrap(), *flag_offset.last().unwrap());

    let mut node_uf = UnionFind::<usize>::new(total_nodes);
    let mut flag_uf = UnionFind::<usize>::new(total_flags);
    for &(from, to, functor) in arrows {
        let (i, j) = (position[from], position[to]);
        for (n, &m) in functor.node_map().iter().enumerate() {
            node_uf.union(node_offset[i] + n, node_offset[j] + m);
        }
        for (f, image) in functor.flag_map().iter().enumerate() {
            let FlagImage::Flag(t) = *image else {
                return Err(Error::NotDependency { id: members[i].flag_id(f).to_string() });
            };
            flag_uf.union(flag_offset[i] + f, flag_offset[j] + t);
        }
    }

    let node_class = classes(&node_uf, total_nodes);
    let flag_class = classes(&flag_uf, total_flags);
    let label = |i: usize, id: &str| format!("{}/{}", names[i], id);
    let mut node_ids = vec![Vec::new(); node_class.count];
    let mut flag_ids = vec![Vec::new(); flag_class.count];
    let mut flag_ends = vec![(0, 0); flag_class.count];
    let mut comp: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (i, g) in members.iter().enumerate() {
        for n in 0..g.node_count() {
            node_ids[node_class.of[node_offset[i] + n]].push(label(i, g.node_id(n)));
        }
        for f in 0..g.flag_count() {
            let fl = g.flag(f);
            let c = flag_class.of[flag_offset[i] + f];
            flag_ids[c].push(label(i, &fl.id));
            flag_ends[c] = (node_class.of[node_offset[i] + fl.dom], node_class.of[node_offset[i] + fl.cod]);
        }
    }
    let joined = |ids: &mut Vec<String>| {
        ids.sort();
        ids.join(BLOCK_SEPARATOR)
    };
    let node_ids: Vec<String> = node_ids.iter_mut().map(joined).collect();
    let flag_ids: Vec<String> = flag_ids.iter_mut().map(joined).collect();
    for (i, g) in members.iter().enumerate() {
        for (a, b, h) in g.comp_entries() {
            let key = (flag_class.of[flag_offset[i] + a], flag_class.of[flag_offset[i] + b]);
            let h = flag_class.of[flag_offset[i] + h];
            if let Some(&prev) = comp.get(&key) {
                if prev != h {
                    return Err(Error::CompositionConflict { g: flag_ids[key.0].clone(), f: flag_ids[key.1].clone() });
                }
            }
            comp.insert(key, h);
        }
    }

    let flags = flag_ids.into_iter().zip(flag_ends).map(|(id, (d, c))| (id, d, c)).collect();
    let comp = comp.into_iter().map(|((a, b), h)| (a, b, h)).collect();
    let (graph, reindex) = NestedGraph::from_indexed(node_ids, flags, comp)?;
    let graph = Arc::new(graph);

    let mut legs = BTreeMap::new();
    for (i, g) in members.iter().enumerate() {
        let node_map = (0..g.node_count()).map(|n| reindex.node[node_class.of[node_offset[i] + n]]).collect();
        let flag_map =
            (0..g.flag_count()).map(|f| FlagImage::Flag(reindex.flag[flag_class.of[flag_offset[i] + f]])).collect();
        legs.insert(names[i].clone(), GraphFunctor::new((*g).clone(), graph.clone(), node_map, flag_map)?);
    }
    Ok(Glued { graph, legs })
}

struct Classes {
    of: Vec<usize>,
    count: usize,
}

/// Dense class labels, numbered by first occurrence.
fn classes(uf: &UnionFind<usize>, n: usize) -> Classes {
    let mut dense = HashMap::new();
    let of = (0..n)
        .map(|x| {
            let next = dense.len();
            *dense.entry(uf.find(x)).or_insert(next)
        })
        .collect();
    Classes { of, count: dense.len() }
}

#[derive(Debug, Clone)]
pub struct SquareArrow {
    pub from: String,
    pub to: String,
    pub square: MorphismSquare,
}

/// Named morphisms and squares between them: an arrow's square has the
/// `from` morphism at the bottom and the `to` morphism on top.
#[derive(Debug, Clone, Default)]
pub struct MorphismGlueDiagram {
    morphisms: BTreeMap<String, NGrMorphism>,
    arrows: Vec<SquareArrow>,
}

impl MorphismGlueDiagram {
    pub fn new(morphisms: BTreeMap<String, NGrMorphism>, arrows: Vec<SquareArrow>) -> Result<Self> {
        for a in &arrows {
            if member(&morphisms, &a.from)? != a.square.bottom() || member(&morphisms, &a.to)? != a.square.top() {
                return Err(Error::BoundaryMismatch { what: format!("square {} -> {}", a.from, a.to) });
            }
        }
        Ok(MorphismGlueDiagram { morphisms, arrows })
    }

    pub fn morphisms(&self) -> &BTreeMap<String, NGrMorphism> {
        &self.morphisms
    }

    pub fn arrows(&self) -> &[SquareArrow] {
        &self.arrows
    }

    /// The diagram of sources (0), middles (1) or targets (2).
    pub fn component(&self, which: usize) -> GlueDiagram {
        let graphs = self
            .morphisms
            .iter()
            .map(|(name, m)| {
                let g = match which {
                    0 => m.source(),
                    1 => m.middle(),
                    _ => m.target(),
                };
                (name.clone(), g.clone())
            })
            .collect();
        let arrows = self
            .arrows
            .iter()
            .map(|a| GlueArrow { from: a.from.clone(), to: a.to.clone(), dep: a.square.deps()[which].clone() })
            .collect();
        GlueDiagram { graphs, arrows }
    }
}

/// Glues sources, middles and targets separately and returns the induced
/// morphism between the colimits.
pub fn glue_morphisms(diagram: &MorphismGlueDiagram) -> Result<NGrMorphism> {
    let [source, middle, target] = [0, 1, 2].map(|i| glue(&diagram.component(i)));
    let (source, middle, target) = (source?, middle?, target?);
    let merger = induced(&source, &middle, diagram.morphisms.iter().map(|(n, m)| (n, m.merger())))?;
    if !merger.is_merger() {
        return Err(Error::NotMerger);
    }
    let contraction = induced(&middle, &target, diagram.morphisms.iter().map(|(n, m)| (n, m.contraction())))?;
    if !contraction.is_contraction() {
        return Err(Error::NotContraction);
    }
    NGrMorphism::new(merger, contraction)
}

/// The functor between colimits agreeing with every component.
fn induced<'a>(
    from: &Glued,
    to: &Glued,
    components: impl Iterator<Item = (&'a String, &'a GraphFunctor)>,
) -> Result<GraphFunctor> {
    let (src, dst) = (&from.graph, &to.graph);
    let mut node_map = vec![None; src.node_count()];
    let mut flag_map = vec![None; src.flag_count()];
    for (name, phi) in components {
        let (leg_in, leg_out) = (&from.legs[name], &to.legs[name]);
        for n in 0..phi.source().node_count() {
            let (at, want) = (leg_in.node(n), leg_out.node(phi.node(n)));
            if *node_map[at].get_or_insert(want) != want {
                return Err(Error::InducedMapIllDefined { id: src.node_id(at).to_string() });
            }
        }
        for f in 0..phi.source().flag_count() {
            let FlagImage::Flag(at) = leg_in.flag(f) else { unreachable!("legs never contract") };
            let want = match phi.flag(f) {
                FlagImage::Flag(t) => leg_out.flag(t),
                FlagImage::Identity(m) => FlagImage::Identity(leg_out.node(m)),
            };
            if *flag_map[at].get_or_insert(want) != want {
                return Err(Error::InducedMapIllDefined { id: src.flag_id(at).to_string() });
            }
        }
    }
    let node_map = node_map.into_iter().map(|n| n.expect("legs are jointly surjective")).collect();
    let flag_map = flag_map.into_iter().map(|f| f.expect("legs are jointly surjective")).collect();
    GraphFunctor::new(src.clone(), dst.clone(), node_map, flag_map).map_err(|e| match e {
        Error::EndpointMismatch { flag } => Error::InducedMapIllDefined { id: flag },
        Error::FunctorialityViolation { g, .. } => Error::InducedMapIllDefined { id: g },
        other => other,
    })
}

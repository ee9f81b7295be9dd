//! Quotients of nested graphs: identifying nodes (mergers) and contracting
//! flags (contractions).
//!
//! Both are computed through a finite presentation: generators are flags,
//! morphisms of the result are composable chains of generators modulo the
//! congruence generated by the source's composition table. Acyclicity of the
//! block digraph bounds chain length, so the enumeration terminates.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::functor::{FlagImage, GraphFunctor};
use crate::graph::{NestedGraph, CHAIN_SEPARATOR};

/// Upper bound on the number of chains a single presentation may enumerate.
pub const CHAIN_LIMIT: usize = 250_000;

/// A partition of the nodes of a graph into disjoint, covering blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodePartition {
    blocks: Vec<Vec<usize>>,
}

impl NodePartition {
    pub fn new(graph: &NestedGraph, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; graph.node_count()];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition { reason: "empty block".into() });
            }
            for &n in block {
                let Some(slot) = seen.get_mut(n) else {
                    return Err(Error::DanglingReference { id: n.to_string() });
                };
                if std::mem::replace(slot, true) {
                    return Err(Error::InvalidPartition { reason: format!("`{}` in two blocks", graph.node_id(n)) });
                }
            }
        }
        if let Some(n) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidPartition { reason: format!("`{}` in no block", graph.node_id(n)) });
        }
        Ok(Self::from_blocks_unchecked(blocks))
    }

    /// Blocks given by node ids; nodes not mentioned form singleton blocks.
    pub fn from_ids(graph: &NestedGraph, blocks: &[&[&str]]) -> Result<Self> {
        let mut out = Vec::new();
        let mut mentioned = BTreeSet::new();
        for block in blocks {
            let mut b = Vec::new();
            for id in *block {
                let n = graph.node_index(id).ok_or_else(|| Error::DanglingReference { id: id.to_string() })?;
                mentioned.insert(n);
                b.push(n);
            }
            out.push(b);
        }
        out.extend((0..graph.node_count()).filter(|n| !mentioned.contains(n)).map(|n| vec![n]));
        Self::new(graph, out)
    }

    /// Every node in its own block.
    pub fn discrete(graph: &NestedGraph) -> Self {
        Self::from_blocks_unchecked((0..graph.node_count()).map(|n| vec![n]).collect())
    }

    pub(crate) fn from_blocks_unchecked(mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        NodePartition { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Block index of every node.
    pub fn labels(&self, node_count: usize) -> Vec<usize> {
        let mut labels = vec![0; node_count];
        for (i, b) in self.blocks.iter().enumerate() {
            for &n in b {
                labels[n] = i;
            }
        }
        labels
    }
}

pub(crate) struct Generator {
    pub id: String,
    pub dom: usize,
    pub cod: usize,
}

/// Nodes, generating flags and relations between chains of generators
/// (first applied first). Relation sides are non-empty.
pub(crate) struct Presentation {
    pub nodes: Vec<String>,
    pub generators: Vec<Generator>,
    pub relations: Vec<(Vec<usize>, Vec<usize>)>,
}

pub(crate) struct Presented {
    pub graph: NestedGraph,
    /// Presentation node index -> graph node index.
    pub node: Vec<usize>,
    /// Generator -> graph flag index.
    pub generator: Vec<usize>,
}

impl Presentation {
    fn check_acyclic(&self) -> Result<()> {
        let n = self.nodes.len();
        let mut indegree = vec![0usize; n];
        let mut out = vec![Vec::new(); n];
        for g in &self.generators {
            indegree[g.cod] += 1;
            out[g.dom].push(g.cod);
        }
        let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = ready.pop() {
            seen += 1;
            for &w in &out[v] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    ready.push(w);
                }
            }
        }
        if seen < n {
            let mut stuck: Vec<String> = (0..n).filter(|&v| indegree[v] > 0).map(|v| self.nodes[v].clone()).collect();
            stuck.sort();
            return Err(Error::CycleDetected { nodes: stuck });
        }
        Ok(())
    }

    fn endpoints(&self, word: &[usize]) -> Option<(usize, usize)> {
        let first = self.generators.get(*word.first()?)?;
        let mut cod = first.cod;
        for &g in &word[1..] {
            let gen = &self.generators[g];
            if gen.dom != cod {
                return None;
            }
            cod = gen.cod;
        }
        Some((first.dom, cod))
    }

    fn chain_id(&self, chain: &[usize]) -> String {
        chain.iter().map(|&g| self.generators[g].id.as_str()).collect::<Vec<_>>().join(CHAIN_SEPARATOR)
    }

    pub fn present(&self) -> Result<Presented> {
        self.check_acyclic()?;
        for (lhs, rhs) in &self.relations {
            let (l, r) = (self.endpoints(lhs), self.endpoints(rhs));
            if l.is_none() || l != r {
                return Err(Error::CompositionMismatch {
                    g: self.chain_id(lhs),
                    f: String::new(),
                    h: self.chain_id(rhs),
                });
            }
        }

        let mut out: Vec<Vec<usize>> = vec![Vec::new(); self.nodes.len()];
        for (i, g) in self.generators.iter().enumerate() {
            out[g.dom].push(i);
        }
        let mut chains: Vec<Vec<usize>> = Vec::new();
        let mut stack: Vec<Vec<usize>> = (0..self.generators.len()).rev().map(|g| vec![g]).collect();
        while let Some(chain) = stack.pop() {
            let cod = self.generators[*chain.last().expect("non-empty")].cod;
            for &g in out[cod].iter().rev() {
                let mut next = chain.clone();
                next.push(g);
                stack.push(next);
            }
            chains.push(chain);
            if chains.len() > CHAIN_LIMIT {
                return Err(Error::ChainLimitExceeded { limit: CHAIN_LIMIT });
            }
        }
        let index: HashMap<&[usize], usize> = chains.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();

        let mut by_first: Vec<Vec<usize>> = vec![Vec::new(); self.generators.len()];
        for (r, (lhs, _)) in self.relations.iter().enumerate() {
            by_first[lhs[0]].push(r);
        }
        let mut classes = UnionFind::<usize>::new(chains.len());
        for (ci, chain) in chains.iter().enumerate() {
            for i in 0..chain.len() {
                for &r in &by_first[chain[i]] {
                    let (lhs, rhs) = &self.relations[r];
                    if !chain[i..].starts_with(lhs) {
                        continue;
                    }
                    let mut rewritten = Vec::with_capacity(chain.len() - lhs.len() + rhs.len());
                    rewritten.extend_from_slice(&chain[..i]);
                    rewritten.extend_from_slice(rhs);
                    rewritten.extend_from_slice(&chain[i + lhs.len()..]);
                    let other = index[rewritten.as_slice()];
                    classes.union(ci, other);
                }
            }
        }

        // representative: shortest chain, ties broken by generator ids
        let mut rep_of_root: HashMap<usize, usize> = HashMap::new();
        let key =
            |c: usize| (chains[c].len(), chains[c].iter().map(|&g| self.generators[g].id.as_str()).collect::<Vec<_>>());
        for c in 0..chains.len() {
            let root = classes.find_mut(c);
            match rep_of_root.get(&root) {
                Some(&best) if key(best) <= key(c) => {}
                _ => {
                    rep_of_root.insert(root, c);
                }
            }
        }
        let mut reps: Vec<usize> = rep_of_root.values().copied().collect();
        reps.sort_unstable();
        let flag_of_root: HashMap<usize, usize> =
            reps.iter().enumerate().map(|(i, &rep)| (classes.find_mut(rep), i)).collect();
        let class_of = |c: usize, classes: &mut UnionFind<usize>| flag_of_root[&classes.find_mut(c)];

        let mut flags = Vec::with_capacity(reps.len());
        let mut by_dom: Vec<Vec<usize>> = vec![Vec::new(); self.nodes.len()];
        for (i, &rep) in reps.iter().enumerate() {
            let (dom, cod) = self.endpoints(&chains[rep]).expect("chains compose");
            flags.push((self.chain_id(&chains[rep]), dom, cod));
            by_dom[dom].push(i);
        }
        let mut comp = Vec::new();
        for (x, &rx) in reps.iter().enumerate() {
            let cod = flags[x].2;
            for &y in &by_dom[cod] {
                let mut joined = chains[rx].clone();
                joined.extend_from_slice(&chains[reps[y]]);
                let z = class_of(index[joined.as_slice()], &mut classes);
                comp.push((x, y, z));
            }
        }
        let generator: Vec<usize> =
            (0..self.generators.len()).map(|g| class_of(index[[g].as_slice()], &mut classes)).collect();

        let (graph, reindex) = NestedGraph::from_indexed(self.nodes.clone(), flags, comp)?;
        let generator = generator.into_iter().map(|f| reindex.flag[f]).collect();
        Ok(Presented { graph, node: reindex.node, generator })
    }
}

/// Identifies the nodes in each block; morphisms are freely generated by the
/// source's flags subject to its composition. Returns the quotient and the
/// projection, which is a merger.
pub fn quotient_by_partition(
    graph: &Arc<NestedGraph>,
    partition: &NodePartition,
) -> Result<(Arc<NestedGraph>, GraphFunctor)> {
    let labels = partition.labels(graph.node_count());
    let nodes = partition.blocks().iter().map(|b| graph.block_id(b)).collect();
    let generators =
        graph.flags().iter().map(|f| Generator { id: f.id.clone(), dom: labels[f.dom], cod: labels[f.cod] }).collect();
    let relations = graph.comp_entries().map(|(g, f, h)| (vec![g, f], vec![h])).collect();
    let presented = Presentation { nodes, generators, relations }.present()?;

    let quotient = Arc::new(presented.graph);
    let node_map = labels.iter().map(|&b| presented.node[b]).collect();
    let flag_map = presented.generator.iter().map(|&f| FlagImage::Flag(f)).collect();
    let projection = GraphFunctor::new(graph.clone(), quotient.clone(), node_map, flag_map)?;
    if let Some(f) = projection.admissibility_violation() {
        return Err(Error::NotAdmissible { flag: graph.flag_id(f).to_string() });
    }
    Ok((quotient, projection))
}

/// Contracts the flags in `contract`: nodes joined by them become one node,
/// every flag inside such a block goes to an identity, and the remaining
/// morphisms are freely generated subject to the source's composition.
/// The projection is checked to be a contraction.
pub fn contract_flags(
    graph: &Arc<NestedGraph>,
    contract: &BTreeSet<usize>,
) -> Result<(Arc<NestedGraph>, GraphFunctor)> {
    let mut components = UnionFind::<usize>::new(graph.node_count());
    for &f in contract {
        let fl = graph.flags().get(f).ok_or_else(|| Error::DanglingReference { id: f.to_string() })?;
        components.union(fl.dom, fl.cod);
    }
    let labels_raw = components.into_labeling();
    let mut block_of_root: HashMap<usize, usize> = HashMap::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut labels = vec![0; graph.node_count()];
    for n in 0..graph.node_count() {
        let b = *block_of_root.entry(labels_raw[n]).or_insert_with(|| {
            blocks.push(Vec::new());
            blocks.len() - 1
        });
        blocks[b].push(n);
        labels[n] = b;
    }

    let contracted: Vec<bool> = graph.flags().iter().map(|f| labels[f.dom] == labels[f.cod]).collect();
    for block in &blocks {
        let vertices = block.iter().filter(|&&n| !graph.out_flags(n).iter().any(|&f| contracted[f])).count();
        if vertices != 1 {
            let mut ids: Vec<String> = block.iter().map(|&n| graph.node_id(n).to_string()).collect();
            ids.sort();
            return Err(Error::FiberNotCorolla { block: ids });
        }
    }

    let mut generator_of = vec![None; graph.flag_count()];
    let mut generators = Vec::new();
    for (f, fl) in graph.flags().iter().enumerate() {
        if !contracted[f] {
            generator_of[f] = Some(generators.len());
            generators.push(Generator { id: fl.id.clone(), dom: labels[fl.dom], cod: labels[fl.cod] });
        }
    }
    let word = |f: usize| generator_of[f].into_iter().collect::<Vec<_>>();
    let mut relations = Vec::new();
    for (g, f, h) in graph.comp_entries() {
        let mut lhs = word(g);
        lhs.extend(word(f));
        let rhs = word(h);
        match (lhs.is_empty(), rhs.is_empty()) {
            (true, true) => {}
            (false, false) => relations.push((lhs, rhs)),
            _ => {
                let block = labels[graph.flag(g).dom];
                return Err(Error::CycleDetected { nodes: vec![graph.block_id(&blocks[block])] });
            }
        }
    }
    let nodes = blocks.iter().map(|b| graph.block_id(b)).collect();
    let presented = Presentation { nodes, generators, relations }.present()?;

    let quotient = Arc::new(presented.graph);
    let node_map: Vec<usize> = labels.iter().map(|&b| presented.node[b]).collect();
    let flag_map = (0..graph.flag_count())
        .map(|f| match generator_of[f] {
            Some(g) => FlagImage::Flag(presented.generator[g]),
            None => FlagImage::Identity(node_map[graph.flag(f).dom]),
        })
        .collect();
    let projection = GraphFunctor::new(graph.clone(), quotient.clone(), node_map, flag_map)?;
    if let Some(f) = projection.admissibility_violation() {
        return Err(Error::NotAdmissible { flag: graph.flag_id(f).to_string() });
    }
    Ok((quotient, projection))
}

/// The graph presented by `generators` over `nodes` modulo `relations`
/// between chains of generator ids. Used to build free categories on DAGs
/// and their quotients by identified parallel composites.
pub fn from_presentation(
    nodes: &[String],
    generators: &[(String, String, String)],
    relations: &[(Vec<String>, Vec<String>)],
) -> Result<NestedGraph> {
    let node_index: HashMap<&str, usize> = nodes.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let lookup = |id: &str| node_index.get(id).copied().ok_or_else(|| Error::DanglingReference { id: id.to_string() });
    let gens = generators
        .iter()
        .map(|(id, d, c)| Ok(Generator { id: id.clone(), dom: lookup(d)?, cod: lookup(c)? }))
        .collect::<Result<Vec<_>>>()?;
    let gen_index: HashMap<&str, usize> = generators.iter().enumerate().map(|(i, g)| (g.0.as_str(), i)).collect();
    let word = |w: &[String]| {
        w.iter()
            .map(|id| gen_index.get(id.as_str()).copied().ok_or_else(|| Error::DanglingReference { id: id.clone() }))
            .collect::<Result<Vec<_>>>()
    };
    let mut rels = Vec::new();
    for (l, r) in relations {
        let (l, r) = (word(l)?, word(r)?);
        if l.is_empty() || r.is_empty() {
            return Err(Error::Parse("relation sides must be non-empty".into()));
        }
        rels.push((l, r));
    }
    Ok(Presentation { nodes: nodes.to_vec(), generators: gens, relations: rels }.present()?.graph)
}

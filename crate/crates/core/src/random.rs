//! Seeded generators for fuzzing and property checks.
//!
//! Graphs are free categories on random layered DAGs, sometimes with a few
//! parallel chains identified. Every generator output passes the validator
//! of its kind; the same seed always gives the same value.

use std::collections::BTreeSet;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::double::{restrict_morphism, Dependency, MorphismSquare};
use crate::error::{Error, Result};
use crate::functor::{compose_functors, GraphFunctor};
use crate::glue::{GlueArrow, GlueDiagram, MorphismGlueDiagram, SquareArrow};
use crate::graph::NestedGraph;
use crate::io::Document;
use crate::ngr::NGrMorphism;
use crate::quotient::{contract_flags, quotient_by_partition, Generator, NodePartition, Presentation};

/// Attempts per random choice before falling back or giving up.
pub const RETRIES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomKind {
    Graph,
    Merger,
    Contraction,
    AdmissibleEpi,
    Morphism,
    Diagram,
    Square,
    MorphismDiagram,
}

impl RandomKind {
    pub const ALL: [RandomKind; 8] = [
        RandomKind::Graph,
        RandomKind::Merger,
        RandomKind::Contraction,
        RandomKind::AdmissibleEpi,
        RandomKind::Morphism,
        RandomKind::Diagram,
        RandomKind::Square,
        RandomKind::MorphismDiagram,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RandomKind::Graph => "graph",
            RandomKind::Merger => "merger",
            RandomKind::Contraction => "contraction",
            RandomKind::AdmissibleEpi => "admissible-epi",
            RandomKind::Morphism => "morphism",
            RandomKind::Diagram => "diagram",
            RandomKind::Square => "square",
            RandomKind::MorphismDiagram => "morphism-diagram",
        }
    }
}

impl FromStr for RandomKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RandomKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidBounds { reason: format!("unknown kind `{s}`") })
    }
}

/// Size bounds for generated graphs. Grades run from 0 to `max_grade`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_nodes: usize,
    pub max_flags: usize,
    pub max_grade: usize,
}

impl Bounds {
    pub fn new(max_nodes: usize, max_flags: usize, max_grade: usize) -> Result<Self> {
        if max_nodes == 0 {
            return Err(Error::InvalidBounds { reason: "max_nodes must be positive".into() });
        }
        Ok(Bounds { max_nodes, max_flags, max_grade })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSpec {
    pub seed: u64,
    pub bounds: Bounds,
    pub kind: RandomKind,
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A value of the requested kind as a document. Mergers, contractions and
/// admissible epis are functor documents.
pub fn gen_random(spec: &RandomSpec) -> Result<Document> {
    let mut rng = rng_from_seed(spec.seed);
    let b = &spec.bounds;
    let graph = |rng: &mut ChaCha8Rng| Arc::new(random_graph(rng, b));
    Ok(match spec.kind {
        RandomKind::Graph => Document::Graph(graph(&mut rng)),
        RandomKind::Merger => {
            let g = graph(&mut rng);
            Document::Functor(random_merger(&mut rng, &g))
        }
        RandomKind::Contraction => {
            let g = graph(&mut rng);
            Document::Functor(random_contraction(&mut rng, &g))
        }
        RandomKind::AdmissibleEpi => {
            let g = graph(&mut rng);
            Document::Functor(random_admissible_epi(&mut rng, &g).composite)
        }
        RandomKind::Morphism => {
            let g = graph(&mut rng);
            Document::Morphism { morphism: random_morphism(&mut rng, &g), was_canonical: true }
        }
        RandomKind::Diagram => Document::Diagram(random_diagram(&mut rng, b)),
        RandomKind::Square => Document::Square(random_square(&mut rng, b)?),
        RandomKind::MorphismDiagram => Document::MorphismDiagram(random_morphism_diagram(&mut rng, b)?),
    })
}

/// Generating edges of a layered DAG, bounded so that the free category on
/// it has at most `max_flags` flags.
fn random_dag<R: Rng + ?Sized>(rng: &mut R, b: &Bounds) -> (usize, Vec<(usize, usize)>) {
    let n = rng.gen_range(1..=b.max_nodes);
    let mut level: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=b.max_grade)).collect();
    level.sort_unstable();
    let mut candidates: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|&(u, v)| level[u] < level[v]).collect();
    candidates.shuffle(rng);
    let density: f64 = rng.gen_range(0.2..0.8);
    let mut edges = Vec::new();
    for (u, v) in candidates {
        if !rng.gen_bool(density) {
            continue;
        }
        let copies = if rng.gen_bool(0.1) { 2 } else { 1 };
        for _ in 0..copies {
            edges.push((u, v));
            if path_count(n, &edges) > b.max_flags {
                edges.pop();
                break;
            }
        }
    }
    (n, edges)
}

/// Number of nonempty paths. Nodes are topologically sorted by index.
fn path_count(n: usize, edges: &[(usize, usize)]) -> usize {
    // ending[v] = paths ending at v
    let mut ending = vec![0usize; n];
    let mut sorted = edges.to_vec();
    sorted.sort_by_key(|&(u, _)| u);
    for v in 0..n {
        ending[v] = sorted.iter().filter(|&&(_, t)| t == v).map(|&(u, _)| 1 + ending[u]).sum();
    }
    ending.iter().sum()
}

fn paths(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut ending: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
    for v in 0..n {
        for (e, &(u, t)) in edges.iter().enumerate() {
            if t != v {
                continue;
            }
            let mut extended: Vec<Vec<usize>> = ending[u]
                .iter()
                .map(|p| {
                    let mut p = p.clone();
                    p.push(e);
                    p
                })
                .collect();
            extended.push(vec![e]);
            ending[v].extend(extended);
        }
    }
    ending.into_iter().flatten().collect()
}

pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, b: &Bounds) -> NestedGraph {
    let (n, edges) = random_dag(rng, b);
    let nodes: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let generators: Vec<Generator> =
        edges.iter().enumerate().map(|(i, &(u, v))| Generator { id: format!("e{i}"), dom: u, cod: v }).collect();
    let mut relations = Vec::new();
    if rng.gen_bool(0.5) {
        let all = paths(n, &edges);
        for _ in 0..rng.gen_range(1..=2) {
            let ends = |p: &Vec<usize>| (edges[p[0]].0, edges[*p.last().unwrap()].1);
            let Some(a) = all.choose(rng) else { break };
            let parallel: Vec<&Vec<usize>> = all.iter().filter(|c| *c != a && ends(c) == ends(a)).collect();
            if let Some(c) = parallel.choose(rng) {
                relations.push((a.clone(), (*c).clone()));
            }
        }
    }
    Presentation { nodes, generators, relations }.present().expect("free categories on small DAGs present").graph
}

/// A random merger out of `graph`; identity if no random partition works.
pub fn random_merger<R: Rng + ?Sized>(rng: &mut R, graph: &Arc<NestedGraph>) -> GraphFunctor {
    let n = graph.node_count();
    for attempt in 0..RETRIES {
        if n < 2 {
            break;
        }
        let mut label: Vec<usize> = (0..n).collect();
        let merges = rng.gen_range(1..=(n / 2).max(1).min(3 - attempt.min(2)));
        for _ in 0..merges {
            let a = rng.gen_range(0..n);
            let same_grade: Vec<usize> =
                (0..n).filter(|&x| x != a && graph.grading().grade(x) == graph.grading().grade(a)).collect();
            let b = match same_grade.choose(rng) {
                Some(&b) if rng.gen_bool(0.7) => b,
                _ => rng.gen_range(0..n),
            };
            let (from, to) = (label[a], label[b]);
            for l in label.iter_mut() {
                if *l == from {
                    *l = to;
                }
            }
        }
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut seen = std::collections::BTreeMap::new();
        for (x, &l) in label.iter().enumerate() {
            let i = *seen.entry(l).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[i].push(x);
        }
        let partition = NodePartition::new(graph, blocks).expect("labels partition the nodes");
        if let Ok((_, merger)) = quotient_by_partition(graph, &partition) {
            return merger;
        }
    }
    GraphFunctor::identity(graph.clone())
}

/// A random contraction out of `graph`: a random set of nodes has all its
/// irreducible out-flags contracted. Identity if no choice works.
pub fn random_contraction<R: Rng + ?Sized>(rng: &mut R, graph: &Arc<NestedGraph>) -> GraphFunctor {
    let decorating: Vec<usize> = (0..graph.node_count()).filter(|&n| !graph.out_flags(n).is_empty()).collect();
    for attempt in 0..RETRIES {
        if decorating.is_empty() {
            break;
        }
        let p = 0.5 / (1 + attempt / 8) as f64;
        let mut chosen: Vec<usize> = decorating.iter().copied().filter(|_| rng.gen_bool(p)).collect();
        if chosen.is_empty() {
            chosen.push(*decorating.choose(rng).unwrap());
        }
        let flags: BTreeSet<usize> = chosen
            .iter()
            .flat_map(|&n| graph.out_flags(n).iter().copied().filter(|&f| graph.is_irreducible(f)))
            .collect();
        if let Ok((_, kappa)) = contract_flags(graph, &flags) {
            return kappa;
        }
    }
    GraphFunctor::identity(graph.clone())
}

/// An admissible epi-functor built as a contraction after a merger.
#[derive(Debug, Clone)]
pub struct RandomEpi {
    pub merger: GraphFunctor,
    pub contraction: GraphFunctor,
    pub composite: GraphFunctor,
}

pub fn random_admissible_epi<R: Rng + ?Sized>(rng: &mut R, graph: &Arc<NestedGraph>) -> RandomEpi {
    let merger = random_merger(rng, graph);
    let contraction = random_contraction(rng, merger.target());
    let composite = compose_functors(&contraction, &merger).expect("composable");
    RandomEpi { merger, contraction, composite }
}

pub fn random_morphism<R: Rng + ?Sized>(rng: &mut R, graph: &Arc<NestedGraph>) -> NGrMorphism {
    let epi = random_admissible_epi(rng, graph);
    NGrMorphism::new(epi.merger, epi.contraction).expect("generated pairs canonicalize")
}

/// The full subgraph closure of a random nonempty node set of a nonempty
/// graph, with its inclusion.
pub fn random_dependency_into<R: Rng + ?Sized>(rng: &mut R, graph: &Arc<NestedGraph>) -> Dependency {
    let n = graph.node_count();
    let p = rng.gen_range(0.1..0.6);
    let mut seeds: Vec<usize> = (0..n).filter(|_| rng.gen_bool(p)).collect();
    if seeds.is_empty() && n > 0 {
        seeds.push(rng.gen_range(0..n));
    }
    let sub = Arc::new(graph.full_subgraph_closure(seeds));
    Dependency::inclusion(sub, graph.clone()).expect("closures are full subgraphs")
}

/// `base` extended by new nodes and by flags into new nodes only, so that
/// `base` stays a full subgraph. Returns the extension and the inclusion.
pub fn random_extension<R: Rng + ?Sized>(
    rng: &mut R,
    base: &Arc<NestedGraph>,
    b: &Bounds,
    tag: &str,
) -> (Arc<NestedGraph>, Dependency) {
    let old = base.node_count();
    let added = rng.gen_range(1..=b.max_nodes.clamp(1, 3));
    let mut nodes: Vec<String> = base.nodes().to_vec();
    nodes.extend((0..added).map(|i| format!("{tag}{i}")));
    // every base flag is a generator and the composition table the relations
    let mut generators: Vec<Generator> =
        base.flags().iter().map(|f| Generator { id: f.id.clone(), dom: f.dom, cod: f.cod }).collect();
    let relations: Vec<(Vec<usize>, Vec<usize>)> = base.comp_entries().map(|(g, f, h)| (vec![g, f], vec![h])).collect();
    let budget = b.max_flags.saturating_sub(base.flag_count()).max(1);
    let mut new_edges = Vec::new();
    for v in old..old + added {
        for u in 0..v {
            if new_edges.len() < budget && rng.gen_bool(0.35) {
                new_edges.push((u, v));
            }
        }
    }
    for (i, &(u, v)) in new_edges.iter().enumerate() {
        generators.push(Generator { id: format!("{tag}e{i}"), dom: u, cod: v });
    }
    let presented = Presentation { nodes, generators, relations }.present().expect("extensions present");
    let graph = Arc::new(presented.graph);
    let dep = Dependency::inclusion(base.clone(), graph.clone()).expect("base is full in its extension");
    (graph, dep)
}

/// A diagram of at most four graphs: a base, extensions of the base or of
/// earlier extensions, and sometimes an unrelated summand.
pub fn random_diagram<R: Rng + ?Sized>(rng: &mut R, b: &Bounds) -> GlueDiagram {
    let mut graphs = std::collections::BTreeMap::new();
    let mut arrows = Vec::new();
    let base = Arc::new(random_graph(rng, b));
    graphs.insert("g0".to_string(), base);
    let members = rng.gen_range(1..=4);
    for i in 1..members {
        let name = format!("g{i}");
        if rng.gen_bool(0.15) {
            graphs.insert(name, Arc::new(random_graph(rng, b)));
            continue;
        }
        let parent = format!("g{}", rng.gen_range(0..i));
        let (graph, dep) = random_extension(rng, &graphs[&parent], b, &format!("x{i}_"));
        graphs.insert(name.clone(), graph);
        arrows.push(GlueArrow { from: parent, to: name, dep });
    }
    GlueDiagram::new(graphs, arrows).expect("generated arrows match their members")
}

/// The restriction of a random morphism along a random dependency into its
/// target.
pub fn random_square<R: Rng + ?Sized>(rng: &mut R, b: &Bounds) -> Result<MorphismSquare> {
    for _ in 0..RETRIES {
        let g = Arc::new(random_graph(rng, b));
        let m = random_morphism(rng, &g);
        let dep = random_dependency_into(rng, m.target());
        if let Ok(square) = restrict_morphism(&m, &dep) {
            return Ok(square);
        }
    }
    Err(Error::GenerationExhausted { attempts: RETRIES })
}

/// Restrictions of one random morphism to two full subgraphs of its target
/// and to their intersection, related by squares.
pub fn random_morphism_diagram<R: Rng + ?Sized>(rng: &mut R, b: &Bounds) -> Result<MorphismGlueDiagram> {
    for _ in 0..RETRIES {
        let g = Arc::new(random_graph(rng, b));
        let m = random_morphism(rng, &g);
        if let Ok(d) = span_of_restrictions(rng, &m) {
            return Ok(d);
        }
    }
    Err(Error::GenerationExhausted { attempts: RETRIES })
}

/// The diagram `a <- ab -> b` of restrictions of `m` to the closures of two
/// random node sets of its target and to their intersection.
pub fn span_of_restrictions<R: Rng + ?Sized>(rng: &mut R, m: &NGrMorphism) -> Result<MorphismGlueDiagram> {
    let target = m.target();
    let a = random_dependency_into(rng, target);
    let b = random_dependency_into(rng, target);
    let (na, _) = a.image();
    let (nb, _) = b.image();
    let common: BTreeSet<usize> = na.intersection(&nb).copied().collect();
    let sa = restrict_morphism(m, &a)?;
    let sb = restrict_morphism(m, &b)?;
    let (ma, mb) = (sa.bottom().clone(), sb.bottom().clone());
    let inner = |outer: &NGrMorphism| -> Result<MorphismSquare> {
        let t = outer.target();
        let ids: BTreeSet<usize> =
            common.iter().map(|&n| t.node_index(target.node_id(n)).expect("common nodes lie in both")).collect();
        let sub = Arc::new(t.full_subgraph_closure(ids));
        restrict_morphism(outer, &Dependency::inclusion(sub, t.clone())?)
    };
    let to_a = inner(&ma)?;
    let to_b = inner(&mb)?;
    let mab = to_a.bottom().clone();
    let morphisms = [("a".to_string(), ma), ("ab".to_string(), mab), ("b".to_string(), mb)].into_iter().collect();
    let arrows = vec![
        SquareArrow { from: "ab".into(), to: "a".into(), square: to_a },
        SquareArrow { from: "ab".into(), to: "b".into(), square: to_b },
    ];
    MorphismGlueDiagram::new(morphisms, arrows)
}

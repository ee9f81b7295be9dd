//! JSON documents for graphs, functors, morphisms, squares and diagrams.
//!
//! A graph reference is either an inline graph document or a string. A
//! string names an entry of an enclosing `graphs` table, or failing that a
//! graph file relative to the document's directory. Printing is
//! deterministic, so printing a parsed canonical document reproduces it
//! byte for byte.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::double::{Dependency, MorphismSquare};
use crate::error::{Error, Result};
use crate::functor::{compose_functors, induced_through_epi, FlagImage, GraphFunctor};
use crate::glue::{GlueArrow, GlueDiagram, MorphismGlueDiagram, SquareArrow};
use crate::graph::NestedGraph;
use crate::ngr::{shift_iso, NGrMorphism};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub nodes: Vec<String>,
    #[serde(default)]
    pub flags: Vec<FlagDoc>,
    #[serde(default)]
    pub comp: Vec<[String; 3]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagDoc {
    pub id: String,
    pub dom: String,
    pub cod: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphRef {
    Name(String),
    Inline(GraphDoc),
}

type GraphTable = BTreeMap<String, GraphRef>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorDoc {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub graphs: GraphTable,
    pub source: GraphRef,
    pub target: GraphRef,
    pub node_map: BTreeMap<String, String>,
    #[serde(default)]
    pub flag_map: BTreeMap<String, ImageDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub enum ImageDoc {
    #[serde(rename = "flag")]
    Flag(String),
    #[serde(rename = "id_at")]
    IdAt(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub graphs: GraphTable,
    pub merger: FunctorDoc,
    pub contraction: FunctorDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquareDoc {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub graphs: GraphTable,
    pub top: MorphismDoc,
    pub bottom: MorphismDoc,
    pub deps: DepsDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DepsDoc {
    pub source: FunctorDoc,
    pub middle: FunctorDoc,
    pub target: FunctorDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDoc {
    pub graphs: GraphTable,
    #[serde(default)]
    pub arrows: Vec<ArrowDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowDoc {
    pub from: String,
    pub to: String,
    pub functor: FunctorDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDiagramDoc {
    pub morphisms: BTreeMap<String, MorphismDoc>,
    #[serde(default)]
    pub arrows: Vec<SquareArrowDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquareArrowDoc {
    pub from: String,
    pub to: String,
    pub square: SquareDoc,
}

/// Any parsed document.
#[derive(Debug, Clone)]
pub enum Document {
    Graph(Arc<NestedGraph>),
    Functor(GraphFunctor),
    /// A morphism file is canonicalized on load.
    Morphism {
        morphism: NGrMorphism,
        was_canonical: bool,
    },
    Square(MorphismSquare),
    Diagram(GlueDiagram),
    MorphismDiagram(MorphismGlueDiagram),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Graph(_) => "graph",
            Document::Functor(_) => "functor",
            Document::Morphism { .. } => "morphism",
            Document::Square(_) => "square",
            Document::Diagram(_) => "diagram",
            Document::MorphismDiagram(_) => "morphism-diagram",
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            Document::Graph(g) => print_graph(g),
            Document::Functor(f) => print_functor(f),
            Document::Morphism { morphism, .. } => print_morphism(morphism),
            Document::Square(s) => print_square(s),
            Document::Diagram(d) => print_diagram(d),
            Document::MorphismDiagram(d) => print_morphism_diagram(d),
        }
    }
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn pretty<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

/// Reads a document, detecting its kind from its top-level keys.
pub fn load_document(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_document(&text, path.parent())
}

pub fn parse_document(text: &str, base: Option<&Path>) -> Result<Document> {
    let value: Value = serde_json::from_str(text).map_err(parse_err)?;
    let Value::Object(map) = &value else {
        return Err(Error::Parse("expected a JSON object".into()));
    };
    let scope = Scope::root(base);
    let doc = if map.contains_key("nodes") {
        Document::Graph(Arc::new(scope.graph_doc(&serde_json::from_value(value).map_err(parse_err)?)?))
    } else if map.contains_key("node_map") {
        Document::Functor(scope.functor(&serde_json::from_value(value).map_err(parse_err)?)?)
    } else if map.contains_key("merger") {
        let (morphism, was_canonical) = scope.morphism(&serde_json::from_value(value).map_err(parse_err)?)?;
        Document::Morphism { morphism, was_canonical }
    } else if map.contains_key("top") {
        Document::Square(scope.square(&serde_json::from_value(value).map_err(parse_err)?)?)
    } else if map.contains_key("morphisms") {
        Document::MorphismDiagram(scope.morphism_diagram(&serde_json::from_value(value).map_err(parse_err)?)?)
    } else if map.contains_key("graphs") {
        Document::Diagram(scope.diagram(&serde_json::from_value(value).map_err(parse_err)?)?)
    } else {
        return Err(Error::Parse("unrecognized document: no graph, functor, morphism, square or diagram keys".into()));
    };
    Ok(doc)
}

pub fn parse_graph(text: &str) -> Result<NestedGraph> {
    Scope::root(None).graph_doc(&serde_json::from_str(text).map_err(parse_err)?)
}

pub fn parse_functor(text: &str) -> Result<GraphFunctor> {
    Scope::root(None).functor(&serde_json::from_str(text).map_err(parse_err)?)
}

/// The canonical morphism and whether the file already held it.
pub fn parse_morphism(text: &str) -> Result<(NGrMorphism, bool)> {
    Scope::root(None).morphism(&serde_json::from_str(text).map_err(parse_err)?)
}

pub fn parse_square(text: &str) -> Result<MorphismSquare> {
    Scope::root(None).square(&serde_json::from_str(text).map_err(parse_err)?)
}

pub fn parse_diagram(text: &str) -> Result<GlueDiagram> {
    Scope::root(None).diagram(&serde_json::from_str(text).map_err(parse_err)?)
}

pub fn parse_morphism_diagram(text: &str) -> Result<MorphismGlueDiagram> {
    Scope::root(None).morphism_diagram(&serde_json::from_str(text).map_err(parse_err)?)
}

#[derive(Clone)]
struct Scope {
    graphs: BTreeMap<String, Arc<NestedGraph>>,
    base: Option<PathBuf>,
}

impl Scope {
    fn root(base: Option<&Path>) -> Self {
        Scope { graphs: BTreeMap::new(), base: base.map(Path::to_path_buf) }
    }

    /// This scope extended by a `graphs` table, whose entries resolve in
    /// this scope.
    fn with(&self, table: &GraphTable) -> Result<Scope> {
        let mut inner = self.clone();
        for (name, r) in table {
            inner.graphs.insert(name.clone(), self.graph(r)?);
        }
        Ok(inner)
    }

    fn graph(&self, r: &GraphRef) -> Result<Arc<NestedGraph>> {
        match r {
            GraphRef::Inline(doc) => Ok(Arc::new(self.graph_doc(doc)?)),
            GraphRef::Name(name) => {
                if let Some(g) = self.graphs.get(name) {
                    return Ok(g.clone());
                }
                let path = match &self.base {
                    Some(base) => base.join(name),
                    None => PathBuf::from(name),
                };
                if !path.is_file() {
                    return Err(Error::DanglingReference { id: name.clone() });
                }
                let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                Ok(Arc::new(self.graph_doc(&serde_json::from_str(&text).map_err(parse_err)?)?))
            }
        }
    }

    fn graph_doc(&self, doc: &GraphDoc) -> Result<NestedGraph> {
        NestedGraph::new(
            doc.nodes.iter().cloned(),
            doc.flags.iter().map(|f| (f.id.clone(), f.dom.clone(), f.cod.clone())),
            doc.comp.iter().map(|[g, f, h]| (g.clone(), f.clone(), h.clone())),
        )
    }

    fn functor(&self, doc: &FunctorDoc) -> Result<GraphFunctor> {
        let scope = self.with(&doc.graphs)?;
        let source = scope.graph(&doc.source)?;
        let target = scope.graph(&doc.target)?;
        let dangling = |id: &str| Error::DanglingReference { id: id.to_string() };
        for key in doc.node_map.keys() {
            source.node_index(key).ok_or_else(|| dangling(key))?;
        }
        for key in doc.flag_map.keys() {
            source.flag_index(key).ok_or_else(|| dangling(key))?;
        }
        let node_map = source
            .nodes()
            .iter()
            .map(|n| {
                let t = doc.node_map.get(n).ok_or_else(|| dangling(n))?;
                target.node_index(t).ok_or_else(|| dangling(t))
            })
            .collect::<Result<Vec<_>>>()?;
        let flag_map = source
            .flags()
            .iter()
            .map(|f| match doc.flag_map.get(&f.id).ok_or_else(|| dangling(&f.id))? {
                ImageDoc::Flag(t) => target.flag_index(t).map(FlagImage::Flag).ok_or_else(|| dangling(t)),
                ImageDoc::IdAt(n) => target.node_index(n).map(FlagImage::Identity).ok_or_else(|| dangling(n)),
            })
            .collect::<Result<Vec<_>>>()?;
        GraphFunctor::new(source, target, node_map, flag_map)
    }

    /// The canonical morphism, and the isomorphism from the input's middle
    /// graph to the canonical one when the input was canonical.
    fn morphism_with_shift(&self, doc: &MorphismDoc) -> Result<(NGrMorphism, Option<GraphFunctor>)> {
        let scope = self.with(&doc.graphs)?;
        let merger = scope.functor(&doc.merger)?;
        let contraction = scope.functor(&doc.contraction)?;
        let morphism = NGrMorphism::new(merger.clone(), contraction.clone())?;
        let shift = shift_iso(&merger, &contraction, morphism.merger(), morphism.contraction());
        Ok((morphism, shift))
    }

    fn morphism(&self, doc: &MorphismDoc) -> Result<(NGrMorphism, bool)> {
        self.morphism_with_shift(doc).map(|(m, shift)| (m, shift.is_some()))
    }

    /// The middle dependency is moved onto the canonical middles when both
    /// morphisms were canonical, and otherwise derived from the mergers.
    fn square(&self, doc: &SquareDoc) -> Result<MorphismSquare> {
        let scope = self.with(&doc.graphs)?;
        let (top, top_shift) = scope.morphism_with_shift(&doc.top)?;
        let (bottom, bottom_shift) = scope.morphism_with_shift(&doc.bottom)?;
        let d1 = scope.functor(&doc.deps.source)?;
        let d2 = scope.functor(&doc.deps.middle)?;
        let d3 = scope.functor(&doc.deps.target)?;
        let d2 = match (top_shift, bottom_shift) {
            (Some(top_shift), Some(bottom_shift)) => {
                let back = bottom_shift.inverse().expect("shift is an isomorphism");
                compose_functors(&top_shift, &compose_functors(&d2, &back)?)?
            }
            _ => induced_through_epi(bottom.merger(), &compose_functors(top.merger(), &d1)?)?,
        };
        MorphismSquare::new(top, bottom, [Dependency::new(d1)?, Dependency::new(d2)?, Dependency::new(d3)?])
    }

    fn diagram(&self, doc: &DiagramDoc) -> Result<GlueDiagram> {
        let scope = self.with(&doc.graphs)?;
        let mut arrows = Vec::new();
        for a in &doc.arrows {
            let functor = scope.functor(&a.functor)?;
            arrows.push(GlueArrow { from: a.from.clone(), to: a.to.clone(), dep: Dependency::new(functor)? });
        }
        let graphs = doc.graphs.keys().map(|k| (k.clone(), scope.graphs[k].clone())).collect();
        GlueDiagram::new(graphs, arrows)
    }

    fn morphism_diagram(&self, doc: &MorphismDiagramDoc) -> Result<MorphismGlueDiagram> {
        let morphisms = doc
            .morphisms
            .iter()
            .map(|(name, m)| Ok((name.clone(), self.morphism(m)?.0)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let arrows = doc
            .arrows
            .iter()
            .map(|a| Ok(SquareArrow { from: a.from.clone(), to: a.to.clone(), square: self.square(&a.square)? }))
            .collect::<Result<Vec<_>>>()?;
        MorphismGlueDiagram::new(morphisms, arrows)
    }
}

pub fn graph_doc(graph: &NestedGraph) -> GraphDoc {
    GraphDoc {
        nodes: graph.nodes().to_vec(),
        flags: graph
            .flags()
            .iter()
            .map(|f| FlagDoc { id: f.id.clone(), dom: graph.node_id(f.dom).into(), cod: graph.node_id(f.cod).into() })
            .collect(),
        comp: graph
            .comp_entries()
            .map(|(g, f, h)| [graph.flag_id(g).into(), graph.flag_id(f).into(), graph.flag_id(h).into()])
            .collect(),
    }
}

fn functor_doc(functor: &GraphFunctor, source: GraphRef, target: GraphRef) -> FunctorDoc {
    let (src, tgt) = (functor.source(), functor.target());
    FunctorDoc {
        graphs: BTreeMap::new(),
        source,
        target,
        node_map: (0..src.node_count()).map(|n| (src.node_id(n).into(), tgt.node_id(functor.node(n)).into())).collect(),
        flag_map: (0..src.flag_count())
            .map(|f| {
                let image = match functor.flag(f) {
                    FlagImage::Flag(t) => ImageDoc::Flag(tgt.flag_id(t).into()),
                    FlagImage::Identity(n) => ImageDoc::IdAt(tgt.node_id(n).into()),
                };
                (src.flag_id(f).into(), image)
            })
            .collect(),
    }
}

fn name(s: &str) -> GraphRef {
    GraphRef::Name(s.to_string())
}

fn inline(graph: &NestedGraph) -> GraphRef {
    GraphRef::Inline(graph_doc(graph))
}

/// A morphism whose graphs are entries `prefix + {source, middle, target}`
/// of an enclosing table.
fn morphism_doc(m: &NGrMorphism, names: [&str; 3]) -> MorphismDoc {
    MorphismDoc {
        graphs: BTreeMap::new(),
        merger: functor_doc(m.merger(), name(names[0]), name(names[1])),
        contraction: functor_doc(m.contraction(), name(names[1]), name(names[2])),
    }
}

fn square_doc(s: &MorphismSquare) -> SquareDoc {
    let (top, bottom) = (s.top(), s.bottom());
    let graphs = [
        ("M1", bottom.source()),
        ("M2", bottom.middle()),
        ("M3", bottom.target()),
        ("N1", top.source()),
        ("N2", top.middle()),
        ("N3", top.target()),
    ]
    .into_iter()
    .map(|(k, g)| (k.to_string(), inline(g)))
    .collect();
    let [d1, d2, d3] = s.deps();
    SquareDoc {
        graphs,
        top: morphism_doc(top, ["N1", "N2", "N3"]),
        bottom: morphism_doc(bottom, ["M1", "M2", "M3"]),
        deps: DepsDoc {
            source: functor_doc(d1.functor(), name("M1"), name("N1")),
            middle: functor_doc(d2.functor(), name("M2"), name("N2")),
            target: functor_doc(d3.functor(), name("M3"), name("N3")),
        },
    }
}

pub fn print_graph(graph: &NestedGraph) -> String {
    pretty(&graph_doc(graph))
}

pub fn print_functor(functor: &GraphFunctor) -> String {
    pretty(&functor_doc(functor, inline(functor.source()), inline(functor.target())))
}

pub fn print_morphism(m: &NGrMorphism) -> String {
    let mut doc = morphism_doc(m, ["source", "middle", "target"]);
    doc.graphs = [("source", m.source()), ("middle", m.middle()), ("target", m.target())]
        .into_iter()
        .map(|(k, g)| (k.to_string(), inline(g)))
        .collect();
    pretty(&doc)
}

pub fn print_square(s: &MorphismSquare) -> String {
    pretty(&square_doc(s))
}

pub fn print_diagram(d: &GlueDiagram) -> String {
    let doc = DiagramDoc {
        graphs: d.graphs().iter().map(|(k, g)| (k.clone(), inline(g))).collect(),
        arrows: d
            .arrows()
            .iter()
            .map(|a| ArrowDoc {
                from: a.from.clone(),
                to: a.to.clone(),
                functor: functor_doc(a.dep.functor(), name(&a.from), name(&a.to)),
            })
            .collect(),
    };
    pretty(&doc)
}

pub fn print_morphism_diagram(d: &MorphismGlueDiagram) -> String {
    let doc = MorphismDiagramDoc {
        morphisms: d
            .morphisms()
            .iter()
            .map(|(k, m)| {
                let mut doc = morphism_doc(m, ["source", "middle", "target"]);
                doc.graphs = [("source", m.source()), ("middle", m.middle()), ("target", m.target())]
                    .into_iter()
                    .map(|(k, g)| (k.to_string(), inline(g)))
                    .collect();
                (k.clone(), doc)
            })
            .collect(),
        arrows: d
            .arrows()
            .iter()
            .map(|a| SquareArrowDoc { from: a.from.clone(), to: a.to.clone(), square: square_doc(&a.square) })
            .collect(),
    };
    pretty(&doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::double::restrict_morphism;
    use crate::fixtures::*;
    use crate::quotient::contract_flags;
    use std::collections::BTreeSet;

    const TRI: &str = r#"{
  "nodes": ["p", "c", "s"],
  "flags": [
    {"id": "pc", "dom": "p", "cod": "c"},
    {"id": "cs", "dom": "c", "cod": "s"},
    {"id": "ps", "dom": "p", "cod": "s"}
  ],
  "comp": [["pc", "cs", "ps"]]
}"#;

    #[test]
    fn graph_round_trip() {
        let g = parse_graph(TRI).unwrap();
        assert_eq!(g, triangle());
        let printed = print_graph(&g);
        assert_eq!(print_graph(&parse_graph(&printed).unwrap()), printed);
        assert!(printed.ends_with("}\n"));
    }

    #[test]
    fn unknown_fields_and_bad_json_are_parse_errors() {
        assert_eq!(parse_graph("{\"nodes\": [], \"edges\": []}").unwrap_err().code(), "ParseError");
        assert_eq!(parse_graph("[").unwrap_err().code(), "ParseError");
        assert_eq!(parse_document("{}", None).unwrap_err().code(), "ParseError");
    }

    #[test]
    fn functor_maps_must_be_total() {
        let text = format!(
            r#"{{"source": {TRI}, "target": {{"nodes": ["a"]}}, "node_map": {{"p": "a", "c": "a", "s": "a"}}, "flag_map": {{"pc": {{"id_at": "a"}}}}}}"#
        );
        assert_eq!(parse_functor(&text).unwrap_err(), Error::DanglingReference { id: "cs".into() });
        let text = format!(
            r#"{{"source": {TRI}, "target": {{"nodes": ["a"]}}, "node_map": {{"p": "a", "c": "a", "s": "a"}},
                "flag_map": {{"pc": {{"id_at": "a"}}, "cs": {{"id_at": "a"}}, "ps": {{"id_at": "a"}}}}}}"#
        );
        let phi = parse_functor(&text).unwrap();
        assert!(phi.is_epi());
        assert_eq!(print_functor(&parse_functor(&print_functor(&phi)).unwrap()), print_functor(&phi));
    }

    #[test]
    fn graph_refs_resolve_by_table_then_path() {
        let dir = std::env::temp_dir().join(format!("nestgraph-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(dir.join("tri.json"), TRI).unwrap();
        let text = r#"{"graphs": {"pt": {"nodes": ["a"]}}, "source": "tri.json", "target": "pt",
            "node_map": {"p": "a", "c": "a", "s": "a"},
            "flag_map": {"pc": {"id_at": "a"}, "cs": {"id_at": "a"}, "ps": {"id_at": "a"}}}"#;
        std::fs::write(dir.join("collapse.json"), text).unwrap();
        let doc = load_document(&dir.join("collapse.json")).unwrap();
        assert_eq!(doc.kind(), "functor");
        let missing = r#"{"source": "nope.json", "target": "nope.json", "node_map": {}}"#;
        assert_eq!(
            parse_document(missing, Some(&dir)).unwrap_err(),
            Error::DanglingReference { id: "nope.json".into() }
        );
        std::fs::remove_dir_all(&dir).unwrap();
    }

    fn contract_pc() -> NGrMorphism {
        let tri = Arc::new(triangle());
        let (_, kappa) = contract_flags(&tri, &BTreeSet::from([tri.flag_index("pc").unwrap()])).unwrap();
        NGrMorphism::from_functor(&kappa).unwrap()
    }

    #[test]
    fn morphism_round_trip_reports_canonical() {
        let m = contract_pc();
        let printed = print_morphism(&m);
        let (back, was_canonical) = parse_morphism(&printed).unwrap();
        assert!(was_canonical);
        assert_eq!(print_morphism(&back), printed);
    }

    #[test]
    fn non_canonical_morphism_is_canonicalized() {
        // merging a with the isolated b and then contracting ac has the same
        // composite as merging b with c and contracting a into them
        let text = r#"{
  "graphs": {
    "source": {"nodes": ["a", "b", "c"], "flags": [{"id": "ac", "dom": "a", "cod": "c"}]},
    "middle": {"nodes": ["ab", "c"], "flags": [{"id": "ac", "dom": "ab", "cod": "c"}]},
    "target": {"nodes": ["x"]}
  },
  "merger": {"source": "source", "target": "middle", "node_map": {"a": "ab", "b": "ab", "c": "c"}, "flag_map": {"ac": {"flag": "ac"}}},
  "contraction": {"source": "middle", "target": "target", "node_map": {"ab": "x", "c": "x"}, "flag_map": {"ac": {"id_at": "x"}}}
}"#;
        let (m, was_canonical) = parse_morphism(text).unwrap();
        assert!(!was_canonical);
        assert_eq!(m.middle().nodes(), &["a", "b+c"].map(String::from)[..]);
        let printed = print_morphism(&m);
        assert!(parse_morphism(&printed).unwrap().1);
        // renaming the middle keeps the morphism canonical up to isomorphism
        let (renamed, was_canonical) = parse_morphism(&printed.replace("b+c", "bc")).unwrap();
        assert!(was_canonical);
        assert_eq!(renamed, m);
    }

    #[test]
    fn square_round_trip() {
        let m = contract_pc();
        let n = m.target().node_index("c+p").unwrap();
        let sub = Arc::new(m.target().full_subgraph_closure([n]));
        let square = restrict_morphism(&m, &Dependency::inclusion(sub, m.target().clone()).unwrap()).unwrap();
        let printed = print_square(&square);
        let back = parse_square(&printed).unwrap();
        assert_eq!(back, square);
        assert_eq!(print_square(&back), printed);
    }

    #[test]
    fn diagram_round_trip() {
        let text = r#"{
  "graphs": {"k": {"nodes": ["x"]}, "a": {"nodes": ["p", "c"], "flags": [{"id": "pc", "dom": "p", "cod": "c"}]}},
  "arrows": [{"from": "k", "to": "a", "functor": {"source": "k", "target": "a", "node_map": {"x": "p"}}}]
}"#;
        let d = parse_diagram(text).unwrap();
        assert_eq!(d.arrows().len(), 1);
        let printed = print_diagram(&d);
        assert_eq!(print_diagram(&parse_diagram(&printed).unwrap()), printed);
        let bad = text.replace(r#""x": "p""#, r#""x": "c""#);
        assert_eq!(parse_diagram(&bad).unwrap_err().code(), "NotDependency");
    }
}

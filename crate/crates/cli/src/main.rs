//! Command-line front end for the nested graph engine.
//!
//! Exit status is 0 on success, 1 when an input fails validation (with a
//! JSON report `{"error", "ids", "message"}` on stderr) and 2 on usage
//! errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::json;

use nestgraph::dot::to_dot;
use nestgraph::io::{load_document, print_graph, print_morphism, print_square, Document};
use nestgraph::random::{gen_random, Bounds, RandomKind, RandomSpec};
use nestgraph::{
    compose_functors, decompose, glue, glue_morphisms, ngr_compose, ngr_equal, restrict_morphism, Dependency, Error,
    GraphFunctor, NGrMorphism, NestedGraph, Result,
};

#[derive(Parser)]
#[command(name = "nestgraph", version, about = "Nested graphs: validation, morphisms, gluing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check any document and summarize it.
    Validate { file: PathBuf },
    /// Print derived data about a graph, functor or morphism as JSON.
    Info { file: PathBuf },
    /// Split an admissible epi-functor into merger and contraction.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compose two morphisms, `second ∘ first`.
    Compose {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether two morphisms are equal.
    Equal { first: PathBuf, second: PathBuf },
    /// Restrict a morphism along a dependency into its target.
    Restrict {
        morphism: PathBuf,
        dependency: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Glue a diagram of graphs or of morphisms.
    Glue {
        diagram: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a graph in DOT format.
    ExportDot {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a random value.
    GenRandom {
        #[arg(long, default_value = "graph")]
        kind: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        max_nodes: usize,
        #[arg(long, default_value_t = 20)]
        max_flags: usize,
        #[arg(long, default_value_t = 3)]
        max_grade: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let report = json!({ "error": e.code(), "ids": e.ids(), "message": e.to_string() });
            eprintln!("{report}");
            ExitCode::from(1)
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn graph_of(doc: Document) -> Result<Arc<NestedGraph>> {
    match doc {
        Document::Graph(g) => Ok(g),
        other => Err(Error::Parse(format!("expected a graph, found a {}", other.kind()))),
    }
}

/// Morphism files are used as they are; functor files are read as the
/// morphism they represent.
fn morphism_of(doc: Document) -> Result<NGrMorphism> {
    match doc {
        Document::Morphism { morphism, .. } => Ok(morphism),
        Document::Functor(phi) => NGrMorphism::from_functor(&phi),
        other => Err(Error::Parse(format!("expected a morphism, found a {}", other.kind()))),
    }
}

fn functor_of(doc: Document) -> Result<GraphFunctor> {
    match doc {
        Document::Functor(phi) => Ok(phi),
        other => Err(Error::Parse(format!("expected a functor, found a {}", other.kind()))),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn grading_summary(g: &NestedGraph) -> String {
    let mut order: Vec<usize> = (0..g.node_count()).collect();
    order.sort_by(|&a, &b| (g.grading().grade(a), g.node_id(a)).cmp(&(g.grading().grade(b), g.node_id(b))));
    let parts: Vec<String> = order.iter().map(|&n| format!("{}:{}", g.node_id(n), g.grading().grade(n))).collect();
    format!("{{{}}}", parts.join(","))
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Validate { file } => {
            let line = match load_document(&file)? {
                Document::Graph(g) => format!("valid, grading {}", grading_summary(&g)),
                Document::Functor(phi) => format!(
                    "valid functor, admissible: {}, epi: {}, merger: {}, contraction: {}",
                    yes(phi.is_admissible()),
                    yes(phi.is_epi()),
                    yes(phi.is_merger()),
                    yes(phi.is_contraction())
                ),
                Document::Morphism { was_canonical, .. } => {
                    format!("valid morphism, {}", if was_canonical { "canonical" } else { "canonicalized" })
                }
                Document::Square(_) => "valid square".to_string(),
                Document::Diagram(d) => {
                    format!("valid diagram, {} graphs, {} arrows", d.graphs().len(), d.arrows().len())
                }
                Document::MorphismDiagram(d) => {
                    format!("valid morphism diagram, {} morphisms, {} squares", d.morphisms().len(), d.arrows().len())
                }
            };
            println!("{line}");
            Ok(())
        }
        Command::Info { file } => {
            let info = match load_document(&file)? {
                Document::Graph(g) => graph_info(&g),
                Document::Functor(phi) => json!({
                    "kind": "functor",
                    "source": graph_info(phi.source()),
                    "target": graph_info(phi.target()),
                    "admissible": phi.is_admissible(),
                    "epi": phi.is_epi(),
                    "merger": phi.is_merger(),
                    "contraction": phi.is_contraction(),
                    "isomorphism": phi.is_isomorphism(),
                    "contracted": (0..phi.source().flag_count())
                        .filter(|&f| phi.contracts(f))
                        .map(|f| phi.source().flag_id(f))
                        .collect::<Vec<_>>(),
                }),
                Document::Morphism { morphism, was_canonical } => json!({
                    "kind": "morphism",
                    "canonical": was_canonical,
                    "source": graph_info(morphism.source()),
                    "middle": graph_info(morphism.middle()),
                    "target": graph_info(morphism.target()),
                }),
                other => json!({ "kind": other.kind() }),
            };
            println!("{}", serde_json::to_string_pretty(&info).expect("json"));
            Ok(())
        }
        Command::Decompose { file, out } => {
            let phi = functor_of(load_document(&file)?)?;
            let (merger, contraction) = decompose(&phi)?;
            if compose_functors(&contraction, &merger)? != phi {
                return Err(Error::NotCommuting { id: "composite".into() });
            }
            eprintln!("composite verified");
            let m = NGrMorphism::new(merger, contraction)?;
            emit(&print_morphism(&m), out.as_deref())
        }
        Command::Compose { first, second, out } => {
            let first = morphism_of(load_document(&first)?)?;
            let second = morphism_of(load_document(&second)?)?;
            emit(&print_morphism(&ngr_compose(&second, &first)?), out.as_deref())
        }
        Command::Equal { first, second } => {
            let a = morphism_of(load_document(&first)?)?;
            let b = morphism_of(load_document(&second)?)?;
            println!("{}", if ngr_equal(&a, &b)? { "equal" } else { "different" });
            Ok(())
        }
        Command::Restrict { morphism, dependency, out } => {
            let m = morphism_of(load_document(&morphism)?)?;
            let dep = Dependency::new(functor_of(load_document(&dependency)?)?)?;
            emit(&print_square(&restrict_morphism(&m, &dep)?), out.as_deref())
        }
        Command::Glue { diagram, out } => match load_document(&diagram)? {
            Document::Diagram(d) => emit(&print_graph(&glue(&d)?.graph), out.as_deref()),
            Document::MorphismDiagram(d) => emit(&print_morphism(&glue_morphisms(&d)?), out.as_deref()),
            other => Err(Error::Parse(format!("expected a diagram, found a {}", other.kind()))),
        },
        Command::ExportDot { file, out } => {
            let g = graph_of(load_document(&file)?)?;
            emit(&to_dot(&g), out.as_deref())
        }
        Command::GenRandom { kind, seed, max_nodes, max_flags, max_grade, out } => {
            let spec = RandomSpec {
                seed,
                bounds: Bounds::new(max_nodes, max_flags, max_grade)?,
                kind: kind.parse::<RandomKind>()?,
            };
            emit(&gen_random(&spec)?.to_json(), out.as_deref())
        }
    }
}

fn graph_info(g: &NestedGraph) -> serde_json::Value {
    let ids = |v: Vec<usize>| v.into_iter().map(|n| g.node_id(n).to_string()).collect::<Vec<_>>();
    json!({
        "nodes": g.node_count(),
        "flags": g.flag_count(),
        "irreducible": g.irreducible_flags().into_iter().map(|f| g.flag_id(f)).collect::<Vec<_>>(),
        "vertices": ids(g.vertices()),
        "grading": (0..g.node_count()).map(|n| (g.node_id(n).to_string(), json!(g.grading().grade(n)))).collect::<serde_json::Map<_, _>>(),
        "ordinal": g.grading().ordinal(),
        "corolla": g.is_corolla(),
        "one_dimensional": g.is_one_dimensional(false),
        "classic_one_dimensional": g.is_one_dimensional(true),
    })
}

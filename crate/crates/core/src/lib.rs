//! Nested graphs: finite direct categories modelling varieties with marked
//! subvarieties, with the morphism calculus built on top of them.
//!
//! * [`graph`]: nested graphs, gradings, irreducible flags, full subgraphs
//! * [`functor`]: admissible functors, mergers, contractions, fibers
//! * [`quotient`]: building mergers and contractions from partitions and flag sets
//! * [`ngr`]: canonical decomposition and the category of nested graphs
//! * [`double`]: dependencies and the squares of the double category
//! * [`glue`]: colimits of diagrams of graphs and of morphisms
//! * [`io`], [`dot`], [`random`]: file formats, DOT export, seeded generators

pub mod dot;
pub mod double;
pub mod error;
pub mod fixtures;
pub mod functor;
pub mod glue;
pub mod graph;
pub mod io;
pub mod iso;
pub mod ngr;
pub mod quotient;
pub mod random;

pub use double::{hcompose_squares, restrict_morphism, vcompose_squares, Dependency, MorphismSquare};
pub use error::{Error, Result};
pub use functor::{compose_functors, FlagImage, GraphFunctor};
pub use glue::{disjoint_union, glue, glue_morphisms, GlueDiagram, Glued, MorphismGlueDiagram};
pub use graph::{Flag, Grading, NestedGraph};
pub use iso::graph_iso;
pub use ngr::{decompose, make_morphism, ngr_compose, ngr_equal, ngr_identity, NGrMorphism};
pub use quotient::{contract_flags, quotient_by_partition, NodePartition};

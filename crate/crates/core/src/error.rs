use thiserror::Error;

/// Everything that can go wrong while building or relating nested graphs.
///
/// Each variant carries the offending node or flag ids so failures can be
/// reported, shrunk and archived as fixtures. [`Error::code`] gives a stable
/// machine-readable name.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown id `{id}`")]
    DanglingReference { id: String },
    #[error("duplicate id `{id}`")]
    DuplicateId { id: String },
    #[error("no grading exists: cycle through {nodes:?}")]
    CycleDetected { nodes: Vec<String> },
    #[error("composable pair ({g}, {f}) has no composite")]
    CompositionIncomplete { g: String, f: String },
    #[error("composite of ({g}, {f}) given as `{h}` has the wrong endpoints")]
    CompositionMismatch { g: String, f: String, h: String },
    #[error("composition of ({g}, {f}) is defined but the pair is not composable")]
    NotComposable { g: String, f: String },
    #[error("composition is not associative on ({g}, {f}, {h})")]
    AssociativityViolation { g: String, f: String, h: String },
    #[error("flag `{flag}` is sent to a morphism with the wrong endpoints")]
    EndpointMismatch { flag: String },
    #[error("functor does not preserve the composite of ({g}, {f})")]
    FunctorialityViolation { g: String, f: String },
    #[error("functor is not admissible at flag `{flag}`")]
    NotAdmissible { flag: String },
    #[error("functor is not an epi-functor (`{id}` is not generated)")]
    NotEpi { id: String },
    #[error("functor is not a merger")]
    NotMerger,
    #[error("functor is not a contraction")]
    NotContraction,
    #[error("block {block:?} does not contract to a corolla")]
    FiberNotCorolla { block: Vec<String> },
    #[error("source and target do not match")]
    SourceTargetMismatch,
    #[error("functor is not a dependency at `{id}`")]
    NotDependency { id: String },
    #[error("square does not commute at `{id}`")]
    NotCommuting { id: String },
    #[error("preimage condition fails on the {side} side at `{id}`")]
    PreimageMismatch { side: &'static str, id: String },
    #[error("restricted merger is not a merger")]
    RestrictionNotMerger,
    #[error("restricted contraction is not a contraction")]
    RestrictionNotContraction,
    #[error("boundaries do not match: {what}")]
    BoundaryMismatch { what: String },
    #[error("identified flags force different composites for ({g}, {f})")]
    CompositionConflict { g: String, f: String },
    #[error("induced map is not well defined at `{id}`")]
    InducedMapIllDefined { id: String },
    #[error("no value satisfying the bounds after {attempts} attempts")]
    GenerationExhausted { attempts: usize },
    #[error("more than {limit} chains in presentation")]
    ChainLimitExceeded { limit: usize },
    #[error("invalid generator bounds: {reason}")]
    InvalidBounds { reason: String },
    #[error("invalid partition: {reason}")]
    InvalidPartition { reason: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable error code used in machine-readable reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DanglingReference { .. } => "DanglingReference",
            Error::DuplicateId { .. } => "DuplicateId",
            Error::CycleDetected { .. } => "CycleDetected",
            Error::CompositionIncomplete { .. } => "CompositionIncomplete",
            Error::CompositionMismatch { .. } => "CompositionMismatch",
            Error::NotComposable { .. } => "NotComposable",
            Error::AssociativityViolation { .. } => "AssociativityViolation",
            Error::EndpointMismatch { .. } => "EndpointMismatch",
            Error::FunctorialityViolation { .. } => "FunctorialityViolation",
            Error::NotAdmissible { .. } => "NotAdmissible",
            Error::NotEpi { .. } => "NotEpi",
            Error::NotMerger => "NotMerger",
            Error::NotContraction => "NotContraction",
            Error::FiberNotCorolla { .. } => "FiberNotCorolla",
            Error::SourceTargetMismatch => "SourceTargetMismatch",
            Error::NotDependency { .. } => "NotDependency",
            Error::NotCommuting { .. } => "NotCommuting",
            Error::PreimageMismatch { .. } => "PreimageMismatch",
            Error::RestrictionNotMerger => "RestrictionNotMerger",
            Error::RestrictionNotContraction => "RestrictionNotContraction",
            Error::BoundaryMismatch { .. } => "BoundaryMismatch",
            Error::CompositionConflict { .. } => "CompositionConflict",
            Error::InducedMapIllDefined { .. } => "InducedMapIllDefined",
            Error::GenerationExhausted { .. } => "GenerationExhausted",
            Error::ChainLimitExceeded { .. } => "ChainLimitExceeded",
            Error::InvalidBounds { .. } => "InvalidBounds",
            Error::InvalidPartition { .. } => "InvalidPartition",
            Error::Parse(_) => "ParseError",
            Error::Io(_) => "IoError",
        }
    }

    /// Node and flag ids named by the error.
    pub fn ids(&self) -> Vec<String> {
        match self {
            Error::DanglingReference { id }
            | Error::DuplicateId { id }
            | Error::NotEpi { id }
            | Error::NotDependency { id }
            | Error::NotCommuting { id }
            | Error::PreimageMismatch { id, .. }
            | Error::InducedMapIllDefined { id } => vec![id.clone()],
            Error::CycleDetected { nodes } => nodes.clone(),
            Error::FiberNotCorolla { block } => block.clone(),
            Error::CompositionIncomplete { g, f }
            | Error::NotComposable { g, f }
            | Error::FunctorialityViolation { g, f }
            | Error::CompositionConflict { g, f } => vec![g.clone(), f.clone()],
            Error::CompositionMismatch { g, f, h } | Error::AssociativityViolation { g, f, h } => {
                vec![g.clone(), f.clone(), h.clone()]
            }
            Error::EndpointMismatch { flag } | Error::NotAdmissible { flag } => vec![flag.clone()],
            _ => Vec::new(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

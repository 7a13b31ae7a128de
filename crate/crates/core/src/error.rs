use thiserror::Error;

use crate::framework::ArgumentId;
use crate::paths::ConnectivityClass;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument id must be a non-empty token without whitespace, got {0:?}")]
    InvalidArgumentId(String),
    #[error("duplicate argument `{0}`")]
    DuplicateArgument(ArgumentId),
    #[error("edge ({from}, {to}) refers to undeclared argument `{missing}`")]
    UnknownEndpoint {
        from: ArgumentId,
        to: ArgumentId,
        missing: ArgumentId,
    },
    #[error("edge ({from}, {to}) is declared both as an attack and as a support")]
    OverlappingRelations { from: ArgumentId, to: ArgumentId },
    #[error("base score of `{argument}` is {value}, expected a value in [0, 1]")]
    BaseScoreOutOfRange { argument: ArgumentId, value: f64 },
    #[error("framework is cyclic: {}", format_cycle(.0))]
    CycleDetected(Vec<ArgumentId>),
    #[error("unknown argument `{0}`")]
    UnknownArgument(ArgumentId),
    #[error("value {0} lies outside [0, 1]")]
    InputOutOfRange(f64),
    #[error("({parent}, {child}) is not an edge of the framework")]
    NotAnEdge {
        parent: ArgumentId,
        child: ArgumentId,
    },
    #[error("`{source_arg}` is {found} to `{topic}`, expected {expected}")]
    WrongConnectivity {
        source_arg: ArgumentId,
        topic: ArgumentId,
        expected: ConnectivityClass,
        found: ConnectivityClass,
    },
    #[error(
        "no feasible finite-difference stencil for base score {base_score} with step {epsilon}"
    )]
    DegenerateStencil { base_score: f64, epsilon: f64 },
    #[error("expected two distinct arguments, got `{0}` twice")]
    SameArgument(ArgumentId),
    #[error("grid value {0} lies outside [0, 1]")]
    GridOutOfRange(f64),
    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),
    #[error("no tie-free framework found after {0} attempts")]
    TieAvoidanceExhausted(usize),
    #[error("report topic `{0}` does not belong to the framework")]
    TopicMismatch(ArgumentId),
    #[error("syntax error at {location}: {message}")]
    Syntax { location: String, message: String },
    #[error("at {location}: {source}")]
    Positioned {
        location: String,
        #[source]
        source: Box<Error>,
    },
    #[error("document is a reference table without edges and cannot be evaluated")]
    NotEvaluable,
    #[error("no topic argument given and the document does not name one")]
    MissingTopic,
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Strips positional wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Positioned { source, .. } => source.root(),
            other => other,
        }
    }
}

fn format_cycle(cycle: &[ArgumentId]) -> String {
    let mut parts: Vec<&str> = cycle.iter().map(ArgumentId::as_str).collect();
    if let Some(first) = cycle.first() {
        parts.push(first.as_str());
    }
    parts.join(" -> ")
}

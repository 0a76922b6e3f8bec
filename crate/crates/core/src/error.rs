use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { line: usize, vertex: i64, n: usize },

    #[error("vertex count mismatch: {0}")]
    VertexCount(String),

    #[error("arrow endpoint {vertex} out of range for {n} vertices")]
    InvalidArrow { vertex: usize, n: usize },

    #[error("dimension vector has length {got}, quiver has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },

    #[error("dimension vector has a negative entry: {0:?}")]
    NegativeEntry(Vec<i64>),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("quiver has an oriented cycle through vertices {}", fmt_labels(.0))]
    OrientedCycle(Vec<usize>),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no perpendicular ordering exists for the decomposition of {0:?}")]
    OrderingFailure(Vec<i64>),

    #[error("local quiver would have {count} arrows from member {from} to member {to}")]
    NegativeArrowCount { from: usize, to: usize, count: i64 },

    #[error("generic hom from member {from} to member {to} is {hom}, expected 0")]
    HomNotTrivial { from: usize, to: usize, hom: i64 },

    #[error("{0:?} is not a real Schur root")]
    NotRealSchurRoot(Vec<i64>),

    #[error("expected {expected} distinct summands, found {found}")]
    SummandCountMismatch { expected: usize, found: usize },

    #[error("no white sink left while recovering simple dimensions")]
    NoWhiteSink,

    #[error("{target:?} is not in the span of the current basis")]
    NotInSpan { target: Vec<i64> },

    #[error("{target:?} has a non-integer expansion in the current basis")]
    NonIntegerExpansion { target: Vec<i64> },

    #[error("{target:?} has a negative coefficient in the current basis")]
    NegativeExpansion { target: Vec<i64> },

    #[error("local quiver has an oriented cycle through members {}", fmt_labels(.0))]
    NonLoopCycle(Vec<usize>),

    #[error("{0:?} is not prehomogeneous")]
    NotPrehomogeneous(Vec<i64>),

    #[error("locally semi-simple stage {stage}: {detail}")]
    Stage { stage: u8, detail: String },

    #[error("oracle: {0}")]
    Oracle(String),

    #[error("oracle sampled hom {hom} below the Euler value {euler}; rerun with more trials")]
    NegativeExt { hom: i64, euler: i64 },
}

fn fmt_labels(v: &[usize]) -> String {
    v.iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(" -> ")
}

impl Error {
    /// Attaches a stage number to a failure raised inside the locally
    /// semi-simple pipeline.
    pub(crate) fn in_stage(self, stage: u8) -> Error {
        match self {
            e @ Error::Stage { .. } => e,
            other => Error::Stage {
                stage,
                detail: other.to_string(),
            },
        }
    }
}

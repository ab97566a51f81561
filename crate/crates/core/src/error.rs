use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("grade mismatch: expected {expected}, found {found}")]
    GradeMismatch { expected: usize, found: usize },

    #[error("grade {grade} exceeds ambient dimension {ambient_dim}")]
    GradeOverflow { grade: usize, ambient_dim: usize },

    #[error("ambient dimension {0} is outside the supported range 1..=12")]
    UnsupportedDimension(usize),

    #[error("degenerate {0}-simplex")]
    DegenerateSimplex(usize),

    #[error("vertex index {index} out of range ({count} vertices)")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("duplicate simplex {0:?}")]
    DuplicateSimplex(Vec<usize>),

    #[error("{0:?} is not a simplex of the complex")]
    NotASimplex(Vec<usize>),

    #[error("{face:?} is not a face of {simplex:?}")]
    NotAFace { face: Vec<usize>, simplex: Vec<usize> },

    #[error("edge {0:?} is not in the complex")]
    EdgeNotFound([usize; 2]),

    #[error("unknown subdivision rule `{0}`")]
    UnknownRule(String),

    #[error("chains or varifolds live on different complexes, dimensions or groups")]
    Incompatible,

    #[error("coefficient group mismatch: {0}")]
    GroupMismatch(String),

    #[error("frozen vertex {0} is moved by the map")]
    FrozenVertexMoved(usize),

    #[error("vertices {0} and {1} have the same image")]
    VertexCollision(usize, usize),

    #[error("map has {found} vertex images, complex has {expected} vertices")]
    MapSize { expected: usize, found: usize },

    #[error("negative weight {0}")]
    NegativeWeight(f64),

    #[error("subgroup is ill-posed: {0}")]
    IllPosedSubgroup(String),

    #[error("coefficient is not representable by the generators within the search budget")]
    NotRepresentable,

    #[error("norm ball radius must be nonnegative, got {0}")]
    NegativeRadius(f64),

    #[error("the complex has no {0}-simplices")]
    NoSimplices(usize),

    #[error("unknown example `{0}`")]
    UnknownExample(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

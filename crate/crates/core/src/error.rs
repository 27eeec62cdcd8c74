use thiserror::Error;

/// Validation failures for combinatorial surfaces. Vertex indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("need at least 4 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("need at least 4 faces, got {0}")]
    TooFewFaces(usize),
    #[error("face {face} references vertex {vertex} outside 1..={n}")]
    IndexOutOfRange { face: usize, vertex: usize, n: usize },
    #[error("face {face} repeats a vertex")]
    DegenerateFace { face: usize },
    #[error("faces {first} and {second} use the same vertex triple")]
    DuplicateFace { first: usize, second: usize },
    #[error("edge ({0}, {1}) belongs to {2} faces, expected 2")]
    NonManifoldEdge(usize, usize, usize),
    #[error("edge ({0}, {1}) is traversed in the same direction by both incident faces")]
    OrientationMismatch(usize, usize),
    #[error("vertex {0} is not used by any face")]
    IsolatedVertex(usize),
    #[error("vertex link of {0} is not a single cycle")]
    NonManifoldVertex(usize),
    #[error("Euler characteristic {0} is not of the form 2 - 2g")]
    BadEulerCharacteristic(i64),
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(#[from] SurfaceError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("unknown generator `{0}`")]
    UnknownName(String),
    #[error("invalid generator parameters: {0}")]
    BadParams(String),
    #[error("certification failed: {0}")]
    CertificationFailed(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RigidityError {
    #[error("embedding has {got} vertices, surface has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("singular value {value:e} lies within a factor 10 of the threshold {threshold:e}; rerun in exact mode")]
    ToleranceAmbiguous { value: f64, threshold: f64 },
    #[error("tolerance must be positive")]
    BadTolerance,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable sets differ: {0:?} vs {1:?}")]
    VariableMismatch(Vec<String>, Vec<String>),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("polynomial has positive degree in a variable other than `{0}`")]
    NotUnivariate(String),
    #[error("exact division failed")]
    InexactDivision,
    #[error("surface does not match class {0}")]
    ClassMismatch(String),
    #[error("volume polynomial construction degenerated: {0}")]
    ConstructionDegenerate(String),
    #[error("unsupported combinatorial class")]
    UnsupportedClass,
    #[error("symbolic volume polynomial not available for class {0}; only length-specialized forms are")]
    SymbolicUnavailable(String),
}

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Rigidity(#[from] RigidityError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("invalid input: {0}")]
    Input(String),
}

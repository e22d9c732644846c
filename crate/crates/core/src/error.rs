use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },

    #[error("edge `{edge}` has invalid length {length} (must be positive and finite)")]
    NonPositiveLength { edge: String, length: f64 },

    #[error("edge `{edge}` references unknown vertex `{vertex}`")]
    DanglingEndpoint { edge: String, vertex: String },

    #[error("malformed vertex condition at `{vertex}`: {reason}")]
    MalformedCondition { vertex: String, reason: String },

    #[error("invalid id: {0}")]
    InvalidId(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("unknown edge `{0}`")]
    UnknownEdge(String),

    #[error("edge `{edge}` has non-finite potential {potential}")]
    InvalidPotential { edge: String, potential: f64 },

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("split point {s} outside the open interval (0, {length}) of edge `{edge}`")]
    SplitOutOfRange { edge: String, s: f64, length: f64 },

    #[error("point coordinate {coordinate} outside [0, {length}] on edge `{edge}`")]
    PointOutOfRange { edge: String, coordinate: f64, length: f64 },

    #[error("vertex `{vertex}` has odd degree {degree}; no Eulerian cycle exists")]
    OddDegree { vertex: String, degree: usize },

    #[error("mesh size must be positive and finite, got {0}")]
    InvalidMeshSize(f64),

    #[error("mesh too fine: {elements} elements requested (edge `{edge}`)")]
    MeshTooFine { edge: String, elements: f64 },

    #[error("requested {requested} eigenpairs but the system has {available} degrees of freedom")]
    TooManyEigenvalues { requested: usize, available: usize },

    #[error("eigensolver did not converge after {iterations} iterations (worst relative residual {worst_residual:.3e})")]
    NonConvergence { iterations: usize, worst_residual: f64 },

    #[error("eigensolver missed eigenvalues: inertia counts {counted} below {threshold}, solver found {found}")]
    MissedEigenvalues { threshold: f64, counted: usize, found: usize },

    #[error("factorization failed: {0}")]
    Factorization(String),

    #[error("function is discontinuous at vertex `{vertex}` (jump {jump:.3e})")]
    ContinuityViolation { vertex: String, jump: f64 },

    #[error("function must vanish at Dirichlet vertex `{vertex}` (value {value:.3e})")]
    DirichletViolation { vertex: String, value: f64 },

    #[error("function has zero L2 norm")]
    ZeroFunction,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("unsupported vertex conditions or potential: {0}")]
    UnsupportedConditions(String),

    #[error("root-finding grid too coarse: {0}; increase the grid refinement")]
    GridTooCoarse(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),

    #[error("invalid surgery: {0}")]
    InvalidSurgery(String),

    #[error("graph is not a tree (Betti number {betti})")]
    NotATree { betti: usize },

    #[error("lambda {lambda} is above the trust ceiling {ceiling} of the computed spectrum")]
    AboveTrustCeiling { lambda: f64, ceiling: f64 },

    #[error("need at least {needed} trusted eigenvalues, have {have}")]
    InsufficientEigenvalues { needed: usize, have: usize },

    #[error("eigenfunction {k} vanishes identically on edge `{edge}`; nodal domains are ambiguous")]
    AmbiguousNodalDomain { k: usize, edge: String },

    #[error("vertex `{0}` is isolated (degree zero)")]
    IsolatedVertex(String),

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors that stem from the eigensolver rather than the input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::MissedEigenvalues { .. } | Error::Factorization(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

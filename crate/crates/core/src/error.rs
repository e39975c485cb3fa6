use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid objective: {0}")]
    InvalidObjective(String),

    #[error("invalid search box: {0}")]
    InvalidBox(String),

    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    #[error("box QP did not converge after {iterations} iterations (kkt residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("support is empty; the objective reduces to its constant term")]
    EmptySupport,

    #[error("cardinality k={k} must satisfy 1 <= k < p={p}")]
    InvalidK { k: usize, p: usize },

    #[error("coordinate {index} is not branchable (flag {flag})")]
    NotBranchable { index: usize, flag: u8 },

    #[error("node has no coordinate with flag 1")]
    NoBranchableCoordinate,

    #[error("node list is empty")]
    EmptyList,

    #[error("candidate has {nonzeros} nonzeros but k={k}")]
    InfeasibleCandidate { nonzeros: usize, k: usize },

    #[error("invalid initial support: {0}")]
    InvalidInitialSupport(String),

    #[error("invalid instance shape: {0}")]
    InvalidShape(String),

    #[error("true sparsity k0={k0} exceeds p={p}")]
    InvalidK0 { k0: usize, p: usize },

    #[error("degenerate box: the reference solution is identically zero")]
    DegenerateBox,

    #[error("enumeration of {count} supports exceeds the limit of {limit}")]
    TooLarge { count: u128, limit: u128 },

    #[error("best value is zero; relative gap is undefined")]
    ZeroBest,

    #[error("missing measurement for solver '{solver}' on problem '{problem}'")]
    MissingCell { problem: String, solver: String },

    #[error("non-positive measure {value} for solver '{solver}' on problem '{problem}'")]
    NonPositiveMeasure {
        problem: String,
        solver: String,
        value: f64,
    },

    #[error("sample is empty")]
    EmptySample,

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown solver '{0}'")]
    UnknownSolver(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

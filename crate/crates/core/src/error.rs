//! Error type shared by all modules.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum FemError {
    #[error("element {elem} is non-convex: min corner Jacobian {jmin}")]
    NonConvex { elem: usize, jmin: f64 },

    #[error("degenerate Jacobian J = {j} at ({xi}, {eta})")]
    DegenerateJacobian { j: f64, xi: f64, eta: f64 },

    #[error("corner order violates the orientation convention (a1 = {a1}, b2 = {b2})")]
    NodeOrderConvention { a1: f64, b2: f64 },

    #[error("node pair ({a}, {b}) shared by more than two elements")]
    NonManifold { a: usize, b: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("flexibility matrix H is singular")]
    SingularH,

    #[error("bubble block is singular (pivot {pivot})")]
    SingularBubbleBlock { pivot: f64 },

    #[error("no Dirichlet boundary: the problem is not well posed")]
    NoDirichlet,

    #[error("factorization failed at pivot {row} (value {value})")]
    FactorizationFailed { row: usize, value: f64 },

    #[error("solver did not reach tolerance: residual {residual}")]
    NotConverged { residual: f64 },

    #[error("solution and exact field live on different meshes")]
    MeshMismatch,

    #[error("edge topology missing: call build_edges first")]
    TopologyMissing,

    #[error("non-positive error value {0} has no convergence rate")]
    NonPositiveError(f64),

    #[error("unknown example id {0} (valid: 1, 2, 3)")]
    UnknownExample(u32),

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for FemError {
    fn from(e: std::io::Error) -> Self {
        FemError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, FemError>;

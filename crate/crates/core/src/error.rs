use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lattice dimension must be positive (got {n_x}x{n_y})")]
    ZeroDimension { n_x: usize, n_y: usize },

    #[error("{sites} sites requested but the cap is {cap}")]
    SizeCap { sites: usize, cap: usize },

    #[error("dense representation requested for {sites} sites; the dense cap is {cap} sites")]
    DenseCap { sites: usize, cap: usize },

    #[error("site ({i}, {j}) lies outside the {n_x}x{n_y} lattice")]
    SiteOutOfRange { i: usize, j: usize, n_x: usize, n_y: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dense Floquet matrix was not materialized")]
    DenseUnavailable,

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("numerical tolerance exceeded: {what} = {value:e} (limit {limit:e})")]
    Tolerance {
        what: &'static str,
        value: f64,
        limit: f64,
    },

    #[error("singular parameters: sin(2h)·sin(2J) = 0 at h = {h}, J = {j}")]
    Singular { h: f64, j: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Error types shared across the solver.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("multiple interface crossings inside one cell edge (axis {axis}, cell ({i}, {j})); geometry is under-resolved")]
    MultipleCrossings { axis: usize, i: usize, j: usize },

    #[error("interpolation region near ({x:.6}, {y:.6}) holds {found} points, {needed} required; geometry too coarse for order {order}")]
    InsufficientPoints {
        x: f64,
        y: f64,
        found: usize,
        needed: usize,
        order: usize,
    },

    #[error("least-squares system has numerical rank {rank} < {cols}")]
    RankDeficient { rank: usize, cols: usize },

    #[error("wall stencil is singular: |s_c| = {sc:.3e} below threshold")]
    SingularWallStencil { sc: f64 },

    #[error("interface jump system has vanishing denominator {denom:.3e}")]
    SingularInterfaceSystem { denom: f64 },

    #[error("unsupported interior stencil order {0} (expected 2, 4, or 6)")]
    UnsupportedOrder(usize),

    #[error("grid too large for assembly: nx = {nx} exceeds {limit}")]
    TooLarge { nx: usize, limit: usize },

    #[error("resolution {nx} is not of the form {base}*2^L")]
    BadResolution { nx: usize, base: usize },

    #[error("zero diagonal entry at node {node} in smoother")]
    ZeroDiagonal { node: usize },

    #[error("matrix is numerically singular (pivot {pivot:.3e})")]
    Singular { pivot: f64 },

    #[error("eigenvalue iteration failed to converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("operator is not singular: ||A*1||_inf = {norm:.3e} exceeds {tol:.3e}")]
    NotSingular { norm: f64, tol: f64 },

    #[error("augmented solve produced null-space shift {alpha:.3e} beyond {bound:.3e}; data wildly inconsistent")]
    Incompatible { alpha: f64, bound: f64 },

    #[error("invalid run configuration: {0}")]
    InvalidRunSpec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Finite-element eigenvalue oracle.
//!
//! Piecewise-linear elements on nested uniform refinements of triangles,
//! kites and rhombi. Every eigenvalue is reported at two consecutive levels
//! together with a Richardson-extrapolated value and an error estimate.

use thiserror::Error;

pub mod analysis;
pub mod mesh;
pub mod problem;
pub mod solver;

pub use analysis::{
    analyze_hot_spots, classify_symmetry, gap_report, simplicity_gap, GapReport, HotSpotReport, Location, SideReport, Symmetry,
};
pub use mesh::{mesh_domain, DomainSpec, Mesh};
pub use problem::{solve_mixed, solve_neumann, EigenResult, EigenSummary, LevelSolution};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FemError {
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
    #[error("mesh is not symmetric under reflection in the x-axis")]
    Asymmetric,
    #[error("side {side} does not exist (domain has {sides} sides)")]
    InvalidSide { side: usize, sides: usize },
    #[error("{modes} modes requested from {unknowns} unknowns")]
    TooFewUnknowns { unknowns: usize, modes: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("eigensolver did not converge")]
    NotConverged,
    #[error("matrix factorization failed")]
    Factorization,
    #[error("mode {mode} is degenerate within tolerance (gap {gap:e})")]
    DegenerateEigenvalue { mode: usize, gap: f64 },
}

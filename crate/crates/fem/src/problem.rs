//! Neumann and mixed eigenproblems with two-level error estimates.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::mesh::Mesh;
use crate::solver::{assemble, smallest_eigenpairs};
use crate::FemError;

/// Relative floor added to every error estimate to cover solver tolerance.
pub const SOLVER_FLOOR: f64 = 1e-9;

/// Eigenpairs on one mesh.
#[derive(Clone, Debug)]
pub struct LevelSolution {
    pub mesh: Mesh,
    pub values: Vec<f64>,
    /// One column per mode, indexed by mesh vertex; zero on Dirichlet
    /// vertices and mass-orthonormal.
    pub vectors: DMatrix<f64>,
}

impl LevelSolution {
    pub fn mode(&self, j: usize) -> Vec<f64> {
        self.vectors.column(j).iter().copied().collect()
    }
}

#[derive(Clone, Debug)]
pub struct EigenResult {
    pub fine: LevelSolution,
    pub coarse: LevelSolution,
    pub extrapolated: Vec<f64>,
    pub errors: Vec<f64>,
    pub dirichlet_sides: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenSummary {
    pub domain: String,
    pub dirichlet_sides: Vec<usize>,
    pub levels: [u32; 2],
    pub vertices: [usize; 2],
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    pub extrapolated: Vec<f64>,
    pub errors: Vec<f64>,
}

impl EigenResult {
    pub fn len(&self) -> usize {
        self.extrapolated.len()
    }

    pub fn is_empty(&self) -> bool {
        self.extrapolated.is_empty()
    }

    /// Extrapolated value of mode `j` (0-based).
    pub fn value(&self, j: usize) -> f64 {
        self.extrapolated[j]
    }

    pub fn error(&self, j: usize) -> f64 {
        self.errors[j]
    }

    pub fn summary(&self) -> EigenSummary {
        EigenSummary {
            domain: self.fine.mesh.spec.label(),
            dirichlet_sides: self.dirichlet_sides.clone(),
            levels: [self.coarse.mesh.level, self.fine.mesh.level],
            vertices: [self.coarse.mesh.n_vertices(), self.fine.mesh.n_vertices()],
            coarse: self.coarse.values.clone(),
            fine: self.fine.values.clone(),
            extrapolated: self.extrapolated.clone(),
            errors: self.errors.clone(),
        }
    }
}

fn solve_level(mesh: &Mesh, dirichlet_sides: &[usize], k: usize) -> Result<LevelSolution, FemError> {
    let fixed = mesh.side_vertices(dirichlet_sides);
    let sys = assemble(mesh, &fixed);
    let (values, reduced) = smallest_eigenpairs(&sys, k)?;
    if values.len() < k {
        return Err(FemError::TooFewUnknowns { unknowns: sys.free.len(), modes: k });
    }
    let mut vectors = DMatrix::zeros(mesh.n_vertices(), k);
    for (row, &v) in sys.free.iter().enumerate() {
        for j in 0..k {
            vectors[(v, j)] = reduced[(row, j)];
        }
    }
    Ok(LevelSolution { mesh: mesh.clone(), values, vectors })
}

fn solve_pair(mesh: &Mesh, dirichlet_sides: &[usize], k: usize) -> Result<EigenResult, FemError> {
    for &s in dirichlet_sides {
        if s >= mesh.n_sides() {
            return Err(FemError::InvalidSide { side: s, sides: mesh.n_sides() });
        }
    }
    if mesh.level == 0 {
        return Err(FemError::Precondition("two refinement levels need level >= 1".into()));
    }
    let coarse_mesh = crate::mesh::mesh_domain(&mesh.spec, mesh.level - 1)?;
    let (fine, coarse) = std::thread::scope(|s| {
        let c = s.spawn(|| solve_level(&coarse_mesh, dirichlet_sides, k));
        let f = solve_level(mesh, dirichlet_sides, k);
        (f, c.join().expect("coarse solve panicked"))
    });
    let (fine, coarse) = (fine?, coarse?);
    // second-order convergence: e(h) ≈ C h², so (4 μ_h − μ_2h)/3
    let extrapolated: Vec<f64> = fine.values.iter().zip(&coarse.values).map(|(f, c)| (4.0 * f - c) / 3.0).collect();
    let errors = fine
        .values
        .iter()
        .zip(&coarse.values)
        .map(|(f, c)| (f - c).abs() / 3.0 + SOLVER_FLOOR * f.abs().max(1.0))
        .collect();
    Ok(EigenResult {
        fine,
        coarse,
        extrapolated,
        errors,
        dirichlet_sides: dirichlet_sides.to_vec(),
    })
}

/// First `k` Neumann eigenpairs on `mesh` and on its parent level.
pub fn solve_neumann(mesh: &Mesh, k: usize) -> Result<EigenResult, FemError> {
    if k < 2 {
        return Err(FemError::Precondition("at least two Neumann modes".into()));
    }
    solve_pair(mesh, &[], k)
}

/// First `k` eigenpairs with Dirichlet conditions on the listed sides and
/// Neumann conditions elsewhere.
pub fn solve_mixed(mesh: &Mesh, dirichlet_sides: &[usize], k: usize) -> Result<EigenResult, FemError> {
    if dirichlet_sides.is_empty() {
        return Err(FemError::Precondition("no Dirichlet side given".into()));
    }
    solve_pair(mesh, dirichlet_sides, k)
}

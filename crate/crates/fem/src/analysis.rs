//! Eigenfunction analysis: reflection symmetry, extremum location, boundary
//! traces and the gap between the second and third Neumann eigenvalues.

use hotspots_core::bounds::TriParam;
use serde::Serialize;

use crate::mesh::{dist, mesh_domain, DomainSpec, Mesh};
use crate::problem::{solve_neumann, EigenResult, LevelSolution, SOLVER_FLOOR};
use crate::FemError;

/// Relative mirror defect below which a mode counts as (anti)symmetric.
pub const SYMMETRY_TOL: f64 = 1e-5;
/// Relative increments below this are treated as flat when counting sign
/// changes along a side.
const FLAT_TOL: f64 = 1e-9;
const TIE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
    Mixed,
}

/// Tags every mode of the fine solution by comparing vertex values with
/// their mirror images in the x-axis.
pub fn classify_symmetry(e: &EigenResult) -> Result<Vec<Symmetry>, FemError> {
    let sol = &e.fine;
    if !sol.mesh.spec.mirror_symmetric() {
        return Err(FemError::Asymmetric);
    }
    let mirror = sol.mesh.mirror_map()?;
    Ok((0..sol.values.len())
        .map(|j| {
            let u = sol.mode(j);
            let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
            let (mut even, mut odd) = (0.0, 0.0);
            for (i, &m) in mirror.iter().enumerate() {
                odd += (u[i] - u[m]).powi(2);
                even += (u[i] + u[m]).powi(2);
            }
            if odd.sqrt() <= SYMMETRY_TOL * norm {
                Symmetry::Symmetric
            } else if even.sqrt() <= SYMMETRY_TOL * norm {
                Symmetry::Antisymmetric
            } else {
                Symmetry::Mixed
            }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Location {
    /// Within one mesh cell of corner `i`.
    Vertex(usize),
    Edge(usize),
    Interior,
}

#[derive(Clone, Debug, Serialize)]
pub struct SideReport {
    pub side: usize,
    /// Sign changes of the tangential derivative strictly inside the side.
    pub critical_points: usize,
    /// Sign changes of the function itself along the side.
    pub nodal_crossings: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct HotSpotReport {
    pub mode: usize,
    pub argmax: Location,
    pub argmin: Location,
    pub coarse_argmax: Location,
    pub coarse_argmin: Location,
    pub stable: bool,
    pub sides: Vec<SideReport>,
}

impl HotSpotReport {
    pub fn extrema_at_vertices(&self) -> bool {
        self.stable && matches!(self.argmax, Location::Vertex(_)) && matches!(self.argmin, Location::Vertex(_))
    }

    pub fn interior_extrema(&self) -> usize {
        [self.argmax, self.argmin].iter().filter(|l| **l == Location::Interior).count()
    }
}

fn locate(mesh: &Mesh, v: usize) -> Location {
    let h = mesh.h();
    let p = mesh.vertices[v];
    if let Some((i, _)) = mesh
        .corners
        .iter()
        .enumerate()
        .map(|(i, &c)| (i, dist(p, c)))
        .filter(|&(_, d)| d <= h * (1.0 + 1e-9))
        .min_by(|x, y| x.1.total_cmp(&y.1))
    {
        return Location::Vertex(i);
    }
    match mesh.boundary.iter().find(|e| e.v.contains(&v)) {
        Some(e) => Location::Edge(e.side),
        None => Location::Interior,
    }
}

/// Indices of the maximum and minimum; near-ties go to the lowest index so
/// symmetric modes pick the same vertex at every level.
fn extrema(u: &[f64]) -> (usize, usize) {
    let tol = TIE_TOL * u.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut imax = 0;
    let mut imin = 0;
    for (i, &v) in u.iter().enumerate() {
        if v > u[imax] + tol {
            imax = i;
        }
        if v < u[imin] - tol {
            imin = i;
        }
    }
    (imax, imin)
}

fn sign_changes(values: impl Iterator<Item = f64>, tol: f64) -> usize {
    let mut last = 0.0_f64;
    let mut count = 0;
    for v in values {
        if v.abs() <= tol {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            count += 1;
        }
        last = v;
    }
    count
}

fn side_report(sol: &LevelSolution, u: &[f64], side: usize) -> SideReport {
    let trace = sol.mesh.side_trace(side);
    let scale = u.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let diffs = trace.windows(2).map(|w| u[w[1].0] - u[w[0].0]);
    SideReport {
        side,
        critical_points: sign_changes(diffs, FLAT_TOL * scale),
        nodal_crossings: sign_changes(trace.iter().map(|&(v, _)| u[v]), FLAT_TOL * scale),
    }
}

/// Where mode `mode` (1-based, so 2 is the first nonconstant Neumann mode)
/// attains its extrema, at both refinement levels.
pub fn analyze_hot_spots(e: &EigenResult, mode: usize) -> Result<HotSpotReport, FemError> {
    if mode == 0 || mode > e.len() {
        return Err(FemError::Precondition(format!("mode {mode} outside 1..={}", e.len())));
    }
    let j = mode - 1;
    let neighbours = [j.checked_sub(1), (j + 1 < e.len()).then_some(j + 1)];
    for n in neighbours.into_iter().flatten() {
        let gap = (e.value(j) - e.value(n)).abs();
        if gap <= 5.0 * (e.error(j) + e.error(n)) {
            return Err(FemError::DegenerateEigenvalue { mode, gap });
        }
    }
    if mode == e.len() {
        return Err(FemError::Precondition("solve at least one mode beyond the analysed one".into()));
    }
    let fine = e.fine.mode(j);
    let mut coarse = e.coarse.mode(j);
    // coarse vertices are a prefix of the fine ones
    let overlap: f64 = coarse.iter().zip(&fine).map(|(c, f)| c * f).sum();
    if overlap < 0.0 {
        coarse.iter_mut().for_each(|v| *v = -*v);
    }
    let (fmax, fmin) = extrema(&fine);
    let (cmax, cmin) = extrema(&coarse);
    let argmax = locate(&e.fine.mesh, fmax);
    let argmin = locate(&e.fine.mesh, fmin);
    let coarse_argmax = locate(&e.coarse.mesh, cmax);
    let coarse_argmin = locate(&e.coarse.mesh, cmin);
    let sides = (0..e.fine.mesh.n_sides()).map(|s| side_report(&e.fine, &fine, s)).collect();
    Ok(HotSpotReport {
        mode,
        argmax,
        argmin,
        coarse_argmax,
        coarse_argmin,
        stable: argmax == coarse_argmax && argmin == coarse_argmin,
        sides,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub mu2: f64,
    pub mu3: f64,
    pub gap: f64,
    pub error: f64,
}

impl GapReport {
    pub fn resolved(&self, factor: f64) -> bool {
        self.gap > factor * self.error
    }
}

/// Extrapolated `μ₃ − μ₂` of a Neumann solve with at least three modes.
pub fn gap_report(e: &EigenResult) -> GapReport {
    let gap_of = |v: &[f64]| v[2] - v[1];
    let (fine, coarse) = (gap_of(&e.fine.values), gap_of(&e.coarse.values));
    let gap = (4.0 * fine - coarse) / 3.0;
    let error = (fine - coarse).abs() / 3.0 + SOLVER_FLOOR * e.fine.values[2];
    GapReport {
        mu2: e.value(1),
        mu3: e.value(2),
        gap,
        error,
    }
}

/// [`gap_report`] for a triangle with the given fine level.
pub fn simplicity_gap(tp: &TriParam, level: u32) -> Result<GapReport, FemError> {
    let mesh = mesh_domain(&DomainSpec::Triangle(tp.clone()), level)?;
    Ok(gap_report(&solve_neumann(&mesh, 3)?))
}

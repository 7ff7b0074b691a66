//! P1 assembly and the generalized symmetric eigensolver.
//!
//! Small systems use a dense Cholesky-reduced eigendecomposition. Larger ones
//! use shift-invert subspace iteration: `K + M` is factored once (after a
//! reverse Cuthill–McKee ordering) and a block of vectors is iterated with a
//! Rayleigh–Ritz step each sweep, which resolves multiple eigenvalues.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use nalgebra_sparse::factorization::CscCholesky;
use nalgebra_sparse::{CooMatrix, CscMatrix, CsrMatrix};

use crate::mesh::{area, Mesh};
use crate::FemError;

/// Largest system solved densely.
pub const DENSE_LIMIT: usize = 400;
const TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 2000;

/// Stiffness and mass matrices restricted to the free vertices.
pub struct System {
    pub stiffness: CsrMatrix<f64>,
    pub mass: CsrMatrix<f64>,
    /// `free[k]` is the mesh vertex of unknown `k`.
    pub free: Vec<usize>,
}

/// Exact P1 element matrices.
fn element(p: [[f64; 2]; 3]) -> ([[f64; 3]; 3], [[f64; 3]; 3]) {
    let a = area(p[0], p[1], p[2]);
    let mut k = [[0.0; 3]; 3];
    let mut m = [[0.0; 3]; 3];
    let g: Vec<[f64; 2]> = (0..3)
        .map(|i| {
            let (j, l) = ((i + 1) % 3, (i + 2) % 3);
            [p[j][1] - p[l][1], p[l][0] - p[j][0]]
        })
        .collect();
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = (g[i][0] * g[j][0] + g[i][1] * g[j][1]) / (4.0 * a);
            m[i][j] = if i == j { a / 6.0 } else { a / 12.0 };
        }
    }
    (k, m)
}

/// Assembles with the vertices in `dirichlet` removed.
pub fn assemble(mesh: &Mesh, dirichlet: &[bool]) -> System {
    let n = mesh.n_vertices();
    let mut index = vec![usize::MAX; n];
    let mut free = Vec::new();
    for v in 0..n {
        if !dirichlet[v] {
            index[v] = free.len();
            free.push(v);
        }
    }
    let nf = free.len();
    let mut kc = CooMatrix::new(nf, nf);
    let mut mc = CooMatrix::new(nf, nf);
    for el in &mesh.elements {
        let p = [mesh.vertices[el[0]], mesh.vertices[el[1]], mesh.vertices[el[2]]];
        let (k, m) = element(p);
        for i in 0..3 {
            let gi = index[el[i]];
            if gi == usize::MAX {
                continue;
            }
            for j in 0..3 {
                let gj = index[el[j]];
                if gj == usize::MAX {
                    continue;
                }
                kc.push(gi, gj, k[i][j]);
                mc.push(gi, gj, m[i][j]);
            }
        }
    }
    System {
        stiffness: CsrMatrix::from(&kc),
        mass: CsrMatrix::from(&mc),
        free,
    }
}

/// Reverse Cuthill–McKee ordering of the matrix graph: `perm[new] = old`.
fn rcm(a: &CsrMatrix<f64>) -> Vec<usize> {
    let n = a.nrows();
    let adj = |i: usize| a.row(i).col_indices().to_vec();
    let degree: Vec<usize> = (0..n).map(|i| a.row(i).nnz()).collect();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let start = (0..n).filter(|&i| !seen[i]).min_by_key(|&i| degree[i]).expect("unvisited");
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut nb: Vec<usize> = adj(v).into_iter().filter(|&u| !seen[u]).collect();
            nb.sort_by_key(|&u| degree[u]);
            for u in nb {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    order.reverse();
    order
}

fn permuted_csc(a: &CsrMatrix<f64>, b: &CsrMatrix<f64>, inv: &[usize]) -> CscMatrix<f64> {
    let n = a.nrows();
    let mut coo = CooMatrix::new(n, n);
    for (i, j, v) in a.triplet_iter() {
        coo.push(inv[i], inv[j], *v);
    }
    for (i, j, v) in b.triplet_iter() {
        coo.push(inv[i], inv[j], *v);
    }
    CscMatrix::from(&coo)
}

fn permute_rows(x: &DMatrix<f64>, perm: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(x.nrows(), x.ncols(), |i, j| x[(perm[i], j)])
}

fn unpermute_rows(x: &DMatrix<f64>, perm: &[usize]) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(x.nrows(), x.ncols());
    for i in 0..x.nrows() {
        for j in 0..x.ncols() {
            out[(perm[i], j)] = x[(i, j)];
        }
    }
    out
}

/// Smallest `k` eigenpairs of the dense pencil `(a, b)`, `b` positive
/// definite; eigenvectors are `b`-orthonormal columns.
fn dense_pencil(a: &DMatrix<f64>, b: &DMatrix<f64>, k: usize) -> Result<(Vec<f64>, DMatrix<f64>), FemError> {
    let chol = b.clone().cholesky().ok_or(FemError::Factorization)?;
    let l = chol.l();
    let linv = l.clone().try_inverse().ok_or(FemError::Factorization)?;
    let c = &linv * a * linv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let k = k.min(idx.len());
    let vals = idx[..k].iter().map(|&i| eig.eigenvalues[i]).collect();
    let y = DMatrix::from_fn(eig.eigenvectors.nrows(), k, |r, c| eig.eigenvectors[(r, idx[c])]);
    Ok((vals, linv.transpose() * y))
}

fn to_dense(a: &CsrMatrix<f64>) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(a.nrows(), a.ncols());
    for (i, j, v) in a.triplet_iter() {
        d[(i, j)] += *v;
    }
    d
}

/// Smallest `k` eigenpairs of `K u = μ M u`, ascending, `M`-orthonormal.
pub fn smallest_eigenpairs(sys: &System, k: usize) -> Result<(Vec<f64>, DMatrix<f64>), FemError> {
    let n = sys.stiffness.nrows();
    if n == 0 || k == 0 {
        return Err(FemError::TooFewUnknowns { unknowns: n, modes: k });
    }
    let k = k.min(n);
    if n <= DENSE_LIMIT {
        return dense_pencil(&to_dense(&sys.stiffness), &to_dense(&sys.mass), k);
    }
    subspace_iteration(sys, k)
}

fn subspace_iteration(sys: &System, k: usize) -> Result<(Vec<f64>, DMatrix<f64>), FemError> {
    let n = sys.stiffness.nrows();
    let perm = rcm(&sys.stiffness);
    let mut inv = vec![0; n];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    // shift σ = −1: K + M is positive definite even for Neumann problems
    let shifted = permuted_csc(&sys.stiffness, &sys.mass, &inv);
    let chol = CscCholesky::factor(&shifted).map_err(|_| FemError::Factorization)?;
    let p = (2 * k).max(k + 8).min(n);
    // deterministic start block
    let mut x = DMatrix::from_fn(n, p, |i, j| {
        let t = (i as f64 + 1.0) * (j as f64 + 1.0);
        (t * 0.618_033_988_75).fract() - 0.5 + if j == 0 { 1.0 } else { 0.0 }
    });
    let (k_norm, m_norm) = (inf_norm(&sys.stiffness), inf_norm(&sys.mass));
    let mut prev: Option<Vec<f64>> = None;
    for _ in 0..MAX_SWEEPS {
        let rhs = permute_rows(&(&sys.mass * &x), &perm);
        let y = unpermute_rows(&chol.solve(&rhs), &perm);
        let kr = y.transpose() * (&sys.stiffness * &y);
        let mr = y.transpose() * (&sys.mass * &y);
        let (vals, v) = dense_pencil(&((&kr + kr.transpose()) * 0.5), &((&mr + mr.transpose()) * 0.5), p)?;
        x = &y * v;
        let head: Vec<f64> = vals[..k].to_vec();
        let converged = (0..k).all(|j| {
            let col = x.column(j);
            let r = &sys.stiffness * col - (&sys.mass * col) * head[j];
            // backward error of the shifted pencil, so μ = 0 can converge
            let scale = (k_norm + (head[j].abs() + 1.0) * m_norm) * col.norm();
            r.norm() <= TOL * scale
        });
        let stalled = prev
            .as_ref()
            .is_some_and(|pv| pv.iter().zip(&head).all(|(a, b)| (a - b).abs() <= 1e-15 * b.abs().max(1.0)));
        if converged || stalled {
            return Ok((head, x.columns(0, k).into_owned()));
        }
        prev = Some(head);
    }
    Err(FemError::NotConverged)
}

fn inf_norm(a: &CsrMatrix<f64>) -> f64 {
    a.row_iter().map(|r| r.values().iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// `M`-inner product of two vectors.
pub fn mass_dot(sys: &System, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
    u.dot(&(&sys.mass * v))
}

use std::f64::consts::PI;
use std::time::Instant;

use hotspots_core::bounds::{hooker_protter, Convention, TriParam};
use hotspots_core::exactq::{rat, to_f64, Consts};
use hotspots_fem::{
    analyze_hot_spots, classify_symmetry, mesh_domain, simplicity_gap, solve_mixed, solve_neumann, DomainSpec,
    FemError, Location, Symmetry,
};
use nalgebra::DMatrix;

const PI2: f64 = PI * PI;
const LEVEL: u32 = 6;

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs()
}

fn tri(a: (i64, i64), b2: (i64, i64), c: Convention) -> DomainSpec {
    DomainSpec::Triangle(TriParam::with_b2(rat(a.0, a.1), rat(b2.0, b2.1), c).unwrap())
}

fn timed<T>(f: impl FnOnce() -> T) -> T {
    let t = Instant::now();
    let out = f();
    assert!(t.elapsed().as_secs_f64() < 5.0, "solve took {:?}", t.elapsed());
    out
}

#[test]
fn unit_square() {
    let m = mesh_domain(&DomainSpec::Square { side: 1.0 }, LEVEL).unwrap();
    let e = timed(|| solve_neumann(&m, 4).unwrap());
    assert!(rel(e.value(1), PI2) < 5e-3);
    assert!(rel(e.value(2), PI2) < 5e-3);
    assert!(rel(e.value(3), 2.0 * PI2) < 5e-3);
    assert!((e.value(1) - PI2).abs() < 3.0 * e.error(1));
}

#[test]
fn equilateral_side_two() {
    let m = mesh_domain(&tri((0, 1), (3, 1), Convention::SymBase), LEVEL).unwrap();
    let e = timed(|| solve_neumann(&m, 3).unwrap());
    let want = 4.0 * PI2 / 9.0;
    assert!(rel(e.value(1), want) < 5e-3, "{}", e.value(1));
    assert!(rel(e.value(2), want) < 5e-3, "{}", e.value(2));
}

#[test]
fn right_isosceles_sum() {
    let m = mesh_domain(&tri((0, 1), (1, 1), Convention::SymBase), LEVEL).unwrap();
    let e = timed(|| solve_neumann(&m, 3).unwrap());
    assert!(rel(e.value(1), PI2 / 2.0) < 5e-3);
    assert!(rel(e.value(1) + e.value(2), 1.5 * PI2) < 5e-3);
}

#[test]
fn mixed_half_equilateral() {
    let m = mesh_domain(&tri((0, 1), (1, 3), Convention::UnitBase), LEVEL).unwrap();
    let e = timed(|| solve_mixed(&m, &[0], 2).unwrap());
    assert!(rel(e.value(0), 4.0 * PI2 / 3.0) < 5e-3, "{}", e.value(0));
}

#[test]
fn dirichlet_square() {
    let m = mesh_domain(&DomainSpec::Square { side: 1.0 }, LEVEL).unwrap();
    let e = timed(|| solve_mixed(&m, &[0, 1, 2, 3], 1).unwrap());
    assert!(rel(e.value(0), 2.0 * PI2) < 5e-3);
    assert!(e.fine.values[0] >= 2.0 * PI2);
}

#[test]
fn rhombus_above_hooker_protter() {
    let consts = Consts::new(96);
    for (p, q) in [(1, 4), (3, 8), (1, 2)] {
        let h = p as f64 / q as f64;
        let m = mesh_domain(&DomainSpec::Rhombus { h }, LEVEL).unwrap();
        let e = timed(|| solve_mixed(&m, &[0, 1, 2, 3], 1).unwrap());
        let hp = hooker_protter(&rat(p, q), &consts).unwrap();
        assert!(to_f64(hp.hi()) <= e.value(0) + 3.0 * e.error(0), "h={h}: {} vs {}", to_f64(hp.hi()), e.value(0));
    }
}

#[test]
fn constant_first_mode_and_orthonormality() {
    let m = mesh_domain(&tri((1, 4), (4, 25), Convention::UnitBase), 5).unwrap();
    let e = solve_neumann(&m, 4).unwrap();
    for sol in [&e.fine, &e.coarse] {
        assert!(sol.values[0].abs() < 1e-8 * sol.values[1]);
        let u = sol.mode(0);
        let (lo, hi) = u.iter().fold((f64::MAX, f64::MIN), |(l, h), &v| (l.min(v), h.max(v)));
        assert!((hi - lo) / hi.abs().max(lo.abs()) < 1e-6);
        assert!(sol.values.windows(2).all(|w| w[0] <= w[1]));
    }
    let sys = hotspots_fem::solver::assemble(&e.fine.mesh, &vec![false; e.fine.mesh.n_vertices()]);
    let v = &e.fine.vectors;
    let g = v.transpose() * (&sys.mass * v);
    assert!((g - DMatrix::identity(4, 4)).norm() < 1e-8);
}

#[test]
fn refinement_lowers_every_eigenvalue() {
    let spec = tri((3, 10), (16, 25), Convention::UnitBase);
    let mut prev: Option<Vec<f64>> = None;
    for level in 2..=5 {
        let m = mesh_domain(&spec, level).unwrap();
        let e = solve_neumann(&m, 5).unwrap();
        if let Some(p) = &prev {
            for (a, b) in e.fine.values.iter().zip(p).skip(1) {
                assert!(*a <= b * (1.0 + 1e-12), "level {level}: {a} > {b}");
            }
        }
        assert!(e.fine.values.iter().zip(&e.coarse.values).skip(1).all(|(f, c)| f <= c));
        prev = Some(e.fine.values.clone());
    }
}

#[test]
fn scaling_law() {
    let base = tri((1, 5), (9, 16), Convention::UnitBase);
    let corners = base.corners();
    let s = 1.7;
    let scaled = DomainSpec::Polygon(corners.iter().map(|p| [s * p[0], s * p[1]]).collect());
    let e1 = solve_neumann(&mesh_domain(&base, 4).unwrap(), 4).unwrap();
    let e2 = solve_neumann(&mesh_domain(&scaled, 4).unwrap(), 4).unwrap();
    for j in 1..4 {
        assert!(rel(e2.fine.values[j] * s * s, e1.fine.values[j]) < 1e-10);
    }
}

#[test]
fn kite_modes_match_half_triangle() {
    let tp = TriParam::unit(rat(1, 4), rat(2, 5)).unwrap();
    let kite = solve_neumann(&mesh_domain(&DomainSpec::Kite(tp.clone()), 5).unwrap(), 6).unwrap();
    let tags = classify_symmetry(&kite).unwrap();
    assert_eq!(tags[1], Symmetry::Symmetric);
    let half = mesh_domain(&DomainSpec::Triangle(tp), 5).unwrap();
    let neumann = solve_neumann(&half, 2).unwrap();
    let mixed = solve_mixed(&half, &[0], 1).unwrap();
    let first = |t: Symmetry| (1..6).find(|&j| tags[j] == t).unwrap();
    let mu_s = kite.fine.values[first(Symmetry::Symmetric)];
    let mu_a = kite.fine.values[first(Symmetry::Antisymmetric)];
    assert!(rel(mu_s, neumann.fine.values[1]) < 1e-8, "{mu_s} {}", neumann.fine.values[1]);
    assert!(rel(mu_a, mixed.fine.values[0]) < 1e-8, "{mu_a} {}", mixed.fine.values[0]);
}

#[test]
fn square_kite_is_degenerate() {
    let tp = TriParam::unit(rat(1, 2), rat(1, 2)).unwrap();
    let e = solve_neumann(&mesh_domain(&DomainSpec::Kite(tp), 5).unwrap(), 3).unwrap();
    assert!((e.value(1) - e.value(2)).abs() <= e.error(1) + e.error(2));
    assert!(matches!(analyze_hot_spots(&e, 2), Err(FemError::DegenerateEigenvalue { .. })));
}

#[test]
fn nearly_degenerate_kite_is_symmetric() {
    let tp = TriParam::unit(rat(1, 2), rat(1, 10)).unwrap();
    let e = solve_neumann(&mesh_domain(&DomainSpec::Kite(tp), 5).unwrap(), 3).unwrap();
    assert_eq!(classify_symmetry(&e).unwrap()[1], Symmetry::Symmetric);
}

/// Apex of a unit-base triangle with the given base angles.
fn apex(alpha: f64, beta: f64) -> [f64; 2] {
    let x = beta.tan() / (alpha.tan() + beta.tan());
    [x, x * alpha.tan()]
}

#[test]
fn small_angle_extrema_at_vertices() {
    let spec = DomainSpec::Polygon(vec![[0.0, 0.0], [1.0, 0.0], apex(PI / 7.0, 2.0 * PI / 5.0)]);
    let e = solve_neumann(&mesh_domain(&spec, LEVEL).unwrap(), 3).unwrap();
    let r = analyze_hot_spots(&e, 2).unwrap();
    assert!(r.extrema_at_vertices(), "{r:?}");
    assert_eq!(r.interior_extrema(), 0);
    assert_ne!(r.argmax, r.argmin);
}

#[test]
fn subequilateral_isosceles_extrema() {
    // apex angle below π/3: mode 2 is symmetric, extreme at the apex and at
    // the base vertices
    let spec = tri((0, 1), (5, 1), Convention::SymBase);
    let e = solve_neumann(&mesh_domain(&spec, LEVEL).unwrap(), 3).unwrap();
    let r = analyze_hot_spots(&e, 2).unwrap();
    assert!(r.extrema_at_vertices(), "{r:?}");
    let locs = [r.argmax, r.argmin];
    assert!(locs.contains(&Location::Vertex(2)), "{r:?}");
}

#[test]
fn equilateral_refused() {
    let e = solve_neumann(&mesh_domain(&tri((0, 1), (3, 1), Convention::SymBase), 5).unwrap(), 3).unwrap();
    assert!(matches!(analyze_hot_spots(&e, 2), Err(FemError::DegenerateEigenvalue { .. })));
}

#[test]
fn gaps() {
    let g = simplicity_gap(&TriParam::sym(rat(3, 10), rat(4, 5)).unwrap(), LEVEL).unwrap();
    assert!(g.resolved(5.0), "{g:?}");
    let eq = simplicity_gap(&TriParam::with_b2(rat(0, 1), rat(3, 1), Convention::SymBase).unwrap(), LEVEL).unwrap();
    assert!(eq.gap.abs() <= eq.error, "{eq:?}");
}

#[test]
fn invalid_side_rejected() {
    let m = mesh_domain(&DomainSpec::Square { side: 1.0 }, 2).unwrap();
    assert!(matches!(solve_mixed(&m, &[4], 1), Err(FemError::InvalidSide { .. })));
    assert!(solve_neumann(&m, 1).is_err());
}

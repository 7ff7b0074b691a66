use std::f64::consts::PI;

use hotspots_core::check::check_certificate;
use hotspots_core::exactq::{int, rat, to_f64, BigRational, Consts, PiQuad};
use hotspots_core::poly::QPoly;
use hotspots_core::proofs::*;

const T: f64 = PI * PI;
const R3: f64 = 1.732_050_807_568_877_2;
const R7: f64 = 2.645_751_311_064_590_6;

fn n(b: f64, a: f64) -> f64 {
    64.0 * T * (a * a + b * b + 3.0) + 243.0 * (a * a + b * b - 6.0 * a - 3.0)
}

fn disk(b: f64, a: f64) -> f64 {
    4.0 - (a + 1.0).powi(2) - b * b
}

fn obligation(id: &str, name: &str) -> Obligation {
    build_case(id)
        .unwrap()
        .obligations
        .into_iter()
        .find(|o| o.name == name)
        .unwrap_or_else(|| panic!("{name} missing"))
}

fn eval(p: &QPoly, x: &BigRational, y: &BigRational) -> f64 {
    p.collapse(&Consts::new(80)).evaluate(x, y).mid_f64()
}

fn close(got: f64, want: f64) -> bool {
    (got - want).abs() <= 1e-9 * want.abs().max(1.0)
}

const POINTS: [(i64, i64); 4] = [(13, 2), (9, 4), (3, 7), (11, 1)];

fn pts() -> impl Iterator<Item = (BigRational, BigRational)> {
    POINTS.iter().map(|&(x, y)| (rat(x, 10), rat(y, 10)))
}

/// Source against an independent evaluation of the display, and target
/// against source composed with the substitution.
fn check_display(id: &str, name: &str, display: impl Fn(f64, f64) -> f64, map: impl Fn(f64, f64) -> (f64, f64)) {
    let ob = obligation(id, name);
    let target = ob.target();
    for (x, y) in pts() {
        let (xf, yf) = (to_f64(&x), to_f64(&y));
        let s = eval(&ob.source, &x, &y);
        assert!(close(s, display(xf, yf)), "{name} source at ({xf},{yf}): {s} vs {}", display(xf, yf));
        let (mx, my) = map(xf, yf);
        let t = eval(&target, &x, &y);
        assert!(close(t, display(mx, my)), "{name} target at ({xf},{yf}): {t} vs {}", display(mx, my));
    }
}

fn id(b: f64, a: f64) -> (f64, f64) {
    (b, a)
}

fn refl3(b: f64, a: f64) -> (f64, f64) {
    (R3 - b, a)
}

fn middle(b: f64, a: f64) -> (f64, f64) {
    (R7 / 2.0 - b, a + 0.5)
}

#[test]
fn middle_area_displays() {
    check_display(
        "S2",
        "S2",
        |b, a| n(b, a) * (a * a - a + 1.0 + 3.0 * a * b - 1.5 * b + 2.0 * b * b) - 576.0 * T * b * b,
        middle,
    );
    let g = |b: f64, a: f64| b * b + a - a * a - 1.0 + (b - a) * (b * b - a * a - 3.0);
    check_display("S3", "S3-gamma-coefficient", g, middle);
    check_display(
        "S3",
        "S3",
        |b, a| {
            n(b, a)
                * ((a * a - a + 1.0 + 2.0 * b * b + 3.0 * a * b - 1.5 * b)
                    + (b - a) * (a * a + 3.0 + 2.0 * b * b + 3.0 * a * b))
                - 576.0 * T * b * b * (2.0 * b - 2.0 * a + 1.0)
        },
        middle,
    );
}

#[test]
fn nearly_equilateral_displays() {
    check_display(
        "S4",
        "S4",
        |b, a| 2.0 * (n(b, a) * (a + b) - 384.0 * b * T) + 2000.0 * disk(b, a) * (b - R3 / 2.0),
        refl3,
    );
    let s5 = |b: f64, a: f64| {
        n(b, a) * (a * (a * a - a + 1.0) + (0.5 - a) * (a * a + 1.0))
            - 288.0 * b * b * T * (0.75 * (0.5 - a) + 2.0 * a / 3.0)
    };
    check_display("S5", "S5", s5, id);
    check_display("S5", "S5-lower", s5, id);
    check_display(
        "S6",
        "S6-first",
        |b, a| {
            2.0 * (n(b, a) * (a * a + 3.0 * a * b + 2.0 * b * b - a - 1.5 * b + 1.0) - 576.0 * b * b * T)
                + 1e4 * disk(b, a) * (b - R3 / 2.0)
        },
        refl3,
    );
    check_display(
        "S6",
        "S6-second",
        |b, a| {
            n(b, a) * (a * a + 3.0 + 3.0 * a * b + 2.0 * b * b) - 1152.0 * T * b * b
                + 7000.0 * disk(b, a) * (b - 1.0).powi(2)
        },
        refl3,
    );
    let l = |b: f64, a: f64| {
        (a + b - 1.0) * (a * a + 3.0 - a * b) + 8.0 / 7.0 * (R3 - b) * (a * a + 1.0 - a * b)
    };
    let s7 = move |b: f64, a: f64| {
        n(b, a) * l(b, a) - 288.0 * b * b * T * (4.0 / 3.0 * (a + b - 1.0) + 6.0 / 7.0 * (R3 - b))
    };
    check_display("S7", "S7-top", s7, refl3);
    check_display("S7", "S7-bottom", s7, |b, a| (b + R3 / 2.0, 0.5 - a));
    let g = |b: f64, a: f64| (a + b - 1.0) * (b * b - a * a - 3.0) + 8.0 / 7.0 * (R3 - b) * (b * b - a * a - 1.0);
    check_display("S7", "S7-gamma-top", g, refl3);
    check_display("S7", "S7-gamma-middle", g, |b, a| (1.0 + b, a));
    // the source is already in (b, s) with a = 1 − b + s
    check_display("S7", "S7-gamma-diagonal", move |b, s| g(b, 1.0 - b + s), |b, s| (1.0 - b, s));
    let bd = |b: f64, a: f64| 4.0 * a * a - 80.0 * a + 3.0 * (b * b - 3.0);
    let e = |b: f64, a: f64| n(b, a) / 12.0 - T * (11.0 + 7.0 * b * b + 7.0 * a * a - 4.0 * a);
    check_display("S8", "S8-dominated", move |b, a| e(b, a) - bd(b, a), refl3);
    check_display("S8", "S8-bound", bd, refl3);
}

#[test]
fn degenerate_and_univariate_displays() {
    let s1 = |g: f64| {
        move |a: f64, b: f64| {
            g / 6.0 * (3.0 * a * a + 3.0 * b * b - 8.0 * a + 1.0) + (8.0 * a - 3.0 * a * a - 1.0) / 6.0
                - T * (a + 1.0) * (a * a + 3.0) / 81.0
        }
    };
    let shift = |a: f64, b: f64| (a + 0.5, b);
    check_display("S1", "S1-gamma0", s1(0.0), shift);
    check_display("S1", "S1-gamma1", s1(1.0), shift);
    let neg = |c: f64, y: f64| (-c, y);
    check_display("M1", "M1", |c, _| (3.0 * c + 1.0) * c * (2.0 * T - 16.0), neg);
    check_display("M1", "M1-coefficient", |c, _| -(T * (1.0 + 2.0 * c) - 16.0 * c), neg);
    let c_of = |a: f64| {
        67200.0 * T * a.powi(4)
            + 12.0 * (74976.0 - 5600.0 * T) * a.powi(3)
            + 12.0 * (15400.0 * T - 182346.0) * a * a
            + 12.0 * (72429.0 - 8400.0 * T) * a
            + 25200.0 * T
    };
    let bt = |a: f64| {
        134400.0 * T * a.powi(4)
            + (650880.0 - 134400.0 * T) * a.powi(3)
            + (168000.0 * T - 1867740.0) * a * a
            + (784800.0 - 67200.0 * T) * a
            + (127575.0 + 16800.0 * T)
    };
    let q = |a: f64| {
        5600.0 * T * a.powi(4) + (74976.0 - 5600.0 * T) * a.powi(3) + 2.0 * (7700.0 * T - 91173.0) * a * a
            + (72429.0 - 8400.0 * T) * a
            + 2100.0 * T
    };
    check_display("K1", "K1", move |a, _| -c_of(a), id);
    check_display("K2", "K2", move |a, _| 7.0 * T * c_of(a) - 12.0 * T * bt(a), id);
    check_display("K3", "K3", move |a, _| -q(a), id);
}

#[test]
fn reduced_lemma_inequality_follows_from_trial_bound() {
    // π²(2cd+d+1) − 16cd − π²(3c+2) at d = 3c+1 is the reduced polynomial
    let reduced = obligation("M1", "M1").source;
    let pi2 = PiQuad::pi2();
    for k in 0..=8 {
        let c = rat(-k, 32);
        let d = int(3) * &c + int(1);
        let full = &(&pi2 * &PiQuad::from_rational(int(2) * &c * &d + &d + int(1)))
            - &(&PiQuad::from_rational(int(16) * &c * &d) + &(&pi2 * &PiQuad::from_rational(int(3) * &c + int(2))));
        assert_eq!(reduced.eval_rational(&c, &int(0)), full);
    }
}

#[test]
fn catalog_shape() {
    let s2 = build_case("S2").unwrap();
    let r = s2.rectangles();
    assert_eq!(r.len(), 2);
    assert_eq!((r[0].x0.clone(), r[0].dx.clone(), r[0].y0.clone(), r[0].dy.clone()), (int(0), rat(1, 4), int(0), rat(99, 1000)));
    assert_eq!(&r[1].x0 + &r[1].dx, rat(1, 9) + rat(15, 100));
    assert_eq!(&r[1].y0 + &r[1].dy, rat(199, 1000));
    assert_eq!(build_case("K4").unwrap().tactics().unwrap().len(), 5);
    for ob in build_case("S8").unwrap().obligations {
        assert_eq!((ob.rects[0].y0.clone(), ob.rects[0].dy.clone()), (int(0), rat(1, 2)));
    }
    assert_eq!(build_case("S3").unwrap().rectangles().len(), 4);
    assert_eq!(build_case("S6").unwrap().rectangles().len(), 7);
    assert_eq!(build_case("S7").unwrap().rectangles().len(), 4);
    assert!(build_case("S5").unwrap().notes.iter().any(|n| n.contains("lower > upper")));
    assert!(matches!(build_case("S9"), Err(ProofError::UnknownCase(_))));
    assert_eq!(catalog().len(), CASE_IDS.len());
}

#[test]
fn run_all_certifies_and_is_reproducible() {
    let opts = RunOptions::default();
    let (report, bundles) = run_all(&opts);
    for c in &report.cases {
        assert_eq!(c.status, CaseStatus::Certified, "{} failed: {:?}", c.id, c.obligations);
    }
    assert!(report.all_certified);
    let ids: Vec<&str> = report.cases.iter().map(|c| c.id.as_str()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    for b in &bundles {
        for nc in &b.certificates {
            check_certificate(&nc.certificate).unwrap();
        }
        assert_eq!(&CaseBundle::from_json(&b.to_json()).unwrap(), b);
    }
    let (again, bundles2) = run_all(&opts);
    assert_eq!(report.without_timing().to_json(), again.without_timing().to_json());
    for (x, y) in bundles.iter().zip(&bundles2) {
        assert_eq!(x.to_json(), y.to_json());
    }
}

#[test]
fn k4_both_paths_certify_independently() {
    let k4 = build_case("K4").unwrap();
    let tactic = run_case(&k4, &RunOptions { path: PathChoice::Tactic, ..RunOptions::default() });
    assert_eq!(tactic.report.status, CaseStatus::Certified);
    assert_eq!(tactic.report.obligations.len(), 1);
    let fin = tactic.report.obligations[0].final_poly.clone().unwrap();
    let terms: Vec<&str> = fin.split(" + ").collect();
    assert_eq!(terms.len(), 2, "{fin}");
    assert!(terms.iter().all(|t| t.starts_with('-')), "{fin}");
    assert!(terms[1].ends_with("*a^1"));
    let sub = run_case(&k4, &RunOptions { path: PathChoice::Subdivide, ..RunOptions::default() });
    assert_eq!(sub.report.status, CaseStatus::Certified);
    assert_eq!(sub.report.obligations[0].strategy, "subdivide");
}

fn positive_somewhere(ob: &Obligation) -> bool {
    let p = ob.target().collapse(&Consts::new(64));
    let hs: Vec<_> = ob.constraints.iter().map(|h| h.collapse(&Consts::new(64))).collect();
    ob.rects.iter().any(|r| {
        (0..=20).any(|i| {
            (0..=20).any(|j| {
                let x = &r.x0 + &r.dx * rat(i, 20);
                let y = &r.y0 + &r.dy * rat(j, 20);
                !hs.iter().any(|h| h.evaluate(&x, &y).lo() > &int(0)) && p.evaluate(&x, &y).lo() > &int(0)
            })
        })
    })
}

#[test]
fn mutated_cases_fail() {
    let mut exercised = 0;
    for c in catalog() {
        for ob in &c.obligations {
            if matches!(ob.strategy, Strategy::TacticScript(_)) {
                continue;
            }
            let m = mutate_dominant(ob);
            let single = ProofCase {
                id: m.name.clone(),
                description: String::new(),
                obligations: vec![m.clone()],
                notes: vec![],
            };
            let out = run_case(&single, &RunOptions::default());
            if positive_somewhere(&m) {
                exercised += 1;
                assert_eq!(out.report.status, CaseStatus::Failed, "{} survived mutation", m.name);
            }
        }
    }
    assert!(exercised >= 15, "only {exercised} mutations produced a positive value");
}

#[test]
fn coarse_constants_never_give_unsound_certificates() {
    let opts = RunOptions { pi_bits: 8, ..RunOptions::default() };
    let (_, bundles) = run_cases(&[build_case("K2").unwrap(), build_case("S2").unwrap(), build_case("S8").unwrap()], &opts);
    for b in bundles {
        for nc in b.certificates {
            check_certificate(&nc.certificate).unwrap();
        }
    }
}

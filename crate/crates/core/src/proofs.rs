//! The catalog of polynomial inequalities behind the small-angle hot spots
//! proof, and a runner that certifies each one and re-checks the result.
//!
//! Every case is a list of obligations `p ≤ 0`. An obligation carries the
//! polynomial as displayed, an optional affine pre-substitution (applied
//! exactly, before any constant is enclosed) and a proof path: a list of
//! rectangles, automatic subdivision of one box, or a tactic script.

use std::time::Instant;

use num_traits::Signed;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{table_poly, TABLE_B, TABLE_C, TABLE_K8, TABLE_Q};
use crate::certifier::{
    certify_nonpos, chain_certificate, eliminate_linear_param, tactic_drop_term, tactic_replace_power, Axis,
    Certificate, CertifyOptions, ParamPoly, Rect,
};
use crate::check::check_certificate;
use crate::exactq::{format_rational, int, rat, BigRational, Consts, PiQuad, RatInterval, Surd};
use crate::poly::{AffineMap, IPoly, QPoly};

pub const BUNDLE_FORMAT: &str = "hotspots-case/1";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProofError {
    #[error("unknown case id {0:?}")]
    UnknownCase(String),
}

/// `[x0, x0+dx] × [y0, y0+dy]` in the obligation's substituted coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct PaperRect {
    pub x0: BigRational,
    pub dx: BigRational,
    pub y0: BigRational,
    pub dy: BigRational,
}

impl PaperRect {
    pub fn new(x0: BigRational, dx: BigRational, y0: BigRational, dy: BigRational) -> Self {
        Self { x0, dx, y0, dy }
    }

    pub fn rect(&self) -> Rect {
        Rect::new(
            RatInterval::point(self.x0.clone()),
            RatInterval::point(self.y0.clone()),
            self.dx.clone(),
            self.dy.clone(),
        )
        .expect("catalog rectangles have positive sides")
    }
}

impl std::fmt::Display for PaperRect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}, {}+{}]x[{}, {}+{}]",
            format_rational(&self.x0),
            format_rational(&self.x0),
            format_rational(&self.dx),
            format_rational(&self.y0),
            format_rational(&self.y0),
            format_rational(&self.dy)
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ScriptOp {
    /// `a^k → q` on the first variable.
    Replace { k: u32, q: QPoly, hints: Vec<BigRational> },
    /// Remove the `a^k` term.
    Drop { k: u32 },
}

/// One numbered step of a manual reduction; may bundle several operations.
#[derive(Clone, Debug, PartialEq)]
pub struct ScriptStep {
    pub ops: Vec<ScriptOp>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Strategy {
    /// Each rectangle certified, with up to `fallback` extra bisection levels.
    PaperRects,
    /// Bisection of the single box up to the run's depth budget.
    AutoSubdivide,
    TacticScript(Vec<ScriptStep>),
}

impl Strategy {
    pub fn label(&self) -> &'static str {
        match self {
            Strategy::PaperRects => "rects",
            Strategy::AutoSubdivide => "subdivide",
            Strategy::TacticScript(_) => "tactic",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Obligation {
    pub name: String,
    /// The polynomial as displayed.
    pub source: QPoly,
    pub pre: Option<AffineMap<PiQuad>>,
    /// Region `{h ≤ 0 for all h}` in substituted coordinates.
    pub constraints: Vec<QPoly>,
    pub rects: Vec<PaperRect>,
    pub strategy: Strategy,
}

impl Obligation {
    fn new(name: &str, source: QPoly, pre: Option<AffineMap<PiQuad>>, rects: Vec<PaperRect>, strategy: Strategy) -> Self {
        Self {
            name: name.to_string(),
            source,
            pre,
            constraints: Vec::new(),
            rects,
            strategy,
        }
    }

    /// The polynomial after pre-substitution, still exact.
    pub fn target(&self) -> QPoly {
        match &self.pre {
            Some(m) => self.source.substitute(m),
            None => self.source.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProofCase {
    pub id: String,
    pub description: String,
    pub obligations: Vec<Obligation>,
    pub notes: Vec<String>,
}

impl ProofCase {
    /// All rectangles of the rectangle-path obligations, in order.
    pub fn rectangles(&self) -> Vec<PaperRect> {
        self.obligations
            .iter()
            .filter(|o| o.strategy == Strategy::PaperRects)
            .flat_map(|o| o.rects.iter().cloned())
            .collect()
    }

    pub fn tactics(&self) -> Option<&[ScriptStep]> {
        self.obligations.iter().find_map(|o| match &o.strategy {
            Strategy::TacticScript(s) => Some(s.as_slice()),
            _ => None,
        })
    }
}

// ---------------------------------------------------------------------------
// Catalog

pub const CASE_IDS: [&str; 13] = [
    "K1", "K2", "K3", "K4", "M1", "S1", "S2", "S3", "S4", "S5", "S6", "S7", "S8",
];

const BA: [&str; 2] = ["b", "a"];
const AB: [&str; 2] = ["a", "b"];
const UNI_A: [&str; 2] = ["a", "_"];
const UNI_C: [&str; 2] = ["c", "_"];

fn k(v: BigRational, vars: [&str; 2]) -> QPoly {
    QPoly::rat(v, vars)
}

fn ki(v: i64, vars: [&str; 2]) -> QPoly {
    QPoly::rat(int(v), vars)
}

fn sq(v: i64) -> Surd {
    Surd::sqrt(int(v)).expect("positive radicand")
}

fn surd_half(v: i64) -> PiQuad {
    PiQuad::constant(&sq(v) * &Surd::from_rational(rat(1, 2)))
}

fn pq(v: BigRational) -> PiQuad {
    PiQuad::from_rational(v)
}

fn rect(x0: BigRational, dx: BigRational, y0: BigRational, dy: BigRational) -> PaperRect {
    PaperRect::new(x0, dx, y0, dy)
}

fn pct(n: i64) -> BigRational {
    rat(n, 100)
}

/// Rational upper bound for `√3/2`, used as a side length.
fn half_sqrt3_hi() -> BigRational {
    Surd::sqrt(rat(3, 4)).expect("positive").enclose(64).hi().clone()
}

/// `b → √3 − b`.
fn reflect_sqrt3() -> AffineMap<PiQuad> {
    AffineMap::reflect(0, PiQuad::constant(sq(3)))
}

/// `b → √7/2 − b, a → a + 1/2`.
fn middle_map() -> AffineMap<PiQuad> {
    AffineMap::new([pq(int(-1)), pq(int(1))], [surd_half(7), pq(rat(1, 2))]).expect("unit scales")
}

struct Vars {
    b: QPoly,
    a: QPoly,
    t: QPoly,
    s3: QPoly,
}

fn vars() -> Vars {
    Vars {
        b: QPoly::var(0, BA),
        a: QPoly::var(1, BA),
        t: QPoly::pi2(BA),
        s3: QPoly::surd(sq(3), BA),
    }
}

/// `64π²(a²+b²+3) + 243(a²+b²−6a−3)`, the numerator shared by the
/// symmetric-base bound.
fn shared_n(v: &Vars) -> QPoly {
    let s = v.a.pow(2) + v.b.pow(2);
    v.t.clone() * ki(64, BA) * (s.clone() + ki(3, BA)) + ki(243, BA) * (s - ki(6, BA) * v.a.clone() - ki(3, BA))
}

/// `4 − (a+1)² − b²`.
fn disk(v: &Vars) -> QPoly {
    ki(4, BA) - (v.a.clone() + ki(1, BA)).pow(2) - v.b.pow(2)
}

fn case(id: &str, description: &str, obligations: Vec<Obligation>) -> ProofCase {
    ProofCase {
        id: id.to_string(),
        description: description.to_string(),
        obligations,
        notes: Vec::new(),
    }
}

fn k_case(id: &str, description: &str, p: QPoly) -> ProofCase {
    let r = rect(int(0), rat(1, 2), int(0), int(1));
    case(id, description, vec![Obligation::new(id, p, None, vec![r], Strategy::PaperRects)])
}

/// The five-step reduction of the degree-8 polynomial to a linear one.
pub fn k4_script() -> Vec<ScriptStep> {
    let a = QPoly::var(0, UNI_A);
    let c = |v: BigRational| k(v, UNI_A);
    let replace = |kk: u32, q: QPoly, hints: Vec<BigRational>| ScriptOp::Replace { k: kk, q, hints };
    vec![
        ScriptStep {
            ops: vec![
                replace(8, c(rat(1, 2)) * a.pow(7), vec![]),
                replace(6, c(rat(1, 2)) * a.pow(5), vec![]),
            ],
        },
        ScriptStep {
            // tangent at a = 3/7
            ops: vec![replace(
                4,
                c(rat(1, 2)) * a.pow(3) * (c(rat(3, 7)) + c(rat(7, 3)) * a.pow(2)),
                vec![rat(3, 7)],
            )],
        },
        ScriptStep {
            ops: vec![replace(2, c(rat(1, 2)) * a.clone() * (c(rat(1, 2)) + c(int(2)) * a.pow(2)), vec![])],
        },
        ScriptStep {
            ops: vec![ScriptOp::Drop { k: 7 }, ScriptOp::Drop { k: 5 }],
        },
        ScriptStep {
            ops: vec![replace(3, c(rat(1, 4)) * a.clone(), vec![])],
        },
    ]
}

fn build_m1() -> ProofCase {
    let c = QPoly::var(0, UNI_C);
    let t = QPoly::pi2(UNI_C);
    let flip = AffineMap::reflect(0, PiQuad::zero());
    let dom = vec![rect(int(0), rat(1, 4), int(0), int(1))];
    let reduced = (ki(3, UNI_C) * c.clone() + ki(1, UNI_C)) * c.clone() * (ki(2, UNI_C) * t.clone() - ki(16, UNI_C));
    let coef = -(t * (ki(1, UNI_C) + ki(2, UNI_C) * c.clone()) - ki(16, UNI_C) * c);
    let mut out = case(
        "M1",
        "test-function bound for the second eigenvalue, reduced through the upper bound on the trial parameter",
        vec![
            Obligation::new("M1", reduced, Some(flip.clone()), dom.clone(), Strategy::PaperRects),
            Obligation::new("M1-coefficient", coef, Some(flip), dom, Strategy::PaperRects),
        ],
    );
    out.notes
        .push("variable c = a(a−1) ∈ [−1/4, 0] is certified as x = −c ∈ [0, 1/4]".into());
    out
}

fn build_k4() -> ProofCase {
    let p = table_poly(TABLE_K8);
    let dom = vec![rect(int(0), rat(1, 2), int(0), int(1))];
    case(
        "K4",
        "degree-8 polynomial after dividing out the double root, nonpositive on [0, 1/2]",
        vec![
            Obligation::new("K4-tactic", p.clone(), None, dom.clone(), Strategy::TacticScript(k4_script())),
            Obligation::new("K4-subdivide", p, None, dom, Strategy::AutoSubdivide),
        ],
    )
}

fn build_s1() -> ProofCase {
    let a = QPoly::var(0, AB);
    let b = QPoly::var(1, AB);
    let t = QPoly::pi2(AB);
    let c = |v: BigRational| k(v, AB);
    let g_term = c(rat(1, 6)) * (ki(3, AB) * a.pow(2) + ki(3, AB) * b.pow(2) - ki(8, AB) * a.clone() + ki(1, AB));
    let rest = c(rat(1, 6)) * (ki(8, AB) * a.clone() - ki(3, AB) * a.pow(2) - ki(1, AB))
        - t * c(rat(1, 81)) * (a.clone() + ki(1, AB)) * (a.pow(2) + ki(3, AB));
    let family = ParamPoly::new(vec![rest, g_term]);
    let (g0, g1) = eliminate_linear_param(&family, &PiQuad::zero(), &PiQuad::one()).expect("affine in the parameter");
    let shift = AffineMap::shift(0, pq(rat(1, 2)));
    let dom = vec![rect(int(0), rat(1, 2), int(0), pct(108))];
    let mut out = case(
        "S1",
        "nearly degenerate triangles: the combined inequality at both ends of the trial parameter",
        vec![
            Obligation::new("S1-gamma0", g0, Some(shift.clone()), dom.clone(), Strategy::PaperRects),
            Obligation::new("S1-gamma1", g1, Some(shift), dom, Strategy::PaperRects),
        ],
    );
    out.notes
        .push("a ranges over [1/2, 1] so that both combination weights are nonnegative".into());
    out
}

fn s2_poly(v: &Vars) -> QPoly {
    let (a, b) = (&v.a, &v.b);
    shared_n(v)
        * (a.pow(2) - a.clone() + ki(1, BA) + ki(3, BA) * a.clone() * b.clone() - k(rat(3, 2), BA) * b.clone()
            + ki(2, BA) * b.pow(2))
        - ki(576, BA) * v.t.clone() * b.pow(2)
}

fn build_s2() -> ProofCase {
    let v = vars();
    case(
        "S2",
        "middle area, trial parameter below 2/3",
        vec![Obligation::new(
            "S2",
            s2_poly(&v),
            Some(middle_map()),
            vec![
                rect(int(0), rat(1, 4), int(0), rat(99, 1000)),
                rect(rat(1, 9), pct(15), rat(99, 1000), rat(1, 10)),
            ],
            Strategy::PaperRects,
        )],
    )
}

fn build_s3() -> ProofCase {
    let v = vars();
    let (a, b) = (&v.a, &v.b);
    let one = ki(1, BA);
    let g = b.pow(2) + a.clone() - a.pow(2) - one.clone()
        + (b.clone() - a.clone()) * (b.pow(2) - a.pow(2) - ki(3, BA));
    let lhs = (a.pow(2) - a.clone() + one + ki(2, BA) * b.pow(2) + ki(3, BA) * a.clone() * b.clone()
        - k(rat(3, 2), BA) * b.clone())
        + (b.clone() - a.clone())
            * (a.pow(2) + ki(3, BA) + ki(2, BA) * b.pow(2) + ki(3, BA) * a.clone() * b.clone());
    let main = shared_n(&v) * lhs
        - ki(576, BA) * v.t.clone() * b.pow(2) * (ki(2, BA) * b.clone() - ki(2, BA) * a.clone() + ki(1, BA));
    case(
        "S3",
        "middle area, trial parameter in [2/3, 1]",
        vec![
            Obligation::new(
                "S3-gamma-coefficient",
                g,
                Some(middle_map()),
                vec![rect(int(0), rat(1, 4), int(0), rat(1, 4))],
                Strategy::PaperRects,
            ),
            Obligation::new(
                "S3",
                main,
                Some(middle_map()),
                vec![
                    rect(int(0), rat(1, 4), int(0), pct(5)),
                    rect(pct(5), pct(20), pct(5), pct(9)),
                    rect(pct(17), pct(8), pct(14), pct(6)),
                ],
                Strategy::PaperRects,
            ),
        ],
    )
}

fn build_s4() -> ProofCase {
    let v = vars();
    let (a, b) = (&v.a, &v.b);
    let main = shared_n(&v) * (a.clone() + b.clone()) - ki(384, BA) * b.clone() * v.t.clone();
    let slack = ki(2000, BA) * disk(&v) * (b.clone() - k(rat(1, 2), BA) * v.s3.clone());
    let mut out = case(
        "S4",
        "nearly equilateral triangles, edge of the trial box at the upper parameter",
        vec![Obligation::new(
            "S4",
            ki(2, BA) * main + slack,
            Some(reflect_sqrt3()),
            vec![
                rect(int(0), rat(2, 3), int(0), rat(1, 2)),
                rect(rat(2, 3), rat(1, 3), int(0), rat(1, 2)),
            ],
            Strategy::PaperRects,
        )],
    );
    out.notes
        .push("slack 2000(4−(a+1)²−b²)(b−√3/2) is added to twice the displayed inequality".into());
    out
}

fn s5_poly(v: &Vars) -> QPoly {
    let (a, b) = (&v.a, &v.b);
    let half = k(rat(1, 2), BA);
    shared_n(v)
        * (a.clone() * (a.pow(2) - a.clone() + ki(1, BA)) + (half.clone() - a.clone()) * (a.pow(2) + ki(1, BA)))
        - ki(288, BA)
            * b.pow(2)
            * v.t.clone()
            * (k(rat(3, 4), BA) * (half - a.clone()) + k(rat(2, 3), BA) * a.clone())
}

fn build_s5() -> ProofCase {
    let v = vars();
    let p = s5_poly(&v);
    let a2b2 = v.a.pow(2) + v.b.pow(2);
    let mut lower = Obligation::new(
        "S5-lower",
        p.clone(),
        None,
        vec![rect(rat(866, 1000), rat(104, 1000), rat(1, 5), rat(3, 10))],
        Strategy::AutoSubdivide,
    );
    lower.constraints.push(ki(1, BA) - a2b2);
    let mut out = case(
        "S5",
        "nearly equilateral triangles, edge of the trial box at the lower parameter",
        vec![
            Obligation::new(
                "S5",
                p,
                None,
                vec![rect(pct(97), pct(80), int(0), rat(1, 2))],
                Strategy::PaperRects,
            ),
            lower,
        ],
    );
    out.notes.push(
        "the printed second rectangle [√(3/2), √3/2+1/5]×[1/5,1/2] has lower > upper in b; \
         the box b∈[866/1000, 97/100], a∈[1/5, 1/2] restricted to a²+b² ≥ 1 is subdivided instead"
            .into(),
    );
    out
}

fn build_s6() -> ProofCase {
    let v = vars();
    let (a, b) = (&v.a, &v.b);
    let n = shared_n(&v);
    let first = n.clone()
        * (a.pow(2) + ki(3, BA) * a.clone() * b.clone() + ki(2, BA) * b.pow(2) - a.clone()
            - k(rat(3, 2), BA) * b.clone()
            + ki(1, BA))
        - ki(576, BA) * b.pow(2) * v.t.clone();
    let first = ki(2, BA) * first
        + ki(10_000, BA) * disk(&v) * (b.clone() - k(rat(1, 2), BA) * v.s3.clone());
    let second = n * (a.pow(2) + ki(3, BA) + ki(3, BA) * a.clone() * b.clone() + ki(2, BA) * b.pow(2))
        - ki(1152, BA) * v.t.clone() * b.pow(2)
        + ki(7000, BA) * disk(&v) * (b.clone() - ki(1, BA)).pow(2);
    let mut out = case(
        "S6",
        "nearly equilateral triangles, edge of the trial box at the upper shift",
        vec![
            Obligation::new(
                "S6-first",
                first,
                Some(reflect_sqrt3()),
                vec![
                    rect(int(0), pct(14), int(0), rat(1, 4)),
                    rect(pct(14), pct(31), int(0), rat(1, 2)),
                    rect(pct(45), pct(45), int(0), rat(1, 2)),
                ],
                Strategy::PaperRects,
            ),
            Obligation::new(
                "S6-second",
                second,
                Some(reflect_sqrt3()),
                vec![
                    rect(int(0), pct(23), int(0), pct(33)),
                    rect(pct(23), pct(43), int(0), rat(1, 2)),
                    rect(pct(66), pct(15), int(0), rat(1, 2)),
                    rect(pct(81), pct(8), rat(1, 3), rat(1, 6)),
                ],
                Strategy::PaperRects,
            ),
        ],
    );
    out.notes
        .push("slack 10⁴(4−(a+1)²−b²)(b−√3/2) is added to twice the displayed first inequality".into());
    out
}

fn build_s7() -> ProofCase {
    let v = vars();
    let (a, b) = (&v.a, &v.b);
    let s3mb = v.s3.clone() - b.clone();
    let abm1 = a.clone() + b.clone() - ki(1, BA);
    let l = abm1.clone() * (a.pow(2) + ki(3, BA) - a.clone() * b.clone())
        + k(rat(8, 7), BA) * s3mb.clone() * (a.pow(2) + ki(1, BA) - a.clone() * b.clone());
    let p = shared_n(&v) * l
        - ki(288, BA)
            * b.pow(2)
            * v.t.clone()
            * (k(rat(4, 3), BA) * abm1.clone() + k(rat(6, 7), BA) * s3mb.clone());
    let g = abm1 * (b.pow(2) - a.pow(2) - ki(3, BA)) + k(rat(8, 7), BA) * s3mb * (b.pow(2) - a.pow(2) - ki(1, BA));
    // a = 1 − b + s
    let g_diag = g
        .compose(b, &(ki(1, BA) - b.clone() + a.clone()))
        .expect("same labels");
    let upper = AffineMap::new([pq(int(1)), pq(int(-1))], [surd_half(3), pq(rat(1, 2))]).expect("unit scales");
    let h = half_sqrt3_hi();
    let mut out = case(
        "S7",
        "nearly equilateral triangles, edge of the trial box at the lower shift",
        vec![
            Obligation::new(
                "S7-gamma-top",
                g.clone(),
                Some(reflect_sqrt3()),
                vec![rect(int(0), rat(1, 2), int(0), rat(1, 2))],
                Strategy::AutoSubdivide,
            ),
            Obligation::new(
                "S7-gamma-middle",
                g,
                Some(AffineMap::shift(0, pq(int(1)))),
                vec![rect(int(0), rat(1, 4), int(0), rat(1, 2))],
                Strategy::AutoSubdivide,
            ),
            Obligation::new(
                "S7-gamma-diagonal",
                g_diag,
                Some(AffineMap::reflect(0, pq(int(1)))),
                vec![rect(int(0), rat(134, 1000), int(0), rat(1, 2))],
                Strategy::AutoSubdivide,
            ),
            Obligation::new(
                "S7-top",
                p.clone(),
                Some(reflect_sqrt3()),
                vec![
                    rect(int(0), pct(20), int(0), pct(12)),
                    rect(pct(20), pct(35), int(0), pct(12)),
                ],
                Strategy::PaperRects,
            ),
            Obligation::new(
                "S7-bottom",
                p,
                Some(upper),
                vec![rect(int(0), h, int(0), pct(38)), rect(int(0), pct(32), pct(38), pct(12))],
                Strategy::PaperRects,
            ),
        ],
    );
    out.notes.push(
        "the trial-parameter coefficient is certified on b ∈ [√3−1/2, √3], [1, 5/4] and, with a = 1−b+s and b → 1−b, on b ∈ [866/1000, 1]"
            .into(),
    );
    out
}

fn build_s8() -> ProofCase {
    let v = vars();
    let (a, b) = (&v.a, &v.b);
    let e = k(rat(1, 12), BA) * shared_n(&v)
        - v.t.clone() * (ki(11, BA) + ki(7, BA) * b.pow(2) + ki(7, BA) * a.pow(2) - ki(4, BA) * a.clone());
    let bd = ki(4, BA) * a.pow(2) - ki(80, BA) * a.clone() + ki(3, BA) * (b.pow(2) - ki(3, BA));
    let dom = vec![rect(int(0), half_sqrt3_hi(), int(0), rat(1, 2))];
    case(
        "S8",
        "interior of the trial box: the bound dominates and is itself nonpositive",
        vec![
            Obligation::new("S8-dominated", e - bd.clone(), Some(reflect_sqrt3()), dom.clone(), Strategy::PaperRects),
            Obligation::new("S8-bound", bd, Some(reflect_sqrt3()), dom, Strategy::PaperRects),
        ],
    )
}

pub fn build_case(id: &str) -> Result<ProofCase, ProofError> {
    let tq = QPoly::pi2(UNI_A);
    Ok(match id {
        "M1" => build_m1(),
        "K1" => k_case("K1", "denominator of the kite bound is positive", -table_poly(TABLE_C)),
        "K2" => k_case(
            "K2",
            "12B − 7π²C is positive",
            tq * ki(7, UNI_A) * table_poly(TABLE_C) - ki(12, UNI_A) * table_poly(TABLE_B),
        ),
        "K3" => k_case("K3", "Q is positive", -table_poly(TABLE_Q)),
        "K4" => build_k4(),
        "S1" => build_s1(),
        "S2" => build_s2(),
        "S3" => build_s3(),
        "S4" => build_s4(),
        "S5" => build_s5(),
        "S6" => build_s6(),
        "S7" => build_s7(),
        "S8" => build_s8(),
        other => return Err(ProofError::UnknownCase(other.to_string())),
    })
}

pub fn catalog() -> Vec<ProofCase> {
    CASE_IDS.iter().map(|id| build_case(id).expect("catalog id")).collect()
}

// ---------------------------------------------------------------------------
// Running

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathChoice {
    All,
    Tactic,
    Subdivide,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub pi_bits: u32,
    pub max_depth: u32,
    pub cap_bits: u32,
    /// Extra bisection levels allowed under each listed rectangle.
    pub fallback: u32,
    pub path: PathChoice,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            pi_bits: 96,
            max_depth: 12,
            cap_bits: 192,
            fallback: 4,
            path: PathChoice::All,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseStatus {
    Certified,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorstLeaf {
    pub rect: String,
    pub bound: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObligationReport {
    pub name: String,
    pub strategy: String,
    pub rectangles: Vec<String>,
    pub certified: bool,
    pub leaves: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub worst: Option<WorstLeaf>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub final_poly: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub id: String,
    pub status: CaseStatus,
    pub leaves: usize,
    pub wall_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<String>,
    pub obligations: Vec<ObligationReport>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedCertificate {
    pub obligation: String,
    pub rect: usize,
    pub certificate: Certificate,
}

/// Every certificate emitted for one case.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseBundle {
    pub format: String,
    pub id: String,
    pub certificates: Vec<NamedCertificate>,
}

impl CaseBundle {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("bundle serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct CaseOutcome {
    pub report: CaseReport,
    pub bundle: CaseBundle,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofReport {
    pub pi_bits: u32,
    pub max_depth: u32,
    pub cases: Vec<CaseReport>,
    pub all_certified: bool,
    pub total_leaves: usize,
}

impl ProofReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report with timings zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        for c in &mut r.cases {
            c.wall_ms = 0;
        }
        r
    }
}

fn seed_of(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

/// Evaluates the target at 100 random rational points of its rectangles;
/// returns a point where it is certainly positive.
pub fn sanity_check(target: &IPoly, rects: &[PaperRect], constraints: &[IPoly], seed: u64) -> Option<(BigRational, BigRational)> {
    let mut rng = StdRng::seed_from_u64(seed);
    let per = 100_usize.div_ceil(rects.len().max(1));
    for r in rects {
        for _ in 0..per {
            let u = rat(rng.gen_range(0..=1000), 1000);
            let w = rat(rng.gen_range(0..=1000), 1000);
            let x = &r.x0 + &r.dx * &u;
            let y = &r.y0 + &r.dy * &w;
            if constraints.iter().any(|h| h.evaluate(&x, &y).lo().is_positive()) {
                continue;
            }
            if target.evaluate(&x, &y).lo().is_positive() {
                return Some((x, y));
            }
        }
    }
    None
}

struct Attempt {
    report: ObligationReport,
    certs: Vec<NamedCertificate>,
}

fn run_script(
    p: &IPoly,
    domain: &Rect,
    script: &[ScriptStep],
    consts: &Consts,
    opts: &CertifyOptions,
) -> Result<(Certificate, IPoly), String> {
    let mut cur = p.clone();
    let mut steps = Vec::new();
    for step in script {
        for op in &step.ops {
            let (next, st) = match op {
                ScriptOp::Replace { k, q, hints } => {
                    let side_opts = opts
                        .clone()
                        .with_hints(hints.iter().map(|h| (Axis::X, h.clone())).collect());
                    tactic_replace_power(&cur, 0, *k, &q.collapse(consts), domain, &side_opts)
                }
                ScriptOp::Drop { k } => tactic_drop_term(&cur, 0, *k, domain),
            }
            .map_err(|e| e.to_string())?;
            cur = next;
            steps.push(st);
        }
    }
    let last = certify_nonpos(&cur, domain, &opts.clone().with_depth(0))
        .map_err(|u| format!("reduced polynomial not certified: worst bound {}", u.worst_bound))?;
    Ok((chain_certificate(p, domain, steps, last), cur))
}

/// `c0 + c1*a + ...` with coefficient midpoints, for reports.
fn summarize(p: &IPoly) -> String {
    let var = p.vars()[0].to_string();
    (0..p.shape().0)
        .filter(|&i| !p.coeff(i, 0).is_zero())
        .map(|i| match i {
            0 => format!("{:.6e}", p.coeff(i, 0).mid_f64()),
            _ => format!("{:.6e}*{var}^{i}", p.coeff(i, 0).mid_f64()),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn run_obligation(ob: &Obligation, opts: &RunOptions, consts: &Consts) -> Attempt {
    let target = ob.target().collapse(consts);
    let constraints: Vec<IPoly> = ob.constraints.iter().map(|h| h.collapse(consts)).collect();
    let mut report = ObligationReport {
        name: ob.name.clone(),
        strategy: ob.strategy.label().to_string(),
        rectangles: ob.rects.iter().map(|r| r.to_string()).collect(),
        certified: false,
        leaves: 0,
        worst: None,
        final_poly: None,
        error: None,
    };
    let mut certs = Vec::new();
    if let Some((x, y)) = sanity_check(&target, &ob.rects, &constraints, seed_of(&ob.name)) {
        report.error = Some(format!(
            "positive at ({}, {})",
            format_rational(&x),
            format_rational(&y)
        ));
        return Attempt { report, certs };
    }
    let base = CertifyOptions {
        max_depth: opts.max_depth,
        cap_bits: opts.cap_bits,
        constraints,
        ..CertifyOptions::default()
    };
    for (i, r) in ob.rects.iter().enumerate() {
        let domain = r.rect();
        let outcome = match &ob.strategy {
            Strategy::PaperRects => certify_nonpos(&target, &domain, &base.clone().with_depth(opts.fallback))
                .map_err(|u| (Some(u.worst_rect.to_string()), u.worst_bound.to_string())),
            Strategy::AutoSubdivide => certify_nonpos(&target, &domain, &base)
                .map_err(|u| (Some(u.worst_rect.to_string()), u.worst_bound.to_string())),
            Strategy::TacticScript(script) => match run_script(&target, &domain, script, consts, &base) {
                Ok((c, last)) => {
                    report.final_poly = Some(summarize(&last));
                    Ok(c)
                }
                Err(e) => Err((None, e)),
            },
        };
        match outcome {
            Ok(cert) => {
                if let Err(e) = check_certificate(&cert) {
                    report.error = Some(format!("re-check failed: {e}"));
                    return Attempt { report, certs };
                }
                report.leaves += cert.leaf_count();
                certs.push(NamedCertificate {
                    obligation: ob.name.clone(),
                    rect: i,
                    certificate: cert,
                });
            }
            Err((rect, bound)) => {
                match rect {
                    Some(rect) => report.worst = Some(WorstLeaf { rect, bound }),
                    None => report.error = Some(bound),
                }
                return Attempt { report, certs };
            }
        }
    }
    report.certified = true;
    Attempt { report, certs }
}

fn selected(ob: &Obligation, path: PathChoice) -> bool {
    match (path, &ob.strategy) {
        (PathChoice::Tactic, Strategy::AutoSubdivide) => !ob.name.ends_with("-subdivide"),
        (PathChoice::Subdivide, Strategy::TacticScript(_)) => false,
        _ => true,
    }
}

/// Certifies every obligation of a case and re-checks each certificate.
pub fn run_case(c: &ProofCase, opts: &RunOptions) -> CaseOutcome {
    let start = Instant::now();
    let consts = Consts::new(opts.pi_bits);
    let attempts: Vec<Attempt> = c
        .obligations
        .iter()
        .filter(|o| selected(o, opts.path))
        .map(|o| run_obligation(o, opts, &consts))
        .collect();
    let certified = !attempts.is_empty() && attempts.iter().all(|a| a.report.certified);
    let mut obligations = Vec::new();
    let mut certificates = Vec::new();
    for a in attempts {
        obligations.push(a.report);
        certificates.extend(a.certs);
    }
    CaseOutcome {
        report: CaseReport {
            id: c.id.clone(),
            status: if certified { CaseStatus::Certified } else { CaseStatus::Failed },
            leaves: obligations.iter().map(|o| o.leaves).sum(),
            wall_ms: start.elapsed().as_millis() as u64,
            certificate: None,
            obligations,
            notes: c.notes.clone(),
        },
        bundle: CaseBundle {
            format: BUNDLE_FORMAT.to_string(),
            id: c.id.clone(),
            certificates,
        },
    }
}

/// Runs the given cases in parallel; results are sorted by id.
pub fn run_cases(cases: &[ProofCase], opts: &RunOptions) -> (ProofReport, Vec<CaseBundle>) {
    let mut outcomes: Vec<CaseOutcome> = cases.par_iter().map(|c| run_case(c, opts)).collect();
    outcomes.sort_by(|x, y| x.report.id.cmp(&y.report.id));
    let (cases, bundles): (Vec<_>, Vec<_>) = outcomes.into_iter().map(|o| (o.report, o.bundle)).unzip();
    let report = ProofReport {
        pi_bits: opts.pi_bits,
        max_depth: opts.max_depth,
        all_certified: cases.iter().all(|c: &CaseReport| c.status == CaseStatus::Certified),
        total_leaves: cases.iter().map(|c| c.leaves).sum(),
        cases,
    };
    (report, bundles)
}

pub fn run_all(opts: &RunOptions) -> (ProofReport, Vec<CaseBundle>) {
    run_cases(&catalog(), opts)
}

/// Flips the sign of the coefficient that dominates the fold at the first
/// rectangle's lower-left corner: the most negative `c_ij·dx^i·dy^j` of the
/// target re-expanded at that corner.
pub fn mutate_dominant(ob: &Obligation) -> Obligation {
    let r = &ob.rects[0];
    let target = ob.target();
    let to_corner = AffineMap::new([pq(int(1)), pq(int(1))], [pq(r.x0.clone()), pq(r.y0.clone())]).expect("unit");
    let back = AffineMap::new([pq(int(1)), pq(int(1))], [pq(-r.x0.clone()), pq(-r.y0.clone())]).expect("unit");
    let local = target.substitute(&to_corner);
    let consts = Consts::new(64);
    let mut best: Option<(BigRational, usize, usize)> = None;
    let (nx, ny) = local.shape();
    for i in 0..nx {
        for j in 0..ny {
            let c = local.coeff(i, j);
            if c.is_zero() {
                continue;
            }
            let w = c.enclose(&consts).midpoint() * num_traits::pow(r.dx.clone(), i) * num_traits::pow(r.dy.clone(), j);
            if w.is_negative() && best.as_ref().is_none_or(|(b, _, _)| &w < b) {
                best = Some((w, i, j));
            }
        }
    }
    let mut out = ob.clone();
    if let Some((_, i, j)) = best {
        let flipped = local.with_coeff(i, j, -local.coeff(i, j));
        out.source = flipped.substitute(&back);
        out.pre = None;
    }
    out.name = format!("{}-mutated", ob.name);
    out
}

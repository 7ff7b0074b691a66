//! Closed-form eigenvalue bounds for triangles and the parameter-region
//! predicates they are used with.
//!
//! A triangle is `T(a,b)`: vertices `(0,0), (1,0), (a,b)` in the unit-base
//! convention, `(−1,0), (1,0), (a,b)` in the symmetric-base convention. The
//! height enters every formula only through `b²`, which is stored exactly, so
//! triangles such as `T(0, 1/√3)` stay exact.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactq::{int, rat, to_f64, BigRational, Consts, ExactError, PiQuad, RatInterval};
use crate::poly::QPoly;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("height must be positive")]
    NonPositiveHeight,
    #[error("expected {expected:?} convention")]
    WrongConvention { expected: Convention },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("denominator sign is indeterminate")]
    IndeterminateSign,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Convention {
    /// Vertices `(0,0), (1,0), (a,b)`.
    UnitBase,
    /// Vertices `(−1,0), (1,0), (a,b)`.
    SymBase,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TriParam {
    a: BigRational,
    b2: BigRational,
    convention: Convention,
}

impl TriParam {
    pub fn new(a: BigRational, b: BigRational, convention: Convention) -> Result<Self, BoundsError> {
        if !b.is_positive() {
            return Err(BoundsError::NonPositiveHeight);
        }
        Self::with_b2(a, &b * &b, convention)
    }

    /// Apex with height `√b2`.
    pub fn with_b2(a: BigRational, b2: BigRational, convention: Convention) -> Result<Self, BoundsError> {
        if !b2.is_positive() {
            return Err(BoundsError::NonPositiveHeight);
        }
        Ok(Self { a, b2, convention })
    }

    pub fn unit(a: BigRational, b: BigRational) -> Result<Self, BoundsError> {
        Self::new(a, b, Convention::UnitBase)
    }

    pub fn sym(a: BigRational, b: BigRational) -> Result<Self, BoundsError> {
        Self::new(a, b, Convention::SymBase)
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b2(&self) -> &BigRational {
        &self.b2
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn b_f64(&self) -> f64 {
        to_f64(&self.b2).sqrt()
    }

    pub fn a_f64(&self) -> f64 {
        to_f64(&self.a)
    }

    fn expect(&self, c: Convention) -> Result<(), BoundsError> {
        if self.convention == c {
            Ok(())
        } else {
            Err(BoundsError::WrongConvention { expected: c })
        }
    }

    /// Vertices in floating point, counterclockwise.
    pub fn vertices(&self) -> [[f64; 2]; 3] {
        let apex = [self.a_f64(), self.b_f64()];
        match self.convention {
            Convention::UnitBase => [[0.0, 0.0], [1.0, 0.0], apex],
            Convention::SymBase => [[-1.0, 0.0], [1.0, 0.0], apex],
        }
    }

    /// Squared side lengths, exact.
    pub fn side_lengths_sq(&self) -> [BigRational; 3] {
        let (l, r) = match self.convention {
            Convention::UnitBase => (int(0), int(1)),
            Convention::SymBase => (int(-1), int(1)),
        };
        let base = (&r - &l) * (&r - &l);
        let left = (&self.a - &l) * (&self.a - &l) + &self.b2;
        let right = (&self.a - &r) * (&self.a - &r) + &self.b2;
        [base, left, right]
    }

    /// Admissible parameter region of the convention.
    pub fn admissible(&self) -> bool {
        let a = &self.a;
        match self.convention {
            Convention::UnitBase => {
                !a.is_negative() && a <= &rat(1, 2) && (int(1) - a) * (int(1) - a) + &self.b2 <= int(1)
            }
            Convention::SymBase => {
                !a.is_negative() && a * a + &self.b2 >= int(1) && (a + int(1)) * (a + int(1)) + &self.b2 <= int(4)
            }
        }
    }

    /// The same triangle in the symmetric-base convention: `x → 2x − 1`,
    /// reflected so the apex has `a ≥ 0`. Lengths double, so eigenvalues
    /// scale by [`SYM_FROM_UNIT_EIGEN_SCALE`].
    pub fn to_sym(&self) -> Result<Self, BoundsError> {
        self.expect(Convention::UnitBase)?;
        let a = (int(2) * &self.a - int(1)).abs();
        Self::with_b2(a, int(4) * &self.b2, Convention::SymBase)
    }

    /// Inverse of [`TriParam::to_sym`], choosing `a ≤ 1/2`.
    pub fn to_unit(&self) -> Result<Self, BoundsError> {
        self.expect(Convention::SymBase)?;
        let a = (int(1) - self.a.abs()) / int(2);
        Self::with_b2(a, &self.b2 / int(4), Convention::UnitBase)
    }
}

/// `μ(sym) = SYM_FROM_UNIT_EIGEN_SCALE · μ(unit)` for the same shape.
pub const SYM_FROM_UNIT_EIGEN_SCALE: (i64, i64) = (1, 4);

/// `num / den` with `num ∈ ℚ(√d)[π²]` and a positive rational `den`; the
/// closed forms below are all of this shape, which makes their comparisons
/// exact.
#[derive(Clone, Debug, PartialEq)]
pub struct PiFraction {
    pub num: PiQuad,
    pub den: BigRational,
}

impl PiFraction {
    pub fn new(num: PiQuad, den: BigRational) -> Self {
        assert!(den.is_positive(), "denominator must be positive");
        Self { num, den }
    }

    pub fn enclose(&self, consts: &Consts) -> RatInterval {
        self.num.enclose(consts).scale(&self.den.recip())
    }

    /// Exact comparison.
    pub fn cmp_exact(&self, other: &PiFraction) -> Ordering {
        let diff = &(&self.num * &PiQuad::from_rational(other.den.clone()))
            - &(&other.num * &PiQuad::from_rational(self.den.clone()));
        match piquad_signum(&diff) {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

/// Exact sign of a [`PiQuad`]. A nonzero value cannot vanish because π² is
/// transcendental, so refining the enclosure always terminates.
pub fn piquad_signum(q: &PiQuad) -> i32 {
    if q.is_zero() {
        return 0;
    }
    let mut bits = 64;
    loop {
        let e = q.enclose(&Consts::new(bits));
        if e.lo().is_positive() {
            return 1;
        }
        if e.hi().is_negative() {
            return -1;
        }
        bits *= 2;
        assert!(bits <= 1 << 16, "sign refinement did not terminate");
    }
}

fn t() -> PiQuad {
    PiQuad::pi2()
}

fn q(v: BigRational) -> PiQuad {
    PiQuad::from_rational(v)
}

/// `(64π²(a²+b²+3) + 243(a²+b²−6a−3)) / (288b²)`, symmetric base.
pub fn u1_exact(tp: &TriParam) -> Result<PiFraction, BoundsError> {
    tp.expect(Convention::SymBase)?;
    let s = &tp.a * &tp.a + &tp.b2;
    let num = &(&t() * &q(int(64) * (&s + int(3)))) + &q(int(243) * (&s - int(6) * &tp.a - int(3)));
    Ok(PiFraction::new(num, int(288) * &tp.b2))
}

pub fn u1(tp: &TriParam, consts: &Consts) -> Result<RatInterval, BoundsError> {
    Ok(u1_exact(tp)?.enclose(consts))
}

/// `18 / (a² + 3)`, symmetric base.
pub fn u2(tp: &TriParam) -> Result<RatInterval, BoundsError> {
    tp.expect(Convention::SymBase)?;
    Ok(RatInterval::point(int(18) / (&tp.a * &tp.a + int(3))))
}

/// `π²(1+2h)/(4h²)`, a lower bound for the first Dirichlet eigenvalue of the
/// rhombus with half-diagonals `1` and `h`.
pub fn hooker_protter_exact(h: &BigRational) -> Result<PiFraction, BoundsError> {
    if !h.is_positive() {
        return Err(BoundsError::Precondition("h must be positive".into()));
    }
    if h > &rat(1, 2) {
        return Err(BoundsError::Precondition("h must be at most 1/2".into()));
    }
    Ok(PiFraction::new(
        &t() * &q(int(1) + int(2) * h),
        int(4) * h * h,
    ))
}

pub fn hooker_protter(h: &BigRational, consts: &Consts) -> Result<RatInterval, BoundsError> {
    Ok(hooker_protter_exact(h)?.enclose(consts))
}

/// `3b² ≤ 1 − a + a²`.
fn kite_sym(a: &BigRational, b2: &BigRational) -> bool {
    int(3) * b2 <= int(1) - a + a * a
}

/// `π²(3 + 7δ + 6a√(3−4a)) / (12b²)` with `δ = a² + b² − a`: lower bound
/// for the lowest antisymmetric kite mode, valid when `3b² ≤ 1 − a + a²` and
/// the triangle is not obtuse (`δ ≥ 0`).
pub fn mu_a_lower(tp: &TriParam, consts: &Consts) -> Result<RatInterval, BoundsError> {
    tp.expect(Convention::UnitBase)?;
    let a = &tp.a;
    if a.is_negative() || a > &rat(1, 2) {
        return Err(BoundsError::Precondition("need 0 ≤ a ≤ 1/2".into()));
    }
    if !kite_sym(a, &tp.b2) {
        return Err(BoundsError::Precondition("need 3b² ≤ 1 − a + a²".into()));
    }
    let delta = a * a + &tp.b2 - a;
    if delta.is_negative() {
        return Err(BoundsError::Precondition("need a² + b² ≥ a (not obtuse)".into()));
    }
    let root = consts.sqrt(&(int(3) - int(4) * a))?;
    let inner = &RatInterval::point(int(3) + int(7) * delta) + &root.scale(&(int(6) * a));
    Ok((consts.pi2() * &inner).scale(&(int(12) * &tp.b2).recip()))
}

/// Test-function upper bound for `μ₂`:
/// `(π²(2c(2+b²+c)+b²+1) − 16c(b²+c)) / (2(3c+1)b²)` with `c = a(a−1)`.
pub fn mu2_upper_lemma_exact(tp: &TriParam) -> Result<PiFraction, BoundsError> {
    tp.expect(Convention::UnitBase)?;
    let b2 = &tp.b2;
    let c = &tp.a * (&tp.a - int(1));
    let den = int(2) * (int(3) * &c + int(1)) * b2;
    if !den.is_positive() {
        return Err(BoundsError::IndeterminateSign);
    }
    let pi_part = int(2) * &c * (int(2) + b2 + &c) + b2 + int(1);
    let num = &(&t() * &q(pi_part)) - &q(int(16) * &c * (b2 + &c));
    Ok(PiFraction::new(num, den))
}

pub fn mu2_upper_lemma(tp: &TriParam, consts: &Consts) -> Result<RatInterval, BoundsError> {
    Ok(mu2_upper_lemma_exact(tp)?.enclose(consts))
}

/// `π² / b²`.
pub fn pi2_over_b2_exact(tp: &TriParam) -> PiFraction {
    PiFraction::new(t(), tp.b2.clone())
}

// ---------------------------------------------------------------------------
// Kite upper bound tables: coefficients `(c0, c1, c2)` of `c0 + c1 π² + c2 π⁴`
// for ascending powers of `a`.

type Table = &'static [(i64, i64, i64)];

pub const TABLE_C: Table = &[
    (0, 25200, 0),
    (12 * 72429, -12 * 8400, 0),
    (-12 * 182346, 12 * 15400, 0),
    (12 * 74976, -12 * 5600, 0),
    (0, 67200, 0),
];

pub const TABLE_B: Table = &[
    (0, 127575, 16800),
    (0, 784800, -67200),
    (0, -1867740, 168000),
    (0, 650880, -134400),
    (0, 0, 134400),
];

pub const TABLE_A: Table = &[
    (0, -42525, 5600),
    (0, 227938, -22400),
    (0, -924757, 89600),
    (0, 2105752, -235200),
    (0, -2518620, 369600),
    (0, 650880, -268800),
    (0, 0, 134400),
];

/// `(12B − 7π²C) / (12π²)`.
pub const TABLE_B_MINUS_C: Table = &[
    (127575, 2100, 0),
    (277797, -8400, 0),
    (-591318, 60200, 0),
    (126048, -95200, 0),
    (0, 95200, 0),
];

pub const TABLE_Q: Table = &[
    (0, 2100, 0),
    (72429, -8400, 0),
    (-2 * 91173, 2 * 7700, 0),
    (74976, -5600, 0),
    (0, 5600, 0),
];

pub const TABLE_P: Table = &[
    (525 * 347, 525 * 80, 0),
    (-8 * 44211, -8 * 2450, 0),
    (480 * 2682, -480 * 665, 0),
    (-2869464, 868000, 0),
    (504192, -761600, 0),
    (0, 380800, 0),
];

/// The degree-8 polynomial left after dividing out the double root and
/// substituting `a → 1/2 − a`.
pub const TABLE_K8: Table = &[
    (0, -36985183200, 3669120000),
    (-1418249685780, 311172170400, -20603520000),
    (4864275678312, -1107844970400, 70309120000),
    (-1682712947520, 1404232972800, -139740160000),
    (-3554482258800, -300435206400, 121433760000),
    (-1352162962944, 582294182400, -149461760000),
    (63552393216, -34277644800, 83354880000),
    (0, -95998156800, -46412800000),
    (0, 0, 36252160000),
];

pub const A_VARS: [&str; 2] = ["a", "_"];

/// Univariate polynomial in `a` from a table.
pub fn table_poly(table: Table) -> QPoly {
    let m = table
        .iter()
        .map(|&(c0, c1, c2)| vec![PiQuad::rational(int(c0), int(c1), int(c2))])
        .collect();
    QPoly::from_matrix(m, A_VARS)
}

fn table_at(table: Table, a: &BigRational) -> PiQuad {
    table_poly(table).eval_rational(a, &BigRational::zero())
}

/// `(A(a) + B(a)b²) / (C(a)b²)`, the three-function test upper bound for
/// `μ₂`.
pub fn kite_upper_abc(tp: &TriParam, consts: &Consts) -> Result<RatInterval, BoundsError> {
    tp.expect(Convention::UnitBase)?;
    let a = &tp.a;
    let b2 = q(tp.b2.clone());
    let num = &table_at(TABLE_A, a) + &(&table_at(TABLE_B, a) * &b2);
    let den = (&table_at(TABLE_C, a) * &b2).enclose(consts);
    if !den.lo().is_positive() {
        return Err(BoundsError::IndeterminateSign);
    }
    Ok(&num.enclose(consts) * &den.recip().expect("positive"))
}

// ---------------------------------------------------------------------------
// Regions

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RegionFlags {
    /// `3b² ≤ 1 − a + a²`.
    pub kite_sym: bool,
    /// `b² ≤ a² + (1−a)²`.
    pub mu_cond: bool,
    /// `a² + b² > a`.
    pub acute: bool,
    /// Angle at `(1,0)` at most π/6.
    pub small_angle: bool,
    /// Angle at `(1,0)` at most π/4.
    pub small_angle_pi4: bool,
}

/// Exact classification of a unit-base parameter point.
pub fn region_classify(tp: &TriParam) -> Result<RegionFlags, BoundsError> {
    tp.expect(Convention::UnitBase)?;
    let a = &tp.a;
    let b2 = &tp.b2;
    let one_minus = int(1) - a;
    let om2 = &one_minus * &one_minus;
    // tan(angle) = b/(1−a) compared with 1/√3 and 1, squared
    let below = |k: i64| one_minus.is_positive() && int(k) * b2 <= om2;
    Ok(RegionFlags {
        kite_sym: kite_sym(a, b2),
        mu_cond: b2 <= &(a * a + &om2),
        acute: a * a + b2 > *a,
        small_angle: below(3),
        small_angle_pi4: below(1),
    })
}

/// Inversion in the circle `(a−1)² + b² = 1`.
pub fn invert_isosceles(tp: &TriParam) -> Result<TriParam, BoundsError> {
    tp.expect(Convention::UnitBase)?;
    let da = &tp.a - int(1);
    let r2 = &da * &da + &tp.b2;
    let a = int(1) + &da / &r2;
    let b2 = &tp.b2 / (&r2 * &r2);
    TriParam::with_b2(a, b2, Convention::UnitBase)
}

/// Ratio of the middle side to the longest side, squared.
pub fn middle_to_longest_sq(tp: &TriParam) -> BigRational {
    let mut s = tp.side_lengths_sq();
    s.sort();
    &s[1] / &s[2]
}

/// Gray-region test used by scans: strictly inside `3b² < 1 − a + a²`,
/// `0 < a < 1/2`, above the right-angle arc `a² + b² = a`.
pub fn strictly_gray(tp: &TriParam) -> bool {
    let a = &tp.a;
    a.is_positive() && a < &rat(1, 2) && int(3) * &tp.b2 < int(1) - a + a * a && a * a + &tp.b2 > *a
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::pi2_enclosure;

    fn consts() -> Consts {
        Consts::new(96)
    }

    fn pf(n: (i64, i64), d: BigRational) -> PiFraction {
        PiFraction::new(PiQuad::rational(int(n.0), int(n.1), int(0)), d)
    }

    #[test]
    fn u1_examples() {
        let eq = TriParam::with_b2(int(0), int(3), Convention::SymBase).unwrap();
        // equilateral with side 2: 4π²/9
        assert_eq!(u1_exact(&eq).unwrap().cmp_exact(&pf((0, 4), int(9))), Ordering::Equal);
        let ri = TriParam::sym(int(0), int(1)).unwrap();
        assert_eq!(
            u1_exact(&ri).unwrap().cmp_exact(&pf((-486, 256), int(288))),
            Ordering::Equal
        );
        assert!(u1(&ri, &consts()).unwrap().width() < rat(1, 1 << 30));
    }

    #[test]
    fn u2_examples() {
        let at = |a: BigRational| u2(&TriParam::sym(a, int(1)).unwrap()).unwrap();
        assert_eq!(at(int(0)), RatInterval::point(int(6)));
        assert_eq!(at(int(1)), RatInterval::point(rat(9, 2)));
        assert!(at(rat(1, 3)).hi() > at(rat(1, 2)).hi());
    }

    #[test]
    fn hooker_protter_examples() {
        assert_eq!(
            hooker_protter_exact(&rat(1, 2)).unwrap().cmp_exact(&pf((0, 2), int(1))),
            Ordering::Equal
        );
        assert_eq!(
            hooker_protter_exact(&rat(1, 4)).unwrap().cmp_exact(&pf((0, 6), int(1))),
            Ordering::Equal
        );
        assert!(hooker_protter_exact(&int(0)).is_err());
        assert!(hooker_protter_exact(&int(-1)).is_err());
    }

    #[test]
    fn mu_a_lower_examples() {
        let c = consts();
        let eq = TriParam::with_b2(int(0), rat(1, 3), Convention::UnitBase).unwrap();
        let v = mu_a_lower(&eq, &c).unwrap();
        // 4π²/3
        let target = pi2_enclosure(96).scale(&rat(4, 3));
        assert!(v.is_subset_of(&target.hull(&v)) && v.lo() <= target.hi() && target.lo() <= v.hi());
        assert!(v.width() < rat(1, 1 << 30));
        // a = 0: π²(3+7b²)/(12b²)
        let b2 = rat(1, 5);
        let w = mu_a_lower(&TriParam::with_b2(int(0), b2.clone(), Convention::UnitBase).unwrap(), &c).unwrap();
        let expect = c.pi2().scale(&((int(3) + int(7) * &b2) / (int(12) * &b2)));
        assert_eq!(w, expect);
        assert!(mu_a_lower(&TriParam::unit(rat(1, 4), int(1)).unwrap(), &c).is_err());
        // obtuse: a² + b² < a
        let thin = TriParam::unit(rat(4, 11), rat(1, 20)).unwrap();
        assert!(mu_a_lower(&thin, &c).is_err());
        assert!(!strictly_gray(&thin));
    }

    #[test]
    fn mu2_upper_lemma_examples() {
        let r = TriParam::unit(int(0), int(1)).unwrap();
        assert_eq!(mu2_upper_lemma_exact(&r).unwrap().cmp_exact(&pf((0, 1), int(1))), Ordering::Equal);
        let h = TriParam::unit(rat(1, 2), rat(1, 2)).unwrap();
        assert_eq!(mu2_upper_lemma_exact(&h).unwrap().cmp_exact(&pf((0, 2), int(1))), Ordering::Equal);
    }

    #[test]
    fn table_identities() {
        let a = QPoly::var(0, A_VARS);
        let tq = QPoly::pi2(A_VARS);
        let k = |v: i64| QPoly::rat(int(v), A_VARS);
        let (ta, tb, tc) = (table_poly(TABLE_A), table_poly(TABLE_B), table_poly(TABLE_C));
        let (p, qq) = (table_poly(TABLE_P), table_poly(TABLE_Q));
        // C = 12 Q
        assert!((&tc - &(&qq * &k(12))).is_zero());
        // 12B − 7π²C = 12π² · quartic
        let lhs = &(&tb * &k(12)) - &(&(&tq * &k(7)) * &tc);
        assert!((&lhs - &(&(&tq * &k(12)) * &table_poly(TABLE_B_MINUS_C))).is_zero());
        // 12A + (12B − 7π²C)(1−a+a²)/3 − π²C(3+7a²−7a) = 4π² a P
        let quad = &(&k(1) - &a) + &a.pow(2);
        let third = QPoly::rat(rat(1, 3), A_VARS);
        let l = &(&(&ta * &k(12)) + &(&(&lhs * &quad) * &third))
            - &(&(&tq * &tc) * &(&(&k(3) + &(&k(7) * &a.pow(2))) - &(&k(7) * &a)));
        assert!((&l - &(&(&(&k(4) * &tq) * &a) * &p)).is_zero());
    }

    #[test]
    fn degree_eight_polynomial_matches_reduction() {
        // (P² − 324 Q² (3 − 4a)) = (2a − 1)² · K8(1/2 − a)
        let a = QPoly::var(0, A_VARS);
        let k = |v: i64| QPoly::rat(int(v), A_VARS);
        let (p, qq) = (table_poly(TABLE_P), table_poly(TABLE_Q));
        let r = &p.pow(2) - &(&(&qq.pow(2) * &k(324)) * &(&k(3) - &(&k(4) * &a)));
        let back = crate::poly::AffineMap::reflect(0, PiQuad::from_rational(rat(1, 2)));
        let k8 = table_poly(TABLE_K8).substitute(&back);
        let sq = (&(&k(2) * &a) - &k(1)).pow(2);
        assert!((&r - &(&sq * &k8)).is_zero());
    }

    #[test]
    fn transcription_spot_values() {
        // C(0) = 25200π², C(1/2) from the factored display
        let c0 = table_at(TABLE_C, &int(0));
        assert_eq!(c0, PiQuad::rational(int(0), int(25200), int(0)));
        let q_half = table_at(TABLE_Q, &rat(1, 2));
        let expect = PiQuad::rational(
            int(74976) / int(8) - int(91173) / int(2) + int(72429) / int(2),
            int(5600) / int(16) - int(5600) / int(8) + int(7700) / int(2) - int(4200) + int(2100),
            int(0),
        );
        assert_eq!(q_half, expect);
    }

    #[test]
    fn region_examples() {
        let f = region_classify(&TriParam::unit(rat(1, 4), rat(9, 20)).unwrap()).unwrap();
        assert!(f.kite_sym);
        let sq = region_classify(&TriParam::unit(rat(1, 2), rat(1, 2)).unwrap()).unwrap();
        assert!(sq.kite_sym);
        let sq_b2 = rat(1, 4);
        assert_eq!(int(3) * sq_b2, int(1) - rat(1, 2) + rat(1, 4));
        let eq = TriParam::with_b2(int(0), rat(1, 3), Convention::UnitBase).unwrap();
        assert!(region_classify(&eq).unwrap().kite_sym);
        assert!(region_classify(&eq).unwrap().small_angle);
    }

    #[test]
    fn inversion_properties() {
        // fixed circle
        let on = TriParam::with_b2(rat(1, 2), rat(3, 4), Convention::UnitBase).unwrap();
        assert_eq!(invert_isosceles(&on).unwrap(), on);
        let p = TriParam::unit(rat(1, 5), rat(2, 5)).unwrap();
        let back = invert_isosceles(&invert_isosceles(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn convention_round_trip() {
        let p = TriParam::unit(rat(1, 5), rat(2, 5)).unwrap();
        let s = p.to_sym().unwrap();
        assert_eq!(s.a(), &rat(3, 5));
        assert_eq!(s.b2(), &rat(16, 25));
        assert_eq!(s.to_unit().unwrap(), p);
        assert!(u1_exact(&p).is_err());
    }
}

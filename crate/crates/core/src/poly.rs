//! Dense bivariate polynomials with labelled variables.
//!
//! `Poly2<C>` stores `c[i][j]`, the coefficient of `x^i y^j`, where `x` is the
//! first label. Coefficients are either exact ([`PiQuad`]) or enclosures
//! ([`RatInterval`]); [`Poly2::collapse`] turns the former into the latter.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::One;
use thiserror::Error;

use crate::exactq::{BigRational, Consts, PiQuad, RatInterval, Surd};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable labels differ: {0:?} vs {1:?}")]
    LabelMismatch([String; 2], [String; 2]),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("zero scale in affine map")]
    ZeroScale,
}

/// Coefficient ring operations needed by [`Poly2`].
pub trait Coeff: Clone + fmt::Debug + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn from_rational(v: BigRational) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;

    fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    fn power(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out.times(self);
        }
        out
    }
}

impl Coeff for RatInterval {
    fn zero() -> Self {
        RatInterval::zero()
    }
    fn from_rational(v: BigRational) -> Self {
        RatInterval::point(v)
    }
    fn is_zero(&self) -> bool {
        RatInterval::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn power(&self, k: u32) -> Self {
        self.pow(k)
    }
}

impl Coeff for PiQuad {
    fn zero() -> Self {
        PiQuad::zero()
    }
    fn from_rational(v: BigRational) -> Self {
        PiQuad::from_rational(v)
    }
    fn is_zero(&self) -> bool {
        PiQuad::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
}

/// Polynomial in two labelled variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly2<C: Coeff> {
    coeffs: Vec<Vec<C>>,
    vars: [String; 2],
}

pub type IPoly = Poly2<RatInterval>;
pub type QPoly = Poly2<PiQuad>;

fn labels(vars: [&str; 2]) -> [String; 2] {
    [vars[0].to_string(), vars[1].to_string()]
}

impl<C: Coeff> Poly2<C> {
    pub fn zero(vars: [&str; 2]) -> Self {
        Self::constant(C::zero(), vars)
    }

    pub fn constant(c: C, vars: [&str; 2]) -> Self {
        Self {
            coeffs: vec![vec![c]],
            vars: labels(vars),
        }
    }

    /// `c · x^i y^j`.
    pub fn monomial(c: C, i: usize, j: usize, vars: [&str; 2]) -> Self {
        let mut m = vec![vec![C::zero(); j + 1]; i + 1];
        m[i][j] = c;
        Self::from_matrix(m, vars)
    }

    /// The first (`idx = 0`) or second variable.
    pub fn var(idx: usize, vars: [&str; 2]) -> Self {
        assert!(idx < 2);
        if idx == 0 {
            Self::monomial(C::one(), 1, 0, vars)
        } else {
            Self::monomial(C::one(), 0, 1, vars)
        }
    }

    /// Builds from a (possibly ragged) matrix; missing entries are zero.
    pub fn from_matrix(m: Vec<Vec<C>>, vars: [&str; 2]) -> Self {
        Self::from_parts(m, labels(vars))
    }

    fn from_parts(m: Vec<Vec<C>>, vars: [String; 2]) -> Self {
        let ny = m.iter().map(Vec::len).max().unwrap_or(0).max(1);
        let mut coeffs: Vec<Vec<C>> = m
            .into_iter()
            .map(|mut row| {
                row.resize(ny, C::zero());
                row
            })
            .collect();
        if coeffs.is_empty() {
            coeffs.push(vec![C::zero(); ny]);
        }
        let mut p = Self { coeffs, vars };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().unwrap().iter().all(C::is_zero) {
            self.coeffs.pop();
        }
        loop {
            let ny = self.coeffs[0].len();
            if ny <= 1 || !self.coeffs.iter().all(|r| r[ny - 1].is_zero()) {
                break;
            }
            for r in &mut self.coeffs {
                r.pop();
            }
        }
    }

    pub fn vars(&self) -> [&str; 2] {
        [&self.vars[0], &self.vars[1]]
    }

    pub fn var_index(&self, name: &str) -> Result<usize, PolyError> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    /// Renames the variables without touching coefficients.
    pub fn relabel(&self, vars: [&str; 2]) -> Self {
        Self {
            coeffs: self.coeffs.clone(),
            vars: labels(vars),
        }
    }

    /// Swaps the variable order (transposes the coefficient matrix).
    pub fn swap_vars(&self) -> Self {
        let (nx, ny) = self.shape();
        let m = (0..ny)
            .map(|j| (0..nx).map(|i| self.coeffs[i][j].clone()).collect())
            .collect();
        Self::from_parts(m, [self.vars[1].clone(), self.vars[0].clone()])
    }

    /// `(rows, cols)` of the trimmed matrix.
    pub fn shape(&self) -> (usize, usize) {
        (self.coeffs.len(), self.coeffs[0].len())
    }

    pub fn degree_x(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn degree_y(&self) -> usize {
        self.coeffs[0].len() - 1
    }

    /// Total degree.
    pub fn degree(&self) -> usize {
        let mut d = 0;
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    d = d.max(i + j);
                }
            }
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(C::is_zero)
    }

    pub fn coeff(&self, i: usize, j: usize) -> C {
        self.coeffs
            .get(i)
            .and_then(|r| r.get(j))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// Row `i` holds the coefficients of `x^i` as a vector over powers of `y`.
    pub fn coefficient_matrix(&self) -> &Vec<Vec<C>> {
        &self.coeffs
    }

    /// Replaces one coefficient.
    pub fn with_coeff(&self, i: usize, j: usize, c: C) -> Self {
        let (nx, ny) = self.shape();
        let mut m = self.coeffs.clone();
        if i >= nx {
            m.resize(i + 1, vec![C::zero(); ny]);
        }
        if j >= ny {
            for r in &mut m {
                r.resize(j + 1, C::zero());
            }
        }
        m[i][j] = c;
        Self::from_parts(m, self.vars.clone())
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly2<D> {
        let m = self
            .coeffs
            .iter()
            .map(|r| r.iter().map(&f).collect())
            .collect();
        Poly2::from_parts(m, self.vars.clone())
    }

    fn check_labels(&self, o: &Self) -> Result<(), PolyError> {
        if self.vars == o.vars {
            Ok(())
        } else {
            Err(PolyError::LabelMismatch(self.vars.clone(), o.vars.clone()))
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, PolyError> {
        self.check_labels(o)?;
        Ok(self.zip(o, C::plus))
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self, PolyError> {
        self.check_labels(o)?;
        Ok(self.zip(o, C::minus))
    }

    fn zip(&self, o: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        let nx = self.coeffs.len().max(o.coeffs.len());
        let ny = self.coeffs[0].len().max(o.coeffs[0].len());
        let m = (0..nx)
            .map(|i| (0..ny).map(|j| f(&self.coeff(i, j), &o.coeff(i, j))).collect())
            .collect();
        Self::from_parts(m, self.vars.clone())
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, PolyError> {
        self.check_labels(o)?;
        let (ax, ay) = self.shape();
        let (bx, by) = o.shape();
        let mut m = vec![vec![C::zero(); ay + by - 1]; ax + bx - 1];
        for (i, ra) in self.coeffs.iter().enumerate() {
            for (j, ca) in ra.iter().enumerate() {
                if ca.is_zero() {
                    continue;
                }
                for (k, rb) in o.coeffs.iter().enumerate() {
                    for (l, cb) in rb.iter().enumerate() {
                        if cb.is_zero() {
                            continue;
                        }
                        m[i + k][j + l] = m[i + k][j + l].plus(&ca.times(cb));
                    }
                }
            }
        }
        Ok(Self::from_parts(m, self.vars.clone()))
    }

    pub fn scale(&self, s: &C) -> Self {
        self.map_coeffs(|c| c.times(s))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(C::one(), self.vars());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Value at a point given in the coefficient ring.
    pub fn eval(&self, x: &C, y: &C) -> C {
        let mut acc = C::zero();
        for row in self.coeffs.iter().rev() {
            let mut r = C::zero();
            for c in row.iter().rev() {
                r = r.times(y).plus(c);
            }
            acc = acc.times(x).plus(&r);
        }
        acc
    }

    /// Composition `p(px(x,y), py(x,y))`; `px`, `py` carry the output labels.
    pub fn compose(&self, px: &Self, py: &Self) -> Result<Self, PolyError> {
        px.check_labels(py)?;
        let vars = px.vars();
        let mut acc = Self::zero(vars);
        for row in self.coeffs.iter().rev() {
            let mut r = Self::zero(vars);
            for c in row.iter().rev() {
                r = (&r * py) + Self::constant(c.clone(), vars);
            }
            acc = (&acc * px) + r;
        }
        Ok(acc)
    }

    /// Applies `x → s·x + r` per variable (labels unchanged).
    pub fn substitute(&self, m: &AffineMap<C>) -> Self {
        let (nx, ny) = self.shape();
        let bx = binomial_rows::<C>(nx, &m.scale[0], &m.shift[0]);
        let by = binomial_rows::<C>(ny, &m.scale[1], &m.shift[1]);
        // rows first: t[k][j] = Σ_i c[i][j]·bx[i][k]
        let mut t = vec![vec![C::zero(); ny]; nx];
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for k in 0..=i {
                    if !bx[i][k].is_zero() {
                        t[k][j] = t[k][j].plus(&c.times(&bx[i][k]));
                    }
                }
            }
        }
        let mut out = vec![vec![C::zero(); ny]; nx];
        for (k, row) in t.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for l in 0..=j {
                    if !by[j][l].is_zero() {
                        out[k][l] = out[k][l].plus(&c.times(&by[j][l]));
                    }
                }
            }
        }
        Self::from_parts(out, self.vars.clone())
    }

    /// Substitutes a constant for one variable; the result no longer
    /// depends on it.
    pub fn fix_var(&self, idx: usize, v: &C) -> Self {
        let mut m = AffineMap::identity();
        m.scale[idx] = C::zero();
        m.shift[idx] = v.clone();
        self.substitute(&m)
    }
}

/// `b[i][k]` = coefficient of `x^k` in `(s·x + r)^i`. Powers are taken
/// directly, which is tighter than repeated multiplication for interval shifts.
fn binomial_rows<C: Coeff>(n: usize, s: &C, r: &C) -> Vec<Vec<C>> {
    (0..n)
        .map(|i| {
            let mut binom = BigRational::one();
            (0..=i)
                .map(|k| {
                    let e = C::from_rational(binom.clone())
                        .times(&s.power(k as u32))
                        .times(&r.power((i - k) as u32));
                    binom = &binom * BigRational::from_integer(((i - k) as i64).into())
                        / BigRational::from_integer(((k + 1) as i64).into());
                    e
                })
                .collect()
        })
        .collect()
}

impl QPoly {
    /// Interval enclosure of every coefficient under the context's π² and
    /// square-root enclosures.
    pub fn collapse(&self, consts: &Consts) -> IPoly {
        self.map_coeffs(|c| c.enclose(consts))
    }

    /// Exact value at a rational point.
    pub fn eval_rational(&self, x: &BigRational, y: &BigRational) -> PiQuad {
        self.eval(
            &PiQuad::from_rational(x.clone()),
            &PiQuad::from_rational(y.clone()),
        )
    }

    /// Rational constant coefficient helper for builders.
    pub fn rat(v: BigRational, vars: [&str; 2]) -> Self {
        Self::constant(PiQuad::from_rational(v), vars)
    }

    /// Exact surd constant.
    pub fn surd(v: Surd, vars: [&str; 2]) -> Self {
        Self::constant(PiQuad::constant(v), vars)
    }

    /// The constant `π²`.
    pub fn pi2(vars: [&str; 2]) -> Self {
        Self::constant(PiQuad::pi2(), vars)
    }
}

impl IPoly {
    /// Interval containing the value at a rational point.
    pub fn evaluate(&self, x: &BigRational, y: &BigRational) -> RatInterval {
        self.eval(&RatInterval::point(x.clone()), &RatInterval::point(y.clone()))
    }

    /// Outward-rounds every coefficient whose denominators exceed `bits`.
    pub fn cap_denominators(&self, bits: u32) -> IPoly {
        self.map_coeffs(|c| c.cap_denominators(bits))
    }
}

macro_rules! poly_ops {
    ($($tr:ident :: $m:ident => $checked:ident),*) => {$(
        impl<'a, C: Coeff> $tr<&'a Poly2<C>> for &'a Poly2<C> {
            type Output = Poly2<C>;
            /// Panics on mismatched labels; see the `checked_*` variants.
            fn $m(self, rhs: &'a Poly2<C>) -> Poly2<C> {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<C: Coeff> $tr<Poly2<C>> for Poly2<C> {
            type Output = Poly2<C>;
            fn $m(self, rhs: Poly2<C>) -> Poly2<C> { (&self).$m(&rhs) }
        }
        impl<'a, C: Coeff> $tr<&'a Poly2<C>> for Poly2<C> {
            type Output = Poly2<C>;
            fn $m(self, rhs: &'a Poly2<C>) -> Poly2<C> { (&self).$m(rhs) }
        }
        impl<'a, C: Coeff> $tr<Poly2<C>> for &'a Poly2<C> {
            type Output = Poly2<C>;
            fn $m(self, rhs: Poly2<C>) -> Poly2<C> { self.$m(&rhs) }
        }
    )*};
}

poly_ops!(Add::add => checked_add, Sub::sub => checked_sub, Mul::mul => checked_mul);

impl<C: Coeff> Neg for &Poly2<C> {
    type Output = Poly2<C>;
    fn neg(self) -> Poly2<C> {
        self.map_coeffs(C::negated)
    }
}

impl<C: Coeff> Neg for Poly2<C> {
    type Output = Poly2<C>;
    fn neg(self) -> Poly2<C> {
        -&self
    }
}

/// Per-variable affine change `x → s·x + r`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap<C: Coeff> {
    pub scale: [C; 2],
    pub shift: [C; 2],
}

impl<C: Coeff> AffineMap<C> {
    pub fn identity() -> Self {
        Self {
            scale: [C::one(), C::one()],
            shift: [C::zero(), C::zero()],
        }
    }

    pub fn new(scale: [C; 2], shift: [C; 2]) -> Result<Self, PolyError> {
        if scale.iter().any(C::is_zero) {
            return Err(PolyError::ZeroScale);
        }
        Ok(Self { scale, shift })
    }

    /// Changes only variable `idx`.
    pub fn single(idx: usize, s: C, r: C) -> Result<Self, PolyError> {
        let mut m = Self::identity();
        m.scale[idx] = s;
        m.shift[idx] = r;
        Self::new(m.scale, m.shift)
    }

    /// `x → x + r` on variable `idx`.
    pub fn shift(idx: usize, r: C) -> Self {
        Self::single(idx, C::one(), r).expect("unit scale")
    }

    /// `x → r − x` on variable `idx`.
    pub fn reflect(idx: usize, r: C) -> Self {
        Self::single(idx, C::one().negated(), r).expect("unit scale")
    }

    /// The map `x ↦ self(other(x))`: substituting `self` then `other` equals
    /// substituting the composite.
    pub fn then(&self, other: &Self) -> Self {
        let f = |k: usize| {
            (
                self.scale[k].times(&other.scale[k]),
                self.scale[k].times(&other.shift[k]).plus(&self.shift[k]),
            )
        };
        let (s0, r0) = f(0);
        let (s1, r1) = f(1);
        Self {
            scale: [s0, s1],
            shift: [r0, r1],
        }
    }

    /// Image of a point.
    pub fn apply(&self, x: &C, y: &C) -> (C, C) {
        (
            self.scale[0].times(x).plus(&self.shift[0]),
            self.scale[1].times(y).plus(&self.shift[1]),
        )
    }
}

impl AffineMap<PiQuad> {
    /// Enclosure of the map for use on collapsed polynomials.
    pub fn collapse(&self, consts: &Consts) -> AffineMap<RatInterval> {
        AffineMap {
            scale: [self.scale[0].enclose(consts), self.scale[1].enclose(consts)],
            shift: [self.shift[0].enclose(consts), self.shift[1].enclose(consts)],
        }
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for Poly2<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "{c}")?;
                if i > 0 {
                    write!(f, "*{}^{}", self.vars[0], i)?;
                }
                if j > 0 {
                    write!(f, "*{}^{}", self.vars[1], j)?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Shorthand for a rational `RatInterval` point, used by builders and tests.
pub fn ipt(v: BigRational) -> RatInterval {
    RatInterval::point(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::{int, pi2_enclosure, rat, sqrt_enclosure};
    use proptest::prelude::*;

    const XY: [&str; 2] = ["x", "y"];

    fn x() -> IPoly {
        IPoly::var(0, XY)
    }
    fn y() -> IPoly {
        IPoly::var(1, XY)
    }
    fn c(v: BigRational) -> IPoly {
        IPoly::constant(ipt(v), XY)
    }

    #[test]
    fn ring_examples() {
        let p = (x() + y()) * (x() - y());
        let q = x().pow(2) - y().pow(2);
        assert_eq!(p, q);
        assert_eq!(&p + &IPoly::zero(XY), p);
        let s = p.scale(&ipt(int(-1)));
        assert!((s + &p).is_zero());
    }

    #[test]
    fn label_mismatch_is_rejected() {
        let a = IPoly::var(0, ["a", "b"]);
        let b = IPoly::var(0, ["b", "a"]);
        assert!(matches!(a.checked_add(&b), Err(PolyError::LabelMismatch(..))));
    }

    #[test]
    fn coefficient_matrix_layout() {
        let xy = x() * y();
        assert_eq!(
            xy.coefficient_matrix(),
            &vec![vec![ipt(int(0)), ipt(int(0))], vec![ipt(int(0)), ipt(int(1))]]
        );
        let xm1 = x() - c(int(1));
        assert_eq!(xm1.coefficient_matrix(), &vec![vec![ipt(int(-1))], vec![ipt(int(1))]]);
        assert_eq!(c(int(5)).coefficient_matrix(), &vec![vec![ipt(int(5))]]);
    }

    #[test]
    fn evaluate_examples() {
        let p = x().pow(2) - y().pow(2);
        assert_eq!(p.evaluate(&int(2), &int(1)), ipt(int(3)));
        let t = pi2_enclosure(40);
        let tp = IPoly::monomial(t.clone(), 1, 0, XY);
        assert_eq!(tp.evaluate(&int(1), &int(0)), t);
        assert_eq!(IPoly::zero(XY).evaluate(&rat(3, 7), &int(9)), RatInterval::zero());
    }

    #[test]
    fn substitution_examples() {
        let p = x();
        let m = AffineMap::reflect(0, ipt(int(1)));
        let q = p.substitute(&m);
        assert_eq!(q, c(int(1)) - x());
        assert_eq!(q.evaluate(&rat(1, 4), &int(0)), ipt(rat(3, 4)));

        let s3 = sqrt_enclosure(&int(3), 60).unwrap();
        let b2 = IPoly::var(0, ["b", "a"]).pow(2);
        let r = b2.substitute(&AffineMap::reflect(0, s3.clone()));
        assert!(r.coeff(0, 0).contains(&int(3)));
        assert!(r.coeff(1, 0).lo() < &rat(-34641016, 10_000_000));
        assert!(r.coeff(1, 0).hi() > &rat(-34641017, 10_000_000));
        assert_eq!(r.coeff(2, 0), ipt(int(1)));
    }

    #[test]
    fn exact_surd_substitution_cancels() {
        // (√3 − b)² − 3 + 2√3 b − b² == 0 exactly
        let v = ["b", "a"];
        let s3 = PiQuad::constant(Surd::sqrt(int(3)).unwrap());
        let b = QPoly::var(0, v);
        let lhs = b.pow(2).substitute(&AffineMap::reflect(0, s3.clone()));
        let rhs = QPoly::rat(int(3), v) - QPoly::constant(s3 * PiQuad::from_rational(int(2)), v) * &b
            + b.pow(2);
        assert!((lhs - rhs).is_zero());
    }

    #[test]
    fn compose_matches_substitute() {
        let p = x().pow(3) * y() - c(rat(2, 3)) * y().pow(2) + x();
        let m = AffineMap::new([ipt(rat(1, 2)), ipt(int(-3))], [ipt(int(2)), ipt(rat(1, 5))]).unwrap();
        let px = x().scale(&ipt(rat(1, 2))) + c(int(2));
        let py = y().scale(&ipt(int(-3))) + c(rat(1, 5));
        assert_eq!(p.substitute(&m), p.compose(&px, &py).unwrap());
    }

    #[test]
    fn swap_transposes() {
        let p = x().pow(2) * y() + c(int(3)) * y();
        let s = p.swap_vars();
        assert_eq!(s.vars(), ["y", "x"]);
        assert_eq!(s.coeff(1, 2), ipt(int(1)));
        assert_eq!(s.coeff(1, 0), ipt(int(3)));
        assert_eq!(s.swap_vars(), p);
    }

    fn arb_rat() -> impl Strategy<Value = BigRational> {
        (-50i64..50, 1i64..12).prop_map(|(n, d)| rat(n, d))
    }

    fn arb_poly(deg: usize) -> impl Strategy<Value = IPoly> {
        proptest::collection::vec(proptest::collection::vec(arb_rat(), deg + 1), deg + 1)
            .prop_map(|m| IPoly::from_matrix(m.into_iter().map(|r| r.into_iter().map(ipt).collect()).collect(), XY))
    }

    fn arb_map() -> impl Strategy<Value = AffineMap<RatInterval>> {
        (arb_rat(), arb_rat(), arb_rat(), arb_rat()).prop_filter_map("nonzero scale", |(s0, s1, r0, r1)| {
            AffineMap::new([ipt(s0), ipt(s1)], [ipt(r0), ipt(r1)]).ok()
        })
    }

    proptest! {
        #[test]
        fn rational_substitution_round_trip(p in arb_poly(5), m in arb_map(), px in arb_rat(), py in arb_rat()) {
            let q = p.substitute(&m);
            let (mx, my) = m.apply(&ipt(px.clone()), &ipt(py.clone()));
            prop_assert_eq!(q.evaluate(&px, &py), p.eval(&mx, &my));
        }

        #[test]
        fn substitution_composes(p in arb_poly(3), m1 in arb_map(), m2 in arb_map(), px in arb_rat(), py in arb_rat()) {
            let two_step = p.substitute(&m1).substitute(&m2);
            let one_step = p.substitute(&m1.then(&m2));
            prop_assert_eq!(two_step.evaluate(&px, &py), one_step.evaluate(&px, &py));
        }

        #[test]
        fn ring_axioms_exact(p in arb_poly(2), q in arb_poly(2), r in arb_poly(2)) {
            prop_assert_eq!((&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&p * &(&q + &r), (&p * &q) + (&p * &r));
            prop_assert_eq!(&p + &q, &q + &p);
        }

        #[test]
        fn degree_is_additive(p in arb_poly(3), q in arb_poly(3)) {
            prop_assume!(!p.is_zero() && !q.is_zero());
            let m = &p * &q;
            prop_assert_eq!(m.degree_x(), p.degree_x() + q.degree_x());
            prop_assert_eq!(m.degree_y(), p.degree_y() + q.degree_y());
        }

        #[test]
        fn interval_substitution_contains_points(p in arb_poly(3), px in arb_rat(), py in arb_rat(), k in 0i64..=4) {
            let s3 = sqrt_enclosure(&int(3), 30).unwrap();
            let m = AffineMap::reflect(0, s3.clone());
            let q = p.substitute(&m);
            // any rational inside the √3 enclosure is a valid instance
            let r = s3.lo() + s3.width() * rat(k, 4);
            let exact = p.substitute(&AffineMap::reflect(0, ipt(r)));
            prop_assert!(exact.evaluate(&px, &py).is_subset_of(&q.evaluate(&px, &py)));
        }
    }
}

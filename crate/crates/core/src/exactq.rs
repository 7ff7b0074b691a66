//! Exact rational arithmetic, rational-endpoint intervals and self-certifying
//! enclosures of π², square roots and the exact scalars (`Surd`, `PiQuad`) the
//! proof catalog is written in.
//!
//! Nothing in this module rounds except [`RatInterval::round_outward`], which
//! always widens.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
pub use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("square root of negative value {0}")]
    NegativeSqrt(String),
    #[error("empty interval: lo {lo} > hi {hi}")]
    EmptyInterval { lo: String, hi: String },
    #[error("malformed rational {0:?}")]
    ParseRational(String),
}

/// `n/d` as a [`BigRational`].
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or an integer `"p"`. Decimals are rejected on purpose.
pub fn parse_rational(s: &str) -> Result<BigRational, ExactError> {
    let err = || ExactError::ParseRational(s.to_string());
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(n, d))
}

/// Canonical `"num/den"` text, used by every serialized artifact.
pub fn format_rational(v: &BigRational) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

pub fn to_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k as usize
}

fn floor_scaled(v: &BigRational, k: u32) -> BigInt {
    (v * BigRational::from_integer(pow2(k))).floor().to_integer()
}

fn ceil_scaled(v: &BigRational, k: u32) -> BigInt {
    (v * BigRational::from_integer(pow2(k))).ceil().to_integer()
}

/// Closed interval with rational endpoints. Arithmetic is exact, so every
/// operation is trivially outward-correct.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatInterval {
    lo: BigRational,
    hi: BigRational,
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self, ExactError> {
        if lo > hi {
            return Err(ExactError::EmptyInterval {
                lo: format_rational(&lo),
                hi: format_rational(&hi),
            });
        }
        Ok(Self { lo, hi })
    }

    /// Builds `[min(x,y), max(x,y)]`.
    pub fn spanning(x: BigRational, y: BigRational) -> Self {
        if x <= y {
            Self { lo: x, hi: y }
        } else {
            Self { lo: y, hi: x }
        }
    }

    pub fn point(v: BigRational) -> Self {
        Self {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn zero() -> Self {
        Self::point(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::point(BigRational::one())
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &RatInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn hull(&self, other: &RatInterval) -> RatInterval {
        Self {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Tight square: `[0, max²]` when the interval straddles zero.
    pub fn sqr(&self) -> RatInterval {
        let a = &self.lo * &self.lo;
        let b = &self.hi * &self.hi;
        if self.contains_zero() {
            Self {
                lo: BigRational::zero(),
                hi: a.max(b),
            }
        } else {
            Self::spanning(a, b)
        }
    }

    pub fn pow(&self, k: u32) -> RatInterval {
        if k == 0 {
            return Self::one();
        }
        if k % 2 == 0 {
            let h = self.pow(k / 2);
            return h.sqr();
        }
        if !self.lo.is_negative() || !self.hi.is_positive() {
            // monotone odd power
            return Self::spanning(pow_rat(&self.lo, k), pow_rat(&self.hi, k));
        }
        self * &self.pow(k - 1)
    }

    /// `1/self`, or `None` if the interval contains zero.
    pub fn recip(&self) -> Option<RatInterval> {
        if self.contains_zero() {
            return None;
        }
        Some(Self::spanning(self.hi.recip(), self.lo.recip()))
    }

    pub fn scale(&self, s: &BigRational) -> RatInterval {
        Self::spanning(&self.lo * s, &self.hi * s)
    }

    pub fn abs_max(&self) -> BigRational {
        self.lo.abs().max(self.hi.abs())
    }

    /// Widens the endpoints onto the dyadic grid `2^-bits`.
    pub fn round_outward(&self, bits: u32) -> RatInterval {
        let den = BigRational::from_integer(pow2(bits));
        Self {
            lo: BigRational::from_integer(floor_scaled(&self.lo, bits)) / &den,
            hi: BigRational::from_integer(ceil_scaled(&self.hi, bits)) / den,
        }
    }

    /// Rounds outward only when an endpoint denominator exceeds `bits` bits.
    pub fn cap_denominators(&self, bits: u32) -> RatInterval {
        let big = |v: &BigRational| v.denom().bits() > bits as u64;
        if big(&self.lo) || big(&self.hi) {
            self.round_outward(bits)
        } else {
            self.clone()
        }
    }

    pub fn mid_f64(&self) -> f64 {
        to_f64(&self.midpoint())
    }

    pub fn width_f64(&self) -> f64 {
        to_f64(&self.width())
    }
}

fn pow_rat(v: &BigRational, k: u32) -> BigRational {
    num_traits::pow(v.clone(), k as usize)
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            format_rational(&self.lo),
            format_rational(&self.hi)
        )
    }
}

impl From<BigRational> for RatInterval {
    fn from(v: BigRational) -> Self {
        Self::point(v)
    }
}

impl<'a> Add<&'a RatInterval> for &'a RatInterval {
    type Output = RatInterval;
    fn add(self, rhs: &'a RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl<'a> Sub<&'a RatInterval> for &'a RatInterval {
    type Output = RatInterval;
    fn sub(self, rhs: &'a RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl<'a> Mul<&'a RatInterval> for &'a RatInterval {
    type Output = RatInterval;
    fn mul(self, rhs: &'a RatInterval) -> RatInterval {
        if self.is_point() && rhs.is_point() {
            return RatInterval::point(&self.lo * &rhs.lo);
        }
        let p = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let mut lo = p[0].clone();
        let mut hi = p[0].clone();
        for v in &p[1..] {
            if v < &lo {
                lo = v.clone();
            }
            if v > &hi {
                hi = v.clone();
            }
        }
        RatInterval { lo, hi }
    }
}

impl Neg for &RatInterval {
    type Output = RatInterval;
    fn neg(self) -> RatInterval {
        RatInterval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident :: $m:ident),*) => {$(
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $m(self, rhs: &'a $t) -> $t { (&self).$m(rhs) }
        }
    )*};
}

forward_owned!(RatInterval, Add::add, Sub::sub, Mul::mul);

impl Neg for RatInterval {
    type Output = RatInterval;
    fn neg(self) -> RatInterval {
        -&self
    }
}

// ---------------------------------------------------------------------------
// Constant enclosures

/// Encloses `limit` on the dyadic grid `2^-bits`: `[f, f + 2^-bits]` with
/// `f = floor(limit·2^bits)/2^bits`. `bracket(n)` must return enclosures that
/// shrink to the (irrational) limit as `n` grows.
fn dyadic_enclosure(bits: u32, mut bracket: impl FnMut(usize) -> RatInterval) -> RatInterval {
    let mut n = 8usize;
    loop {
        let b = bracket(n);
        let f_lo = floor_scaled(b.lo(), bits);
        let f_hi = floor_scaled(b.hi(), bits);
        if f_lo == f_hi && ceil_scaled(b.hi(), bits) != f_hi {
            let den = BigRational::from_integer(pow2(bits));
            let lo = BigRational::from_integer(f_lo) / &den;
            let hi = &lo + den.recip();
            return RatInterval { lo, hi };
        }
        n *= 2;
    }
}

/// `arctan(1/m)` bracketed by two consecutive partial sums of its alternating
/// Taylor series (`terms` and `terms + 1` terms).
fn arctan_inv_bracket(m: i64, terms: usize) -> RatInterval {
    let m2 = BigInt::from(m * m);
    let mut pow = BigInt::from(m);
    let mut sum = BigRational::zero();
    let mut last = BigRational::zero();
    for k in 0..=terms {
        let term = BigRational::new(BigInt::one(), &pow * BigInt::from(2 * k as i64 + 1));
        last = sum.clone();
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        pow *= &m2;
    }
    RatInterval::spanning(last, sum)
}

/// Machin: π = 16·arctan(1/5) − 4·arctan(1/239).
fn pi_bracket(terms: usize) -> RatInterval {
    let a = arctan_inv_bracket(5, terms).scale(&int(16));
    let b = arctan_inv_bracket(239, terms).scale(&int(4));
    &a - &b
}

/// Enclosure of π of width `2^-bits`.
pub fn pi_enclosure(bits: u32) -> RatInterval {
    dyadic_enclosure(bits.max(8), pi_bracket)
}

/// Enclosure of π² of width `2^-bits` (`bits` below 8 are raised to 8).
///
/// Enclosures are nested: `pi2_enclosure(b2) ⊆ pi2_enclosure(b1)` for `b2 ≥ b1`.
pub fn pi2_enclosure(bits: u32) -> RatInterval {
    dyadic_enclosure(bits.max(8), |n| pi_bracket(n).sqr())
}

fn perfect_square(v: &BigInt) -> Option<BigInt> {
    if v.is_negative() {
        return None;
    }
    let r = v.sqrt();
    (&r * &r == *v).then_some(r)
}

/// Exact square root when `v` is the square of a rational.
pub fn rational_sqrt(v: &BigRational) -> Option<BigRational> {
    let n = perfect_square(v.numer())?;
    let d = perfect_square(v.denom())?;
    Some(BigRational::new(n, d))
}

/// Enclosure of `√v` of width at most `2^-bits`; a point when `v` is a
/// rational square.
pub fn sqrt_enclosure(v: &BigRational, bits: u32) -> Result<RatInterval, ExactError> {
    if v.is_negative() {
        return Err(ExactError::NegativeSqrt(format_rational(v)));
    }
    if let Some(r) = rational_sqrt(v) {
        return Ok(RatInterval::point(r));
    }
    // floor(√v·2^k) = isqrt(floor(v·4^k))
    let scaled = floor_scaled(v, 2 * bits);
    let f = scaled.sqrt();
    let den = BigRational::from_integer(pow2(bits));
    let lo = BigRational::from_integer(f) / &den;
    let hi = &lo + den.recip();
    Ok(RatInterval { lo, hi })
}

/// Exact range of `c0 + c1·t + c2·t²` over `t ∈ t_enc`, for interval
/// coefficients: the expression is affine in each coefficient, so the range
/// is attained at coefficient endpoints, and for fixed coefficients at the
/// endpoints of `t_enc` or at the interior vertex.
pub fn quad_range(c: [&RatInterval; 3], t_enc: &RatInterval) -> RatInterval {
    let pick = |x: &RatInterval| -> Vec<BigRational> {
        if x.is_point() {
            vec![x.lo.clone()]
        } else {
            vec![x.lo.clone(), x.hi.clone()]
        }
    };
    let mut lo: Option<BigRational> = None;
    let mut hi: Option<BigRational> = None;
    let mut push = |v: BigRational| {
        if lo.as_ref().is_none_or(|l| &v < l) {
            lo = Some(v.clone());
        }
        if hi.as_ref().is_none_or(|h| &v > h) {
            hi = Some(v);
        }
    };
    for c0 in pick(c[0]) {
        for c1 in pick(c[1]) {
            for c2 in pick(c[2]) {
                let eval = |t: &BigRational| &c0 + &c1 * t + &c2 * t * t;
                push(eval(&t_enc.lo));
                push(eval(&t_enc.hi));
                if !c2.is_zero() {
                    let v = -&c1 / (int(2) * &c2);
                    if t_enc.contains(&v) {
                        push(eval(&v));
                    }
                }
            }
        }
    }
    RatInterval {
        lo: lo.expect("nonempty"),
        hi: hi.expect("nonempty"),
    }
}

/// Exact range of a rational-coefficient [`PiQuad`] over `t_enc`.
pub fn piquad_range(q: &PiQuad, t_enc: &RatInterval) -> RatInterval {
    let c: Vec<RatInterval> = q
        .coeffs()
        .iter()
        .map(|s| {
            assert!(s.is_rational(), "piquad_range needs rational coefficients");
            RatInterval::point(s.rational().clone())
        })
        .collect();
    quad_range([&c[0], &c[1], &c[2]], t_enc)
}

/// Precision context shared by everything that collapses exact values to
/// intervals.
#[derive(Clone, Debug)]
pub struct Consts {
    bits: u32,
    pi2: RatInterval,
}

impl Consts {
    pub fn new(bits: u32) -> Self {
        Self {
            bits,
            pi2: pi2_enclosure(bits),
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn pi2(&self) -> &RatInterval {
        &self.pi2
    }

    pub fn sqrt(&self, v: &BigRational) -> Result<RatInterval, ExactError> {
        sqrt_enclosure(v, self.bits)
    }
}

// ---------------------------------------------------------------------------
// Exact scalars

/// `p + q·√d` for a positive rational radicand `d`. Values with different
/// radicands only combine when the radicands differ by a rational square
/// factor; anything else panics (the catalog never mixes fields).
#[derive(Clone, Debug)]
pub struct Surd {
    rational: BigRational,
    irrational: BigRational,
    radicand: BigRational,
}

impl Surd {
    pub fn from_rational(v: BigRational) -> Self {
        Self {
            rational: v,
            irrational: BigRational::zero(),
            radicand: BigRational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    /// `√d`, kept exact.
    pub fn sqrt(d: BigRational) -> Result<Self, ExactError> {
        if d.is_negative() {
            return Err(ExactError::NegativeSqrt(format_rational(&d)));
        }
        if let Some(r) = rational_sqrt(&d) {
            return Ok(Self::from_rational(r));
        }
        Ok(Self {
            rational: BigRational::zero(),
            irrational: BigRational::one(),
            radicand: d,
        })
    }

    pub fn new(p: BigRational, q: BigRational, d: BigRational) -> Result<Self, ExactError> {
        let s = Self::sqrt(d)?;
        Ok(&Self::from_rational(p) + &(&s * &Self::from_rational(q)))
    }

    pub fn rational(&self) -> &BigRational {
        &self.rational
    }

    pub fn irrational(&self) -> &BigRational {
        &self.irrational
    }

    pub fn radicand(&self) -> &BigRational {
        &self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.irrational.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.irrational.is_zero()
    }

    fn canonical(mut self) -> Self {
        if self.irrational.is_zero() {
            self.radicand = BigRational::zero();
        }
        self
    }

    /// Rewrites `other`'s irrational part over `self`'s radicand.
    fn aligned(&self, other: &Surd) -> (BigRational, BigRational) {
        if other.irrational.is_zero() || self.irrational.is_zero() || self.radicand == other.radicand {
            return (other.irrational.clone(), other.radicand.clone());
        }
        let ratio = &other.radicand / &self.radicand;
        match rational_sqrt(&ratio) {
            Some(r) => (&other.irrational * r, self.radicand.clone()),
            None => panic!(
                "cannot combine √{} and √{}",
                format_rational(&self.radicand),
                format_rational(&other.radicand)
            ),
        }
    }

    fn radicand_of(a: &Surd, b_rad: BigRational) -> BigRational {
        if a.irrational.is_zero() {
            b_rad
        } else {
            a.radicand.clone()
        }
    }

    /// Exact sign.
    pub fn signum(&self) -> i32 {
        let sp = sign_of(&self.rational);
        let sq = sign_of(&self.irrational);
        if sq == 0 {
            return sp;
        }
        if sp == 0 || sp == sq {
            return if sp == 0 { sq } else { sp };
        }
        // opposite signs: compare p² with q²·d
        let p2 = &self.rational * &self.rational;
        let q2d = &self.irrational * &self.irrational * &self.radicand;
        match p2.cmp(&q2d) {
            std::cmp::Ordering::Greater => sp,
            std::cmp::Ordering::Less => sq,
            std::cmp::Ordering::Equal => 0,
        }
    }

    pub fn enclose(&self, bits: u32) -> RatInterval {
        let p = RatInterval::point(self.rational.clone());
        if self.irrational.is_zero() {
            return p;
        }
        let s = sqrt_enclosure(&self.radicand, bits).expect("radicand is positive");
        &p + &s.scale(&self.irrational)
    }
}

fn sign_of(v: &BigRational) -> i32 {
    match v.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

impl PartialEq for Surd {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl<'a> Add<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn add(self, rhs: &'a Surd) -> Surd {
        let (q, d) = self.aligned(rhs);
        Surd {
            rational: &self.rational + &rhs.rational,
            irrational: &self.irrational + q,
            radicand: Surd::radicand_of(self, d),
        }
        .canonical()
    }
}

impl<'a> Sub<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn sub(self, rhs: &'a Surd) -> Surd {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn mul(self, rhs: &'a Surd) -> Surd {
        let (q, d) = self.aligned(rhs);
        let d = Surd::radicand_of(self, d);
        Surd {
            rational: &self.rational * &rhs.rational + &self.irrational * &q * &d,
            irrational: &self.rational * &q + &self.irrational * &rhs.rational,
            radicand: d,
        }
        .canonical()
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd {
            rational: -&self.rational,
            irrational: -&self.irrational,
            radicand: self.radicand.clone(),
        }
    }
}

forward_owned!(Surd, Add::add, Sub::sub, Mul::mul);

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        -&self
    }
}

/// `c0 + c1·t + c2·t²` with `t = π²`, coefficients exact in `ℚ(√d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiQuad {
    c: [Surd; 3],
}

impl PiQuad {
    pub fn new(c0: Surd, c1: Surd, c2: Surd) -> Self {
        Self { c: [c0, c1, c2] }
    }

    /// Rational-coefficient constructor.
    pub fn rational(c0: BigRational, c1: BigRational, c2: BigRational) -> Self {
        Self::new(
            Surd::from_rational(c0),
            Surd::from_rational(c1),
            Surd::from_rational(c2),
        )
    }

    pub fn constant(v: Surd) -> Self {
        Self::new(v, Surd::zero(), Surd::zero())
    }

    pub fn from_rational(v: BigRational) -> Self {
        Self::constant(Surd::from_rational(v))
    }

    /// `π²`.
    pub fn pi2() -> Self {
        Self::new(Surd::zero(), Surd::one(), Surd::zero())
    }

    pub fn zero() -> Self {
        Self::constant(Surd::zero())
    }

    pub fn one() -> Self {
        Self::constant(Surd::one())
    }

    pub fn coeffs(&self) -> &[Surd; 3] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Surd::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.c.iter().all(Surd::is_rational)
    }

    /// Degree in `t`.
    pub fn degree(&self) -> usize {
        (0..3).rev().find(|&k| !self.c[k].is_zero()).unwrap_or(0)
    }

    /// Interval enclosure over the context's π² enclosure.
    pub fn enclose(&self, consts: &Consts) -> RatInterval {
        if self.is_zero() {
            return RatInterval::zero();
        }
        if self.is_rational() {
            return piquad_range(self, consts.pi2());
        }
        let c: Vec<RatInterval> = self.c.iter().map(|s| s.enclose(consts.bits())).collect();
        quad_range([&c[0], &c[1], &c[2]], consts.pi2())
    }
}

impl<'a> Add<&'a PiQuad> for &'a PiQuad {
    type Output = PiQuad;
    fn add(self, rhs: &'a PiQuad) -> PiQuad {
        PiQuad {
            c: [
                &self.c[0] + &rhs.c[0],
                &self.c[1] + &rhs.c[1],
                &self.c[2] + &rhs.c[2],
            ],
        }
    }
}

impl<'a> Sub<&'a PiQuad> for &'a PiQuad {
    type Output = PiQuad;
    fn sub(self, rhs: &'a PiQuad) -> PiQuad {
        PiQuad {
            c: [
                &self.c[0] - &rhs.c[0],
                &self.c[1] - &rhs.c[1],
                &self.c[2] - &rhs.c[2],
            ],
        }
    }
}

impl<'a> Mul<&'a PiQuad> for &'a PiQuad {
    type Output = PiQuad;
    /// Panics if the product has degree above 2 in `π²`.
    fn mul(self, rhs: &'a PiQuad) -> PiQuad {
        let mut out = [Surd::zero(), Surd::zero(), Surd::zero()];
        for i in 0..3 {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..3 {
                if rhs.c[j].is_zero() {
                    continue;
                }
                assert!(i + j <= 2, "PiQuad product exceeds degree 2 in pi^2");
                out[i + j] = &out[i + j] + &(&self.c[i] * &rhs.c[j]);
            }
        }
        PiQuad { c: out }
    }
}

impl Neg for &PiQuad {
    type Output = PiQuad;
    fn neg(self) -> PiQuad {
        PiQuad {
            c: [-&self.c[0], -&self.c[1], -&self.c[2]],
        }
    }
}

forward_owned!(PiQuad, Add::add, Sub::sub, Mul::mul);

impl Neg for PiQuad {
    type Output = PiQuad;
    fn neg(self) -> PiQuad {
        -&self
    }
}

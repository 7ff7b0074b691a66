//! Nonpositivity certificates for bivariate polynomials on rectangles.
//!
//! The leaf test is the coefficient fold: with rows of the coefficient matrix
//! taken from the highest `x`-degree down, the accumulator is
//! `new = max(acc, 0)·dx + row` followed by the scan
//! `out_k = min(out_{k-1}, 0)/dy + new_k`. If the maximum of the final vector
//! is `≤ 0` the polynomial is nonpositive on `[0,dx]×[0,dy]`. Rectangles not
//! at the origin are translated (or reflected, for the other corners) first.

use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::join;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactq::{format_rational, int, parse_rational, BigRational, RatInterval};
use crate::poly::{AffineMap, Coeff, IPoly, Poly2, PolyError};

pub const FORMAT: &str = "hotspots-certificate/1";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertError {
    #[error("rectangle has zero or negative area")]
    ZeroArea,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("tactic rejected: {0}")]
    Tactic(String),
    #[error("parameter degree {0} exceeds 1")]
    NonLinearParam(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
        }
    }
}

/// Corner of a rectangle mapped to the origin before folding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    LowerLeft,
    LowerRight,
    UpperLeft,
    UpperRight,
}

impl Anchor {
    pub const ALL: [Anchor; 4] = [
        Anchor::LowerLeft,
        Anchor::LowerRight,
        Anchor::UpperLeft,
        Anchor::UpperRight,
    ];

    fn flips(self) -> (bool, bool) {
        match self {
            Anchor::LowerLeft => (false, false),
            Anchor::LowerRight => (true, false),
            Anchor::UpperLeft => (false, true),
            Anchor::UpperRight => (true, true),
        }
    }
}

/// `[x0, x0+dx] × [y0, y0+dy]`. Corners may be enclosures of irrational
/// values; the widths are rational (callers pass an upper bound for an
/// irrational width, which only enlarges the claim).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rect {
    pub x0: RatInterval,
    pub y0: RatInterval,
    pub dx: BigRational,
    pub dy: BigRational,
}

impl Rect {
    pub fn new(x0: RatInterval, y0: RatInterval, dx: BigRational, dy: BigRational) -> Result<Self, CertError> {
        if !dx.is_positive() || !dy.is_positive() {
            return Err(CertError::ZeroArea);
        }
        Ok(Self { x0, y0, dx, dy })
    }

    /// Rational box `[x_lo, x_hi] × [y_lo, y_hi]`.
    pub fn from_bounds(
        x_lo: BigRational,
        x_hi: BigRational,
        y_lo: BigRational,
        y_hi: BigRational,
    ) -> Result<Self, CertError> {
        let dx = &x_hi - &x_lo;
        let dy = &y_hi - &y_lo;
        Self::new(RatInterval::point(x_lo), RatInterval::point(y_lo), dx, dy)
    }

    /// `[0,dx] × [0,dy]`.
    pub fn origin(dx: BigRational, dy: BigRational) -> Result<Self, CertError> {
        Self::new(RatInterval::zero(), RatInterval::zero(), dx, dy)
    }

    /// Univariate interval `[x0, x0+dx]` (the second side is a unit dummy).
    pub fn interval(x0: BigRational, dx: BigRational) -> Result<Self, CertError> {
        Self::new(RatInterval::point(x0), RatInterval::zero(), dx, BigRational::one())
    }

    pub fn side(&self, axis: Axis) -> &BigRational {
        match axis {
            Axis::X => &self.dx,
            Axis::Y => &self.dy,
        }
    }

    pub fn corner(&self, axis: Axis) -> &RatInterval {
        match axis {
            Axis::X => &self.x0,
            Axis::Y => &self.y0,
        }
    }

    /// Splits at offset `at` (relative to the lower corner) along `axis`.
    pub fn split(&self, axis: Axis, at: &BigRational) -> (Rect, Rect) {
        let shift = |iv: &RatInterval| iv + &RatInterval::point(at.clone());
        match axis {
            Axis::X => (
                Rect { dx: at.clone(), ..self.clone() },
                Rect {
                    x0: shift(&self.x0),
                    dx: &self.dx - at,
                    ..self.clone()
                },
            ),
            Axis::Y => (
                Rect { dy: at.clone(), ..self.clone() },
                Rect {
                    y0: shift(&self.y0),
                    dy: &self.dy - at,
                    ..self.clone()
                },
            ),
        }
    }

    /// Affine map sending the origin-anchored box `[0,dx]×[0,dy]` onto this
    /// rectangle with `anchor` at the origin.
    pub fn anchor_map(&self, anchor: Anchor) -> AffineMap<RatInterval> {
        let (fx, fy) = anchor.flips();
        let one = RatInterval::one();
        let part = |flip: bool, c: &RatInterval, d: &BigRational| {
            if flip {
                (-&one, c + &RatInterval::point(d.clone()))
            } else {
                (one.clone(), c.clone())
            }
        };
        let (sx, rx) = part(fx, &self.x0, &self.dx);
        let (sy, ry) = part(fy, &self.y0, &self.dy);
        AffineMap {
            scale: [sx, sy],
            shift: [rx, ry],
        }
    }

    /// `true` when every point of the rectangle has nonnegative coordinates.
    pub fn in_first_quadrant(&self) -> bool {
        !self.x0.lo().is_negative() && !self.y0.lo().is_negative()
    }

    /// Rational point `(x0.lo + u·dx, y0.lo + v·dy)` for `u, v ∈ [0,1]`;
    /// only meaningful for rational corners.
    pub fn point_at(&self, u: &BigRational, v: &BigRational) -> (BigRational, BigRational) {
        (self.x0.lo() + u * &self.dx, self.y0.lo() + v * &self.dy)
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}+[0,{}] x {}+[0,{}]",
            self.x0,
            format_rational(&self.dx),
            self.y0,
            format_rational(&self.dy)
        )
    }
}

// ---------------------------------------------------------------------------
// Fold bound

/// Fold over a matrix of rational upper coefficients.
pub(crate) fn fold_matrix(m: &[Vec<BigRational>], dx: &BigRational, dy: &BigRational) -> BigRational {
    let ny = m[0].len();
    let mut acc = vec![BigRational::zero(); ny];
    for row in m.iter().rev() {
        let mut carry = BigRational::zero();
        for k in 0..ny {
            let new = if acc[k].is_positive() {
                &acc[k] * dx + &row[k]
            } else {
                row[k].clone()
            };
            carry = if carry.is_negative() { carry / dy + new } else { new };
            acc[k] = carry.clone();
        }
    }
    acc.into_iter().max().expect("nonempty row")
}

/// The fold over the upper (`hi`) and lower (`lo`) coefficient endpoints.
/// The fold is monotone in every coefficient, so `hi` is the bound that
/// matters: `hi ≤ 0` certifies `p ≤ 0` on `[0,dx]×[0,dy]`.
pub fn fold_bound(p: &IPoly, dx: &BigRational, dy: &BigRational) -> Result<RatInterval, CertError> {
    if !dx.is_positive() || !dy.is_positive() {
        return Err(CertError::ZeroArea);
    }
    let m = p.coefficient_matrix();
    let pick = |f: fn(&RatInterval) -> &BigRational| -> Vec<Vec<BigRational>> {
        m.iter().map(|r| r.iter().map(|c| f(c).clone()).collect()).collect()
    };
    let hi = fold_matrix(&pick(RatInterval::hi), dx, dy);
    let lo = fold_matrix(&pick(RatInterval::lo), dx, dy);
    Ok(RatInterval::spanning(lo, hi))
}

/// The polynomial seen by the fold at one leaf.
pub fn leaf_poly(p: &IPoly, rect: &Rect, anchor: Anchor, cap_bits: u32) -> IPoly {
    p.substitute(&rect.anchor_map(anchor)).cap_denominators(cap_bits)
}

// ---------------------------------------------------------------------------
// Certificates

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    /// Fold bound `≤ 0` with `anchor` moved to the origin.
    Fold {
        rect: Rect,
        anchor: Anchor,
        bound: RatInterval,
    },
    /// Constraint `h` is strictly positive on the whole rectangle (fold of
    /// `−h` is `< 0`), so the rectangle lies outside the region of interest.
    Excluded {
        rect: Rect,
        constraint: usize,
        bound: RatInterval,
    },
    Split {
        rect: Rect,
        axis: Axis,
        at: BigRational,
        children: Vec<Node>,
    },
    /// Polynomial replaced by a pointwise larger one; `child` certifies the
    /// replacement on the same rectangle.
    Tactic {
        rect: Rect,
        step: TacticStep,
        child: Box<Node>,
    },
    /// Depth exhausted; best bound found.
    Failure { rect: Rect, bound: RatInterval },
}

impl Node {
    pub fn rect(&self) -> &Rect {
        match self {
            Node::Fold { rect, .. }
            | Node::Excluded { rect, .. }
            | Node::Split { rect, .. }
            | Node::Tactic { rect, .. }
            | Node::Failure { rect, .. } => rect,
        }
    }

    /// Fold and exclusion leaves (tactic side certificates not included).
    pub fn leaf_count(&self) -> usize {
        match self {
            Node::Fold { .. } | Node::Excluded { .. } | Node::Failure { .. } => 1,
            Node::Split { children, .. } => children.iter().map(Node::leaf_count).sum(),
            Node::Tactic { child, .. } => child.leaf_count(),
        }
    }

    pub fn is_certified(&self) -> bool {
        match self {
            Node::Fold { .. } | Node::Excluded { .. } => true,
            Node::Failure { .. } => false,
            Node::Split { children, .. } => children.iter().all(Node::is_certified),
            Node::Tactic { step, child, .. } => {
                step.side.as_ref().is_none_or(|c| c.is_certified()) && child.is_certified()
            }
        }
    }

    /// Worst failing leaf, by upper bound.
    pub fn worst_failure(&self) -> Option<(&Rect, &RatInterval)> {
        match self {
            Node::Failure { rect, bound } => Some((rect, bound)),
            Node::Fold { .. } | Node::Excluded { .. } => None,
            Node::Split { children, .. } => children
                .iter()
                .filter_map(Node::worst_failure)
                .max_by(|a, b| a.1.hi().cmp(b.1.hi())),
            Node::Tactic { child, .. } => child.worst_failure(),
        }
    }

    /// Mutable access to every leaf bound, in tree order.
    pub fn leaf_bounds_mut(&mut self) -> Vec<&mut RatInterval> {
        match self {
            Node::Fold { bound, .. } | Node::Excluded { bound, .. } | Node::Failure { bound, .. } => {
                vec![bound]
            }
            Node::Split { children, .. } => children.iter_mut().flat_map(Node::leaf_bounds_mut).collect(),
            Node::Tactic { child, .. } => child.leaf_bounds_mut(),
        }
    }
}

/// A claim `poly ≤ 0` on the root rectangle (minus excluded parts), with
/// the proof tree.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub cap_bits: u32,
    pub poly: IPoly,
    /// Region of interest is `{h ≤ 0 for every h}`.
    pub constraints: Vec<IPoly>,
    pub root: Node,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.root.is_certified()
    }

    pub fn leaf_count(&self) -> usize {
        self.root.leaf_count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub max_depth: u32,
    pub cap_bits: u32,
    /// Corners tried in order at every leaf.
    pub anchors: Vec<Anchor>,
    /// Preferred split points (absolute coordinates); used before bisection
    /// when they fall strictly inside a failing leaf.
    pub hints: Vec<(Axis, BigRational)>,
    pub constraints: Vec<IPoly>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            max_depth: 12,
            cap_bits: 192,
            anchors: Anchor::ALL.to_vec(),
            hints: Vec::new(),
            constraints: Vec::new(),
        }
    }
}

impl CertifyOptions {
    pub fn with_depth(mut self, d: u32) -> Self {
        self.max_depth = d;
        self
    }

    pub fn with_hints(mut self, h: Vec<(Axis, BigRational)>) -> Self {
        self.hints = h;
        self
    }

    pub fn with_constraints(mut self, c: Vec<IPoly>) -> Self {
        self.constraints = c;
        self
    }
}

/// Outcome of [`certify_nonpos`] when the depth budget runs out.
#[derive(Clone, Debug)]
pub struct Unknown {
    pub worst_rect: Rect,
    pub worst_bound: RatInterval,
    pub attempt: Certificate,
}

/// Tries every anchor, then splits (hint first, else the longer side).
fn certify_node(p: &IPoly, rect: &Rect, depth: u32, opts: &CertifyOptions) -> Node {
    for (idx, h) in opts.constraints.iter().enumerate() {
        let lp = leaf_poly(&-h, rect, Anchor::LowerLeft, opts.cap_bits);
        let bound = fold_bound(&lp, &rect.dx, &rect.dy).expect("positive sides");
        if bound.hi().is_negative() {
            return Node::Excluded {
                rect: rect.clone(),
                constraint: idx,
                bound,
            };
        }
    }
    let mut best: Option<RatInterval> = None;
    for &anchor in &opts.anchors {
        let lp = leaf_poly(p, rect, anchor, opts.cap_bits);
        let bound = fold_bound(&lp, &rect.dx, &rect.dy).expect("positive sides");
        if !bound.hi().is_positive() {
            return Node::Fold {
                rect: rect.clone(),
                anchor,
                bound,
            };
        }
        if best.as_ref().is_none_or(|b| bound.hi() < b.hi()) {
            best = Some(bound);
        }
    }
    let bound = best.expect("at least one anchor");
    if depth == 0 {
        return Node::Failure {
            rect: rect.clone(),
            bound,
        };
    }
    let (axis, at) = choose_split(rect, opts);
    let (r1, r2) = rect.split(axis, &at);
    let (c1, c2) = join(
        || certify_node(p, &r1, depth - 1, opts),
        || certify_node(p, &r2, depth - 1, opts),
    );
    Node::Split {
        rect: rect.clone(),
        axis,
        at,
        children: vec![c1, c2],
    }
}

fn choose_split(rect: &Rect, opts: &CertifyOptions) -> (Axis, BigRational) {
    for (axis, h) in &opts.hints {
        let c = rect.corner(*axis);
        if !c.is_point() {
            continue;
        }
        let off = h - c.lo();
        if off.is_positive() && &off < rect.side(*axis) {
            return (*axis, off);
        }
    }
    let axis = if rect.dx >= rect.dy { Axis::X } else { Axis::Y };
    (axis, rect.side(axis) / int(2))
}

/// Certifies `p ≤ 0` on `rect` (restricted to the constraint region), with
/// up to `opts.max_depth` levels of subdivision.
pub fn certify_nonpos(p: &IPoly, rect: &Rect, opts: &CertifyOptions) -> Result<Certificate, Unknown> {
    let root = certify_node(p, rect, opts.max_depth, opts);
    let cert = Certificate {
        cap_bits: opts.cap_bits,
        poly: p.clone(),
        constraints: opts.constraints.clone(),
        root,
    };
    match cert.root.worst_failure() {
        None => Ok(cert),
        Some((r, b)) => Err(Unknown {
            worst_rect: r.clone(),
            worst_bound: b.clone(),
            attempt: cert.clone(),
        }),
    }
}

// ---------------------------------------------------------------------------
// Tactics

#[derive(Clone, Debug, PartialEq)]
pub enum TacticKind {
    /// `var^k` replaced by `q`, valid because `var^k ≤ q` on the rectangle
    /// and every coefficient of `var^k·other^j` is nonnegative.
    ReplacePower { var: usize, k: u32, q: IPoly },
    /// Terms `var^k·other^j` with nonpositive coefficients removed.
    DropTerm { var: usize, k: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TacticStep {
    pub kind: TacticKind,
    /// Certificate of `var^k − q ≤ 0` on the rectangle (replacements only).
    pub side: Option<Box<Certificate>>,
}

/// Coefficients `c[k][j]` (or `c[j][k]` when `var = 1`), as a column over `j`.
fn power_column(p: &IPoly, var: usize, k: u32) -> Vec<RatInterval> {
    let (nx, ny) = p.shape();
    let k = k as usize;
    if var == 0 {
        (0..ny).map(|j| p.coeff(k, j)).collect()
    } else {
        (0..nx).map(|i| p.coeff(i, k)).collect()
    }
}

fn without_power(p: &IPoly, var: usize, k: u32) -> IPoly {
    let mut out = p.clone();
    for (j, _) in power_column(p, var, k).iter().enumerate() {
        let (i, jj) = if var == 0 { (k as usize, j) } else { (j, k as usize) };
        out = out.with_coeff(i, jj, RatInterval::zero());
    }
    out
}

/// Applies a replacement without checking the side condition.
pub(crate) fn apply_replace(p: &IPoly, var: usize, k: u32, q: &IPoly) -> Result<IPoly, CertError> {
    let col = power_column(p, var, k);
    if col.iter().any(|c| c.lo().is_negative()) {
        return Err(CertError::Tactic(format!(
            "coefficient of {}^{k} is not nonnegative",
            p.vars()[var]
        )));
    }
    let vars = p.vars();
    let mut out = without_power(p, var, k);
    for (j, c) in col.into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mono = if var == 0 {
            IPoly::monomial(c, 0, j, vars)
        } else {
            IPoly::monomial(c, j, 0, vars)
        };
        out = out.checked_add(&q.checked_mul(&mono)?)?;
    }
    Ok(out)
}

pub(crate) fn apply_drop(p: &IPoly, var: usize, k: u32) -> Result<IPoly, CertError> {
    let col = power_column(p, var, k);
    if col.iter().any(|c| c.hi().is_positive()) {
        return Err(CertError::Tactic(format!(
            "coefficient of {}^{k} is not nonpositive",
            p.vars()[var]
        )));
    }
    Ok(without_power(p, var, k))
}

/// `var^k − q`, the side condition of a replacement.
pub fn replacement_side(p: &IPoly, var: usize, k: u32, q: &IPoly) -> Result<IPoly, CertError> {
    let vars = p.vars();
    let mono = if var == 0 {
        IPoly::monomial(RatInterval::one(), k as usize, 0, vars)
    } else {
        IPoly::monomial(RatInterval::one(), 0, k as usize, vars)
    };
    Ok(mono.checked_sub(q)?)
}

/// Replaces `var^k` by `q` after certifying `var^k ≤ q` on `domain`.
/// The result dominates `p` pointwise on `domain`.
pub fn tactic_replace_power(
    p: &IPoly,
    var: usize,
    k: u32,
    q: &IPoly,
    domain: &Rect,
    opts: &CertifyOptions,
) -> Result<(IPoly, TacticStep), CertError> {
    if !domain.in_first_quadrant() {
        return Err(CertError::Tactic("domain must have nonnegative coordinates".into()));
    }
    let out = apply_replace(p, var, k, q)?;
    let side = replacement_side(p, var, k, q)?;
    let cert = certify_nonpos(&side, domain, &CertifyOptions {
        constraints: Vec::new(),
        ..opts.clone()
    })
    .map_err(|u| {
        CertError::Tactic(format!(
            "side condition not certified (worst bound {} on {})",
            u.worst_bound, u.worst_rect
        ))
    })?;
    Ok((
        out,
        TacticStep {
            kind: TacticKind::ReplacePower {
                var,
                k,
                q: q.clone(),
            },
            side: Some(Box::new(cert)),
        },
    ))
}

/// Removes the `var^k` terms when their coefficients are nonpositive; valid
/// on any domain with nonnegative coordinates.
pub fn tactic_drop_term(p: &IPoly, var: usize, k: u32, domain: &Rect) -> Result<(IPoly, TacticStep), CertError> {
    if !domain.in_first_quadrant() {
        return Err(CertError::Tactic("domain must have nonnegative coordinates".into()));
    }
    let out = apply_drop(p, var, k)?;
    Ok((
        out,
        TacticStep {
            kind: TacticKind::DropTerm { var, k },
            side: None,
        },
    ))
}

/// Wraps a chain of tactic steps around the certificate of the final
/// polynomial.
pub fn chain_certificate(p: &IPoly, domain: &Rect, steps: Vec<TacticStep>, last: Certificate) -> Certificate {
    let mut node = last.root;
    for step in steps.into_iter().rev() {
        node = Node::Tactic {
            rect: domain.clone(),
            step,
            child: Box::new(node),
        };
    }
    Certificate {
        cap_bits: last.cap_bits,
        poly: p.clone(),
        constraints: last.constraints,
        root: node,
    }
}

// ---------------------------------------------------------------------------
// Linear parameters

/// `Σ g^k · terms[k]` for an extra parameter `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamPoly<C: Coeff> {
    pub terms: Vec<Poly2<C>>,
}

impl<C: Coeff> ParamPoly<C> {
    pub fn new(terms: Vec<Poly2<C>>) -> Self {
        Self { terms }
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().rposition(|t| !t.is_zero()).unwrap_or(0)
    }

    pub fn at(&self, g: &C) -> Poly2<C> {
        let vars = self.terms[0].vars();
        let mut acc = Poly2::zero(vars);
        for t in self.terms.iter().rev() {
            acc = acc.scale(g) + t;
        }
        acc
    }
}

/// For `p` affine in `g`, `p ≤ 0` on `[g_lo, g_hi]` iff it holds at both ends.
pub fn eliminate_linear_param<C: Coeff>(
    p: &ParamPoly<C>,
    g_lo: &C,
    g_hi: &C,
) -> Result<(Poly2<C>, Poly2<C>), CertError> {
    let d = p.degree();
    if d > 1 {
        return Err(CertError::NonLinearParam(d));
    }
    Ok((p.at(g_lo), p.at(g_hi)))
}

// ---------------------------------------------------------------------------
// Serialization

mod wire {
    use super::*;

    pub fn rat_to(v: &BigRational) -> String {
        format_rational(v)
    }

    pub fn rat_from<E: serde::de::Error>(s: &str) -> Result<BigRational, E> {
        parse_rational(s).map_err(E::custom)
    }

    #[derive(Serialize, Deserialize)]
    pub struct Iv(pub String, pub String);

    impl Iv {
        pub fn of(v: &RatInterval) -> Self {
            Iv(rat_to(v.lo()), rat_to(v.hi()))
        }
        pub fn get<E: serde::de::Error>(&self) -> Result<RatInterval, E> {
            RatInterval::new(rat_from(&self.0)?, rat_from(&self.1)?).map_err(E::custom)
        }
    }

    #[derive(Serialize, Deserialize)]
    pub struct PolyW {
        pub vars: [String; 2],
        pub coeffs: Vec<Vec<Iv>>,
    }

    impl PolyW {
        pub fn of(p: &IPoly) -> Self {
            let v = p.vars();
            PolyW {
                vars: [v[0].to_string(), v[1].to_string()],
                coeffs: p
                    .coefficient_matrix()
                    .iter()
                    .map(|r| r.iter().map(Iv::of).collect())
                    .collect(),
            }
        }
        pub fn get<E: serde::de::Error>(&self) -> Result<IPoly, E> {
            let m = self
                .coeffs
                .iter()
                .map(|r| r.iter().map(Iv::get).collect::<Result<Vec<_>, E>>())
                .collect::<Result<Vec<_>, E>>()?;
            Ok(IPoly::from_matrix(m, [&self.vars[0], &self.vars[1]]))
        }
    }

    #[derive(Serialize, Deserialize)]
    pub struct RectW {
        pub x0: Iv,
        pub y0: Iv,
        pub dx: String,
        pub dy: String,
    }

    impl RectW {
        pub fn of(r: &Rect) -> Self {
            RectW {
                x0: Iv::of(&r.x0),
                y0: Iv::of(&r.y0),
                dx: rat_to(&r.dx),
                dy: rat_to(&r.dy),
            }
        }
        pub fn get<E: serde::de::Error>(&self) -> Result<Rect, E> {
            Rect::new(self.x0.get()?, self.y0.get()?, rat_from(&self.dx)?, rat_from(&self.dy)?)
                .map_err(E::custom)
        }
    }

    #[derive(Serialize, Deserialize)]
    #[serde(tag = "kind", rename_all = "snake_case")]
    pub enum NodeW {
        Fold {
            rect: RectW,
            anchor: Anchor,
            bound: Iv,
        },
        Excluded {
            rect: RectW,
            constraint: usize,
            bound: Iv,
        },
        Split {
            rect: RectW,
            axis: Axis,
            at: String,
            children: Vec<NodeW>,
        },
        Tactic {
            rect: RectW,
            tactic: TacticW,
            child: Box<NodeW>,
        },
        Failure {
            rect: RectW,
            bound: Iv,
        },
    }

    #[derive(Serialize, Deserialize)]
    #[serde(tag = "op", rename_all = "snake_case")]
    pub enum TacticW {
        ReplacePower {
            var: usize,
            k: u32,
            q: PolyW,
            side: Box<CertW>,
        },
        DropTerm {
            var: usize,
            k: u32,
        },
    }

    #[derive(Serialize, Deserialize)]
    pub struct CertW {
        pub format: String,
        pub cap_bits: u32,
        pub poly: PolyW,
        pub constraints: Vec<PolyW>,
        pub root: NodeW,
    }

    impl NodeW {
        pub fn of(n: &Node) -> Self {
            match n {
                Node::Fold { rect, anchor, bound } => NodeW::Fold {
                    rect: RectW::of(rect),
                    anchor: *anchor,
                    bound: Iv::of(bound),
                },
                Node::Excluded {
                    rect,
                    constraint,
                    bound,
                } => NodeW::Excluded {
                    rect: RectW::of(rect),
                    constraint: *constraint,
                    bound: Iv::of(bound),
                },
                Node::Split {
                    rect,
                    axis,
                    at,
                    children,
                } => NodeW::Split {
                    rect: RectW::of(rect),
                    axis: *axis,
                    at: rat_to(at),
                    children: children.iter().map(NodeW::of).collect(),
                },
                Node::Tactic { rect, step, child } => NodeW::Tactic {
                    rect: RectW::of(rect),
                    tactic: match &step.kind {
                        TacticKind::ReplacePower { var, k, q } => TacticW::ReplacePower {
                            var: *var,
                            k: *k,
                            q: PolyW::of(q),
                            side: Box::new(CertW::of(step.side.as_ref().expect("replacement has side"))),
                        },
                        TacticKind::DropTerm { var, k } => TacticW::DropTerm { var: *var, k: *k },
                    },
                    child: Box::new(NodeW::of(child)),
                },
                Node::Failure { rect, bound } => NodeW::Failure {
                    rect: RectW::of(rect),
                    bound: Iv::of(bound),
                },
            }
        }

        pub fn get<E: serde::de::Error>(&self) -> Result<Node, E> {
            Ok(match self {
                NodeW::Fold { rect, anchor, bound } => Node::Fold {
                    rect: rect.get()?,
                    anchor: *anchor,
                    bound: bound.get()?,
                },
                NodeW::Excluded {
                    rect,
                    constraint,
                    bound,
                } => Node::Excluded {
                    rect: rect.get()?,
                    constraint: *constraint,
                    bound: bound.get()?,
                },
                NodeW::Split {
                    rect,
                    axis,
                    at,
                    children,
                } => Node::Split {
                    rect: rect.get()?,
                    axis: *axis,
                    at: rat_from(at)?,
                    children: children.iter().map(NodeW::get).collect::<Result<_, E>>()?,
                },
                NodeW::Tactic { rect, tactic, child } => Node::Tactic {
                    rect: rect.get()?,
                    step: match tactic {
                        TacticW::ReplacePower { var, k, q, side } => TacticStep {
                            kind: TacticKind::ReplacePower {
                                var: *var,
                                k: *k,
                                q: q.get()?,
                            },
                            side: Some(Box::new(side.get()?)),
                        },
                        TacticW::DropTerm { var, k } => TacticStep {
                            kind: TacticKind::DropTerm { var: *var, k: *k },
                            side: None,
                        },
                    },
                    child: Box::new(child.get()?),
                },
                NodeW::Failure { rect, bound } => Node::Failure {
                    rect: rect.get()?,
                    bound: bound.get()?,
                },
            })
        }
    }

    impl CertW {
        pub fn of(c: &Certificate) -> Self {
            CertW {
                format: FORMAT.to_string(),
                cap_bits: c.cap_bits,
                poly: PolyW::of(&c.poly),
                constraints: c.constraints.iter().map(PolyW::of).collect(),
                root: NodeW::of(&c.root),
            }
        }

        pub fn get<E: serde::de::Error>(&self) -> Result<Certificate, E> {
            if self.format != FORMAT {
                return Err(E::custom(format!("unknown certificate format {:?}", self.format)));
            }
            Ok(Certificate {
                cap_bits: self.cap_bits,
                poly: self.poly.get()?,
                constraints: self.constraints.iter().map(PolyW::get).collect::<Result<_, E>>()?,
                root: self.root.get()?,
            })
        }
    }
}

impl Serialize for Certificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        wire::CertW::of(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Certificate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        wire::CertW::deserialize(d)?.get()
    }
}

impl Serialize for RatInterval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        wire::Iv::of(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatInterval {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        wire::Iv::deserialize(d)?.get()
    }
}

impl Serialize for Rect {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        wire::RectW::of(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Rect {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        wire::RectW::deserialize(d)?.get()
    }
}

impl Serialize for IPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        wire::PolyW::of(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for IPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        wire::PolyW::deserialize(d)?.get()
    }
}

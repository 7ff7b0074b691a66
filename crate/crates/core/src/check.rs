//! Re-verification of serialized certificates.
//!
//! Every leaf is recomputed from the certificate's own polynomial. The leaf
//! polynomial is re-derived by substitution, the fold is re-run by a separate
//! cumulative-sum implementation, and the stored bound must match exactly.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::certifier::{
    apply_drop, apply_replace, leaf_poly, replacement_side, Certificate, Node, Rect, TacticKind,
};
use crate::exactq::{BigRational, RatInterval};
use crate::poly::IPoly;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CheckError {
    #[error("unresolved failure leaf at {0}")]
    Failure(String),
    #[error("stored bound {stored} differs from recomputed {recomputed} at {rect}")]
    BoundMismatch {
        rect: String,
        stored: String,
        recomputed: String,
    },
    #[error("fold bound {bound} is positive at {rect}")]
    Positive { rect: String, bound: String },
    #[error("constraint {index} is not strictly positive on {rect}")]
    NotExcluded { index: usize, rect: String },
    #[error("no constraint with index {0}")]
    MissingConstraint(usize),
    #[error("split children do not tile {0}")]
    Tiling(String),
    #[error("tactic step invalid: {0}")]
    Tactic(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckSummary {
    pub folds: usize,
    pub excluded: usize,
    pub splits: usize,
    pub tactics: usize,
}

/// `Rest[FoldList[f, 0, l]]`.
fn cum_fun(l: &[BigRational], dy: &BigRational) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(l.len());
    let mut prev = BigRational::zero();
    for v in l {
        let m = if prev < BigRational::zero() { prev.clone() } else { BigRational::zero() };
        prev = m / dy + v;
        out.push(prev.clone());
    }
    out
}

fn poly_neg_value(p: &IPoly, dx: &BigRational, dy: &BigRational, upper: bool) -> BigRational {
    let rows: Vec<Vec<BigRational>> = p
        .coefficient_matrix()
        .iter()
        .map(|r| {
            r.iter()
                .map(|c| if upper { c.hi().clone() } else { c.lo().clone() })
                .collect()
        })
        .collect();
    let ny = rows[0].len();
    let mut acc: Vec<BigRational> = vec![BigRational::zero(); ny];
    for row in rows.iter().rev() {
        let next: Vec<BigRational> = acc
            .iter()
            .zip(row)
            .map(|(a, r)| {
                let clamped = if a.is_positive() { a.clone() } else { BigRational::zero() };
                clamped * dx + r
            })
            .collect();
        acc = cum_fun(&next, dy);
    }
    acc.into_iter().fold(None, |m: Option<BigRational>, v| match m {
        Some(m) if m >= v => Some(m),
        _ => Some(v),
    })
    .expect("nonempty")
}

fn recompute(p: &IPoly, rect: &Rect, anchor: crate::certifier::Anchor, cap: u32) -> RatInterval {
    let lp = leaf_poly(p, rect, anchor, cap);
    RatInterval::spanning(
        poly_neg_value(&lp, &rect.dx, &rect.dy, false),
        poly_neg_value(&lp, &rect.dx, &rect.dy, true),
    )
}

fn mismatch(rect: &Rect, stored: &RatInterval, recomputed: &RatInterval) -> CheckError {
    CheckError::BoundMismatch {
        rect: rect.to_string(),
        stored: stored.to_string(),
        recomputed: recomputed.to_string(),
    }
}

fn check_node(
    p: &IPoly,
    node: &Node,
    claim: &Rect,
    cert: &Certificate,
    sum: &mut CheckSummary,
) -> Result<(), CheckError> {
    if node.rect() != claim {
        return Err(CheckError::Tiling(claim.to_string()));
    }
    match node {
        Node::Failure { rect, .. } => Err(CheckError::Failure(rect.to_string())),
        Node::Fold { rect, anchor, bound } => {
            let b = recompute(p, rect, *anchor, cert.cap_bits);
            if &b != bound {
                return Err(mismatch(rect, bound, &b));
            }
            if b.hi().is_positive() {
                return Err(CheckError::Positive {
                    rect: rect.to_string(),
                    bound: b.to_string(),
                });
            }
            sum.folds += 1;
            Ok(())
        }
        Node::Excluded {
            rect,
            constraint,
            bound,
        } => {
            let h = cert
                .constraints
                .get(*constraint)
                .ok_or(CheckError::MissingConstraint(*constraint))?;
            let b = recompute(&-h, rect, crate::certifier::Anchor::LowerLeft, cert.cap_bits);
            if &b != bound {
                return Err(mismatch(rect, bound, &b));
            }
            if !b.hi().is_negative() {
                return Err(CheckError::NotExcluded {
                    index: *constraint,
                    rect: rect.to_string(),
                });
            }
            sum.excluded += 1;
            Ok(())
        }
        Node::Split {
            rect,
            axis,
            at,
            children,
        } => {
            if !at.is_positive() || at >= rect.side(*axis) || children.len() != 2 {
                return Err(CheckError::Tiling(rect.to_string()));
            }
            let (r1, r2) = rect.split(*axis, at);
            sum.splits += 1;
            check_node(p, &children[0], &r1, cert, sum)?;
            check_node(p, &children[1], &r2, cert, sum)
        }
        Node::Tactic { rect, step, child } => {
            if !rect.in_first_quadrant() {
                return Err(CheckError::Tactic("domain leaves the first quadrant".into()));
            }
            let next = match &step.kind {
                TacticKind::DropTerm { var, k } => {
                    apply_drop(p, *var, *k).map_err(|e| CheckError::Tactic(e.to_string()))?
                }
                TacticKind::ReplacePower { var, k, q } => {
                    let side = step
                        .side
                        .as_ref()
                        .ok_or_else(|| CheckError::Tactic("missing side certificate".into()))?;
                    let expected = replacement_side(p, *var, *k, q).map_err(|e| CheckError::Tactic(e.to_string()))?;
                    if side.poly != expected || !side.constraints.is_empty() {
                        return Err(CheckError::Tactic("side certificate proves a different claim".into()));
                    }
                    if side.root.rect() != rect {
                        return Err(CheckError::Tactic("side certificate covers a different domain".into()));
                    }
                    let s = check_certificate(side)?;
                    sum.folds += s.folds;
                    sum.splits += s.splits;
                    sum.excluded += s.excluded;
                    sum.tactics += s.tactics;
                    apply_replace(p, *var, *k, q).map_err(|e| CheckError::Tactic(e.to_string()))?
                }
            };
            sum.tactics += 1;
            check_node(&next, child, rect, cert, sum)
        }
    }
}

/// Accepts a certificate iff every leaf re-derives to its stored bound,
/// every fold bound is `≤ 0`, every exclusion is strict, splits tile their
/// parents and tactic steps are valid.
pub fn check_certificate(cert: &Certificate) -> Result<CheckSummary, CheckError> {
    let mut sum = CheckSummary::default();
    let root = cert.root.rect().clone();
    check_node(&cert.poly, &cert.root, &root, cert, &mut sum)?;
    Ok(sum)
}

//! Convex-hull tests over exact rationals.
//!
//! Everything here reduces to one LP in convex-combination form: weights `λ`
//! on the inner points and `μ` on the outer points with equal barycentres.
//! When that LP is infeasible the phase-one multipliers are a separating
//! hyperplane, so no second solve is needed to produce a witness.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::halfspace::Inequality;
use crate::lp::{solve_standard, StdOutcome};
use crate::rat::{self, Rat, RatPoint};

/// Strict separator: `a·x ≤ b` on `inner`, `a·y ≥ b + 1` on `outer`.
/// `None` when the hulls intersect.
pub fn strict_separator(inner: &[RatPoint], outer: &[RatPoint]) -> Result<Option<Inequality>> {
    let d = check_dims(inner, outer)?;
    if inner.is_empty() || outer.is_empty() {
        return invalid_empty(inner, outer, d);
    }
    let (a, b) = hull_system(inner, outer, d, None);
    match solve_standard(&a, &b, None) {
        StdOutcome::Infeasible { dual, phase1_value } => {
            let ineq = dual_to_strict(&dual, &phase1_value, d);
            verify_strict(&ineq, inner, outer)?;
            Ok(Some(ineq))
        }
        StdOutcome::Optimal { .. } => Ok(None),
        StdOutcome::Unbounded => Err(Error::Internal("phase one reported unbounded".into())),
    }
}

/// Outcome of [`weak_separator`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeakSeparation {
    /// `a·x ≤ b` on inner, `a·y ≥ b + 1` on outer.
    Strict(Inequality),
    /// `a·x ≤ b` on inner, `a·y ≥ b` on outer, `a·c ≤ b - 1` at the interior point.
    Weak(Inequality),
    None,
}

impl WeakSeparation {
    pub fn inequality(self) -> Option<Inequality> {
        match self {
            WeakSeparation::Strict(i) | WeakSeparation::Weak(i) => Some(i),
            WeakSeparation::None => None,
        }
    }
}

/// Looks for a hyperplane with `inner` on one closed side and `outer` on the
/// other closed side, such that `center` stays strictly on the inner side.
/// When `center` is in the relative interior of `conv(inner)`, such a
/// hyperplane exists exactly when `outer` misses the interior of every
/// polytope `{a·x ≤ b}` containing `inner`, i.e. the outer hull avoids the
/// interior of a halfspace that contains the inner hull.
pub fn weak_separator(
    inner: &[RatPoint],
    outer: &[RatPoint],
    center: &RatPoint,
) -> Result<WeakSeparation> {
    let d = check_dims(inner, outer)?;
    if center.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: center.dim(),
        });
    }
    if inner.is_empty() || outer.is_empty() {
        return invalid_empty(inner, outer, d);
    }
    let (a, b) = hull_system(inner, outer, d, Some(center));
    let n = inner.len() + outer.len() + 1;
    let mut cost = vec![Rat::zero(); n];
    cost[n - 1] = -rat::one();
    match solve_standard(&a, &b, Some(&cost)) {
        StdOutcome::Infeasible { dual, phase1_value } => {
            let ineq = dual_to_strict(&dual, &phase1_value, d);
            verify_strict(&ineq, inner, outer)?;
            Ok(WeakSeparation::Strict(ineq))
        }
        StdOutcome::Unbounded => Ok(WeakSeparation::None),
        StdOutcome::Optimal { value, dual, .. } => {
            if value.is_negative() {
                return Ok(WeakSeparation::None);
            }
            let ineq = Inequality::new(dual[..d].to_vec(), -dual[d].clone());
            verify_weak(&ineq, inner, outer, center)?;
            Ok(WeakSeparation::Weak(ineq))
        }
    }
}

/// Is `q ∈ conv(s)`?
pub fn conv_membership(q: &RatPoint, s: &[RatPoint]) -> Result<bool> {
    if s.is_empty() {
        return Ok(false);
    }
    Ok(strict_separator(s, std::slice::from_ref(q))?.is_none())
}

/// Does the closed segment `[p, q]` meet `conv(s)`?
pub fn segment_hits_hull(p: &RatPoint, q: &RatPoint, s: &[RatPoint]) -> Result<bool> {
    if s.is_empty() {
        return Ok(false);
    }
    Ok(strict_separator(s, &[p.clone(), q.clone()])?.is_none())
}

/// Is there `λ ≥ 0` with `Σλ_i s_i + λ_q q = target`, `Σλ = 1` and `λ_q > 0`?
pub fn reachable_through(target: &RatPoint, q: &RatPoint, s: &[RatPoint]) -> Result<bool> {
    let d = target.dim();
    // min -λ_q over the convex combinations
    let m = d + 1;
    let n = s.len() + 1;
    let mut a = vec![vec![Rat::zero(); n]; m];
    let mut b = vec![Rat::zero(); m];
    for (j, p) in s.iter().chain(std::iter::once(q)).enumerate() {
        if p.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: p.dim(),
            });
        }
        for i in 0..d {
            a[i][j] = p.0[i].clone();
        }
        a[d][j] = rat::one();
    }
    b[..d].clone_from_slice(&target.0);
    b[d] = rat::one();
    flip_negative_rows(&mut a, &mut b);
    let mut cost = vec![Rat::zero(); n];
    cost[n - 1] = -rat::one();
    Ok(match solve_standard(&a, &b, Some(&cost)) {
        StdOutcome::Optimal { value, .. } => value.is_negative(),
        StdOutcome::Infeasible { .. } => false,
        StdOutcome::Unbounded => return Err(Error::Internal("bounded LP reported unbounded".into())),
    })
}

/// Is the integer point `q` within `ℓ∞`-distance `c` of `conv(s)`?
pub fn within_linf(q: &[i64], s: &[RatPoint], c: &Rat) -> Result<bool> {
    if s.is_empty() {
        return Ok(false);
    }
    let d = q.len();
    let n = s.len() + 2 * d;
    let mut a = vec![vec![Rat::zero(); n]; 2 * d + 1];
    let mut b = vec![Rat::zero(); 2 * d + 1];
    for (j, p) in s.iter().enumerate() {
        if p.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: p.dim(),
            });
        }
        for i in 0..d {
            a[2 * i][j] = p.0[i].clone();
            a[2 * i + 1][j] = p.0[i].clone();
        }
        a[2 * d][j] = rat::one();
    }
    for i in 0..d {
        let qi = rat::int(q[i]);
        a[2 * i][s.len() + 2 * i] = rat::one();
        b[2 * i] = &qi + c;
        a[2 * i + 1][s.len() + 2 * i + 1] = -rat::one();
        b[2 * i + 1] = qi - c;
    }
    b[2 * d] = rat::one();
    flip_negative_rows(&mut a, &mut b);
    Ok(matches!(solve_standard(&a, &b, None), StdOutcome::Optimal { .. }))
}

/// Vertices of `conv(points)`: points not in the hull of the others. Order is preserved.
pub fn extreme_points(points: &[RatPoint]) -> Result<Vec<RatPoint>> {
    let mut uniq: Vec<RatPoint> = Vec::with_capacity(points.len());
    for p in points {
        if !uniq.contains(p) {
            uniq.push(p.clone());
        }
    }
    if uniq.len() <= 2 {
        return Ok(uniq);
    }
    let mut keep = vec![true; uniq.len()];
    for i in 0..uniq.len() {
        let others: Vec<RatPoint> = uniq
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i && keep[j])
            .map(|(_, p)| p.clone())
            .collect();
        if conv_membership(&uniq[i], &others)? {
            keep[i] = false;
        }
    }
    Ok(uniq
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(p, _)| p)
        .collect())
}

/// Arithmetic mean of the points.
pub fn centroid(points: &[RatPoint]) -> RatPoint {
    let d = points.first().map_or(0, |p| p.dim());
    let n = rat::int(points.len() as i64);
    let mut c = vec![Rat::zero(); d];
    for p in points {
        for (ci, pi) in c.iter_mut().zip(&p.0) {
            *ci += pi;
        }
    }
    RatPoint(c.into_iter().map(|v| v / &n).collect())
}

fn check_dims(inner: &[RatPoint], outer: &[RatPoint]) -> Result<usize> {
    let d = inner
        .first()
        .or_else(|| outer.first())
        .map_or(0, |p| p.dim());
    for p in inner.iter().chain(outer) {
        if p.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: p.dim(),
            });
        }
    }
    Ok(d)
}

fn invalid_empty<T>(inner: &[RatPoint], _outer: &[RatPoint], _d: usize) -> Result<T> {
    if inner.is_empty() {
        Err(Error::InvalidInput("inner point set is empty".into()))
    } else {
        Err(Error::InvalidInput("outer point set is empty".into()))
    }
}

/// Rows: `Σλx - Σμy (+ τc) = 0`, `Σλ = 1`, `Σμ (- τ) = 1`.
fn hull_system(
    inner: &[RatPoint],
    outer: &[RatPoint],
    d: usize,
    center: Option<&RatPoint>,
) -> (Vec<Vec<Rat>>, Vec<Rat>) {
    let n = inner.len() + outer.len() + usize::from(center.is_some());
    let mut a = vec![vec![Rat::zero(); n]; d + 2];
    for (j, x) in inner.iter().enumerate() {
        for i in 0..d {
            a[i][j] = x.0[i].clone();
        }
        a[d][j] = rat::one();
    }
    let off = inner.len();
    for (j, y) in outer.iter().enumerate() {
        for i in 0..d {
            a[i][off + j] = -y.0[i].clone();
        }
        a[d + 1][off + j] = rat::one();
    }
    if let Some(c) = center {
        for i in 0..d {
            a[i][n - 1] = c.0[i].clone();
        }
        a[d + 1][n - 1] = -rat::one();
    }
    let mut b = vec![Rat::zero(); d + 2];
    b[d] = rat::one();
    b[d + 1] = rat::one();
    (a, b)
}

fn flip_negative_rows(a: &mut [Vec<Rat>], b: &mut [Rat]) {
    for (row, bi) in a.iter_mut().zip(b.iter_mut()) {
        if bi.is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            *bi = -bi.clone();
        }
    }
}

fn dual_to_strict(dual: &[Rat], w: &Rat, d: usize) -> Inequality {
    let a: Vec<Rat> = dual[..d].iter().map(|u| u / w).collect();
    let b = -&dual[d] / w;
    Inequality::new(a, b)
}

fn verify_strict(ineq: &Inequality, inner: &[RatPoint], outer: &[RatPoint]) -> Result<()> {
    let b1 = &ineq.b + rat::one();
    let ok_in = inner.iter().all(|x| rat::dot(&ineq.a, &x.0) <= ineq.b);
    let ok_out = outer.iter().all(|y| rat::dot(&ineq.a, &y.0) >= b1);
    if ok_in && ok_out {
        Ok(())
    } else {
        Err(Error::Internal("strict separator failed verification".into()))
    }
}

fn verify_weak(
    ineq: &Inequality,
    inner: &[RatPoint],
    outer: &[RatPoint],
    center: &RatPoint,
) -> Result<()> {
    let ok_in = inner.iter().all(|x| rat::dot(&ineq.a, &x.0) <= ineq.b);
    let ok_out = outer.iter().all(|y| rat::dot(&ineq.a, &y.0) >= ineq.b);
    let ok_c = rat::dot(&ineq.a, &center.0) + rat::one() <= ineq.b;
    if ok_in && ok_out && ok_c {
        Ok(())
    } else {
        Err(Error::Internal("weak separator failed verification".into()))
    }
}

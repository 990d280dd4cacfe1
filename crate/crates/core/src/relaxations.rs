//! Relaxation checks and explicit relaxations of boxes and crosspolytopes.

use num_traits::Signed;

use crate::error::{invalid, Error, Result};
use crate::halfspace::{lattice_points, HPolyhedron, Inequality};
use crate::lattice::{cross, IPoint, LatticeSet};
use crate::rat::{self, Rat};
use crate::separation::rc_finite;

/// Outcome of [`verify_relaxation`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    Verified,
    /// A point of `X` outside `Q`, or a lattice point of `Q` outside `X`.
    Fails(IPoint),
}

/// Is `Q ∩ Z^d = X`? Errors with [`Error::Unbounded`] when `Q` is unbounded.
pub fn verify_relaxation(q: &HPolyhedron, x: &LatticeSet) -> Result<Verification> {
    if q.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: q.dim(),
        });
    }
    if let Some(p) = x.iter().find(|p| !q.contains_int(p)) {
        return Ok(Verification::Fails(p.clone()));
    }
    let pts = lattice_points(q)?;
    match pts.iter().find(|p| !x.contains(p)) {
        Some(p) => Ok(Verification::Fails(p.clone())),
        None => Ok(Verification::Verified),
    }
}

/// The simplex with `x_k ≤ 1 + Σ_{i>k} (b+1)^{-i} x_i` for `k ≤ ℓ`, `x_{ℓ+1} ≤ b`
/// and `x_1 + Σ_{i≥2} (b+1)^{-i} x_i ≥ 0`, a relaxation of `{0,1}^ℓ × {0,…,b}`.
pub fn box_simplex(l: usize, b: i64) -> Result<HPolyhedron> {
    if b < 1 {
        return invalid("b must be at least 1");
    }
    let d = l + 1;
    let base = rat::int(b + 1);
    let weight = |i: usize| -> Rat {
        let mut w = rat::one();
        for _ in 0..i {
            w /= &base;
        }
        w
    };
    let mut rows = Vec::with_capacity(l + 2);
    for k in 1..=l {
        let mut a = vec![rat::zero(); d];
        a[k - 1] = rat::one();
        for i in k + 1..=d {
            a[i - 1] = -weight(i);
        }
        rows.push(Inequality::new(a, rat::one()));
    }
    let mut a = vec![rat::zero(); d];
    a[d - 1] = rat::one();
    rows.push(Inequality::new(a, rat::int(b)));
    let mut a = vec![rat::zero(); d];
    a[0] = -rat::one();
    for i in 2..=d {
        a[i - 1] = -weight(i);
    }
    rows.push(Inequality::new(a, rat::zero()));
    HPolyhedron::new(d, rows)
}

/// `rc` of a product of `k ≥ 1` segments of length at least two and `ℓ` unit segments.
/// Unit cubes (`k = 0`) are not covered by the formula.
pub fn box_rc(k: usize, l: usize) -> Result<usize> {
    if k == 0 {
        return invalid("need at least one segment of length two or more");
    }
    Ok(2 * k + l)
}

/// `d + 1`-facet relaxations of the crosspolytope `◇_d` for `d ∈ {3, 4}`.
pub fn cross_relaxation(d: usize) -> Result<HPolyhedron> {
    match d {
        3 => HPolyhedron::from_int_rows(&[
            (&[8, 12, -13], 13),
            (&[-8, -12, -13], 13),
            (&[12, -8, 13], 13),
            (&[-12, 8, 13], 13),
        ]),
        4 => HPolyhedron::from_int_rows(&[
            (&[6, -7, -7, -5], 7),
            (&[-7, 3, -2, -7], 7),
            (&[9, 7, 9, -4], 9),
            (&[1, 2, -2, 2], 2),
            (&[-6, -6, 5, 2], 6),
        ]),
        _ => invalid(format!("no stored relaxation for dimension {d}")),
    }
}

/// From a relaxation `Ax ≤ 1` of `◇_d`, the relaxation
/// `{(x, y) : A(x - y e_1) ≤ 1, -1 ≤ x_1 + y ≤ 1}` of `◇_{d+1}`.
/// Rows are first scaled to right-hand side 1.
pub fn cross_lift(a: &HPolyhedron) -> Result<HPolyhedron> {
    let d = a.dim();
    if d == 0 {
        return invalid("dimension must be positive");
    }
    let mut unit = Vec::with_capacity(a.len());
    for r in a.rows() {
        if !r.b.is_positive() {
            return invalid("row with non-positive right-hand side cannot be scaled to 1");
        }
        unit.push(r.scaled(&(rat::one() / &r.b)));
    }
    let a1 = HPolyhedron::new(d, unit)?;
    if verify_relaxation(&a1, &cross(d))? != Verification::Verified {
        return invalid("input is not a relaxation of the crosspolytope");
    }
    let mut rows = Vec::with_capacity(a1.len() + 2);
    for r in a1.rows() {
        let mut c = r.a.clone();
        c.push(-r.a[0].clone());
        rows.push(Inequality::new(c, rat::one()));
    }
    let mut e = vec![rat::zero(); d + 1];
    e[0] = rat::one();
    e[d] = rat::one();
    rows.push(Inequality::new(e.clone(), rat::one()));
    rows.push(Inequality::new(e.iter().map(|v| -v).collect(), rat::one()));
    HPolyhedron::new(d + 1, rows)
}

/// Outcome of [`iterative_rc`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IterOutcome {
    /// `Q` has `k` rows and `Q ∩ Z^d = X`.
    Converged { k: usize, q: HPolyhedron, rounds: usize },
    /// `k = rc(X, Y)` for the last `Y`, a lower bound on `rc(X)`.
    BoundOnly { k: usize, rounds: usize },
}

/// Alternates exact `rc(X, Y)` with harvesting lattice points of the
/// candidate relaxation that lie outside `X`, inside a box `[-t, t]^d` that
/// doubles whenever the candidate is unbounded but clean inside the box.
pub fn iterative_rc(
    x: &LatticeSet,
    y0: &LatticeSet,
    box_t: i64,
    max_rounds: usize,
) -> Result<IterOutcome> {
    if box_t < 1 {
        return invalid("box radius must be positive");
    }
    let mut y = y0.clone();
    let mut t = box_t;
    let mut last_k = 0;
    for round in 1..=max_rounds {
        let (k, cert) = rc_finite(x, &y)?;
        last_k = k;
        let q = HPolyhedron::new(x.dim(), cert.inequalities)?;
        let inside = lattice_points(&q.intersect_box(t))?;
        let viol = inside.difference(x)?;
        if !viol.is_empty() {
            y = y.union(&viol)?;
            continue;
        }
        match lattice_points(&q) {
            Ok(all) => {
                let extra = all.difference(x)?;
                if extra.is_empty() {
                    return Ok(IterOutcome::Converged { k, q, rounds: round });
                }
                y = y.union(&extra)?;
            }
            Err(Error::Unbounded) => t *= 2,
            Err(e) => return Err(e),
        }
    }
    Ok(IterOutcome::BoundOnly {
        k: last_k,
        rounds: max_rounds,
    })
}

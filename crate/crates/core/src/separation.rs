//! Separability, exact `rc(X, Y)` and `rc_ε(X, Y)`, and their certificates.

use num_traits::Signed;
use serde::Serialize;

use crate::cover::Oracle;
pub use crate::cover::{CoverOptions, CoverStats, SeparationMode};
use crate::error::{invalid, Error, Result};
use crate::geometry::{centroid, strict_separator, within_linf};
use crate::halfspace::{for_each_box_point, Inequality};
use crate::lattice::{dim_of, is_lattice_convex, parity_candidates, IPoint, LatticeSet};
use crate::rat::{self, Rat, RatPoint};

/// An inner set that must satisfy every inequality and outer points that must each be cut.
#[derive(Debug, Clone)]
pub struct SeparationInstance {
    pub dim: usize,
    pub inner: Vec<RatPoint>,
    pub outer: Vec<IPoint>,
    pub mode: SeparationMode,
}

impl SeparationInstance {
    pub fn new(inner: Vec<RatPoint>, outer: Vec<IPoint>, mode: SeparationMode) -> Result<Self> {
        let Some(first) = inner.first() else {
            return invalid("inner point set is empty");
        };
        let dim = first.dim();
        for p in &inner {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
        }
        for y in &outer {
            if y.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: y.len(),
                });
            }
            // weak cuts may be tight at an inner point, strict ones never
            if mode == SeparationMode::Strict && inner.contains(&RatPoint::from_ints(y)) {
                return invalid(format!("{y:?} is both inner and outer"));
            }
        }
        Ok(SeparationInstance {
            dim,
            inner,
            outer,
            mode,
        })
    }

    /// Minimum number of inequalities; `anchors` are integer points of
    /// `conv(inner)` that speed up the dominance reduction (may be empty).
    pub fn solve(&self, anchors: &[IPoint], opts: CoverOptions) -> Result<RcReport> {
        let oracle = Oracle::new(self.mode, &self.inner, self.outer.clone())?;
        let out = oracle.solve(anchors, opts)?;
        let certificate = SeparationCertificate {
            mode: self.mode,
            inequalities: out.inequalities,
            assignment: self.outer.iter().cloned().zip(out.assignment).collect(),
        };
        debug_assert!(certificate.validate(&self.inner).is_ok());
        Ok(RcReport {
            k: out.k,
            certificate,
            stats: out.stats,
        })
    }
}

/// `k` inequalities valid on the inner set, with one cutting inequality per outer point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationCertificate {
    pub mode: SeparationMode,
    pub inequalities: Vec<Inequality>,
    pub assignment: Vec<(IPoint, usize)>,
}

#[derive(Serialize)]
struct CertJson<'a> {
    k: usize,
    separation: &'static str,
    inequalities: Vec<Vec<String>>,
    assignment: Vec<AssignJson<'a>>,
}

#[derive(Serialize)]
struct AssignJson<'a> {
    point: &'a [i64],
    inequality: usize,
}

impl SeparationCertificate {
    pub fn k(&self) -> usize {
        self.inequalities.len()
    }

    /// Re-checks every claim by substitution.
    pub fn validate(&self, inner: &[RatPoint]) -> Result<()> {
        for (i, ineq) in self.inequalities.iter().enumerate() {
            if let Some(x) = inner.iter().find(|x| !ineq.contains(&x.0)) {
                return Err(Error::Internal(format!(
                    "inequality {i} is violated by inner point {:?}",
                    x.0.iter().map(rat::fmt_rat).collect::<Vec<_>>()
                )));
            }
            if self.mode == SeparationMode::Weak && !inner.is_empty() {
                let c = centroid(inner);
                if !ineq.slack(&c.0).is_positive() {
                    return Err(Error::Internal(format!(
                        "inequality {i} is tight on the whole inner set"
                    )));
                }
            }
        }
        for (y, i) in &self.assignment {
            let ok = self
                .inequalities
                .get(*i)
                .is_some_and(|w| self.mode.cuts(w, y));
            if !ok {
                return Err(Error::Internal(format!(
                    "outer point {y:?} is not cut by inequality {i}"
                )));
            }
        }
        Ok(())
    }

    /// JSON with fields `k`, `separation`, `inequalities` (`[a_1, …, a_d, b]`
    /// as rational strings) and `assignment`.
    pub fn to_json(&self) -> String {
        let cj = CertJson {
            k: self.k(),
            separation: self.mode.as_str(),
            inequalities: self
                .inequalities
                .iter()
                .map(|w| {
                    w.a.iter()
                        .chain(std::iter::once(&w.b))
                        .map(rat::fmt_rat)
                        .collect()
                })
                .collect(),
            assignment: self
                .assignment
                .iter()
                .map(|(p, i)| AssignJson {
                    point: p,
                    inequality: *i,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&cj).expect("serializable")
    }
}

/// Value, certificate and search statistics.
#[derive(Debug, Clone)]
pub struct RcReport {
    pub k: usize,
    pub certificate: SeparationCertificate,
    pub stats: CoverStats,
}

/// One inequality `a·x ≤ b` valid on `inner` with `a·y ≥ b + 1` on all of `points`.
pub fn separable(inner: &[RatPoint], points: &[IPoint]) -> Result<Option<Inequality>> {
    if points.is_empty() {
        return invalid("no points to separate");
    }
    let outer: Vec<RatPoint> = points.iter().map(|p| RatPoint::from_ints(p)).collect();
    strict_separator(inner, &outer)
}

/// Extends `seed` greedily through `universe` (in the given order) while it
/// stays separable from `inner`.
pub fn maximal_separable(
    inner: &[RatPoint],
    universe: &[IPoint],
    seed: &[IPoint],
) -> Result<Vec<IPoint>> {
    let Some(mut w) = separable(inner, seed)? else {
        return invalid("seed is not separable");
    };
    let mut set: Vec<IPoint> = seed.to_vec();
    for z in universe {
        if set.contains(z) {
            continue;
        }
        if !SeparationMode::Strict.cuts(&w, z) {
            set.push(z.clone());
            match separable(inner, &set)? {
                Some(w2) => w = w2,
                None => {
                    set.pop();
                }
            }
        } else {
            set.push(z.clone());
        }
    }
    set.sort();
    Ok(set)
}

/// `rc(X, Y)` with a certificate.
pub fn rc_finite(x: &LatticeSet, y: &LatticeSet) -> Result<(usize, SeparationCertificate)> {
    let r = rc_finite_with(x, y, CoverOptions::default())?;
    Ok((r.k, r.certificate))
}

pub fn rc_finite_with(x: &LatticeSet, y: &LatticeSet, opts: CoverOptions) -> Result<RcReport> {
    check_dims(x, y)?;
    if x.is_empty() {
        return invalid("inner set is empty");
    }
    if !is_lattice_convex(x)? {
        return Err(Error::NotLatticeConvex);
    }
    let outer = y.difference(x)?.into_points();
    let inst = SeparationInstance::new(x.rat_points(), outer, SeparationMode::Strict)?;
    inst.solve(x.points(), opts)
}

/// `X_ε = X + {0, ±εe_1, …, ±εe_d}`.
pub fn x_eps(x: &LatticeSet, eps: &Rat) -> Vec<RatPoint> {
    let d = x.dim();
    let mut out = Vec::with_capacity(x.len() * (2 * d + 1));
    for p in x.iter() {
        let base = RatPoint::from_ints(p);
        out.push(base.clone());
        for i in 0..d {
            for sign in [1, -1] {
                let mut q = base.clone();
                q.0[i] += eps * rat::int(sign);
                out.push(q);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// `rc_ε(X, Y)`: the fewest inequalities `Q = {Ax ≤ b}` with `X_ε ⊆ Q` and no
/// point of `Y \ X` in the interior of `Q`.
pub fn rc_eps(x: &LatticeSet, eps: &Rat, y: &LatticeSet) -> Result<(usize, SeparationCertificate)> {
    let r = rc_eps_with(x, eps, y, CoverOptions::default())?;
    Ok((r.k, r.certificate))
}

pub fn rc_eps_with(
    x: &LatticeSet,
    eps: &Rat,
    y: &LatticeSet,
    opts: CoverOptions,
) -> Result<RcReport> {
    check_dims(x, y)?;
    if !eps.is_positive() {
        return invalid("epsilon must be positive");
    }
    if x.is_empty() {
        return invalid("inner set is empty");
    }
    if !is_lattice_convex(x)? {
        return Err(Error::NotLatticeConvex);
    }
    let outer = y.difference(x)?.into_points();
    let inst = SeparationInstance::new(x_eps(x, eps), outer, SeparationMode::Weak)?;
    inst.solve(x.points(), opts)
}

/// `conv(X) + c·[-1, 1]^d` and its lattice points, where every
/// `ε`-relaxation of `X` lies inside that body.
#[derive(Debug, Clone)]
pub struct EpsRegion {
    pub epsilon: Rat,
    pub constant: Rat,
    pub certificate_set: LatticeSet,
}

/// `c = 2·d!·(|X|+1)/ε^(d-1)`.
pub fn eps_constant(d: usize, size: usize, eps: &Rat) -> Rat {
    let mut e = rat::one();
    for _ in 1..d {
        e *= eps;
    }
    rat::int(2) * rat::factorial(d as u32) * rat::int(size as i64 + 1) / e
}

pub fn eps_region(x: &LatticeSet, eps: &Rat) -> Result<EpsRegion> {
    if !eps.is_positive() {
        return invalid("epsilon must be positive");
    }
    if x.is_empty() || dim_of(x) != x.dim() as i64 {
        return invalid("set must be full-dimensional");
    }
    if !is_lattice_convex(x)? {
        return Err(Error::NotLatticeConvex);
    }
    let c = eps_constant(x.dim(), x.len(), eps);
    let set = region_points(x, &c)?;
    Ok(EpsRegion {
        epsilon: eps.clone(),
        constant: c,
        certificate_set: set,
    })
}

fn region_points(x: &LatticeSet, c: &Rat) -> Result<LatticeSet> {
    let ci = rat::floor_i64(c).ok_or_else(|| Error::InvalidInput("constant too large".into()))?;
    let bounds: Vec<(i64, i64)> = x
        .bounding_box()
        .expect("non-empty")
        .into_iter()
        .map(|(lo, hi)| (lo - ci, hi + ci))
        .collect();
    let verts: Vec<RatPoint> = x.vertices()?.iter().map(|p| RatPoint::from_ints(p)).collect();
    let mut near = Vec::new();
    let mut unsure = Vec::new();
    for_each_box_point(&bounds, |q| {
        // ‖q - x‖∞ ≤ c for one x suffices; otherwise decide by LP
        if x.iter().any(|p| p.iter().zip(q).all(|(a, b)| (a - b).abs() <= ci)) {
            near.push(q.to_vec());
        } else {
            unsure.push(q.to_vec());
        }
    })?;
    use rayon::prelude::*;
    let extra: Vec<Option<IPoint>> = unsure
        .into_par_iter()
        .map(|q| Ok(within_linf(&q, &verts, c)?.then_some(q)))
        .collect::<Result<_>>()?;
    near.extend(extra.into_iter().flatten());
    LatticeSet::new(x.dim(), near)
}

/// A finite set containing every observer of `X`, when one is known cheaply.
pub fn observer_superset(x: &LatticeSet) -> Result<Option<LatticeSet>> {
    match x.dim() {
        1 => {
            let b = x.bounding_box().expect("non-empty")[0];
            Ok(Some(LatticeSet::new(1, vec![vec![b.0 - 1], vec![b.1 + 1]])?))
        }
        2 if dim_of(x) == 2 => Ok(Some(crate::rc2d::observers_2d(x)?.to_set())),
        _ => Ok(parity_candidates(x)),
    }
}

/// Result of [`rc_eps_full_with`].
#[derive(Debug, Clone)]
pub struct EpsReport {
    pub report: RcReport,
    pub constant: Rat,
    pub region_size: usize,
    /// Outer points actually handed to the cover search.
    pub candidates: usize,
}

/// `rc_ε(X)` over the full certificate region.
pub fn rc_eps_full(x: &LatticeSet, eps: &Rat) -> Result<(usize, SeparationCertificate)> {
    let r = rc_eps_full_with(x, eps, CoverOptions::default())?;
    Ok((r.report.k, r.report.certificate))
}

/// Every point of the region outside the observer superset lies behind an
/// observer inside the region (it sees a lattice point of `conv(X ∪ {y})`
/// that is not in `X`), so only the superset part is searched. The
/// certificate therefore lists those points.
pub fn rc_eps_full_with(x: &LatticeSet, eps: &Rat, opts: CoverOptions) -> Result<EpsReport> {
    let region = eps_region(x, eps)?;
    let y = match observer_superset(x)? {
        Some(s) => region.certificate_set.intersection(&s)?,
        None => region.certificate_set.clone(),
    };
    let report = rc_eps_with(x, eps, &y, opts)?;
    Ok(EpsReport {
        report,
        constant: region.constant,
        region_size: region.certificate_set.len(),
        candidates: y.difference(x)?.len(),
    })
}

fn check_dims(x: &LatticeSet, y: &LatticeSet) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{ball, box_set, simplex};

    fn square() -> LatticeSet {
        box_set(&[(0, 1), (0, 1)]).unwrap()
    }

    #[test]
    fn separable_examples() {
        let tri = simplex(2).rat_points();
        assert!(separable(&tri, &[vec![1, 1]]).unwrap().is_some());
        let sq = square().rat_points();
        assert!(separable(&sq, &[vec![2, 0], vec![0, 2]]).unwrap().is_none());
        let d3 = simplex(3).rat_points();
        assert!(separable(&d3, &[vec![0, 1, 1], vec![0, 0, -1]]).unwrap().is_none());
    }

    #[test]
    fn maximal_separable_blocks_opposite_point() {
        let sq = square().rat_points();
        let u = vec![vec![2, 0], vec![2, 1], vec![0, 2]];
        let m = maximal_separable(&sq, &u, &[vec![2, 0]]).unwrap();
        assert_eq!(m, vec![vec![2, 0], vec![2, 1]]);
        assert!(maximal_separable(&sq, &u, &[vec![2, 0], vec![0, 2]]).is_err());
    }

    #[test]
    fn rc_of_square_against_unit_ball() {
        let x = square();
        let y = ball(&x, 1).unwrap().union(&x).unwrap();
        // every point of B_1 \ X has a coordinate -1, and (-1,1),(1,-1) hide each other
        let (k, cert) = rc_finite(&x, &y).unwrap();
        assert_eq!(k, 2);
        cert.validate(&x.rat_points()).unwrap();
        assert_eq!(cert.assignment.len(), y.difference(&x).unwrap().len());
    }

    #[test]
    fn rc_of_covered_set_is_zero() {
        let x = square();
        let (k, cert) = rc_finite(&x, &x).unwrap();
        assert_eq!(k, 0);
        assert!(cert.inequalities.is_empty());
    }

    #[test]
    fn rc_rejects_non_convex() {
        let x = LatticeSet::new(1, vec![vec![0], vec![2]]).unwrap();
        let y = ball(&x, 2).unwrap();
        assert_eq!(rc_finite(&x, &y).unwrap_err(), Error::NotLatticeConvex);
    }

    #[test]
    fn rc_eps_point_in_line() {
        let x = LatticeSet::new(1, vec![vec![0]]).unwrap();
        let y = ball(&x, 1).unwrap();
        let (k, cert) = rc_eps(&x, &rat::ratio(1, 2), &y).unwrap();
        assert_eq!(k, 2);
        cert.validate(&x_eps(&x, &rat::ratio(1, 2))).unwrap();
        assert!(rc_eps(&x, &rat::int(0), &y).is_err());
    }

    #[test]
    fn eps_constants() {
        assert_eq!(eps_constant(2, 3, &rat::int(1)), rat::int(16));
        assert_eq!(eps_constant(1, 2, &rat::int(1)), rat::int(6));
        assert_eq!(eps_constant(2, 4, &rat::int(2)), rat::int(10));
    }

    #[test]
    fn eps_region_of_segment() {
        let x = LatticeSet::new(1, vec![vec![0], vec![1]]).unwrap();
        let r = eps_region(&x, &rat::ratio(1, 2)).unwrap();
        assert_eq!(r.constant, rat::int(6));
        assert_eq!(r.certificate_set.len(), 14);
        let (k, _) = rc_eps_full(&x, &rat::ratio(1, 2)).unwrap();
        assert_eq!(k, 2);
    }

    #[test]
    fn eps_region_requires_full_dimension() {
        let x = LatticeSet::new(2, vec![vec![0, 0], vec![1, 0]]).unwrap();
        assert!(eps_region(&x, &rat::int(1)).is_err());
    }

    #[test]
    fn certificate_json_shape() {
        let x = LatticeSet::new(1, vec![vec![0]]).unwrap();
        let y = LatticeSet::new(1, vec![vec![1]]).unwrap();
        let (_, cert) = rc_finite(&x, &y).unwrap();
        let v: serde_json::Value = serde_json::from_str(&cert.to_json()).unwrap();
        assert_eq!(v["k"], 1);
        assert_eq!(v["separation"], "strict");
        assert_eq!(v["inequalities"][0], serde_json::json!(["1", "0"]));
        assert_eq!(v["assignment"][0]["point"], serde_json::json!([1]));
    }
}

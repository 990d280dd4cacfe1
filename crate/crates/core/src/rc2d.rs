//! Exact relaxation complexity in the plane: observers on the moved-out
//! polygon, maximal separable arcs, and a minimum circular cover.

use num_integer::Integer;

use crate::error::{invalid, Error, Result};
use crate::halfspace::for_each_box_point;
use crate::lattice::{dim_of, IPoint, LatticeSet};
use crate::rat::{self, Rat, RatPoint};
use crate::separation::{separable, SeparationCertificate, SeparationMode};

/// Rows `a·x₁ + b·x₂ ≤ c` with coprime `(a, b)`, outer normals in counterclockwise order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonHRep {
    pub rows: Vec<(i64, i64, i64)>,
}

impl PolygonHRep {
    pub fn contains(&self, p: &[i64]) -> bool {
        self.rows
            .iter()
            .all(|&(a, b, c)| a as i128 * p[0] as i128 + b as i128 * p[1] as i128 <= c as i128)
    }

    /// Vertices in counterclockwise order; vertex `i` is where rows `i` and `i + 1` meet.
    pub fn vertices(&self) -> Vec<(Rat, Rat)> {
        let k = self.rows.len();
        (0..k)
            .map(|i| {
                intersect(self.rows[i], self.rows[(i + 1) % k])
                    .expect("consecutive edges of a polygon are not parallel")
            })
            .collect()
    }
}

/// Observers in counterclockwise order, starting at the lexicographically smallest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObserverCycle {
    pub points: Vec<IPoint>,
}

impl ObserverCycle {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_set(&self) -> LatticeSet {
        LatticeSet::new(2, self.points.clone()).expect("distinct observers")
    }
}

/// The cyclic interval `{y_start, …, y_{start+length}}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub start: usize,
    pub length: usize,
}

impl Arc {
    pub fn indices(&self, n: usize) -> Vec<usize> {
        (0..=self.length).map(|j| (self.start + j) % n).collect()
    }

    pub fn contains(&self, i: usize, n: usize) -> bool {
        (i + n - self.start % n) % n <= self.length
    }
}

fn cross(o: &[i64], a: &[i64], b: &[i64]) -> i128 {
    (a[0] - o[0]) as i128 * (b[1] - o[1]) as i128 - (a[1] - o[1]) as i128 * (b[0] - o[0]) as i128
}

fn norm2(o: &[i64], a: &[i64]) -> i128 {
    let dx = (a[0] - o[0]) as i128;
    let dy = (a[1] - o[1]) as i128;
    dx * dx + dy * dy
}

/// Graham scan; counterclockwise hull vertices starting at the lowest (then leftmost) point.
pub fn convex_hull_2d(points: &[IPoint]) -> Vec<IPoint> {
    let mut pts: Vec<IPoint> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let pivot_idx = (0..pts.len())
        .min_by_key(|&i| (pts[i][1], pts[i][0]))
        .expect("non-empty");
    let pivot = pts.swap_remove(pivot_idx);
    pts.sort_by(|a, b| {
        let c = cross(&pivot, a, b);
        if c > 0 {
            std::cmp::Ordering::Less
        } else if c < 0 {
            std::cmp::Ordering::Greater
        } else {
            norm2(&pivot, a).cmp(&norm2(&pivot, b))
        }
    });
    let mut hull: Vec<IPoint> = vec![pivot];
    for p in pts {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

/// Irredundant description of `conv(V)`; row `i` is the edge from hull vertex `i` to `i + 1`.
pub fn hull_hrep_2d(v: &LatticeSet) -> Result<PolygonHRep> {
    if v.dim() != 2 || dim_of(v) < 2 {
        return invalid("need a two-dimensional planar set");
    }
    let hull = convex_hull_2d(v.points());
    let k = hull.len();
    let rows = (0..k)
        .map(|i| {
            let p = &hull[i];
            let q = &hull[(i + 1) % k];
            let (e1, e2) = (q[0] - p[0], q[1] - p[1]);
            let g = e1.gcd(&e2);
            let (a, b) = (e2 / g, -e1 / g);
            (a, b, a * p[0] + b * p[1])
        })
        .collect();
    Ok(PolygonHRep { rows })
}

fn intersect(r: (i64, i64, i64), s: (i64, i64, i64)) -> Option<(Rat, Rat)> {
    let det = r.0 as i128 * s.1 as i128 - r.1 as i128 * s.0 as i128;
    if det == 0 {
        return None;
    }
    let x = r.2 as i128 * s.1 as i128 - r.1 as i128 * s.2 as i128;
    let y = r.0 as i128 * s.2 as i128 - r.2 as i128 * s.0 as i128;
    let d = Rat::from_integer(det.into());
    Some((Rat::from_integer(x.into()) / &d, Rat::from_integer(y.into()) / d))
}

fn row_value(r: (i64, i64, i64), p: &(Rat, Rat)) -> Rat {
    rat::int(r.0) * &p.0 + rat::int(r.1) * &p.1
}

/// Shifts every edge out by one lattice layer and drops rows that no longer
/// support an edge.
pub fn move_out(p: &PolygonHRep) -> Result<PolygonHRep> {
    let rows: Vec<(i64, i64, i64)> = p.rows.iter().map(|&(a, b, c)| (a, b, c + 1)).collect();
    let k = rows.len();
    let mut verts: Vec<(Rat, Rat)> = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            if let Some(v) = intersect(rows[i], rows[j]) {
                let feasible = rows.iter().all(|&r| row_value(r, &v) <= rat::int(r.2));
                if feasible && !verts.contains(&v) {
                    verts.push(v);
                }
            }
        }
    }
    let kept: Vec<(i64, i64, i64)> = rows
        .into_iter()
        .filter(|&r| verts.iter().filter(|v| row_value(r, v) == rat::int(r.2)).count() >= 2)
        .collect();
    if kept.len() < 3 {
        return Err(Error::Internal("moved-out polygon degenerated".into()));
    }
    Ok(PolygonHRep { rows: kept })
}

/// All of `obs(conv(V) ∩ Z²)`: the lattice points on the boundary of the moved-out polygon.
pub fn observers_2d(v: &LatticeSet) -> Result<ObserverCycle> {
    let h = hull_hrep_2d(v)?;
    let out = move_out(&h)?;
    let verts = out.vertices();
    let k = out.rows.len();
    let mut pts: Vec<IPoint> = Vec::new();
    for i in 0..k {
        let (a, b, c) = out.rows[i];
        let start = &verts[(i + k - 1) % k];
        let end = &verts[i];
        let (g, s, t) = ext_gcd(a, b);
        debug_assert_eq!(g, 1);
        // particular solution of a x + b y = c, walked in direction (-b, a)
        let z0 = [s as i128 * c as i128, t as i128 * c as i128];
        let dir = [-(b as i128), a as i128];
        let len2 = Rat::from_integer((dir[0] * dir[0] + dir[1] * dir[1]).into());
        let param = |p: &(Rat, Rat)| -> Rat {
            ((&p.0 - Rat::from_integer(z0[0].into())) * Rat::from_integer(dir[0].into())
                + (&p.1 - Rat::from_integer(z0[1].into())) * Rat::from_integer(dir[1].into()))
                / &len2
        };
        let t0 = param(start).ceil().to_integer();
        let t1 = param(end).floor().to_integer();
        let mut tt = t0;
        while tt <= t1 {
            let ti: i128 = i128::try_from(&tt).map_err(|_| Error::Internal("overflow".into()))?;
            let x = z0[0] + ti * dir[0];
            let y = z0[1] + ti * dir[1];
            let p = vec![
                i64::try_from(x).map_err(|_| Error::Internal("overflow".into()))?,
                i64::try_from(y).map_err(|_| Error::Internal("overflow".into()))?,
            ];
            if pts.last() != Some(&p) && pts.first() != Some(&p) {
                pts.push(p);
            }
            tt += 1;
        }
    }
    let first = (0..pts.len()).min_by(|&i, &j| pts[i].cmp(&pts[j])).unwrap_or(0);
    pts.rotate_left(first);
    Ok(ObserverCycle { points: pts })
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

/// Does the closed segment `[p, q]` meet the polygon with vertices `hull` and rows `h`?
fn segment_meets(p: &[i64], q: &[i64], hull: &[IPoint], h: &PolygonHRep) -> bool {
    for &(a, b, c) in &h.rows {
        let vp = a as i128 * p[0] as i128 + b as i128 * p[1] as i128;
        let vq = a as i128 * q[0] as i128 + b as i128 * q[1] as i128;
        if vp > c as i128 && vq > c as i128 {
            return false;
        }
    }
    if p != q {
        let side: Vec<i128> = hull.iter().map(|v| cross(p, q, v)).collect();
        if side.iter().all(|&s| s > 0) || side.iter().all(|&s| s < 0) {
            return false;
        }
    }
    true
}

/// Inclusion-maximal cyclic intervals of observers that one inequality can cut.
pub fn maximal_arcs(x: &LatticeSet, cycle: &ObserverCycle) -> Result<Vec<Arc>> {
    let h = hull_hrep_2d(x)?;
    let hull = convex_hull_2d(x.points());
    let n = cycle.len();
    if n == 0 {
        return invalid("empty observer cycle");
    }
    let y = &cycle.points;
    let mut s = vec![0usize; n];
    for r in 0..n {
        if segment_meets(&y[r], &y[r], &hull, &h) {
            return Err(Error::Internal(format!("observer {:?} lies in the hull", y[r])));
        }
        let mut len = 0;
        while len + 1 < n && !segment_meets(&y[r], &y[(r + len + 1) % n], &hull, &h) {
            len += 1;
        }
        if len + 1 >= n {
            return Err(Error::Internal("one inequality cuts every observer".into()));
        }
        s[r] = len;
    }
    if cfg!(debug_assertions) && n <= 64 {
        let inner: Vec<RatPoint> = hull.iter().map(|p| RatPoint::from_ints(p)).collect();
        for r in 0..n {
            let arc = Arc {
                start: r,
                length: s[r],
            };
            let pts: Vec<IPoint> = arc.indices(n).iter().map(|&i| y[i].clone()).collect();
            debug_assert!(separable(&inner, &pts)?.is_some());
            let mut longer = pts.clone();
            longer.push(y[(r + s[r] + 1) % n].clone());
            debug_assert!(separable(&inner, &longer)?.is_none());
        }
    }
    Ok((0..n)
        .filter(|&r| s[(r + n - 1) % n] <= s[r])
        .map(|r| Arc {
            start: r,
            length: s[r],
        })
        .collect())
}

/// Fewest arcs covering every position of `0..n`; tries each arc as the first pick
/// and extends greedily counterclockwise.
pub fn min_circular_cover(arcs: &[Arc], n: usize) -> Result<(usize, Vec<Arc>)> {
    if n == 0 {
        return Ok((0, Vec::new()));
    }
    if let Some(a) = arcs.iter().find(|a| a.length + 1 >= n) {
        return Ok((1, vec![*a]));
    }
    let mut best: Option<Vec<Arc>> = None;
    for first in arcs {
        let goal = first.start + n - 1;
        let mut end = first.start + first.length;
        let mut chosen = vec![*first];
        let mut ok = true;
        while end < goal {
            let p = end + 1;
            let next = arcs
                .iter()
                .filter(|a| a.contains(p % n, n))
                .max_by_key(|a| {
                    let off = (p % n + n - a.start % n) % n;
                    a.length - off
                });
            match next {
                Some(a) => {
                    let off = (p % n + n - a.start % n) % n;
                    end = p + a.length - off;
                    chosen.push(*a);
                }
                None => {
                    ok = false;
                    break;
                }
            }
            if best.as_ref().is_some_and(|b| chosen.len() >= b.len()) {
                ok = false;
                break;
            }
        }
        if ok && best.as_ref().is_none_or(|b| chosen.len() < b.len()) {
            best = Some(chosen);
        }
    }
    match best {
        Some(b) => Ok((b.len(), b)),
        None => Err(Error::Internal("arcs do not cover the cycle".into())),
    }
}

/// Lattice points of `conv(V)`.
pub fn polygon_points(v: &LatticeSet) -> Result<LatticeSet> {
    let h = hull_hrep_2d(v)?;
    let bounds = v.bounding_box().expect("non-empty");
    let mut pts = Vec::new();
    for_each_box_point(&bounds, |z| {
        if h.contains(z) {
            pts.push(z.to_vec());
        }
    })?;
    LatticeSet::new(2, pts)
}

/// Full planar result.
#[derive(Debug, Clone)]
pub struct Rc2dReport {
    pub k: usize,
    pub certificate: SeparationCertificate,
    pub observers: ObserverCycle,
    pub arcs: Vec<Arc>,
    pub cover: Vec<Arc>,
}

/// `rc(conv(V) ∩ Z²)` with a certificate cutting every observer.
pub fn rc_2d(v: &LatticeSet) -> Result<(usize, SeparationCertificate)> {
    let r = rc_2d_report(v)?;
    Ok((r.k, r.certificate))
}

pub fn rc_2d_report(v: &LatticeSet) -> Result<Rc2dReport> {
    let x = polygon_points(v)?;
    let cycle = observers_2d(&x)?;
    let arcs = maximal_arcs(&x, &cycle)?;
    let n = cycle.len();
    let (k, cover) = min_circular_cover(&arcs, n)?;
    let inner: Vec<RatPoint> = convex_hull_2d(x.points())
        .iter()
        .map(|p| RatPoint::from_ints(p))
        .collect();
    let mut inequalities = Vec::with_capacity(k);
    for a in &cover {
        let pts: Vec<IPoint> = a.indices(n).iter().map(|&i| cycle.points[i].clone()).collect();
        let w = separable(&inner, &pts)?
            .ok_or_else(|| Error::Internal("chosen arc is not separable".into()))?;
        inequalities.push(w.normalized());
    }
    let mut assignment = Vec::with_capacity(n);
    for (i, y) in cycle.points.iter().enumerate() {
        let j = cover
            .iter()
            .position(|a| a.contains(i, n))
            .ok_or_else(|| Error::Internal("observer not covered".into()))?;
        assignment.push((y.clone(), j));
    }
    let certificate = SeparationCertificate {
        mode: SeparationMode::Strict,
        inequalities,
        assignment,
    };
    certificate.validate(&x.rat_points())?;
    Ok(Rc2dReport {
        k,
        certificate,
        observers: cycle,
        arcs,
        cover,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{box_set, is_observer, simplex};

    fn pentagon() -> LatticeSet {
        LatticeSet::new(2, vec![vec![2, 1], vec![4, 1], vec![4, 2], vec![3, 3], vec![1, 2]]).unwrap()
    }

    #[test]
    fn square_rows() {
        let h = hull_hrep_2d(&box_set(&[(0, 1), (0, 1)]).unwrap()).unwrap();
        let mut rows = h.rows.clone();
        rows.sort();
        assert_eq!(rows, vec![(-1, 0, 0), (0, -1, 0), (0, 1, 1), (1, 0, 1)]);
    }

    #[test]
    fn triangle_rows_and_move_out() {
        let h = hull_hrep_2d(&simplex(2)).unwrap();
        assert!(h.rows.contains(&(1, 1, 1)));
        let m = move_out(&h).unwrap();
        let mut rows = m.rows.clone();
        rows.sort();
        assert_eq!(rows, vec![(-1, 0, 1), (0, -1, 1), (1, 1, 2)]);
    }

    #[test]
    fn hull_drops_collinear_points() {
        let pts = vec![vec![0, 0], vec![1, 0], vec![2, 0], vec![2, 2], vec![0, 2], vec![1, 1]];
        assert_eq!(
            convex_hull_2d(&pts),
            vec![vec![0, 0], vec![2, 0], vec![2, 2], vec![0, 2]]
        );
    }

    #[test]
    fn square_observers() {
        let c = observers_2d(&box_set(&[(0, 1), (0, 1)]).unwrap()).unwrap();
        assert_eq!(c.len(), 12);
        assert_eq!(c.points[0], vec![-1, -1]);
        assert_eq!(c.points[1], vec![0, -1]);
    }

    #[test]
    fn pentagon_pipeline() {
        let v = pentagon();
        let x = polygon_points(&v).unwrap();
        let c = observers_2d(&x).unwrap();
        assert_eq!(c.len(), 10);
        for y in &c.points {
            assert!(is_observer(&x, y).unwrap());
        }
        let arcs = maximal_arcs(&x, &c).unwrap();
        assert_eq!(arcs.len(), 6);
        let (k, _) = min_circular_cover(&arcs, c.len()).unwrap();
        assert_eq!(k, 3);
        assert_eq!(rc_2d(&v).unwrap().0, 3);
    }

    #[test]
    fn circular_cover_examples() {
        let whole = [Arc { start: 2, length: 5 }];
        assert_eq!(min_circular_cover(&whole, 6).unwrap().0, 1);
        let singles: Vec<Arc> = (0..4).map(|s| Arc { start: s, length: 0 }).collect();
        assert_eq!(min_circular_cover(&singles, 4).unwrap().0, 4);
        assert!(min_circular_cover(&singles[..3], 4).is_err());
    }

    #[test]
    fn rc_of_small_polygons() {
        assert_eq!(rc_2d(&box_set(&[(0, 1), (0, 1)]).unwrap()).unwrap().0, 3);
        assert_eq!(rc_2d(&box_set(&[(0, 2), (0, 2)]).unwrap()).unwrap().0, 4);
        assert_eq!(rc_2d(&simplex(2)).unwrap().0, 3);
    }
}

//! Finite sets of integer points and the standard families built from them.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{invalid, Error, Result};
use crate::geometry::{conv_membership, extreme_points};
use crate::halfspace::for_each_box_point;
use crate::rat::{Rat, RatPoint};

/// An integer point.
pub type IPoint = Vec<i64>;

/// A finite set of distinct points of `Z^d`, stored in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeSet {
    dim: usize,
    points: Vec<IPoint>,
}

impl LatticeSet {
    /// Builds a set; duplicates are rejected.
    pub fn new(dim: usize, mut points: Vec<IPoint>) -> Result<Self> {
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
        }
        points.sort();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return invalid(format!("duplicate point {:?}", w[0]));
        }
        Ok(LatticeSet { dim, points })
    }

    /// Builds a set, silently merging duplicates.
    pub fn from_points_dedup(dim: usize, mut points: Vec<IPoint>) -> Result<Self> {
        points.sort();
        points.dedup();
        LatticeSet::new(dim, points)
    }

    pub fn empty(dim: usize) -> Self {
        LatticeSet {
            dim,
            points: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[IPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, IPoint> {
        self.points.iter()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.points
            .binary_search_by(|q| q.as_slice().cmp(p))
            .is_ok()
    }

    pub fn rat_points(&self) -> Vec<RatPoint> {
        self.points.iter().map(|p| RatPoint::from_ints(p)).collect()
    }

    pub fn into_points(self) -> Vec<IPoint> {
        self.points
    }

    fn same_dim(&self, other: &LatticeSet) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn union(&self, other: &LatticeSet) -> Result<LatticeSet> {
        self.same_dim(other)?;
        let mut pts = self.points.clone();
        pts.extend(other.points.iter().cloned());
        LatticeSet::from_points_dedup(self.dim, pts)
    }

    pub fn difference(&self, other: &LatticeSet) -> Result<LatticeSet> {
        self.same_dim(other)?;
        Ok(LatticeSet {
            dim: self.dim,
            points: self
                .points
                .iter()
                .filter(|p| !other.contains(p))
                .cloned()
                .collect(),
        })
    }

    pub fn intersection(&self, other: &LatticeSet) -> Result<LatticeSet> {
        self.same_dim(other)?;
        Ok(LatticeSet {
            dim: self.dim,
            points: self
                .points
                .iter()
                .filter(|p| other.contains(p))
                .cloned()
                .collect(),
        })
    }

    pub fn with_point(&self, p: IPoint) -> Result<LatticeSet> {
        let mut pts = self.points.clone();
        pts.push(p);
        LatticeSet::new(self.dim, pts)
    }

    pub fn is_subset(&self, other: &LatticeSet) -> bool {
        self.dim == other.dim && self.points.iter().all(|p| other.contains(p))
    }

    /// Coordinate-wise `(min, max)`; `None` for the empty set.
    pub fn bounding_box(&self) -> Option<Vec<(i64, i64)>> {
        let first = self.points.first()?;
        let mut b: Vec<(i64, i64)> = first.iter().map(|&v| (v, v)).collect();
        for p in &self.points {
            for (bi, &v) in b.iter_mut().zip(p) {
                bi.0 = bi.0.min(v);
                bi.1 = bi.1.max(v);
            }
        }
        Some(b)
    }

    /// Image under `x ↦ U x + t`.
    pub fn transform(&self, u: &[Vec<i64>], t: &[i64]) -> Result<LatticeSet> {
        if u.len() != self.dim || t.len() != self.dim || u.iter().any(|r| r.len() != self.dim) {
            return invalid("transform has wrong shape");
        }
        let pts = self
            .points
            .iter()
            .map(|p| {
                (0..self.dim)
                    .map(|i| u[i].iter().zip(p).map(|(a, b)| a * b).sum::<i64>() + t[i])
                    .collect()
            })
            .collect();
        LatticeSet::from_points_dedup(self.dim, pts)
    }

    /// Vertices of `conv(X)` as integer points.
    pub fn vertices(&self) -> Result<Vec<IPoint>> {
        let ext = extreme_points(&self.rat_points())?;
        Ok(ext
            .iter()
            .map(|p| p.to_ints().expect("vertex of an integer set"))
            .collect())
    }

    /// Parses the point-set text format: a header line `d n`, then `n` lines
    /// of `d` integers. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<LatticeSet> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let perr = |line: usize, msg: String| Error::Parse { line, msg };
        let (hl, header) = lines.next().ok_or_else(|| perr(1, "missing header \"d n\"".into()))?;
        let head = parse_ints(hl, header)?;
        let [d, n] = head[..] else {
            return Err(perr(hl, "header must be \"d n\"".into()));
        };
        if d < 0 || n < 0 {
            return Err(perr(hl, "negative size in header".into()));
        }
        let (d, n) = (d as usize, n as usize);
        let mut pts = Vec::with_capacity(n);
        let mut seen = HashSet::new();
        for (ln, line) in lines.by_ref() {
            if pts.len() == n {
                return Err(perr(ln, format!("more than {n} points")));
            }
            let p = parse_ints(ln, line)?;
            if p.len() != d {
                return Err(perr(ln, format!("expected {d} coordinates, found {}", p.len())));
            }
            if !seen.insert(p.clone()) {
                return Err(perr(ln, format!("duplicate point {p:?}")));
            }
            pts.push(p);
        }
        if pts.len() != n {
            return Err(perr(
                text.lines().count().max(1),
                format!("expected {n} points, found {}", pts.len()),
            ));
        }
        LatticeSet::new(d, pts)
    }
}

fn parse_ints(ln: usize, line: &str) -> Result<Vec<i64>> {
    line.split_whitespace()
        .map(|s| {
            s.parse::<i64>().map_err(|_| Error::Parse {
                line: ln,
                msg: format!("not an integer: {s:?}"),
            })
        })
        .collect()
}

impl fmt::Display for LatticeSet {
    /// Writes the point-set text format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.dim, self.points.len())?;
        for p in &self.points {
            let s: Vec<String> = p.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", s.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for LatticeSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        LatticeSet::parse(s)
    }
}

impl<'a> IntoIterator for &'a LatticeSet {
    type Item = &'a IPoint;
    type IntoIter = std::slice::Iter<'a, IPoint>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// `X = conv(X) ∩ Z^d`.
pub fn is_lattice_convex(x: &LatticeSet) -> Result<bool> {
    let Some(bounds) = x.bounding_box() else {
        return invalid("empty set");
    };
    let verts: Vec<RatPoint> = x.vertices()?.iter().map(|p| RatPoint::from_ints(p)).collect();
    let mut candidates = Vec::new();
    for_each_box_point(&bounds, |z| {
        if !x.contains(z) {
            candidates.push(z.to_vec());
        }
    })?;
    for z in candidates {
        if conv_membership(&RatPoint::from_ints(&z), &verts)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Affine dimension of `conv(X)`; `-1` for the empty set.
pub fn dim_of(x: &LatticeSet) -> i64 {
    let Some(base) = x.points().first() else {
        return -1;
    };
    let rows: Vec<Vec<Rat>> = x.points()[1..]
        .iter()
        .map(|p| {
            p.iter()
                .zip(base)
                .map(|(a, b)| Rat::from_integer((a - b).into()))
                .collect()
        })
        .collect();
    rank(rows) as i64
}

/// Rank of a rational matrix by exact Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Rat>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &pivot;
                for j in c..ncols {
                    let v = &f * &rows[r][j];
                    rows[i][j] -= v;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// `B_t = [-t, t]^d ∩ Z^d` in the dimension of `x`.
pub fn ball(x: &LatticeSet, t: i64) -> Result<LatticeSet> {
    cube(x.dim(), t)
}

/// The cube `[-t, t]^d ∩ Z^d`.
pub fn cube(dim: usize, t: i64) -> Result<LatticeSet> {
    if t < 0 {
        return invalid("ball radius must be non-negative");
    }
    let bounds = vec![(-t, t); dim];
    let mut pts = Vec::new();
    for_each_box_point(&bounds, |z| pts.push(z.to_vec()))?;
    LatticeSet::new(dim, pts)
}

/// Is `z ∉ X` an observer, i.e. `X ∪ {z}` lattice-convex?
pub fn is_observer(x: &LatticeSet, z: &[i64]) -> Result<bool> {
    if z.len() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: z.len(),
        });
    }
    if x.contains(z) {
        return invalid(format!("{z:?} belongs to the set"));
    }
    let y = x.with_point(z.to_vec())?;
    // Any lattice point of conv(X ∪ {z}) outside X ∪ {z} lies in the box spanned by them.
    let verts: Vec<RatPoint> = {
        let mut v = x.vertices()?;
        v.push(z.to_vec());
        v.iter().map(|p| RatPoint::from_ints(p)).collect()
    };
    let bounds = y.bounding_box().expect("non-empty");
    let mut candidates = Vec::new();
    for_each_box_point(&bounds, |p| {
        if !y.contains(p) {
            candidates.push(p.to_vec());
        }
    })?;
    for p in candidates {
        if conv_membership(&RatPoint::from_ints(&p), &verts)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `obs(X) ∩ region`.
pub fn observers_in_region(x: &LatticeSet, region: &LatticeSet) -> Result<LatticeSet> {
    x.same_dim(region)?;
    let mut out = Vec::new();
    for z in region.iter() {
        if !x.contains(z) && is_observer(x, z)? {
            out.push(z.clone());
        }
    }
    LatticeSet::new(x.dim(), out)
}

/// `2X - X` when `X` meets every residue class of `Z^d / 2Z^d`, which then
/// contains every observer of a lattice-convex `X`. `None` otherwise.
pub fn parity_candidates(x: &LatticeSet) -> Option<LatticeSet> {
    let d = x.dim();
    if d >= 63 {
        return None;
    }
    let mut classes = HashSet::new();
    for p in x.iter() {
        let mut key = 0u64;
        for (i, v) in p.iter().enumerate() {
            if v.rem_euclid(2) == 1 {
                key |= 1 << i;
            }
        }
        classes.insert(key);
    }
    if classes.len() != 1usize << d {
        return None;
    }
    let mut pts = Vec::with_capacity(x.len() * x.len());
    for p in x.iter() {
        for q in x.iter() {
            pts.push(p.iter().zip(q).map(|(a, b)| 2 * a - b).collect());
        }
    }
    LatticeSet::from_points_dedup(d, pts).ok()
}

/// `Δ_d = {0, e_1, ..., e_d}`.
pub fn simplex(dim: usize) -> LatticeSet {
    let mut pts = vec![vec![0; dim]];
    for i in 0..dim {
        let mut e = vec![0; dim];
        e[i] = 1;
        pts.push(e);
    }
    LatticeSet::new(dim, pts).expect("distinct points")
}

/// `◇_d = {0, ±e_1, ..., ±e_d}`.
pub fn cross(dim: usize) -> LatticeSet {
    let mut pts = vec![vec![0; dim]];
    for i in 0..dim {
        for s in [1, -1] {
            let mut e = vec![0; dim];
            e[i] = s;
            pts.push(e);
        }
    }
    LatticeSet::new(dim, pts).expect("distinct points")
}

/// The box `[a_1, b_1] × ... × [a_d, b_d] ∩ Z^d`.
pub fn box_set(segments: &[(i64, i64)]) -> Result<LatticeSet> {
    if segments.iter().any(|(a, b)| a > b) {
        return invalid("box segment with a > b");
    }
    let mut pts = Vec::new();
    for_each_box_point(segments, |z| pts.push(z.to_vec()))?;
    LatticeSet::new(segments.len(), pts)
}

/// `{e_j - e_k + e_l : j < k < l}` in `Z^d`.
pub fn debruijn_set(dim: usize) -> Result<LatticeSet> {
    if dim < 3 {
        return invalid("dimension must be at least 3");
    }
    let mut pts = Vec::new();
    for j in 0..dim {
        for k in j + 1..dim {
            for l in k + 1..dim {
                let mut p = vec![0; dim];
                p[j] += 1;
                p[k] -= 1;
                p[l] += 1;
                pts.push(p);
            }
        }
    }
    LatticeSet::new(dim, pts)
}

/// 28 points outside `conv(Δ_3)` whose hiding graph has no 3-colouring.
/// Listed in certificate order; [`delta3_certificate_ordered`] keeps it.
pub fn delta3_certificate() -> LatticeSet {
    LatticeSet::new(3, delta3_certificate_ordered()).expect("distinct points")
}

/// The same points as [`delta3_certificate`], indexed by their certificate ID.
pub fn delta3_certificate_ordered() -> Vec<IPoint> {
    DELTA3_CERT.iter().map(|p| p.to_vec()).collect()
}

const DELTA3_CERT: [[i64; 3]; 28] = [
    [0, 1, 1],
    [1, 0, 1],
    [0, 2, 0],
    [1, 1, -1],
    [1, 1, -2],
    [0, 0, -1],
    [-1, 0, 1],
    [-1, 0, 0],
    [2, 0, 0],
    [0, 0, 2],
    [2, 0, -1],
    [-1, 0, 2],
    [0, -1, 1],
    [0, -1, 0],
    [1, 1, 1],
    [-1, 1, 0],
    [1, 1, 0],
    [0, 2, -1],
    [0, -1, 2],
    [-2, 1, 1],
    [-1, 1, 1],
    [2, -1, 0],
    [-1, 2, 0],
    [1, 0, -1],
    [1, -1, 0],
    [1, -1, 1],
    [1, -2, 1],
    [0, 1, -1],
];

/// Gcd of the absolute values of the entries; 0 for the zero vector.
pub fn content(p: &[i64]) -> i64 {
    p.iter().fold(0i64, |g, &v| num_integer::gcd(g, v.abs()))
}

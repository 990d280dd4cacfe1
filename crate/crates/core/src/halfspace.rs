//! Rational halfspaces, H-polyhedra, and lattice-point enumeration.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{IPoint, LatticeSet};
use crate::lp::{lp_maximize, LinearConstraint, LpOutcome, Relation};
use crate::rat::{self, Rat};

/// The halfspace `a·x ≤ b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Inequality {
    #[serde(serialize_with = "ser_rats")]
    pub a: Vec<Rat>,
    #[serde(serialize_with = "ser_rat")]
    pub b: Rat,
}

fn ser_rats<S: serde::Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(rat::fmt_rat))
}

fn ser_rat<S: serde::Serializer>(v: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rat::fmt_rat(v))
}

impl Inequality {
    pub fn new(a: Vec<Rat>, b: Rat) -> Self {
        Inequality { a, b }
    }

    pub fn from_ints(a: &[i64], b: i64) -> Self {
        Inequality {
            a: a.iter().map(|&v| rat::int(v)).collect(),
            b: rat::int(b),
        }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// `b - a·x`; non-negative exactly when `x` satisfies the inequality.
    pub fn slack(&self, x: &[Rat]) -> Rat {
        &self.b - rat::dot(&self.a, x)
    }

    pub fn slack_int(&self, x: &[i64]) -> Rat {
        &self.b - rat::dot_int(&self.a, x)
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        !self.slack(x).is_negative()
    }

    pub fn contains_int(&self, x: &[i64]) -> bool {
        !self.slack_int(x).is_negative()
    }

    pub fn is_trivial(&self) -> bool {
        self.a.iter().all(|v| v.is_zero())
    }

    /// Rescales by a positive rational.
    pub fn scaled(&self, factor: &Rat) -> Inequality {
        debug_assert!(factor.is_positive());
        Inequality {
            a: self.a.iter().map(|v| v * factor).collect(),
            b: &self.b * factor,
        }
    }

    /// Positive multiple with coprime integer entries.
    pub fn normalized(&self) -> Inequality {
        let all = self.a.iter().chain(std::iter::once(&self.b));
        let den = all
            .clone()
            .fold(BigInt::one(), |l, v| l.lcm(v.denom()));
        let num = all.fold(BigInt::zero(), |g, v| g.gcd(&(v.numer() * &den / v.denom())));
        if num.is_zero() {
            return self.clone();
        }
        let f = Rat::new(den, num);
        self.scaled(&f)
    }

    pub(crate) fn as_constraint(&self) -> LinearConstraint {
        LinearConstraint::new(self.a.clone(), Relation::Le, self.b.clone())
    }
}

/// A polyhedron `{x : a_i·x ≤ b_i for all rows}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HPolyhedron {
    dim: usize,
    rows: Vec<Inequality>,
}

impl HPolyhedron {
    pub fn new(dim: usize, rows: Vec<Inequality>) -> Result<Self> {
        for r in &rows {
            if r.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: r.dim(),
                });
            }
        }
        Ok(HPolyhedron { dim, rows })
    }

    /// Rows `A x ≤ rhs` from integer data.
    pub fn from_int_rows(rows: &[(&[i64], i64)]) -> Result<Self> {
        let dim = rows.first().map_or(0, |r| r.0.len());
        HPolyhedron::new(
            dim,
            rows.iter().map(|(a, b)| Inequality::from_ints(a, *b)).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Inequality] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains_int(&self, x: &[i64]) -> bool {
        self.rows.iter().all(|r| r.contains_int(x))
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.rows.iter().all(|r| r.contains(x))
    }

    /// Adds the box `[-t, t]^d`.
    pub fn intersect_box(&self, t: i64) -> HPolyhedron {
        let mut rows = self.rows.clone();
        for i in 0..self.dim {
            let mut e = vec![0i64; self.dim];
            e[i] = 1;
            rows.push(Inequality::from_ints(&e, t));
            e[i] = -1;
            rows.push(Inequality::from_ints(&e, t));
        }
        HPolyhedron {
            dim: self.dim,
            rows,
        }
    }

    /// Parses the text format: header `d m`, then `m` lines `a_1 … a_d b`
    /// with integer or `p/q` entries. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<HPolyhedron> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let perr = |line: usize, msg: String| Error::Parse { line, msg };
        let (hl, header) = lines
            .next()
            .ok_or_else(|| perr(1, "missing header \"d m\"".into()))?;
        let head: Vec<&str> = header.split_whitespace().collect();
        let (d, m) = match head[..] {
            [d, m] => match (d.parse::<usize>(), m.parse::<usize>()) {
                (Ok(d), Ok(m)) => (d, m),
                _ => return Err(perr(hl, "header must be two non-negative integers".into())),
            },
            _ => return Err(perr(hl, "header must be \"d m\"".into())),
        };
        let mut rows = Vec::with_capacity(m);
        for (ln, line) in lines {
            if rows.len() == m {
                return Err(perr(ln, format!("more than {m} rows")));
            }
            let vals: Vec<Rat> = line
                .split_whitespace()
                .map(|t| rat::parse_rat(t).ok_or_else(|| perr(ln, format!("not a rational: {t:?}"))))
                .collect::<Result<_>>()?;
            if vals.len() != d + 1 {
                return Err(perr(ln, format!("expected {} entries, found {}", d + 1, vals.len())));
            }
            let mut a = vals;
            let b = a.pop().expect("non-empty");
            rows.push(Inequality::new(a, b));
        }
        if rows.len() != m {
            return Err(perr(
                text.lines().count().max(1),
                format!("expected {m} rows, found {}", rows.len()),
            ));
        }
        HPolyhedron::new(d, rows)
    }

    /// Writes the text format read by [`HPolyhedron::parse`].
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.dim, self.rows.len());
        for r in &self.rows {
            let parts: Vec<String> = r.a.iter().chain(std::iter::once(&r.b)).map(rat::fmt_rat).collect();
            s.push_str(&parts.join(" "));
            s.push('\n');
        }
        s
    }

    fn constraints(&self) -> Vec<LinearConstraint> {
        self.rows.iter().map(Inequality::as_constraint).collect()
    }

    /// Integer bounding box, `None` if the polyhedron is empty.
    pub fn integer_bounds(&self) -> Result<Option<Vec<(i64, i64)>>> {
        let cons = self.constraints();
        let mut bounds = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let mut obj = vec![Rat::zero(); self.dim];
            obj[i] = rat::one();
            let hi = match lp_maximize(&obj, &cons, self.dim)? {
                LpOutcome::Optimal { value, .. } => value,
                LpOutcome::Unbounded => return Err(Error::Unbounded),
                LpOutcome::Infeasible => return Ok(None),
            };
            obj[i] = -rat::one();
            let lo = match lp_maximize(&obj, &cons, self.dim)? {
                LpOutcome::Optimal { value, .. } => -value,
                LpOutcome::Unbounded => return Err(Error::Unbounded),
                LpOutcome::Infeasible => return Ok(None),
            };
            let lo = rat::ceil_i64(&lo).ok_or_else(|| Error::InvalidInput("bound overflow".into()))?;
            let hi = rat::floor_i64(&hi).ok_or_else(|| Error::InvalidInput("bound overflow".into()))?;
            bounds.push((lo, hi));
        }
        Ok(Some(bounds))
    }
}

/// Upper limit on the number of box points scanned by [`lattice_points`].
pub const MAX_ENUMERATION: u128 = 200_000_000;

/// All integer points of `p`. Boundedness is certified coordinate-wise by LP;
/// the integer bounding box is then scanned in row-major order.
pub fn lattice_points(p: &HPolyhedron) -> Result<LatticeSet> {
    let Some(bounds) = p.integer_bounds()? else {
        return Ok(LatticeSet::empty(p.dim()));
    };
    let mut found = Vec::new();
    for_each_box_point(&bounds, |z| {
        if p.contains_int(z) {
            found.push(z.to_vec());
        }
    })?;
    LatticeSet::new(p.dim(), found)
}

/// Visits every integer point of a box in row-major order (last coordinate fastest).
pub fn for_each_box_point(bounds: &[(i64, i64)], mut f: impl FnMut(&[i64])) -> Result<()> {
    let mut total: u128 = 1;
    for &(lo, hi) in bounds {
        if hi < lo {
            return Ok(());
        }
        total = total.saturating_mul((hi - lo + 1) as u128);
    }
    if total > MAX_ENUMERATION {
        return Err(Error::InvalidInput(format!(
            "integer box with {total} points is too large to enumerate"
        )));
    }
    let mut z: IPoint = bounds.iter().map(|b| b.0).collect();
    if bounds.is_empty() {
        f(&z);
        return Ok(());
    }
    loop {
        f(&z);
        let mut i = bounds.len();
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if z[i] < bounds[i].1 {
                z[i] += 1;
                break;
            }
            z[i] = bounds[i].0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_lattice_points() {
        let p = HPolyhedron::from_int_rows(&[
            (&[1, 0], 1),
            (&[0, 1], 1),
            (&[-1, 0], 0),
            (&[0, -1], 0),
        ])
        .unwrap();
        let pts = lattice_points(&p).unwrap();
        assert_eq!(
            pts.points(),
            &[vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
    }

    #[test]
    fn halfplane_is_unbounded() {
        let p = HPolyhedron::from_int_rows(&[(&[1, 1], 1)]).unwrap();
        assert_eq!(lattice_points(&p), Err(Error::Unbounded));
    }

    #[test]
    fn empty_polyhedron_has_no_points() {
        let p = HPolyhedron::from_int_rows(&[(&[1], 0), (&[-1], -1)]).unwrap();
        assert!(lattice_points(&p).unwrap().is_empty());
    }

    #[test]
    fn fractional_bounds_round_inward() {
        let p = HPolyhedron::new(
            1,
            vec![
                Inequality::new(vec![rat::int(2)], rat::int(5)),
                Inequality::new(vec![rat::int(-3)], rat::int(1)),
            ],
        )
        .unwrap();
        assert_eq!(lattice_points(&p).unwrap().points(), &[vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn normalization_gives_coprime_integers() {
        let i = Inequality::new(vec![rat::ratio(2, 3), rat::ratio(-4, 9)], rat::ratio(2, 1));
        let n = i.normalized();
        assert_eq!(n, Inequality::from_ints(&[3, -2], 9));
        let z = Inequality::from_ints(&[0, 0], 0);
        assert_eq!(z.normalized(), z);
    }

    #[test]
    fn text_format_round_trip() {
        let p = HPolyhedron::parse("# tri\n2 3\n-1 0 0\n0 -1 0\n1 1/2 3/4\n").unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.rows()[2].b, rat::ratio(3, 4));
        assert_eq!(HPolyhedron::parse(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn text_format_errors() {
        let line = |t: &str| match HPolyhedron::parse(t) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(line("2 1\n1 x 0\n"), 2);
        assert_eq!(line("2 1\n1 1/0 0\n"), 2);
        assert_eq!(line("2 1\n1 0\n"), 2);
        assert_eq!(line("2\n"), 1);
        assert_eq!(line("2 2\n1 0 0\n"), 2);
    }

    #[test]
    fn box_enumeration_is_row_major() {
        let mut seen = Vec::new();
        for_each_box_point(&[(0, 1), (5, 6)], |z| seen.push(z.to_vec())).unwrap();
        assert_eq!(seen, vec![vec![0, 5], vec![0, 6], vec![1, 5], vec![1, 6]]);
    }
}

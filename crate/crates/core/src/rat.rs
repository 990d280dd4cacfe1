//! Exact rationals and rational points.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rat = num_rational::BigRational;

/// A point with rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatPoint(pub Vec<Rat>);

impl RatPoint {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn from_ints(p: &[i64]) -> Self {
        RatPoint(p.iter().map(|&v| int(v)).collect())
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    /// Returns the integer coordinates if every coordinate is integral.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.0
            .iter()
            .map(|c| {
                if c.is_integer() {
                    i64::try_from(c.to_integer()).ok()
                } else {
                    None
                }
            })
            .collect()
    }
}

pub fn int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// Parses `"p/q"` or `"p"`; the result is reduced.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rat::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}

/// Formats as `"p/q"`, or `"p"` when integral.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Dot product of a rational vector with an integer vector.
pub fn dot_int(a: &[Rat], x: &[i64]) -> Rat {
    let mut acc = Rat::zero();
    for (ai, &xi) in a.iter().zip(x) {
        if xi != 0 && !ai.is_zero() {
            acc += ai * BigInt::from(xi);
        }
    }
    acc
}

pub fn dot(a: &[Rat], x: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for (ai, xi) in a.iter().zip(x) {
        if !ai.is_zero() && !xi.is_zero() {
            acc += ai * xi;
        }
    }
    acc
}

pub fn floor_i64(r: &Rat) -> Option<i64> {
    i64::try_from(r.floor().to_integer()).ok()
}

pub fn ceil_i64(r: &Rat) -> Option<i64> {
    i64::try_from(r.ceil().to_integer()).ok()
}

pub fn is_positive(r: &Rat) -> bool {
    r.is_positive()
}

/// Factorial as an exact rational.
pub fn factorial(n: u32) -> Rat {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Rat::from_integer(acc)
}

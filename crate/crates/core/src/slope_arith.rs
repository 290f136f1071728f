//! Curve classes and slopes on a boundary torus.
//!
//! A curve class is written `lambda·λ + mu·μ` where `λ` is the rational
//! Seifert longitude and `μ` the meridian. Its slope is `mu / lambda`, so the
//! longitude has slope `0` and the meridian has slope `∞`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CurveClass {
    /// Longitude multiplicity.
    pub lambda: i64,
    /// Meridian multiplicity.
    pub mu: i64,
}

impl CurveClass {
    pub const ZERO: CurveClass = CurveClass { lambda: 0, mu: 0 };

    pub const fn new(lambda: i64, mu: i64) -> Self {
        CurveClass { lambda, mu }
    }

    pub fn is_zero(&self) -> bool {
        self.lambda == 0 && self.mu == 0
    }

    /// Number of parallel circles realizing the class, `gcd(|lambda|, |mu|)`.
    pub fn multiplicity(&self) -> u64 {
        self.lambda.unsigned_abs().gcd(&self.mu.unsigned_abs())
    }

    pub fn is_primitive(&self) -> bool {
        self.multiplicity() == 1
    }

    pub fn slope(&self) -> Result<Slope> {
        reduce(self.lambda, self.mu)
    }

    pub fn scaled(&self, k: i64) -> CurveClass {
        CurveClass::new(self.lambda * k, self.mu * k)
    }
}

impl std::ops::Add for CurveClass {
    type Output = CurveClass;
    fn add(self, rhs: CurveClass) -> CurveClass {
        CurveClass::new(self.lambda + rhs.lambda, self.mu + rhs.mu)
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lambda, self.mu)
    }
}

/// A slope in `ℚ ∪ {∞}` in lowest terms with nonnegative denominator.
/// Infinity is stored as `1/0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Slope {
    num: i64,
    den: u64,
}

impl Slope {
    pub const INFINITY: Slope = Slope { num: 1, den: 0 };
    pub const ZERO: Slope = Slope { num: 0, den: 1 };

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn is_infinite(&self) -> bool {
        self.den == 0
    }

    /// The finite value, or `None` for `∞`.
    pub fn as_ratio(&self) -> Option<Ratio<i64>> {
        (self.den != 0).then(|| Ratio::new_raw(self.num, self.den as i64))
    }

    pub fn from_ratio(r: Ratio<i64>) -> Slope {
        // Ratio keeps a positive denominator in lowest terms.
        Slope { num: *r.numer(), den: *r.denom() as u64 }
    }
}

/// Canonical slope `b/a` of the curve class `(a, b)`.
pub fn reduce(a: i64, b: i64) -> Result<Slope> {
    if a == 0 && b == 0 {
        return Err(Error::ZeroClass);
    }
    if a == 0 {
        return Ok(Slope::INFINITY);
    }
    let g = a.gcd(&b);
    let (mut num, mut den) = (b / g, a / g);
    if den < 0 {
        num = -num;
        den = -den;
    }
    Ok(Slope { num, den: den as u64 })
}

/// Geometric intersection number of two curve classes on a torus.
pub fn intersection_number(c1: CurveClass, c2: CurveClass) -> u64 {
    let det = c1.lambda as i128 * c2.mu as i128 - c2.lambda as i128 * c1.mu as i128;
    det.unsigned_abs() as u64
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 0 {
            f.write_str("inf")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Slope> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(Slope::INFINITY);
        }
        let r = crate::rational::parse_rational(s)?;
        Ok(Slope::from_ratio(r))
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite slopes ordered by value, `∞` last.
impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.as_ratio(), other.as_ratio()) {
            (Some(a), Some(b)) => a.cmp(&b),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        }
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Slope, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

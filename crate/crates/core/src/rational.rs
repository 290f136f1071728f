//! Exact rationals as they appear in input files: `"3"`, `"-1/6"`, or a bare
//! JSON integer.

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Q = Ratio<i64>;

pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        None => s.parse::<i64>().map(Q::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Q::new(n, d))
        }
    }
}

/// `p/q` with `q > 0`, or just `p` when the value is an integer.
pub fn fmt_rational(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Serde adapter storing a rational as a string.
pub mod as_string {
    use super::*;
    use serde::de::{self, Visitor};
    use serde::{Deserializer, Serializer};
    use std::fmt;

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(q))
    }

    struct RatVisitor;

    impl Visitor<'_> for RatVisitor {
        type Value = Q;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("an integer or a string \"p/q\"")
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Q, E> {
            Ok(Q::from_integer(v))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Q, E> {
            i64::try_from(v).map(Q::from_integer).map_err(E::custom)
        }

        fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Q, E> {
            parse_rational(v).map_err(E::custom)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        d.deserialize_any(RatVisitor)
    }
}

/// Serde adapter for a matrix of rationals stored as strings.
pub mod matrix_as_string {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Cell(#[serde(with = "super::as_string")] Q);

    pub fn serialize<S: Serializer>(m: &[Vec<Q>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Cell>> = m.iter().map(|r| r.iter().map(|&q| Cell(q)).collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Q>>, D::Error> {
        let rows: Vec<Vec<Cell>> = Vec::deserialize(d)?;
        Ok(rows.into_iter().map(|r| r.into_iter().map(|c| c.0).collect()).collect())
    }
}

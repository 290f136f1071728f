//! Link data and the boundary map `H₂(X, ∂X) → H₁(∂X)`.
//!
//! Components are indexed from 0 in the API; reports print them as
//! `P1, P2, …`.

use std::fmt;
use std::ops::{Add, Neg};

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice;
use crate::rational::{self, Q};
use crate::slope_arith::{CurveClass, Slope};

/// Homological data of an `n`-component link in a rational homology sphere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLinkData", into = "RawLinkData")]
pub struct LinkData {
    orders: Vec<i64>,
    linking: Vec<Vec<Q>>,
    /// False for data produced by [`surgered_linking`], whose torsion orders
    /// are not known.
    orders_verified: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLinkData {
    orders: Vec<i64>,
    #[serde(with = "rational::matrix_as_string")]
    linking: Vec<Vec<Q>>,
}

impl TryFrom<RawLinkData> for LinkData {
    type Error = Error;
    fn try_from(raw: RawLinkData) -> Result<LinkData> {
        LinkData::new(raw.orders, raw.linking)
    }
}

impl From<LinkData> for RawLinkData {
    fn from(l: LinkData) -> RawLinkData {
        RawLinkData { orders: l.orders, linking: l.linking }
    }
}

impl LinkData {
    pub fn new(orders: Vec<i64>, linking: Vec<Vec<Q>>) -> Result<LinkData> {
        let n = orders.len();
        if n == 0 {
            return Err(Error::InvalidLinkData("a link needs at least one component".into()));
        }
        check_square(&linking, n)?;
        if let Some(i) = orders.iter().position(|&m| m <= 0) {
            return Err(Error::InvalidLinkData(format!("order m{} = {} is not positive", i + 1, orders[i])));
        }
        for i in 0..n {
            for j in 0..n {
                if !(linking[i][j] * orders[i]).is_integer() {
                    return Err(Error::InvalidLinkData(format!(
                        "m{}·lk({},{}) = {}·{} is not an integer",
                        i + 1,
                        i + 1,
                        j + 1,
                        orders[i],
                        rational::fmt_rational(&linking[i][j])
                    )));
                }
            }
        }
        Ok(LinkData { orders, linking, orders_verified: true })
    }

    /// Convenience constructor for two components.
    pub fn two(m1: i64, m2: i64, lk: Q) -> Result<LinkData> {
        LinkData::new(vec![m1, m2], vec![vec![Q::zero(), lk], vec![lk, Q::zero()]])
    }

    pub fn n(&self) -> usize {
        self.linking.len()
    }

    pub fn linking(&self) -> &[Vec<Q>] {
        &self.linking
    }

    pub fn lk(&self, i: usize, j: usize) -> Q {
        self.linking[i][j]
    }

    pub fn orders_verified(&self) -> bool {
        self.orders_verified
    }

    /// Torsion orders, refused when they were never computed.
    pub fn orders(&self) -> Result<&[i64]> {
        if self.orders_verified {
            Ok(&self.orders)
        } else {
            Err(Error::OrdersUnverified)
        }
    }

    /// Attach externally computed orders to surgered data.
    pub fn with_orders(&self, orders: Vec<i64>) -> Result<LinkData> {
        if orders.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: orders.len() });
        }
        LinkData::new(orders, self.linking.clone())
    }

    pub fn pairwise_nonzero(&self) -> Result<()> {
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                if self.linking[i][j].is_zero() {
                    return Err(Error::DegenerateLinking { i: i + 1, j: j + 1 });
                }
            }
        }
        Ok(())
    }

    /// The sublink obtained by dropping component `i` (filling it along the
    /// meridian leaves the ambient manifold and the other data unchanged).
    pub fn remove_component(&self, i: usize) -> Result<LinkData> {
        self.check_index(i)?;
        if self.n() == 1 {
            return Err(Error::Unsupported("cannot remove the only component".into()));
        }
        let keep = |v: usize| v != i;
        Ok(LinkData {
            orders: self.orders.iter().enumerate().filter(|&(j, _)| keep(j)).map(|(_, &m)| m).collect(),
            linking: self
                .linking
                .iter()
                .enumerate()
                .filter(|&(j, _)| keep(j))
                .map(|(_, r)| r.iter().enumerate().filter(|&(k, _)| keep(k)).map(|(_, &q)| q).collect())
                .collect(),
            orders_verified: self.orders_verified,
        })
    }

    /// Relabel components so that new component `k` is old component `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<LinkData> {
        check_permutation(perm, self.n())?;
        Ok(LinkData {
            orders: perm.iter().map(|&p| self.orders[p]).collect(),
            linking: perm.iter().map(|&p| perm.iter().map(|&q| self.linking[p][q]).collect()).collect(),
            orders_verified: self.orders_verified,
        })
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.n() {
            return Err(Error::IndexOutOfRange { index: i, len: self.n() });
        }
        Ok(())
    }
}

fn check_square(linking: &[Vec<Q>], n: usize) -> Result<()> {
    if linking.len() != n || linking.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidLinkData(format!("linking matrix must be {n}×{n} to match {n} orders")));
    }
    for i in 0..n {
        if !linking[i][i].is_zero() {
            return Err(Error::InvalidLinkData(format!("diagonal entry lk({},{}) must be 0", i + 1, i + 1)));
        }
        for j in i + 1..n {
            if linking[i][j] != linking[j][i] {
                return Err(Error::InvalidLinkData(format!("linking matrix is not symmetric at ({},{})", i + 1, j + 1)));
            }
        }
    }
    Ok(())
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: perm.len() });
    }
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidLinkData(format!("{perm:?} is not a permutation of 0..{n}")));
        }
    }
    Ok(())
}

/// A class in `H₂(X, ∂X; ℤ)` written in the punctured Seifert surface basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SurfaceClass(pub Vec<i64>);

impl SurfaceClass {
    pub fn new(coeffs: impl Into<Vec<i64>>) -> Self {
        SurfaceClass(coeffs.into())
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn is_primitive(&self) -> bool {
        lattice::is_primitive(&self.0)
    }

    pub fn primitive(&self) -> SurfaceClass {
        SurfaceClass(lattice::primitive(&self.0))
    }

    pub fn scaled(&self, k: i64) -> SurfaceClass {
        SurfaceClass(self.0.iter().map(|c| c * k).collect())
    }

    pub fn xy(&self) -> [i64; 2] {
        [self.0[0], self.0[1]]
    }

    pub fn permuted(&self, perm: &[usize]) -> SurfaceClass {
        SurfaceClass(perm.iter().map(|&p| self.0[p]).collect())
    }
}

impl From<[i64; 2]> for SurfaceClass {
    fn from(v: [i64; 2]) -> Self {
        SurfaceClass(v.to_vec())
    }
}

impl Add for &SurfaceClass {
    type Output = SurfaceClass;
    fn add(self, rhs: &SurfaceClass) -> SurfaceClass {
        SurfaceClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Neg for &SurfaceClass {
    type Output = SurfaceClass;
    fn neg(self) -> SurfaceClass {
        SurfaceClass(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

fn check_dim(link: &LinkData, s: &SurfaceClass) -> Result<()> {
    if s.dim() != link.n() {
        return Err(Error::DimensionMismatch { expected: link.n(), found: s.dim() });
    }
    Ok(())
}

/// Boundary of `s` on the torus `Pᵢ`: `(cᵢ·mᵢ, −Σ_{j≠i} cⱼ·mⱼ·lk_ji)`.
pub fn boundary_class_on(link: &LinkData, s: &SurfaceClass, i: usize) -> Result<CurveClass> {
    check_dim(link, s)?;
    link.check_index(i)?;
    let m = link.orders()?;
    let mut mu = Q::zero();
    for j in (0..link.n()).filter(|&j| j != i) {
        mu -= link.linking[j][i] * (s.0[j] * m[j]);
    }
    debug_assert!(mu.is_integer());
    Ok(CurveClass::new(s.0[i] * m[i], mu.to_integer()))
}

pub fn boundary_component_count_on(link: &LinkData, s: &SurfaceClass, i: usize) -> Result<u64> {
    Ok(boundary_class_on(link, s, i)?.multiplicity())
}

pub fn total_boundary_components(link: &LinkData, s: &SurfaceClass) -> Result<u64> {
    (0..link.n()).map(|i| boundary_component_count_on(link, s, i)).sum()
}

pub fn boundary_slope_on(link: &LinkData, s: &SurfaceClass, i: usize) -> Result<Slope> {
    boundary_class_on(link, s, i)?.slope()
}

/// Upper bound `2·|lk|·m₁²·m₂²` on the number of boundary circles of a
/// primitive class of a two-component link.
pub fn boundary_bound(link: &LinkData) -> Result<u64> {
    if link.n() != 2 {
        return Err(Error::Unsupported(format!("boundary bound needs 2 components, got {}", link.n())));
    }
    let lk = link.lk(0, 1);
    if lk.is_zero() {
        return Err(Error::DegenerateLinking { i: 1, j: 2 });
    }
    let m = link.orders()?;
    boundary_bound_raw(lk, m[0], m[1])
}

/// The formula `2·|lk|·m₁²·m₂²` on bare numbers, without link validation.
pub fn boundary_bound_raw(lk: Q, m1: i64, m2: i64) -> Result<u64> {
    let v = lk.abs() * (2 * m1 * m1 * m2 * m2);
    if !v.is_integer() {
        return Err(Error::InconsistentData(format!("2|lk|m1²m2² = {} is not an integer", rational::fmt_rational(&v))));
    }
    Ok(v.to_integer() as u64)
}

/// Linking matrix after `q`-surgery on component `i`:
/// `lk̃_jk = lk_jk − q·lk_ji·lk_ki`. The result has unverified orders.
pub fn surgered_linking(link: &LinkData, i: usize, q: Slope) -> Result<LinkData> {
    link.check_index(i)?;
    let Some(q) = q.as_ratio() else {
        return Err(Error::Unsupported("∞ filling removes the component; use remove_component".into()));
    };
    if link.n() == 1 {
        return Err(Error::Unsupported("surgery on a knot leaves no linking data".into()));
    }
    let idx: Vec<usize> = (0..link.n()).filter(|&j| j != i).collect();
    let linking = idx
        .iter()
        .map(|&j| {
            idx.iter()
                .map(|&k| if j == k { Q::zero() } else { link.linking[j][k] - q * link.linking[j][i] * link.linking[i][k] })
                .collect()
        })
        .collect();
    Ok(LinkData { orders: vec![1; idx.len()], linking, orders_verified: false })
}

/// Smallest positive `m` with `m·lk` integral for every `lk` in `row`; handy
/// for building test data.
pub fn integrality_order(row: &[Q]) -> i64 {
    row.iter().fold(1i64, |acc, q| acc.lcm(q.denom()))
}

//! Polyhedral norms given by integer dual functionals.
//!
//! `x(α) = max_k ⟨φ_k, α⟩`. Thurston's theorem guarantees integer
//! functionals for the Thurston norm, while the vertices of the unit ball can
//! be fractional, so the dual description is the one we store.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{self, LinkData, SurfaceClass};
use crate::lattice::{self, angle_cmp, det2};
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawNormBall", into = "RawNormBall")]
pub struct NormBall {
    dim: usize,
    /// Hull vertices only. In dimension 2 they are sorted by angle starting
    /// from `[0, 2π)`, otherwise lexicographically.
    functionals: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNormBall {
    functionals: Vec<Vec<i64>>,
}

impl TryFrom<RawNormBall> for NormBall {
    type Error = Error;
    fn try_from(raw: RawNormBall) -> Result<NormBall> {
        NormBall::new(raw.functionals)
    }
}

impl From<NormBall> for RawNormBall {
    fn from(b: NormBall) -> RawNormBall {
        RawNormBall { functionals: b.functionals }
    }
}

/// The closed face of a 2-dimensional ball between two adjacent corners.
/// `c1 → c2` runs counterclockwise, so `det(c1, c2) > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceCone {
    pub c1: SurfaceClass,
    pub c2: SurfaceClass,
    /// Index into [`NormBall::functionals`] of the functional maximized on
    /// the face.
    pub functional: usize,
}

impl FaceCone {
    pub fn determinant(&self) -> u64 {
        det2(self.c1.xy(), self.c2.xy()).unsigned_abs() as u64
    }

    /// Strictly inside the cone over the face.
    pub fn contains_open(&self, s: &SurfaceClass) -> bool {
        det2(self.c1.xy(), s.xy()) > 0 && det2(s.xy(), self.c2.xy()) > 0
    }

    pub fn negated(&self) -> FaceCone {
        FaceCone { c1: -&self.c1, c2: -&self.c2, functional: self.functional }
    }
}

/// `c·s = a·c1 + b·c2` with `c` minimal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceDecomposition {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub face: FaceCone,
}

impl NormBall {
    pub fn new(functionals: Vec<Vec<i64>>) -> Result<NormBall> {
        let Some(dim) = functionals.first().map(Vec::len) else {
            return Err(Error::InvalidNormBall("no functionals given".into()));
        };
        if dim == 0 {
            return Err(Error::InvalidNormBall("functionals must have positive length".into()));
        }
        if let Some(f) = functionals.iter().find(|f| f.len() != dim) {
            return Err(Error::InvalidNormBall(format!("functional {f:?} has length {} but the first has length {dim}", f.len())));
        }
        let set: BTreeSet<Vec<i64>> = functionals.into_iter().collect();
        for f in &set {
            let neg: Vec<i64> = f.iter().map(|x| -x).collect();
            if !set.contains(&neg) {
                return Err(Error::InvalidNormBall(format!("not symmetric: {f:?} present but {neg:?} missing")));
            }
        }
        let pts: Vec<Vec<i64>> = set.into_iter().collect();
        let rows: Vec<Vec<i128>> = pts.iter().map(|f| f.iter().map(|&x| x as i128).collect()).collect();
        if lattice::rank(&rows) < dim {
            return Err(Error::DegenerateNorm(format!(
                "functionals span a proper subspace of dimension {}, so some nonzero class has norm 0",
                lattice::rank(&rows)
            )));
        }
        let mut functionals: Vec<Vec<i64>> = lattice::hull_vertices(&pts).into_iter().map(|i| pts[i].clone()).collect();
        if dim == 2 {
            functionals.sort_by(|a, b| angle_cmp([a[0], a[1]], [b[0], b[1]]));
        }
        Ok(NormBall { dim, functionals })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn functionals(&self) -> &[Vec<i64>] {
        &self.functionals
    }

    /// Same norm in the relabelled basis where new coordinate `k` is old
    /// coordinate `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<NormBall> {
        crate::homology::check_permutation(perm, self.dim)?;
        NormBall::new(self.functionals.iter().map(|f| perm.iter().map(|&p| f[p]).collect()).collect())
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found });
        }
        Ok(())
    }

    fn require_plane(&self, what: &str) -> Result<()> {
        if self.dim != 2 {
            return Err(Error::Unsupported(format!("{what} is only available for 2-dimensional norms (this one has dimension {})", self.dim)));
        }
        Ok(())
    }

    /// The norm of a rational vector.
    pub fn evaluate(&self, alpha: &[Q]) -> Result<Q> {
        self.check_dim(alpha.len())?;
        Ok(self
            .functionals
            .iter()
            .map(|f| f.iter().zip(alpha).map(|(&c, &a)| a * c).fold(Q::zero(), |x, y| x + y))
            .max()
            .expect("a norm ball has functionals"))
    }

    /// The norm of an integral class.
    pub fn norm(&self, s: &SurfaceClass) -> Result<i64> {
        self.check_dim(s.dim())?;
        let v = self.functionals.iter().map(|f| lattice::dot(f, s.coeffs())).max().unwrap();
        i64::try_from(v).map_err(|_| Error::Overflow("norm evaluation"))
    }

    /// Indices of the functionals attaining the norm at `s`.
    pub fn maximizers(&self, s: &SurfaceClass) -> Result<Vec<usize>> {
        self.check_dim(s.dim())?;
        if s.is_zero() {
            return Err(Error::ZeroClass);
        }
        let vals: Vec<i128> = self.functionals.iter().map(|f| lattice::dot(f, s.coeffs())).collect();
        let max = *vals.iter().max().unwrap();
        Ok((0..vals.len()).filter(|&k| vals[k] == max).collect())
    }

    pub fn is_corner(&self, s: &SurfaceClass) -> Result<bool> {
        Ok(self.maximizers(s)?.len() >= 2)
    }

    /// Primitive classes on the vertex rays of the unit ball, counterclockwise
    /// from the first one at angle in `[0, 2π)`.
    pub fn corners(&self) -> Result<Vec<SurfaceClass>> {
        self.require_plane("corner enumeration")?;
        let f = &self.functionals;
        let k = f.len();
        let mut out: Vec<[i64; 2]> = (0..k)
            .map(|i| {
                let (p, q) = (&f[i], &f[(i + 1) % k]);
                let d = [q[0] - p[0], q[1] - p[1]];
                let mut v = [-d[1], d[0]];
                if (p[0] * v[0] + p[1] * v[1]) < 0 {
                    v = [-v[0], -v[1]];
                }
                let g = lattice::gcd_all(&v) as i64;
                [v[0] / g, v[1] / g]
            })
            .collect();
        out.sort_by(|a, b| angle_cmp(*a, *b));
        Ok(out.into_iter().map(SurfaceClass::from).collect())
    }

    /// The faces of a 2-dimensional ball, one per pair of adjacent corners.
    pub fn faces(&self) -> Result<Vec<FaceCone>> {
        let cs = self.corners()?;
        let k = cs.len();
        (0..k)
            .map(|i| {
                let (c1, c2) = (cs[i].clone(), cs[(i + 1) % k].clone());
                let m1 = self.maximizers(&c1)?;
                let m2 = self.maximizers(&c2)?;
                let functional = *m1.iter().find(|j| m2.contains(j)).expect("adjacent corners share a facet");
                Ok(FaceCone { c1, c2, functional })
            })
            .collect()
    }

    /// The face whose open cone contains the non-corner class `s`.
    pub fn face_of(&self, s: &SurfaceClass) -> Result<FaceCone> {
        self.require_plane("face lookup")?;
        let m = self.maximizers(s)?;
        if m.len() >= 2 {
            return Err(Error::CornerClass(s.coeffs().to_vec()));
        }
        Ok(self.faces()?.into_iter().find(|f| f.functional == m[0]).expect("every facet has a face"))
    }

    /// Total of `det − 1` over all faces: the number of lattice points strictly
    /// inside the parallelograms spanned by adjacent corners.
    pub fn interior_point_total(&self) -> Result<u64> {
        Ok(self.faces()?.iter().map(|f| f.determinant() - 1).sum())
    }
}

pub fn face_determinant(c1: &SurfaceClass, c2: &SurfaceClass) -> Result<u64> {
    if c1.dim() != 2 || c2.dim() != 2 {
        return Err(Error::Unsupported("face determinants are defined for 2-dimensional classes".into()));
    }
    Ok(det2(c1.xy(), c2.xy()).unsigned_abs() as u64)
}

/// Lattice points strictly inside the parallelogram spanned by `c1, c2`,
/// found by scanning its bounding box.
pub fn interior_lattice_points(c1: &SurfaceClass, c2: &SurfaceClass) -> Result<Vec<SurfaceClass>> {
    let d = face_determinant(c1, c2)? as i128;
    for c in [c1, c2] {
        if !c.is_primitive() {
            return Err(Error::NotPrimitive(c.coeffs().to_vec()));
        }
    }
    if d == 0 {
        return Err(Error::InconsistentData(format!("{c1} and {c2} are parallel")));
    }
    let (u, v) = (c1.xy(), c2.xy());
    let sd = det2(u, v);
    let xs = [0, u[0], v[0], u[0] + v[0]];
    let ys = [0, u[1], v[1], u[1] + v[1]];
    let mut out = Vec::new();
    for x in *xs.iter().min().unwrap()..=*xs.iter().max().unwrap() {
        for y in *ys.iter().min().unwrap()..=*ys.iter().max().unwrap() {
            // p = s·u + t·v with s = det(p,v)/det(u,v), t = det(u,p)/det(u,v).
            let (s, t) = (det2([x, y], v) * sd.signum(), det2(u, [x, y]) * sd.signum());
            if s > 0 && s < d && t > 0 && t < d {
                out.push(SurfaceClass::new([x, y]));
            }
        }
    }
    Ok(out)
}

pub fn interior_lattice_count(c1: &SurfaceClass, c2: &SurfaceClass) -> Result<u64> {
    Ok(interior_lattice_points(c1, c2)?.len() as u64)
}

/// Write `c·s = a·c1 + b·c2` over the adjacent corners of the face containing
/// the primitive non-corner class `s`.
pub fn decompose_on_face(ball: &NormBall, s: &SurfaceClass) -> Result<FaceDecomposition> {
    if !s.is_primitive() {
        return Err(Error::NotPrimitive(s.coeffs().to_vec()));
    }
    let face = ball.face_of(s)?;
    let (u, v, w) = (face.c1.xy(), face.c2.xy(), s.xy());
    let d = det2(u, v) as i64;
    let a = Q::new(det2(w, v) as i64, d);
    let b = Q::new(det2(u, w) as i64, d);
    let c = a.denom().lcm(b.denom());
    Ok(FaceDecomposition { a: (a * c).to_integer(), b: (b * c).to_integer(), c, face })
}

fn check_pair(link: &LinkData, ball: &NormBall) -> Result<()> {
    if link.n() != ball.dim() {
        return Err(Error::DimensionMismatch { expected: link.n(), found: ball.dim() });
    }
    Ok(())
}

/// `g = (2 + x(s) − |∂s|) / 2`, refusing values that are not nonnegative
/// integers.
pub fn genus_of_class(link: &LinkData, ball: &NormBall, s: &SurfaceClass) -> Result<i64> {
    check_pair(link, ball)?;
    if s.is_zero() {
        return Err(Error::ZeroClass);
    }
    let x = ball.norm(s)?;
    let b = homology::total_boundary_components(link, s)? as i64;
    let twice = 2 + x - b;
    if twice < 0 || twice % 2 != 0 {
        return Err(Error::InconsistentData(format!(
            "class {s} has norm {x} and {b} boundary circles, giving genus {twice}/2; the ball does not fit the link"
        )));
    }
    Ok(twice / 2)
}

/// Per-coordinate bound on lattice points of `r·ball`.
fn box_radius(ball: &NormBall, r: i64) -> Result<[i64; 2]> {
    let mut out = [0i64; 2];
    for c in ball.corners()? {
        let x = ball.norm(&c)?;
        for i in 0..2 {
            out[i] = out[i].max((Q::from_integer(r * c.coeffs()[i].abs()) / x).floor().to_integer());
        }
    }
    Ok(out)
}

/// All primitive classes of genus at most `g`, sorted. The search polytope is
/// `x(s) ≤ 2g − 2 + B` with `B` the boundary-count bound, outside of which the
/// genus formula already exceeds `g`.
pub fn classes_with_genus_at_most(link: &LinkData, ball: &NormBall, g: i64) -> Result<Vec<SurfaceClass>> {
    check_pair(link, ball)?;
    if link.n() != 2 {
        return Err(Error::Unsupported(format!("genus enumeration needs 2 components, got {}", link.n())));
    }
    let bound = homology::boundary_bound(link)? as i64;
    if g < 0 {
        return Ok(Vec::new());
    }
    let r = search_radius(g, bound);
    if r <= 0 {
        return Ok(Vec::new());
    }
    let [bx, by] = box_radius(ball, r)?;
    let mut out = Vec::new();
    for x in -bx..=bx {
        for y in -by..=by {
            let s = SurfaceClass::new([x, y]);
            if s.is_primitive() && ball.norm(&s)? <= r && genus_of_class(link, ball, &s)? <= g {
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// Largest norm a class of genus `g` can have, `2g − 2 + B`.
pub fn search_radius(g: i64, boundary_bound: i64) -> i64 {
    2 * g - 2 + boundary_bound
}

/// Minimal genus over primitive classes in the open cone of `face`, with the
/// lexicographically smallest witness.
pub fn min_genus_in_cone(link: &LinkData, ball: &NormBall, face: &FaceCone) -> Result<(i64, SurfaceClass)> {
    check_pair(link, ball)?;
    if face.c1.dim() != 2 || det2(face.c1.xy(), face.c2.xy()) <= 0 {
        return Err(Error::InconsistentData(format!("the cone spanned by {} and {} has empty interior", face.c1, face.c2)));
    }
    let probe = (&face.c1 + &face.c2).primitive();
    let ceiling = genus_of_class(link, ball, &probe)?;
    for g in 0..=ceiling {
        let found: Vec<SurfaceClass> = classes_with_genus_at_most(link, ball, g)?
            .into_iter()
            .filter(|s| face.contains_open(s))
            .collect();
        if let Some(w) = found.into_iter().min() {
            return Ok((genus_of_class(link, ball, &w)?, w));
        }
    }
    unreachable!("the probe class itself has genus {ceiling}")
}

/// Norm ball of the centered Newton polytope of a support set: the
/// functionals are all differences `v − w` of support points.
pub fn newton_polytope_ball(support: &[Vec<i64>]) -> Result<NormBall> {
    let pts: BTreeSet<&Vec<i64>> = support.iter().collect();
    if pts.len() < 2 {
        return Err(Error::DegenerateNorm("the support has fewer than two distinct points".into()));
    }
    let dim = support[0].len();
    if let Some(p) = support.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
    }
    let mut diffs = Vec::new();
    for v in &pts {
        for w in &pts {
            if v != w {
                diffs.push(v.iter().zip(w.iter()).map(|(a, b)| a - b).collect());
            }
        }
    }
    NormBall::new(diffs)
}

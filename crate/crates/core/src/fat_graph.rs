//! Fat-vertex (ribbon) graphs of product disks.
//!
//! A graph is stored as permutations on half-edges: `pairing` is the edge
//! involution and `rotation` sends each half-edge to the next one
//! counterclockwise around its vertex. Faces are the orbits of
//! `h ↦ rotation(pairing(h))`.
//!
//! The boundary pattern of a cut-and-paste sum `aR + bT` on a torus is
//! modelled combinatorially: after a linear change of coordinates the `a·∂R`
//! curves are the vertical lines `u ∈ ℤ` and the `b·∂T` curves the horizontal
//! lines `v ∈ ℤ`, taken modulo a lattice `L`. Crossings and cells are both
//! indexed by `ℤ²/L`; crossing `(i, j)` is the south-west corner of cell
//! `(i, j)`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{self, LinkData, SurfaceClass};
use crate::lattice::det2;
use crate::norm_ball::{self, NormBall};
use crate::slope_arith::{intersection_number, CurveClass};

/// A suture: boundary torus (0-based) and its index among that torus' sutures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SutureLabel {
    pub torus: usize,
    pub index: usize,
}

impl fmt::Display for SutureLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}.{}", self.torus + 1, self.index)
    }
}

impl Serialize for SutureLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SutureLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let bad = || serde::de::Error::custom(format!("suture label {s:?} is not of the form P<torus>.<index>"));
        let (t, i) = s.strip_prefix('P').and_then(|r| r.split_once('.')).ok_or_else(bad)?;
        let torus: usize = t.parse().map_err(|_| bad())?;
        let index: usize = i.parse().map_err(|_| bad())?;
        if torus == 0 {
            return Err(bad());
        }
        Ok(SutureLabel { torus: torus - 1, index })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFatGraph", into = "RawFatGraph")]
pub struct FatGraph {
    pairing: Vec<usize>,
    rotation: Vec<usize>,
    /// Vertex cycles, each starting at its smallest half-edge, sorted by that
    /// half-edge.
    vertices: Vec<Vec<usize>>,
    vertex_of: Vec<usize>,
    labels: BTreeMap<usize, SutureLabel>,
    /// Where each half-edge meets the boundary: `(torus, crossing index)`.
    /// Only present for graphs built from a boundary pattern.
    sites: Option<Vec<(usize, usize)>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFatGraph {
    half_edges: usize,
    pairing: Vec<[usize; 2]>,
    rotation: Vec<Vec<usize>>,
    #[serde(default)]
    labels: BTreeMap<usize, SutureLabel>,
}

impl TryFrom<RawFatGraph> for FatGraph {
    type Error = Error;
    fn try_from(raw: RawFatGraph) -> Result<FatGraph> {
        FatGraph::new(raw.half_edges, &raw.pairing, &raw.rotation, raw.labels)
    }
}

impl From<FatGraph> for RawFatGraph {
    fn from(g: FatGraph) -> RawFatGraph {
        RawFatGraph {
            half_edges: g.pairing.len(),
            pairing: g.edges(),
            rotation: g.vertices,
            labels: g.labels,
        }
    }
}

impl FatGraph {
    /// Build from edge pairs and vertex cycles.
    pub fn new(half_edges: usize, pairs: &[[usize; 2]], cycles: &[Vec<usize>], labels: BTreeMap<usize, SutureLabel>) -> Result<FatGraph> {
        let n = half_edges;
        let mut pairing = vec![usize::MAX; n];
        for &[x, y] in pairs {
            if x >= n || y >= n {
                return Err(Error::InvalidPairing(format!("edge ({x},{y}) names a half-edge outside 0..{n}")));
            }
            if x == y || pairing[x] != usize::MAX || pairing[y] != usize::MAX {
                return Err(Error::InvalidPairing(format!("edge ({x},{y}) reuses a half-edge or pairs one with itself")));
            }
            pairing[x] = y;
            pairing[y] = x;
        }
        if let Some(h) = pairing.iter().position(|&p| p == usize::MAX) {
            return Err(Error::InvalidPairing(format!("half-edge {h} is not on any edge")));
        }
        let mut rotation = vec![usize::MAX; n];
        for cyc in cycles {
            if cyc.is_empty() {
                return Err(Error::InvalidPairing("empty vertex cycle".into()));
            }
            for (k, &h) in cyc.iter().enumerate() {
                if h >= n || rotation[h] != usize::MAX {
                    return Err(Error::InvalidPairing(format!("half-edge {h} is missing or appears at two vertices")));
                }
                rotation[h] = cyc[(k + 1) % cyc.len()];
            }
        }
        if let Some(h) = rotation.iter().position(|&p| p == usize::MAX) {
            return Err(Error::InvalidPairing(format!("half-edge {h} lies at no vertex")));
        }
        let g = FatGraph::from_permutations(pairing, rotation)?;
        if let Some(&v) = labels.keys().find(|&&v| v >= g.vertex_count()) {
            return Err(Error::InvalidPairing(format!("label for vertex {v}, but there are {} vertices", g.vertex_count())));
        }
        Ok(FatGraph { labels, ..g })
    }

    /// Build from the two permutations directly.
    pub fn from_permutations(pairing: Vec<usize>, rotation: Vec<usize>) -> Result<FatGraph> {
        let n = pairing.len();
        if rotation.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: rotation.len() });
        }
        for h in 0..n {
            if pairing[h] >= n || pairing[h] == h || pairing[pairing[h]] != h {
                return Err(Error::InvalidPairing(format!("pairing is not a fixed-point-free involution at half-edge {h}")));
            }
        }
        let mut seen = vec![false; n];
        for &r in &rotation {
            if r >= n || std::mem::replace(&mut seen[r], true) {
                return Err(Error::InvalidPairing("rotation is not a permutation".into()));
            }
        }
        let vertices = cycles(&rotation);
        let mut vertex_of = vec![0; n];
        for (v, cyc) in vertices.iter().enumerate() {
            for &h in cyc {
                vertex_of[h] = v;
            }
        }
        Ok(FatGraph { pairing, rotation, vertices, vertex_of, labels: BTreeMap::new(), sites: None })
    }

    pub fn half_edge_count(&self) -> usize {
        self.pairing.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.pairing.len() / 2
    }

    pub fn pairing(&self, h: usize) -> usize {
        self.pairing[h]
    }

    pub fn rotation(&self, h: usize) -> usize {
        self.rotation[h]
    }

    pub fn vertices(&self) -> &[Vec<usize>] {
        &self.vertices
    }

    pub fn vertex_of(&self, h: usize) -> usize {
        self.vertex_of[h]
    }

    pub fn labels(&self) -> &BTreeMap<usize, SutureLabel> {
        &self.labels
    }

    /// Edges as sorted half-edge pairs.
    pub fn edges(&self) -> Vec<[usize; 2]> {
        (0..self.pairing.len()).filter(|&h| h < self.pairing[h]).map(|h| [h, self.pairing[h]]).collect()
    }

    /// Connected components as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.vertex_count()];
        let mut out = Vec::new();
        for start in 0..self.vertex_count() {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &h in &self.vertices[v] {
                    let w = self.vertex_of[self.pairing[h]];
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                        queue.push_back(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

/// Cycles of a permutation, each starting at its smallest element.
fn cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut h = start;
        while !seen[h] {
            seen[h] = true;
            cyc.push(h);
            h = perm[h];
        }
        out.push(cyc);
    }
    out
}

/// Boundary circles of the thickened graph, as half-edge cycles.
pub fn faces(g: &FatGraph) -> Vec<Vec<usize>> {
    let step: Vec<usize> = (0..g.half_edge_count()).map(|h| g.rotation[g.pairing[h]]).collect();
    cycles(&step)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThickeningGenus {
    Connected(u64),
    /// One genus per component, in the order of [`FatGraph::components`].
    PerComponent(Vec<u64>),
}

/// Genus of the thickened surface `ν(G)`, from `V − E + F = 2 − 2g`.
pub fn thickening_genus(g: &FatGraph) -> Result<ThickeningGenus> {
    let comps = g.components();
    let fs = faces(g);
    let genera = comps
        .iter()
        .map(|vs| {
            let v = vs.len() as i64;
            let e = vs.iter().map(|&x| g.vertices[x].len()).sum::<usize>() as i64 / 2;
            let f = fs.iter().filter(|c| vs.binary_search(&g.vertex_of[c[0]]).is_ok()).count() as i64;
            let twice = 2 - v + e - f;
            if twice < 0 || twice % 2 != 0 {
                return Err(Error::InconsistentData(format!("Euler count gives genus {twice}/2")));
            }
            Ok((twice / 2) as u64)
        })
        .collect::<Result<Vec<u64>>>()?;
    Ok(match genera.as_slice() {
        [g] => ThickeningGenus::Connected(*g),
        _ => ThickeningGenus::PerComponent(genera),
    })
}

/// `ℤ²` modulo a full-rank lattice in the Hermite form `{(p,0), (s,q)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Quotient {
    p: i64,
    q: i64,
    s: i64,
}

impl Quotient {
    fn new(g1: [i64; 2], g2: [i64; 2]) -> Quotient {
        let e = g1[1].extended_gcd(&g2[1]);
        let q = e.gcd;
        let p = (det2(g1, g2).unsigned_abs() as i64) / q;
        let s = (e.x * g1[0] + e.y * g2[0]).rem_euclid(p);
        Quotient { p, q, s }
    }

    fn canon(&self, u: i64, v: i64) -> (i64, i64) {
        let k = v.div_euclid(self.q);
        ((u - k * self.s).rem_euclid(self.p), v - k * self.q)
    }

    fn index(&self, u: i64, v: i64) -> usize {
        let (u, v) = self.canon(u, v);
        (v * self.p + u) as usize
    }

    fn coords(&self, idx: usize) -> (i64, i64) {
        let idx = idx as i64;
        (idx % self.p, idx / self.p)
    }

    fn size(&self) -> usize {
        (self.p * self.q) as usize
    }
}

/// The curves `a·∂R` and `b·∂T` and their oriented resolution on one torus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusPattern {
    /// 0-based torus index.
    pub torus: usize,
    pub r_boundary: CurveClass,
    pub t_boundary: CurveClass,
    /// Components of `∂(aR + bT)` on this torus.
    pub suture_count: u64,
    /// Points of `a∂R ∩ b∂T`.
    pub intersection_count: u64,
    /// Crossing indices met along each suture, in the direction of its
    /// orientation.
    pub sutures: Vec<Vec<usize>>,
    /// For each crossing, whether the stretch of suture that follows it is a
    /// corner region, i.e. lies between neither two parallel copies of `R`
    /// nor two parallel copies of `T`.
    pub segment_is_corner: Vec<bool>,
    /// Canonical `(u, v)` grid coordinates of each crossing.
    pub crossings: Vec<(i64, i64)>,
    pub corner_regions: u64,
}

impl TorusPattern {
    /// `(suture, position)` of each crossing.
    pub fn crossing_sites(&self) -> Vec<(usize, usize)> {
        let mut out = vec![(0, 0); self.crossings.len()];
        for (s, cyc) in self.sutures.iter().enumerate() {
            for (k, &x) in cyc.iter().enumerate() {
                out[x] = (s, k);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryPattern {
    pub a: i64,
    pub b: i64,
    pub c1: SurfaceClass,
    pub c2: SurfaceClass,
    pub tori: Vec<TorusPattern>,
}

impl BoundaryPattern {
    /// Number of arcs of `aR ∩ bT`, which is also the number of product disks.
    pub fn arc_count(&self) -> usize {
        self.tori[0].crossings.len()
    }

    pub fn suture_total(&self) -> u64 {
        self.tori.iter().map(|t| t.suture_count).sum()
    }
}

fn torus_pattern(torus: usize, r_class: CurveClass, t_class: CurveClass, a: i64, b: i64) -> Result<TorusPattern> {
    let (gr, gt) = (r_class.multiplicity() as i64, t_class.multiplicity() as i64);
    if gr == 0 || gt == 0 {
        return Err(Error::MinimalPositionViolation { torus: torus + 1 });
    }
    let r = [r_class.lambda / gr, r_class.mu / gr];
    let t = [t_class.lambda / gt, t_class.mu / gt];
    let d = det2(r, t);
    if d == 0 {
        return Err(Error::MinimalPositionViolation { torus: torus + 1 });
    }
    let (nu, nv) = (a * gr, b * gt);
    // (u, v) = (nu·det(r, x), nv·det(t, x)); the image of ℤ² is L.
    let lat = Quotient::new([-nu * r[1], -nv * t[1]], [nu * r[0], nv * t[0]]);
    let size = lat.size();
    let corner = |idx: usize| {
        let (u, v) = lat.coords(idx);
        u.rem_euclid(a) == a - 1 && v.rem_euclid(b) == b - 1
    };
    let mut seen = vec![false; size];
    let mut sutures = Vec::new();
    let mut segment_is_corner = vec![false; size];
    for start in 0..size {
        if seen[start] {
            continue;
        }
        // Chain of cells merged by the oriented smoothing: cell (u,v) runs
        // into cell (u+1, v−1) through crossing (u+1, v).
        let mut cells = Vec::new();
        let mut xs = Vec::new();
        let mut c = start;
        while !seen[c] {
            seen[c] = true;
            let (u, v) = lat.coords(c);
            cells.push(c);
            xs.push(lat.index(u + 1, v));
            c = lat.index(u + 1, v - 1);
        }
        let k = cells.len();
        if d > 0 {
            for j in 0..k {
                segment_is_corner[xs[j]] = corner(cells[(j + 1) % k]);
            }
        } else {
            for j in 0..k {
                segment_is_corner[xs[j]] = corner(cells[j]);
            }
            xs.reverse();
        }
        sutures.push(xs);
    }
    let corner_regions = (0..size).filter(|&c| corner(c)).count() as u64;
    Ok(TorusPattern {
        torus,
        r_boundary: r_class.scaled(a),
        t_boundary: t_class.scaled(b),
        suture_count: sutures.len() as u64,
        intersection_count: size as u64,
        sutures,
        segment_is_corner,
        crossings: (0..size).map(|i| lat.coords(i)).collect(),
        corner_regions,
    })
}

/// How `a∂R` and `b∂T` meet on each torus, and the sutures of `aR + bT`.
pub fn boundary_intersection_pattern(link: &LinkData, a: i64, c1: &SurfaceClass, b: i64, c2: &SurfaceClass) -> Result<BoundaryPattern> {
    if link.n() != 2 {
        return Err(Error::Unsupported(format!("boundary patterns need 2 components, got {}", link.n())));
    }
    if a <= 0 || b <= 0 {
        return Err(Error::Hypothesis(format!("multiplicities must be positive, got a = {a}, b = {b}")));
    }
    let mut tori = Vec::new();
    for i in 0..2 {
        let r = homology::boundary_class_on(link, c1, i)?;
        let t = homology::boundary_class_on(link, c2, i)?;
        let p = torus_pattern(i, r, t, a, b)?;
        debug_assert_eq!(p.intersection_count, (a * b) as u64 * intersection_number(r, t));
        tori.push(p);
    }
    if tori[0].intersection_count != tori[1].intersection_count {
        return Err(Error::InconsistentData(format!(
            "{} crossings on P1 but {} on P2; every arc must meet both tori",
            tori[0].intersection_count, tori[1].intersection_count
        )));
    }
    Ok(BoundaryPattern { a, b, c1: c1.clone(), c2: c2.clone(), tori })
}

/// Which crossing on the second torus is the far end of each arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pairing {
    /// Arc `k` runs from crossing `k` on P1 to crossing `k + offset` on P2.
    Offset(usize),
    Explicit(Vec<usize>),
}

impl Pairing {
    pub fn resolve(&self, n: usize) -> Result<Vec<usize>> {
        let perm = match self {
            Pairing::Offset(k) => (0..n).map(|i| (i + k) % n.max(1)).collect(),
            Pairing::Explicit(p) => p.clone(),
        };
        if perm.len() != n {
            return Err(Error::InvalidPairing(format!("{} endpoints given for {n} arcs", perm.len())));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidPairing(format!("{perm:?} is not a bijection of 0..{n}")));
            }
        }
        Ok(perm)
    }
}

/// Largest arc count for which all pairings are enumerated.
pub const MAX_ENUMERATED_ARCS: usize = 8;

/// Every bijection of `0..n` in lexicographic order.
pub fn enumerate_pairings(n: usize) -> Result<Vec<Vec<usize>>> {
    if n > MAX_ENUMERATED_ARCS {
        return Err(Error::Unsupported(format!(
            "{n} arcs give {n}! pairings; enumeration is limited to {MAX_ENUMERATED_ARCS} arcs"
        )));
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // Next permutation.
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    Ok(out)
}

/// One vertex per suture and one edge per arc. Half-edge `2k` is arc `k`'s
/// end on P1, `2k + 1` its end on P2.
pub fn build_fat_graph(pattern: &BoundaryPattern, pairing: &Pairing) -> Result<FatGraph> {
    let n = pattern.arc_count();
    let perm = pairing.resolve(n)?;
    // Half-edge at each crossing of each torus.
    let mut at = [vec![0usize; n], vec![0usize; n]];
    for k in 0..n {
        at[0][k] = 2 * k;
        at[1][perm[k]] = 2 * k + 1;
    }
    let mut cycles = Vec::new();
    let mut labels = BTreeMap::new();
    for (t, tp) in pattern.tori.iter().enumerate() {
        for (i, s) in tp.sutures.iter().enumerate() {
            labels.insert(cycles.len(), SutureLabel { torus: t, index: i });
            cycles.push(s.iter().map(|&x| at[t][x]).collect::<Vec<_>>());
        }
    }
    let pairs: Vec<[usize; 2]> = (0..n).map(|k| [2 * k, 2 * k + 1]).collect();
    let g = FatGraph::new(2 * n, &pairs, &cycles, BTreeMap::new())?;
    // `new` renumbers vertices by smallest half-edge; carry the labels over.
    let labels = labels
        .into_iter()
        .map(|(v, l)| (g.vertex_of[cycles[v][0]], l))
        .collect();
    let mut sites = vec![(0, 0); 2 * n];
    for k in 0..n {
        sites[2 * k] = (0, k);
        sites[2 * k + 1] = (1, perm[k]);
    }
    Ok(FatGraph { labels, sites: Some(sites), ..g })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceTag {
    CornerAnnulus,
    NoncornerAnnulus,
}

/// Tag each face of [`faces`] by whether every stretch of suture it runs
/// along is a corner region.
pub fn classify_faces(g: &FatGraph, pattern: &BoundaryPattern) -> Result<Vec<FaceTag>> {
    let Some(sites) = &g.sites else {
        return Err(Error::InvalidPairing("graph was not built from a boundary pattern".into()));
    };
    if sites.len() != 2 * pattern.arc_count() {
        return Err(Error::InvalidPairing("graph and pattern have different arc counts".into()));
    }
    Ok(faces(g)
        .iter()
        .map(|face| {
            // After crossing the edge at h the face runs along the suture from
            // pairing(h) to rotation(pairing(h)).
            let all = face.iter().all(|&h| {
                let (t, x) = sites[g.pairing[h]];
                pattern.tori[t].segment_is_corner[x]
            });
            if all { FaceTag::CornerAnnulus } else { FaceTag::NoncornerAnnulus }
        })
        .collect())
}

/// A path in `ν(G)` from a vertex to the basepoint: the half-edges it leaves
/// along, ending at the root vertex next to the basepoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiskPath {
    pub vertex: usize,
    pub half_edges: Vec<usize>,
}

/// Paths from every vertex of the face's component to a basepoint on the
/// face. The basepoint sits on the face just before half-edge
/// `faces(g)[face][position]`; paths follow a breadth-first spanning tree
/// rooted at that half-edge's vertex, so they can be pushed off one another.
pub fn basepoint_disk_paths(g: &FatGraph, face: usize, position: usize) -> Result<Vec<DiskPath>> {
    let fs = faces(g);
    let f = fs.get(face).ok_or(Error::IndexOutOfRange { index: face, len: fs.len() })?;
    let h0 = *f.get(position).ok_or(Error::IndexOutOfRange { index: position, len: f.len() })?;
    let root = g.vertex_of[h0];
    // parent_edge[v] = half-edge at v leading toward the root.
    let mut parent: Vec<Option<usize>> = vec![None; g.vertex_count()];
    let mut reached = vec![false; g.vertex_count()];
    reached[root] = true;
    let mut order = vec![root];
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        // Scan the rotation starting at the basepoint side for the root.
        let cyc = &g.vertices[v];
        let start = if v == root { cyc.iter().position(|&h| h == h0).unwrap() } else { 0 };
        for k in 0..cyc.len() {
            let h = cyc[(start + k) % cyc.len()];
            let w = g.vertex_of[g.pairing[h]];
            if !reached[w] {
                reached[w] = true;
                parent[w] = Some(g.pairing[h]);
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    order.sort_unstable();
    let paths: Vec<DiskPath> = order
        .into_iter()
        .map(|v| {
            let mut hs = Vec::new();
            let mut cur = v;
            while let Some(h) = parent[cur] {
                hs.push(h);
                cur = g.vertex_of[g.pairing[h]];
            }
            DiskPath { vertex: v, half_edges: hs }
        })
        .collect();
    debug_assert!(paths_are_nested(g, &paths));
    Ok(paths)
}

/// The path for a single vertex, refusing vertices outside the component.
pub fn basepoint_disk_path_for(g: &FatGraph, face: usize, position: usize, vertex: usize) -> Result<DiskPath> {
    basepoint_disk_paths(g, face, position)?
        .into_iter()
        .find(|p| p.vertex == vertex)
        .ok_or_else(|| Error::Hypothesis(format!("vertex {vertex} is not in the component of face {face}")))
}

/// Non-crossing check: once two paths meet at a vertex they continue along
/// the same half-edges, so the union is a tree and pushoffs are disjoint.
pub fn paths_are_nested(g: &FatGraph, paths: &[DiskPath]) -> bool {
    let by_vertex: BTreeMap<usize, &DiskPath> = paths.iter().map(|p| (p.vertex, p)).collect();
    paths.iter().all(|p| match p.half_edges.first() {
        None => true,
        Some(&h) => {
            let next = g.vertex_of[g.pairing[h]];
            by_vertex.get(&next).is_some_and(|q| q.half_edges[..] == p.half_edges[1..])
        }
    })
}

/// Sutures with Euler characteristics of `R±`, without embeddings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuturedSkeleton {
    pub sutures: Vec<SutureLabel>,
    pub euler_r_plus: i64,
    pub euler_r_minus: i64,
    /// Genus of `R±`; disk decompositions only cap boundary circles.
    pub genus: i64,
}

/// The complementary skeleton of a norm-minimizing representative of `s`.
pub fn initial_skeleton(link: &LinkData, ball: &NormBall, s: &SurfaceClass) -> Result<SuturedSkeleton> {
    let x = ball.norm(s)?;
    let genus = norm_ball::genus_of_class(link, ball, s)?;
    let mut sutures = Vec::new();
    for t in 0..link.n() {
        for index in 0..homology::boundary_component_count_on(link, s, t)? as usize {
            sutures.push(SutureLabel { torus: t, index });
        }
    }
    Ok(SuturedSkeleton { sutures, euler_r_plus: -x, euler_r_minus: -x, genus })
}

/// Decompose along a product disk joining sutures `j` and `k`: `s_j` merges
/// into `s_k` and each of `R±` gains a disk.
pub fn decompose_along_disk(sk: &SuturedSkeleton, j: usize, k: usize) -> Result<SuturedSkeleton> {
    let len = sk.sutures.len();
    for i in [j, k] {
        if i >= len {
            return Err(Error::IndexOutOfRange { index: i, len });
        }
    }
    if j == k {
        return Err(Error::Unsupported("a product disk with both ends on the same suture is not covered".into()));
    }
    let mut out = sk.clone();
    out.sutures.remove(j);
    out.euler_r_plus += 1;
    out.euler_r_minus += 1;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Q;
    use proptest::prelude::*;

    fn graph(n: usize, pairs: &[[usize; 2]], cycles: &[Vec<usize>]) -> FatGraph {
        FatGraph::new(n, pairs, cycles, BTreeMap::new()).unwrap()
    }

    fn single_edge() -> FatGraph {
        graph(2, &[[0, 1]], &[vec![0], vec![1]])
    }

    fn two_cycle() -> FatGraph {
        graph(4, &[[0, 1], [2, 3]], &[vec![0, 2], vec![1, 3]])
    }

    fn interleaved() -> FatGraph {
        graph(4, &[[0, 2], [1, 3]], &[vec![0, 1, 2, 3]])
    }

    #[test]
    fn hand_traced_faces() {
        assert_eq!(faces(&single_edge()), vec![vec![0, 1]]);
        assert_eq!(faces(&two_cycle()), vec![vec![0, 3], vec![1, 2]]);
        assert_eq!(faces(&interleaved()), vec![vec![0, 3, 2, 1]]);
        assert_eq!(thickening_genus(&interleaved()).unwrap(), ThickeningGenus::Connected(1));
        assert_eq!(thickening_genus(&two_cycle()).unwrap(), ThickeningGenus::Connected(0));
        // Non-interleaved loops at one vertex are planar.
        let g = graph(4, &[[0, 1], [2, 3]], &[vec![0, 1, 2, 3]]);
        assert_eq!(faces(&g).len(), 3);
        assert_eq!(thickening_genus(&g).unwrap(), ThickeningGenus::Connected(0));
    }

    #[test]
    fn trees_are_planar() {
        // A star with three leaves and a path hanging off one of them.
        let g = graph(
            8,
            &[[0, 1], [2, 3], [4, 5], [6, 7]],
            &[vec![0, 4, 2], vec![1, 6], vec![3], vec![5], vec![7]],
        );
        assert_eq!(thickening_genus(&g).unwrap(), ThickeningGenus::Connected(0));
        assert_eq!(faces(&g).len(), 1);
    }

    #[test]
    fn disconnected_graphs_report_each_component() {
        let g = graph(6, &[[0, 2], [1, 3], [4, 5]], &[vec![0, 1, 2, 3], vec![4], vec![5]]);
        assert_eq!(thickening_genus(&g).unwrap(), ThickeningGenus::PerComponent(vec![1, 0]));
    }

    #[test]
    fn invalid_graphs() {
        assert!(FatGraph::new(2, &[[0, 0]], &[vec![0, 1]], BTreeMap::new()).is_err());
        assert!(FatGraph::new(4, &[[0, 1]], &[vec![0, 1, 2, 3]], BTreeMap::new()).is_err());
        assert!(FatGraph::new(2, &[[0, 1]], &[vec![0]], BTreeMap::new()).is_err());
        assert!(FatGraph::new(2, &[[0, 1]], &[vec![0, 1], vec![1]], BTreeMap::new()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut labels = BTreeMap::new();
        labels.insert(0, SutureLabel { torus: 1, index: 2 });
        let g = FatGraph::new(4, &[[0, 2], [1, 3]], &[vec![0, 1, 2, 3]], labels).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"half_edges":4,"pairing":[[0,2],[1,3]],"rotation":[[0,1,2,3]],"labels":{"0":"P2.2"}}"#);
        assert_eq!(serde_json::from_str::<FatGraph>(&s).unwrap(), g);
    }

    fn lk_minus_two() -> LinkData {
        LinkData::two(1, 1, Q::from_integer(-2)).unwrap()
    }

    fn sc(x: i64, y: i64) -> SurfaceClass {
        SurfaceClass::new([x, y])
    }

    #[test]
    fn linking_minus_two_pattern() {
        let p = boundary_intersection_pattern(&lk_minus_two(), 2, &sc(1, 0), 1, &sc(0, 1)).unwrap();
        assert_eq!(p.tori[0].intersection_count, 4);
        assert_eq!(p.tori[1].intersection_count, 4);
        assert_eq!(p.tori[0].suture_count, 2);
        assert_eq!(p.tori[1].suture_count, 1);
        assert_eq!(p.suture_total(), 3);
        // One corner region per elementary intersection, ι = 2.
        assert_eq!(p.tori[0].corner_regions, 2);
        assert_eq!(p.tori[1].corner_regions, 2);
        let g = build_fat_graph(&p, &Pairing::Offset(0)).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 4));
        assert!(g.is_connected());
        let chi = g.vertex_count() as i64 - g.edge_count() as i64;
        assert_eq!(chi, -1);
        let tags = classify_faces(&g, &p).unwrap();
        assert_eq!(tags.len(), faces(&g).len());
        assert!(tags.contains(&FaceTag::NoncornerAnnulus));
        let paths = basepoint_disk_paths(&g, 0, 0).unwrap();
        assert_eq!(paths.len(), 3);
        assert!(paths_are_nested(&g, &paths));
    }

    #[test]
    fn unimodular_single_arc() {
        // m = (1,1), lk = 1: ∂(1,0) and ∂(0,1) meet once on each torus.
        let l = LinkData::two(1, 1, Q::from_integer(1)).unwrap();
        let p = boundary_intersection_pattern(&l, 1, &sc(1, 0), 1, &sc(0, 1)).unwrap();
        assert_eq!(p.arc_count(), 1);
        assert_eq!(p.tori[0].corner_regions, 1);
        let g = build_fat_graph(&p, &Pairing::Offset(0)).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), faces(&g).len()), (2, 1, 1));
        assert_eq!(classify_faces(&g, &p).unwrap(), vec![FaceTag::CornerAnnulus]);
        let paths = basepoint_disk_paths(&g, 0, 1).unwrap();
        assert_eq!(paths.len(), 2);
        assert!(paths.iter().all(|p| p.half_edges.len() <= 1));
    }

    #[test]
    fn interleaved_single_path() {
        let paths = basepoint_disk_paths(&interleaved(), 0, 0).unwrap();
        assert_eq!(paths, vec![DiskPath { vertex: 0, half_edges: vec![] }]);
        let g = graph(6, &[[0, 2], [1, 3], [4, 5]], &[vec![0, 1, 2, 3], vec![4], vec![5]]);
        assert!(basepoint_disk_path_for(&g, 0, 0, 2).is_err());
        assert!(basepoint_disk_paths(&g, 9, 0).is_err());
    }

    #[test]
    fn chain_count_matches_boundary_gcd() {
        // Oracle: the sutures of aR + bT on a torus number gcd(aR + bT).
        let l = LinkData::two(1, 1, Q::from_integer(1)).unwrap();
        for (a, b) in [(1, 3), (2, 3), (3, 2), (4, 1)] {
            let p = boundary_intersection_pattern(&l, a, &sc(1, 0), b, &sc(0, 1)).unwrap();
            let s = sc(a, b);
            for t in 0..2 {
                let want = homology::boundary_component_count_on(&l, &s, t).unwrap();
                assert_eq!(p.tori[t].suture_count, want);
            }
        }
    }

    #[test]
    fn equal_slopes_violate_minimal_position() {
        // ∂(1,1) and ∂(2,2) are parallel on both tori.
        let l = lk_minus_two();
        let e = boundary_intersection_pattern(&l, 1, &sc(1, 1), 1, &sc(2, 2)).unwrap_err();
        assert_eq!(e, Error::MinimalPositionViolation { torus: 1 });
    }

    #[test]
    fn pairing_validation() {
        let p = boundary_intersection_pattern(&lk_minus_two(), 2, &sc(1, 0), 1, &sc(0, 1)).unwrap();
        assert!(build_fat_graph(&p, &Pairing::Explicit(vec![0, 1, 1, 2])).is_err());
        assert!(build_fat_graph(&p, &Pairing::Explicit(vec![0, 1, 2])).is_err());
        assert_eq!(enumerate_pairings(3).unwrap().len(), 6);
        assert!(enumerate_pairings(9).is_err());
        for perm in enumerate_pairings(4).unwrap() {
            let g = build_fat_graph(&p, &Pairing::Explicit(perm)).unwrap();
            assert_eq!((g.vertex_count(), g.edge_count()), (3, 4));
        }
    }

    #[test]
    fn tags_survive_rotating_suture_starts() {
        let p = boundary_intersection_pattern(&lk_minus_two(), 2, &sc(1, 0), 1, &sc(0, 1)).unwrap();
        let g = build_fat_graph(&p, &Pairing::Offset(1)).unwrap();
        let mut q = p.clone();
        for t in &mut q.tori {
            for s in &mut t.sutures {
                s.rotate_left(1);
            }
        }
        let h = build_fat_graph(&q, &Pairing::Offset(1)).unwrap();
        let mut a = classify_faces(&g, &p).unwrap();
        let mut b = classify_faces(&h, &q).unwrap();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn skeleton_bookkeeping() {
        let l = lk_minus_two();
        let b = NormBall::new(vec![vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]]).unwrap();
        let s = sc(2, 1);
        let sk = initial_skeleton(&l, &b, &s).unwrap();
        assert_eq!(sk.sutures.len(), 3);
        assert_eq!(sk.euler_r_plus, -3);
        // Merge both P1 sutures into the P2 suture: capping off P1.
        let mut cur = sk.clone();
        while cur.sutures[0].torus == 0 {
            let k = cur.sutures.iter().position(|l| l.torus == 1).unwrap();
            cur = decompose_along_disk(&cur, 0, k).unwrap();
        }
        assert_eq!(cur.sutures.len(), 1);
        assert_eq!(cur.euler_r_plus, -3 + 2);
        assert_eq!(cur.genus, sk.genus);
        assert!(matches!(decompose_along_disk(&sk, 1, 1), Err(Error::Unsupported(_))));
        assert!(decompose_along_disk(&sk, 0, 7).is_err());
    }

    /// Random fat graph with `e` edges: a random matching and a random
    /// rotation permutation.
    pub(crate) fn random_graph(e: usize, seed: &[usize]) -> FatGraph {
        let n = 2 * e;
        let mut hs: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            hs.swap(i, seed[i % seed.len()] % (i + 1));
        }
        let mut pairing = vec![0; n];
        for c in hs.chunks(2) {
            pairing[c[0]] = c[1];
            pairing[c[1]] = c[0];
        }
        let mut rot: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            rot.swap(i, seed[(i * 7 + 3) % seed.len()] % (i + 1));
        }
        FatGraph::from_permutations(pairing, rot).unwrap()
    }

    proptest! {
        #[test]
        fn euler_identity(e in 1usize..=8, seed in proptest::collection::vec(0usize..1000, 16)) {
            let g = random_graph(e, &seed);
            let fs = faces(&g);
            let total: usize = fs.iter().map(Vec::len).sum();
            prop_assert_eq!(total, g.half_edge_count());
            match thickening_genus(&g).unwrap() {
                ThickeningGenus::Connected(genus) => {
                    let chi = g.vertex_count() as i64 - g.edge_count() as i64 + fs.len() as i64;
                    prop_assert_eq!(chi, 2 - 2 * genus as i64);
                }
                ThickeningGenus::PerComponent(v) => prop_assert_eq!(v.len(), g.components().len()),
            }
        }

        #[test]
        fn pattern_counts(a in 1i64..4, b in 1i64..4, lk in prop_oneof![Just(-2i64), Just(1), Just(3)]) {
            let l = LinkData::two(1, 1, Q::from_integer(lk)).unwrap();
            let (c1, c2) = (sc(1, 0), sc(1, 1));
            let p = boundary_intersection_pattern(&l, a, &c1, b, &c2).unwrap();
            let s = &c1.scaled(a) + &c2.scaled(b);
            for t in 0..2 {
                let r = homology::boundary_class_on(&l, &c1, t).unwrap();
                let u = homology::boundary_class_on(&l, &c2, t).unwrap();
                let iota = intersection_number(r, u);
                prop_assert_eq!(p.tori[t].intersection_count, (a * b) as u64 * iota);
                prop_assert_eq!(p.tori[t].suture_count, homology::boundary_component_count_on(&l, &s, t).unwrap());
                prop_assert_eq!(p.tori[t].corner_regions, iota);
            }
        }
    }
}

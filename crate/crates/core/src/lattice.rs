//! Small integer-lattice helpers shared by the norm and fat-graph code.

use std::cmp::Ordering;

use num_integer::Integer;

pub fn gcd_all(v: &[i64]) -> u64 {
    v.iter().fold(0u64, |g, &x| g.gcd(&x.unsigned_abs()))
}

pub fn is_primitive(v: &[i64]) -> bool {
    gcd_all(v) == 1
}

/// Divide out the content; the zero vector is returned unchanged.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = gcd_all(v) as i64;
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

pub fn det2(a: [i64; 2], b: [i64; 2]) -> i128 {
    a[0] as i128 * b[1] as i128 - a[1] as i128 * b[0] as i128
}

/// Which half-plane a nonzero vector lies in: `0` for angles in `[0, π)`.
fn half(v: [i64; 2]) -> u8 {
    if v[1] > 0 || (v[1] == 0 && v[0] > 0) {
        0
    } else {
        1
    }
}

/// Exact comparison of polar angles in `[0, 2π)` of two nonzero vectors.
pub fn angle_cmp(a: [i64; 2], b: [i64; 2]) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&det2(a, b)))
}

/// Determinant of a square matrix by fraction-free (Bareiss) elimination.
pub fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Rank of an integer matrix given as rows.
pub fn rank(rows: &[Vec<i128>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    let mut prev = 1i128;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, p);
        for i in r + 1..a.len() {
            for j in c + 1..cols {
                a[i][j] = (a[i][j] * a[r][c] - a[i][c] * a[r][j]) / prev;
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        r += 1;
    }
    r
}

/// Normal vector to the hyperplane through `n` points of `Zⁿ`, via cofactors.
/// Zero when the points are affinely dependent.
pub fn hyperplane_normal(pts: &[&[i64]]) -> Vec<i128> {
    let n = pts[0].len();
    let rows: Vec<Vec<i128>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(pts[0]).map(|(&x, &y)| x as i128 - y as i128).collect())
        .collect();
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let d = det(&minor);
            if j % 2 == 0 { d } else { -d }
        })
        .collect()
}

/// Indices of the vertices of the convex hull of a full-dimensional point
/// set, in input order. Duplicates must already be removed.
///
/// A point is a vertex exactly when the normals of the supporting facets
/// through it span the whole space. Facets are found by brute force over
/// `n`-subsets, which is fine for the handful of functionals a norm has.
pub fn hull_vertices(pts: &[Vec<i64>]) -> Vec<usize> {
    let Some(n) = pts.first().map(Vec::len) else { return vec![] };
    if n == 1 {
        let lo = (0..pts.len()).min_by_key(|&i| pts[i][0]).unwrap();
        let hi = (0..pts.len()).max_by_key(|&i| pts[i][0]).unwrap();
        let mut v = vec![lo, hi];
        v.sort_unstable();
        v.dedup();
        return v;
    }
    if n == 2 {
        return hull_vertices_2d(pts);
    }
    let mut normals_at: Vec<Vec<Vec<i128>>> = vec![Vec::new(); pts.len()];
    let mut subset: Vec<usize> = (0..n).collect();
    loop {
        let chosen: Vec<&[i64]> = subset.iter().map(|&i| pts[i].as_slice()).collect();
        let normal = hyperplane_normal(&chosen);
        if normal.iter().any(|&x| x != 0) {
            let side: Vec<i128> = pts
                .iter()
                .map(|p| normal.iter().zip(p.iter().zip(chosen[0])).map(|(&c, (&x, &y))| c * (x as i128 - y as i128)).sum())
                .collect();
            if side.iter().all(|&s| s <= 0) || side.iter().all(|&s| s >= 0) {
                for (i, &s) in side.iter().enumerate() {
                    if s == 0 {
                        normals_at[i].push(normal.clone());
                    }
                }
            }
        }
        if !next_subset(&mut subset, pts.len()) {
            break;
        }
    }
    (0..pts.len()).filter(|&i| rank(&normals_at[i]) == n).collect()
}

fn next_subset(s: &mut [usize], total: usize) -> bool {
    let k = s.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if s[i] < total - k + i {
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Monotone-chain hull in the plane; returns strict vertex indices.
fn hull_vertices_2d(pts: &[Vec<i64>]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by_key(|&i| (pts[i][0], pts[i][1]));
    if idx.len() < 3 {
        return idx;
    }
    let cross = |o: usize, a: usize, b: usize| {
        det2(
            [pts[a][0] - pts[o][0], pts[a][1] - pts[o][1]],
            [pts[b][0] - pts[o][0], pts[b][1] - pts[o][1]],
        )
    };
    let mut hull: Vec<usize> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let seq: Box<dyn Iterator<Item = &usize>> = if pass == 0 { Box::new(idx.iter()) } else { Box::new(idx.iter().rev()) };
        for &i in seq {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], i) <= 0 {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull.sort_unstable();
    hull.dedup();
    hull
}

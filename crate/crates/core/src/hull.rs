//! Facet enumeration of the convex hull of points in `R^n`, `2 ≤ n ≤ 6`.
//!
//! Incremental beneath–beyond insertion in furthest-point order. Every facet is
//! a simplex stored with its neighbour across each ridge (`nbr[i]` is the
//! facet opposite `v[i]`), and every uninserted point is parked in the outside
//! set of one facet it can see. Inserting a point deletes the connected set of
//! facets it sees and cones the horizon ridges to the new apex.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::{circumradius_sq, raw_normal, simplex_volume_unchecked, PointCloud};
use crate::linalg::{dot, norm, orientation_dd, unit_normal};

/// Largest dimension the hull supports.
pub const HULL_MAX_DIM: usize = 6;
/// A point is above a facet when its signed distance exceeds this.
pub const VISIBILITY_TOL: f64 = 1e-12;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Facet {
    dim: usize,
    vertices: [u32; HULL_MAX_DIM],
    normal: [f64; HULL_MAX_DIM],
    /// Signed: non-negative iff the origin is on the inner side.
    pub offset: f64,
    pub volume: f64,
    /// `Δ = 1 − p`.
    pub cap_height: f64,
}

impl Facet {
    pub fn vertices(&self) -> &[u32] {
        &self.vertices[..self.dim]
    }

    /// Outward unit normal.
    pub fn normal(&self) -> &[f64] {
        &self.normal[..self.dim]
    }

    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        dot(self.normal(), x) - self.offset
    }

    pub fn sorted_vertices(&self) -> Vec<u32> {
        let mut v = self.vertices().to_vec();
        v.sort_unstable();
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HullResult {
    pub dim: usize,
    pub facets: Vec<Facet>,
    pub contains_origin: bool,
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FacetStatistics {
    pub min_volume: f64,
    pub max_volume: f64,
    /// `max_F (1 − p_F)`, a lower bound on the Hausdorff distance to the ball.
    pub max_cap_height: f64,
    pub min_offset: f64,
}

impl HullResult {
    /// Every `(n−2)`-face is shared by exactly two facets.
    pub fn ridges_consistent(&self) -> bool {
        let mut count: HashMap<Vec<u32>, u32> = HashMap::new();
        for f in &self.facets {
            let v = f.sorted_vertices();
            for skip in 0..v.len() {
                let mut r = v.clone();
                r.remove(skip);
                *count.entry(r).or_default() += 1;
            }
        }
        !count.is_empty() && count.values().all(|&c| c == 2)
    }

    /// Sorted vertex sets of all facets, sorted.
    pub fn facet_sets(&self) -> Vec<Vec<u32>> {
        let mut s: Vec<_> = self.facets.iter().map(Facet::sorted_vertices).collect();
        s.sort();
        s
    }

    pub fn statistics(&self) -> Result<FacetStatistics> {
        facet_statistics(self)
    }
}

pub fn facet_statistics(hull: &HullResult) -> Result<FacetStatistics> {
    if hull.degenerate || hull.facets.is_empty() {
        return Err(Error::NoStatistics);
    }
    let mut s = FacetStatistics {
        min_volume: f64::INFINITY,
        max_volume: f64::NEG_INFINITY,
        max_cap_height: f64::NEG_INFINITY,
        min_offset: f64::INFINITY,
    };
    for f in &hull.facets {
        s.min_volume = s.min_volume.min(f.volume);
        s.max_volume = s.max_volume.max(f.volume);
        s.max_cap_height = s.max_cap_height.max(f.cap_height);
        s.min_offset = s.min_offset.min(f.offset);
    }
    Ok(s)
}

struct Face {
    v: [u32; HULL_MAX_DIM],
    nbr: [u32; HULL_MAX_DIM],
    normal: [f64; HULL_MAX_DIM],
    offset: f64,
    alive: bool,
    outside: Vec<u32>,
    furthest: u32,
    furthest_dist: f64,
}

struct Builder<'a> {
    n: usize,
    cloud: &'a PointCloud,
    interior: [f64; HULL_MAX_DIM],
    faces: Vec<Face>,
}

impl<'a> Builder<'a> {
    fn pt(&self, i: u32) -> &'a [f64] {
        self.cloud.point(i as usize)
    }

    /// Plane through `v`, oriented away from the interior point.
    fn plane(&self, v: &[u32; HULL_MAX_DIM]) -> ([f64; HULL_MAX_DIM], f64) {
        let n = self.n;
        let mut pts: [&[f64]; HULL_MAX_DIM] = [&[]; HULL_MAX_DIM];
        for (p, &i) in pts.iter_mut().zip(&v[..n]) {
            *p = self.pt(i);
        }
        let pts = &pts[..n];
        let mut edges = [[0.0; HULL_MAX_DIM]; HULL_MAX_DIM - 1];
        for (e, p) in edges.iter_mut().zip(&pts[1..]) {
            for j in 0..n {
                e[j] = p[j] - pts[0][j];
            }
        }
        let mut normal = unit_normal(&edges[..n - 1], n);
        let mut offset = pts.iter().map(|p| dot(&normal[..n], p)).sum::<f64>() / n as f64;
        if dot(&normal[..n], &self.interior[..n]) > offset {
            normal.iter_mut().for_each(|c| *c = -*c);
            offset = -offset;
        }
        (normal, offset)
    }

    fn add_face(&mut self, v: [u32; HULL_MAX_DIM], nbr: [u32; HULL_MAX_DIM]) -> u32 {
        let (normal, offset) = self.plane(&v);
        self.faces.push(Face {
            v,
            nbr,
            normal,
            offset,
            alive: true,
            outside: Vec::new(),
            furthest: NONE,
            furthest_dist: 0.0,
        });
        (self.faces.len() - 1) as u32
    }

    /// Signed distance of point `q` above face `f`, or `None` when `q` is on
    /// or below it. Near-zero distances are settled by an extended-precision
    /// orientation test against the interior point.
    fn above(&self, f: u32, q: u32) -> Option<f64> {
        let face = &self.faces[f as usize];
        let x = self.pt(q);
        let d = dot(&face.normal[..self.n], x) - face.offset;
        if d.abs() >= 10.0 * VISIBILITY_TOL {
            return (d > 0.0).then_some(d);
        }
        let verts: Vec<&[f64]> = face.v[..self.n].iter().map(|&i| self.pt(i)).collect();
        let sx = orientation_dd(&verts, x, self.n);
        let si = orientation_dd(&verts, &self.interior[..self.n], self.n);
        (sx != 0.0 && si != 0.0 && sx != si && d > VISIBILITY_TOL).then_some(d)
    }

    fn park(&mut self, f: u32, q: u32, d: f64) {
        let face = &mut self.faces[f as usize];
        face.outside.push(q);
        if face.furthest == NONE || d > face.furthest_dist {
            face.furthest = q;
            face.furthest_dist = d;
        }
    }
}

/// `n + 1` affinely independent points chosen greedily for spread; `None`
/// when the cloud lies within `1e-12` of a hyperplane.
fn initial_simplex(cloud: &PointCloud) -> Option<Vec<u32>> {
    let n = cloud.dim();
    let m = cloud.len();
    let mut chosen = vec![0u32];
    // start from the point with the largest first coordinate
    for i in 1..m {
        if cloud.point(i)[0] > cloud.point(chosen[0] as usize)[0] {
            chosen[0] = i as u32;
        }
    }
    let base = cloud.point(chosen[0] as usize).to_vec();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    while chosen.len() < n + 1 {
        let mut best = (0.0, 0u32);
        let mut best_r = Vec::new();
        for i in 0..m {
            let mut r: Vec<f64> = cloud.point(i).iter().zip(&base).map(|(a, b)| a - b).collect();
            for b in &basis {
                let c = dot(&r, b);
                r.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
            let len = norm(&r);
            if len > best.0 {
                best = (len, i as u32);
                best_r = r;
            }
        }
        if best.0 < 1e-12 {
            return None;
        }
        best_r.iter_mut().for_each(|x| *x /= best.0);
        basis.push(best_r);
        chosen.push(best.1);
    }
    Some(chosen)
}

pub fn convex_hull(cloud: &PointCloud) -> Result<HullResult> {
    let n = cloud.dim();
    if n > HULL_MAX_DIM {
        return Err(Error::Unsupported(format!("convex hull supports n <= {HULL_MAX_DIM}, got {n}")));
    }
    if cloud.len() < n + 1 {
        return Err(Error::InvalidArgument(format!(
            "convex hull in R^{n} needs at least {} points, got {}",
            n + 1,
            cloud.len()
        )));
    }
    let degenerate = HullResult { dim: n, facets: Vec::new(), contains_origin: false, degenerate: true };
    let Some(simplex) = initial_simplex(cloud) else {
        return Ok(degenerate);
    };

    let mut interior = [0.0; HULL_MAX_DIM];
    for &s in &simplex {
        for (j, x) in cloud.point(s as usize).iter().enumerate() {
            interior[j] += x / (n + 1) as f64;
        }
    }
    let mut b = Builder { n, cloud, interior, faces: Vec::with_capacity(8 * cloud.len()) };

    // facet i omits simplex vertex i; across its copy of vertex j lies facet j
    for i in 0..=n {
        let mut v = [NONE; HULL_MAX_DIM];
        let mut nbr = [NONE; HULL_MAX_DIM];
        let mut k = 0;
        for j in 0..=n {
            if j != i {
                v[k] = simplex[j];
                nbr[k] = j as u32;
                k += 1;
            }
        }
        b.add_face(v, nbr);
    }

    let mut in_simplex = vec![false; cloud.len()];
    simplex.iter().for_each(|&s| in_simplex[s as usize] = true);
    for q in 0..cloud.len() as u32 {
        if in_simplex[q as usize] {
            continue;
        }
        for f in 0..=n as u32 {
            if let Some(d) = b.above(f, q) {
                b.park(f, q, d);
                break;
            }
        }
    }

    let mut pending: Vec<u32> = (0..=n as u32).filter(|&f| !b.faces[f as usize].outside.is_empty()).collect();
    let mut visible: Vec<u32> = Vec::new();
    let mut mark: Vec<u32> = Vec::new(); // iteration stamp of visibility per face
    let mut stamp = 0u32;
    let mut new_faces: Vec<u32> = Vec::new();
    // unmatched ridges through the apex; small, so a linear scan beats hashing
    let mut open_ridges: Vec<([u32; HULL_MAX_DIM - 1], u32, usize)> = Vec::new();
    let mut orphans: Vec<u32> = Vec::new();

    while let Some(f0) = pending.pop() {
        let face = &b.faces[f0 as usize];
        if !face.alive || face.outside.is_empty() {
            continue;
        }
        let apex = face.furthest;
        stamp += 1;
        mark.resize(b.faces.len(), 0);

        // visible region by flood fill from f0
        visible.clear();
        visible.push(f0);
        mark[f0 as usize] = stamp;
        let mut head = 0;
        while head < visible.len() {
            let f = visible[head];
            head += 1;
            for k in 0..n {
                let g = b.faces[f as usize].nbr[k];
                if mark[g as usize] != stamp && b.above(g, apex).is_some() {
                    mark[g as usize] = stamp;
                    visible.push(g);
                }
            }
        }

        // cone every horizon ridge to the apex
        new_faces.clear();
        open_ridges.clear();
        for &f in &visible {
            for k in 0..n {
                let g = b.faces[f as usize].nbr[k];
                if mark.get(g as usize) == Some(&stamp) {
                    continue;
                }
                let fv = b.faces[f as usize].v;
                let mut v = [NONE; HULL_MAX_DIM];
                let mut c = 0;
                for (j, &x) in fv[..n].iter().enumerate() {
                    if j != k {
                        v[c] = x;
                        c += 1;
                    }
                }
                v[n - 1] = apex;
                let mut nbr = [NONE; HULL_MAX_DIM];
                nbr[n - 1] = g;
                let id = b.add_face(v, nbr);
                let gn = &mut b.faces[g as usize].nbr;
                if let Some(slot) = gn[..n].iter().position(|&x| x == f) {
                    gn[slot] = id;
                }
                new_faces.push(id);
                // ridges through the apex: drop one base vertex at a time
                for j in 0..n - 1 {
                    let mut key = [NONE; HULL_MAX_DIM - 1];
                    let mut c = 0;
                    for (i, &x) in v[..n - 1].iter().enumerate() {
                        if i != j {
                            key[c] = x;
                            c += 1;
                        }
                    }
                    key[..c].sort_unstable();
                    if let Some(pos) = open_ridges.iter().position(|r| r.0 == key) {
                        let (_, other, slot) = open_ridges.swap_remove(pos);
                        b.faces[id as usize].nbr[j] = other;
                        b.faces[other as usize].nbr[slot] = id;
                    } else {
                        open_ridges.push((key, id, j));
                    }
                }
            }
        }
        debug_assert!(open_ridges.is_empty());

        // hand the orphaned outside points to the new facets
        orphans.clear();
        for &f in &visible {
            let face = &mut b.faces[f as usize];
            face.alive = false;
            orphans.append(&mut face.outside);
        }
        for &q in &orphans {
            if q == apex {
                continue;
            }
            for &f in &new_faces {
                if let Some(d) = b.above(f, q) {
                    b.park(f, q, d);
                    break;
                }
            }
        }
        pending.extend(new_faces.iter().copied().filter(|&f| !b.faces[f as usize].outside.is_empty()));
    }

    let facets: Vec<Facet> = b
        .faces
        .iter()
        .filter(|f| f.alive)
        .map(|f| {
            let pts: Vec<&[f64]> = f.v[..n].iter().map(|&i| cloud.point(i as usize)).collect();
            Facet {
                dim: n,
                vertices: f.v,
                normal: f.normal,
                offset: f.offset,
                volume: simplex_volume_unchecked(&pts),
                cap_height: if f.offset > 0.0 { circumradius_sq(&pts) / (1.0 + f.offset) } else { 1.0 - f.offset },
            }
        })
        .collect();
    let contains_origin = facets.iter().all(|f| f.offset > 0.0);
    Ok(HullResult { dim: n, facets, contains_origin, degenerate: false })
}

/// Exhaustive oracle: every `n`-subset whose spanning hyperplane has all other
/// points strictly on one side, as sorted index sets. Exponential; for tests.
pub fn facets_by_enumeration(cloud: &PointCloud) -> Vec<Vec<u32>> {
    let n = cloud.dim();
    let m = cloud.len();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let pts: Vec<&[f64]> = idx.iter().map(|&i| cloud.point(i)).collect();
        let raw = raw_normal(&pts, n);
        let len = norm(&raw[..n]);
        if len > 1e-12 {
            let nrm: Vec<f64> = raw[..n].iter().map(|x| x / len).collect();
            let off = dot(&nrm, pts[0]);
            let (mut pos, mut neg) = (0, 0);
            for j in (0..m).filter(|j| !idx.contains(j)) {
                let d = dot(&nrm, cloud.point(j)) - off;
                if d > 1e-12 {
                    pos += 1;
                } else if d < -1e-12 {
                    neg += 1;
                } else {
                    pos += 1;
                    neg += 1;
                }
            }
            if pos == 0 || neg == 0 {
                out.push(idx.iter().map(|&i| i as u32).collect());
            }
        }
        // next combination in lexicographic order
        let mut i = n;
        loop {
            if i == 0 {
                out.sort();
                return out;
            }
            i -= 1;
            if idx[i] != i + m - n {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..n {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

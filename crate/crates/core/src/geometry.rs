//! Point clouds on the sphere, simplex volumes and spanning hyperplanes.

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, dot, generalized_cross, Vector, MAX_DIM};
use crate::special::factorial;

/// Points within this distance of the unit sphere are accepted as unit vectors.
pub const UNIT_TOL: f64 = 1e-12;
/// Simplices with volume below this are treated as affinely dependent.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// `N` unit vectors in `R^n`, stored row-major in one flat buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    /// Validates dimension, finiteness and unit norms.
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if !(2..=MAX_DIM).contains(&dim) {
            return Err(invalid(format!("dimension must be in 2..={MAX_DIM}, got {dim}")));
        }
        if coords.is_empty() || coords.len() % dim != 0 {
            return Err(invalid(format!(
                "coordinate buffer of length {} is not a non-empty multiple of {dim}",
                coords.len()
            )));
        }
        for (i, p) in coords.chunks_exact(dim).enumerate() {
            if p.iter().any(|x| !x.is_finite()) {
                return Err(invalid(format!("point {i} has a non-finite coordinate")));
            }
            let r = linalg::norm(p);
            if (r - 1.0).abs() > UNIT_TOL {
                return Err(invalid(format!("point {i} has norm {r}, expected 1")));
            }
        }
        Ok(Self { dim, coords })
    }

    pub fn from_points(dim: usize, points: &[Vec<f64>]) -> Result<Self> {
        if points.iter().any(|p| p.len() != dim) {
            return Err(invalid("all points must have the cloud dimension"));
        }
        Self::new(dim, points.concat())
    }

    /// Construction for buffers that are unit-norm by construction.
    pub(crate) fn from_raw(dim: usize, coords: Vec<f64>) -> Self {
        debug_assert!(coords.len() % dim == 0);
        Self { dim, coords }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, f64> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// `{x : ⟨normal, x⟩ = offset}` with a unit normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyperplane {
    pub normal: Vector,
    pub offset: f64,
    pub dim: usize,
}

impl Hyperplane {
    pub fn normal(&self) -> &[f64] {
        &self.normal[..self.dim]
    }

    /// Signed distance of `x` beyond the plane along the normal.
    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        dot(self.normal(), x) - self.offset
    }
}

/// `(k−1)`-volume of the simplex with the given `k` vertices, from the Gram
/// determinant of its edge vectors.
pub fn simplex_volume(points: &[&[f64]]) -> Result<f64> {
    let k = points.len();
    let n = points.first().map_or(0, |p| p.len());
    if k < 2 || k > n + 1 || n > MAX_DIM {
        return Err(invalid(format!("simplex_volume needs 2 <= k <= n+1 points, got k={k}, n={n}")));
    }
    if points.iter().any(|p| p.len() != n) {
        return Err(invalid("simplex vertices must share a dimension"));
    }
    Ok(simplex_volume_unchecked(points))
}

pub(crate) fn simplex_volume_unchecked(points: &[&[f64]]) -> f64 {
    let k = points.len();
    let m = k - 1;
    let base = points[0];
    let mut edges = [[0.0; MAX_DIM]; MAX_DIM];
    for (e, p) in edges.iter_mut().zip(&points[1..]) {
        for (j, (a, b)) in p.iter().zip(base).enumerate() {
            e[j] = a - b;
        }
    }
    let mut gram = [0.0; MAX_DIM * MAX_DIM];
    for i in 0..m {
        for j in i..m {
            let g = dot(&edges[i], &edges[j]);
            gram[i * m + j] = g;
            gram[j * m + i] = g;
        }
    }
    let det = linalg::det_in_place(&mut gram[..m * m], m);
    det.max(0.0).sqrt() / factorial(m as u32)
}

/// Squared circumradius of a simplex within its own affine hull, computed from
/// edge vectors only. For points on the unit sphere whose hyperplane has offset
/// `p ≥ 0`, the cap height is `r²/(1 + p)`; unlike `1 − p` this keeps full
/// relative precision for tiny facets.
pub(crate) fn circumradius_sq(points: &[&[f64]]) -> f64 {
    let m = points.len() - 1;
    let base = points[0];
    let mut edges = [[0.0; MAX_DIM]; MAX_DIM];
    for (e, p) in edges.iter_mut().zip(&points[1..]) {
        for (j, (a, b)) in p.iter().zip(base).enumerate() {
            e[j] = a - b;
        }
    }
    // circumcentre c = Σ λ_i e_i with ⟨c, e_i⟩ = |e_i|²/2, i.e. G λ = diag(G)/2
    let mut g = [[0.0; MAX_DIM + 1]; MAX_DIM];
    for i in 0..m {
        for j in 0..m {
            g[i][j] = dot(&edges[i], &edges[j]);
        }
        g[i][m] = 0.5 * g[i][i];
    }
    for col in 0..m {
        let piv = (col..m).max_by(|&a, &b| g[a][col].abs().total_cmp(&g[b][col].abs())).unwrap_or(col);
        g.swap(col, piv);
        let d = g[col][col];
        if d == 0.0 {
            return f64::NAN;
        }
        for r in col + 1..m {
            let f = g[r][col] / d;
            for c in col..=m {
                g[r][c] -= f * g[col][c];
            }
        }
    }
    let mut lambda = [0.0; MAX_DIM];
    for i in (0..m).rev() {
        let tail: f64 = (i + 1..m).map(|j| g[i][j] * lambda[j]).sum();
        lambda[i] = (g[i][m] - tail) / g[i][i];
    }
    let mut c = [0.0; MAX_DIM];
    for (e, l) in edges[..m].iter().zip(&lambda) {
        for (cj, ej) in c.iter_mut().zip(e) {
            *cj += l * ej;
        }
    }
    dot(&c, &c)
}

/// Unnormalised normal of the hyperplane through `n` points in `R^n`; its norm
/// is `(n−1)!` times the simplex volume. The sign is whatever the cofactor
/// expansion gives.
pub(crate) fn raw_normal(points: &[&[f64]], n: usize) -> Vector {
    let base = points[0];
    let mut edges = [[0.0; MAX_DIM]; MAX_DIM];
    for (e, p) in edges.iter_mut().zip(&points[1..n]) {
        for j in 0..n {
            e[j] = p[j] - base[j];
        }
    }
    generalized_cross(&edges[..n - 1], n)
}

/// Hyperplane spanned by `n` points of `R^n`, oriented so the offset is
/// non-negative.
pub fn hyperplane_through(points: &[&[f64]]) -> Result<Hyperplane> {
    let n = points.first().map_or(0, |p| p.len());
    if n < 2 || n > MAX_DIM || points.len() != n || points.iter().any(|p| p.len() != n) {
        return Err(invalid("hyperplane_through needs exactly n points in R^n"));
    }
    let mut normal = raw_normal(points, n);
    let len = linalg::norm(&normal[..n]);
    let volume = len / factorial((n - 1) as u32);
    if !(volume >= DEGENERACY_TOL) {
        return Err(Error::DegenerateSimplex { volume });
    }
    normal.iter_mut().for_each(|c| *c /= len);
    let mut offset = points.iter().map(|p| dot(&normal[..n], p)).sum::<f64>() / n as f64;
    if offset < 0.0 {
        normal.iter_mut().for_each(|c| *c = -*c);
        offset = -offset;
    }
    Ok(Hyperplane { normal, offset, dim: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const R2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn segment_and_triangle_volumes() {
        let v = simplex_volume(&[&[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        assert_relative_eq!(v, R2, epsilon = 1e-15);
        let e = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let v = simplex_volume(&[&e[0], &e[1], &e[2]]).unwrap();
        assert_relative_eq!(v, 3f64.sqrt() / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn collinear_points_have_zero_volume() {
        let mid = [0.5, 0.5, 0.0];
        let v = simplex_volume(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &mid]).unwrap();
        assert!(v < 1e-15);
        // normalising the midpoint lifts it off the segment
        let m = [0.5f64.sqrt(), 0.5f64.sqrt(), 0.0];
        let v = simplex_volume(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &m]).unwrap();
        assert_relative_eq!(v, (R2 - 1.0) / 2.0, epsilon = 1e-14);
    }

    #[test]
    fn volume_rejects_bad_counts() {
        assert!(simplex_volume(&[&[1.0, 0.0]]).is_err());
        let p = [1.0, 0.0];
        assert!(simplex_volume(&[&p, &p, &p, &p]).is_err());
    }

    #[test]
    fn symmetric_hyperplanes() {
        let h = hyperplane_through(&[&[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        assert_relative_eq!(h.normal()[0], 1.0 / R2, epsilon = 1e-15);
        assert_relative_eq!(h.normal()[1], 1.0 / R2, epsilon = 1e-15);
        assert_relative_eq!(h.offset, 1.0 / R2, epsilon = 1e-15);

        let e = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let h = hyperplane_through(&[&e[0], &e[1], &e[2]]).unwrap();
        for c in h.normal() {
            assert_relative_eq!(*c, 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        }
        assert_relative_eq!(h.offset, 1.0 / 3f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn plane_through_origin() {
        let h = hyperplane_through(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[-1.0, 0.0, 0.0]]).unwrap();
        assert!(h.offset.abs() < 1e-15);
        assert_relative_eq!(h.normal()[2].abs(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn degenerate_hyperplane_is_an_error() {
        let r = hyperplane_through(&[&[1.0, 0.0], &[1.0, 0.0]]);
        assert!(matches!(r, Err(Error::DegenerateSimplex { .. })));
    }

    #[test]
    fn cloud_validation() {
        assert!(PointCloud::new(3, vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0]).is_ok());
        assert!(PointCloud::new(3, vec![1.0, 0.0, 1e-3]).is_err());
        assert!(PointCloud::new(1, vec![1.0]).is_err());
        assert!(PointCloud::new(2, vec![]).is_err());
        assert!(PointCloud::new(2, vec![f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn circumradius_of_small_chord_and_triangle() {
        let a = [1.0, 0.0];
        let b = [0.6, 0.8];
        let chord2 = 0.4f64 * 0.4 + 0.8 * 0.8;
        assert!((circumradius_sq(&[&a, &b]) - chord2 / 4.0).abs() < 1e-15);
        // equilateral triangle with side s has r² = s²/3
        let t = [[0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [1.0, 3f64.sqrt(), 0.0]];
        assert!((circumradius_sq(&[&t[0], &t[1], &t[2]]) - 4.0 / 3.0).abs() < 1e-14);
    }
}

//! Uniform sampling on spheres, on hyperplane sections of spheres, and inside
//! caps.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Result};
use crate::geometry::PointCloud;
use crate::linalg::{dot, Vector, MAX_DIM};
use crate::rng::RngStream;

/// Overwrite `out` with a uniform point of `S^{len−1}` (normalised Gaussian).
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    loop {
        let mut s = 0.0;
        for x in out.iter_mut() {
            *x = rng.sample(StandardNormal);
            s += *x * *x;
        }
        if s > 1e-300 {
            let r = s.sqrt();
            out.iter_mut().for_each(|x| *x /= r);
            return;
        }
    }
}

/// Appends `count` uniform points on `S^{n−1}` to `buf`.
pub(crate) fn fill_sphere<R: Rng + ?Sized>(rng: &mut R, n: usize, count: usize, buf: &mut Vec<f64>) {
    let start = buf.len();
    buf.resize(start + n * count, 0.0);
    for p in buf[start..].chunks_exact_mut(n) {
        unit_vector(rng, p);
    }
}

pub fn sample_sphere(stream: &RngStream, n: usize, count: usize) -> Result<PointCloud> {
    if !(2..=MAX_DIM).contains(&n) {
        return Err(invalid(format!("sample_sphere: n must be in 2..={MAX_DIM}, got {n}")));
    }
    if count < 1 {
        return Err(invalid("sample_sphere: count must be >= 1"));
    }
    let mut rng = stream.rng();
    let mut buf = Vec::with_capacity(n * count);
    fill_sphere(&mut rng, n, count, &mut buf);
    Ok(PointCloud::from_raw(n, buf))
}

/// Orthonormal basis of `θ^⊥` for a unit `θ ∈ R^n`: columns 2..n of the
/// Householder reflection that sends `e₁` to `±θ`.
pub fn orthonormal_complement(theta: &[f64]) -> Vec<Vector> {
    let n = theta.len();
    let mut u = [0.0; MAX_DIM];
    u[..n].copy_from_slice(theta);
    let s = if theta[0] >= 0.0 { 1.0 } else { -1.0 };
    u[0] += s;
    let uu = dot(&u[..n], &u[..n]);
    (1..n)
        .map(|j| {
            let mut col = [0.0; MAX_DIM];
            for (i, c) in col.iter_mut().enumerate().take(n) {
                let id = if i == j { 1.0 } else { 0.0 };
                *c = id - 2.0 * u[i] * u[j] / uu;
            }
            col
        })
        .collect()
}

/// Point `center·h + radius·Σ w_j basis_j` for a uniform `w ∈ S^{n−2}`.
fn section_point<R: Rng + ?Sized>(rng: &mut R, center: &[f64], basis: &[Vector], h: f64, radius: f64, out: &mut [f64]) {
    let n = center.len();
    let mut w = [0.0; MAX_DIM];
    unit_vector(rng, &mut w[..n - 1]);
    for i in 0..n {
        let mut s = h * center[i];
        for (j, b) in basis.iter().enumerate() {
            s += radius * w[j] * b[i];
        }
        out[i] = s;
    }
}

/// Uniform point on the section `{x ∈ S^{n−1} : ⟨x, θ⟩ = p}`.
pub fn subsphere_point<R: Rng + ?Sized>(rng: &mut R, theta: &[f64], basis: &[Vector], p: f64, out: &mut [f64]) {
    let radius = (1.0 - p * p).max(0.0).sqrt();
    section_point(rng, theta, basis, p, radius, out);
}

/// Uniform sampler on the closed cap `{x ∈ S^{n−1} : ⟨x, center⟩ ≥ cos φ}`.
///
/// The polar angle `u ∈ [0, φ]` has density `∝ sin^{n−2} u`; it is drawn by
/// rejection from the uniform law with envelope `max sin^{n−2}` on `[0, φ]`.
#[derive(Debug, Clone)]
pub struct CapSampler {
    center: Vec<f64>,
    basis: Vec<Vector>,
    phi: f64,
    envelope: f64,
}

impl CapSampler {
    pub fn new(center: &[f64], phi: f64) -> Result<Self> {
        let n = center.len();
        if !(2..=MAX_DIM).contains(&n) || !(phi > 0.0 && phi <= std::f64::consts::PI) {
            return Err(invalid(format!("CapSampler: bad dimension {n} or angle {phi}")));
        }
        Ok(Self {
            center: center.to_vec(),
            basis: orthonormal_complement(center),
            phi,
            envelope: phi.min(std::f64::consts::FRAC_PI_2).sin(),
        })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        let n = self.dim();
        let k = (n - 2) as i32;
        let u = loop {
            let u = rng.gen::<f64>() * self.phi;
            if k == 0 || rng.gen::<f64>() <= (u.sin() / self.envelope).powi(k) {
                break u;
            }
        };
        section_point(rng, &self.center, &self.basis, u.cos(), u.sin(), out);
    }
}

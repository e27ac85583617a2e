//! Spherical caps: exact area, the elementary area/angle bounds, and a greedy
//! construction of disjoint equal-area cap packings.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{invalid, Error, Result};
use crate::linalg::{dot, MAX_DIM};
use crate::quad;
use crate::rng::RngStream;
use crate::sampling::unit_vector;
use crate::special::{ball_volume, beta_reg, sphere_area, sphere_over_subball};

fn check_dim(n: u32) -> Result<()> {
    if !(2..=MAX_DIM as u32).contains(&n) {
        return Err(invalid(format!("dimension must be in 2..={MAX_DIM}, got {n}")));
    }
    Ok(())
}

fn check_offset(p: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&p) {
        return Err(invalid(format!("cap offset must lie in [-1, 1], got {p}")));
    }
    Ok(())
}

/// Area of `{x ∈ S^{n−1} : ⟨x, θ⟩ ≥ p}`.
pub fn cap_area(n: u32, p: f64) -> Result<f64> {
    check_dim(n)?;
    check_offset(p)?;
    Ok(match n {
        2 => 2.0 * p.acos(),
        3 => 2.0 * PI * (1.0 - p),
        _ => {
            let half = sphere_area(n)? / 2.0;
            let a = (n as f64 - 1.0) / 2.0;
            let p2 = p * p;
            if p2 < 0.5 {
                // I_{1−p²}(a, ½) = 1 − I_{p²}(½, a); forming 1 − p² would
                // discard p entirely once |p| < 1e-8
                half * (1.0 - p.signum() * beta_reg(0.5, a, p2)?)
            } else {
                let tail = half * beta_reg(a, 0.5, 1.0 - p2)?;
                if p >= 0.0 {
                    tail
                } else {
                    2.0 * half - tail
                }
            }
        }
    })
}

/// Cap area as a function of the polar angle `φ ∈ [0, π]`. Equal to
/// `cap_area(n, cos φ)`, but accurate to full relative precision for tiny `φ`.
pub fn cap_area_for_angle(n: u32, phi: f64) -> Result<f64> {
    check_dim(n)?;
    if !(0.0..=PI).contains(&phi) {
        return Err(invalid(format!("cap angle must lie in [0, pi], got {phi}")));
    }
    if phi > FRAC_PI_2 {
        return Ok(sphere_area(n)? - cap_area_for_angle(n, PI - phi)?);
    }
    Ok(match n {
        2 => 2.0 * phi,
        3 => 4.0 * PI * (0.5 * phi).sin().powi(2),
        _ => {
            let half = sphere_area(n)? / 2.0;
            let a = (n as f64 - 1.0) / 2.0;
            let (s2, c2) = (phi.sin().powi(2), phi.cos().powi(2));
            if s2 <= 0.5 {
                half * beta_reg(a, 0.5, s2)?
            } else {
                half * (1.0 - beta_reg(0.5, a, c2)?)
            }
        }
    })
}

/// The same area by adaptive quadrature of `|S^{n−2}| ∫_0^{arccos p} sin^{n−2} u du`;
/// an independent route used to cross-check [`cap_area`].
pub fn cap_area_by_quadrature(n: u32, p: f64) -> Result<f64> {
    check_dim(n)?;
    check_offset(p)?;
    let k = (n - 2) as i32;
    let sub = if n == 2 { 2.0 } else { sphere_area(n - 1)? };
    let phi = p.acos();
    if phi == 0.0 {
        return Ok(0.0);
    }
    Ok(sub * quad::integrate(|u| u.sin().powi(k), 0.0, phi, 1e-13, 0.0)?)
}

/// `(1−p²)^{(n−1)/2}|B^{n−1}|` and that value divided by `p`; valid for `n ≥ 4`,
/// `0 < p ≤ 1`.
pub fn cap_area_bounds(n: u32, p: f64) -> Result<(f64, f64)> {
    check_dim(n)?;
    if n < 4 || !(p > 0.0 && p <= 1.0) {
        return Err(invalid(format!("cap_area_bounds needs n >= 4 and 0 < p <= 1, got n={n}, p={p}")));
    }
    let lower = (1.0 - p * p).powf((n as f64 - 1.0) / 2.0) * ball_volume(n - 1)?;
    Ok((lower, lower / p))
}

/// Offset `p` of the cap with area `|S^{n−1}|/R`, by bisection.
pub fn offset_for_fraction(n: u32, r: f64) -> Result<f64> {
    check_dim(n)?;
    if !(r >= 1.0) || !r.is_finite() {
        return Err(invalid(format!("area fraction denominator must be >= 1, got {r}")));
    }
    let target = sphere_area(n)? / r;
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cap_area(n, mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapAngle {
    pub phi: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Angle `φ` of a cap of area `|S^{n−1}|/R` together with the power-law
/// sandwich `c^{1/(n−1)} ≤ φ ≤ (π/2)^{(n−2)/(n−1)} c^{1/(n−1)}`,
/// `c = |S^{n−1}| / (R |B^{n−1}|)`.
pub fn cap_angle_from_fraction(n: u32, r: f64) -> Result<CapAngle> {
    check_dim(n)?;
    if !(r >= 2.0) || !r.is_finite() {
        return Err(invalid(format!("cap_angle_from_fraction needs R >= 2, got {r}")));
    }
    let target = sphere_area(n)? / r;
    let (mut lo, mut hi) = (0.0f64, PI);
    for _ in 0..200 {
        if hi - lo <= 1e-15 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if cap_area_for_angle(n, mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let m = n as f64 - 1.0;
    let lower = (sphere_over_subball(n)? / r).powf(1.0 / m);
    let upper = FRAC_PI_2.powf((m - 1.0) / m) * lower;
    Ok(CapAngle { phi: 0.5 * (lo + hi), lower, upper })
}

/// A cap given by its pole and offset; the other parametrizations are derived.
#[derive(Debug, Clone, PartialEq)]
pub struct Cap {
    pub center: Vec<f64>,
    pub offset: f64,
}

impl Cap {
    pub fn new(center: Vec<f64>, offset: f64) -> Result<Self> {
        check_dim(center.len() as u32)?;
        check_offset(offset)?;
        if (crate::linalg::norm(&center) - 1.0).abs() > crate::geometry::UNIT_TOL {
            return Err(invalid("cap centre must be a unit vector"));
        }
        Ok(Self { center, offset })
    }

    pub fn from_height(center: Vec<f64>, height: f64) -> Result<Self> {
        Self::new(center, 1.0 - height)
    }

    pub fn from_angle(center: Vec<f64>, phi: f64) -> Result<Self> {
        Self::new(center, phi.cos())
    }

    pub fn from_fraction(center: Vec<f64>, r: f64) -> Result<Self> {
        let p = offset_for_fraction(center.len() as u32, r)?;
        Self::new(center, p)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn height(&self) -> f64 {
        1.0 - self.offset
    }

    pub fn angle(&self) -> f64 {
        self.offset.acos()
    }

    pub fn radius(&self) -> f64 {
        (1.0 - self.offset * self.offset).max(0.0).sqrt()
    }

    pub fn area(&self) -> f64 {
        cap_area(self.dim() as u32, self.offset).expect("validated on construction")
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        dot(&self.center, x) >= self.offset
    }
}

#[derive(Debug, Clone)]
pub struct CapPacking {
    pub dim: usize,
    pub fraction: f64,
    /// Chordal separation of the net; every cap is `B(x_i, δ/2) ∩ S^{n−1}`.
    pub delta: f64,
    pub caps: Vec<Cap>,
}

impl CapPacking {
    pub fn len(&self) -> usize {
        self.caps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.caps.is_empty()
    }

    /// `3^{-n} R ≤ k ≤ R`.
    pub fn count_in_range(&self) -> bool {
        let k = self.len() as f64;
        let lo = 3f64.powi(-(self.dim as i32)) * self.fraction;
        k >= lo && k <= self.fraction
    }

    /// Pairwise centre angles are at least twice the common cap angle, so no
    /// two caps share interior points.
    pub fn pairwise_disjoint(&self) -> bool {
        let twice = 2.0 * self.caps.first().map_or(0.0, Cap::angle);
        self.caps.iter().enumerate().all(|(i, a)| {
            self.caps[i + 1..]
                .iter()
                .all(|b| dot(&a.center, &b.center).clamp(-1.0, 1.0).acos() >= twice - 1e-12)
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PackingOptions {
    /// Consecutive rejected candidates after which the net is declared maximal.
    pub rejection_streak: usize,
    /// Fresh substreams tried before giving up.
    pub attempts: u64,
}

impl Default for PackingOptions {
    fn default() -> Self {
        Self { rejection_streak: 10_000, attempts: 4 }
    }
}

pub fn build_cap_packing(stream: &RngStream, n: u32, r: f64) -> Result<CapPacking> {
    build_cap_packing_with(stream, n, r, PackingOptions::default())
}

/// Greedy random `δ`-net whose half-separation caps have area `|S^{n−1}|/R`.
/// The returned packing is checked against `3^{-n}R ≤ k ≤ R`, never assumed.
pub fn build_cap_packing_with(stream: &RngStream, n: u32, r: f64, opts: PackingOptions) -> Result<CapPacking> {
    check_dim(n)?;
    if !(r >= 2.0) || !r.is_finite() {
        return Err(invalid(format!("build_cap_packing needs R >= 2, got {r}")));
    }
    let p = offset_for_fraction(n, r)?;
    // cap B(x, δ/2) ∩ S has offset 1 − δ²/8
    let delta = (8.0 * (1.0 - p)).sqrt();
    let d = n as usize;
    let min_dot = 1.0 - delta * delta / 2.0;
    let mut last = None;
    for attempt in 0..opts.attempts.max(1) {
        let mut rng = stream.with_index(stream.stream_index.wrapping_add(attempt << 32)).rng();
        let mut centers: Vec<f64> = Vec::new();
        let mut x = vec![0.0; d];
        let mut streak = 0;
        while streak < opts.rejection_streak {
            unit_vector(&mut rng, &mut x);
            // ‖x − c‖ ≥ δ  ⇔  ⟨x, c⟩ ≤ 1 − δ²/2
            if centers.chunks_exact(d).all(|c| dot(c, &x) <= min_dot) {
                centers.extend_from_slice(&x);
                streak = 0;
            } else {
                streak += 1;
            }
        }
        let caps = centers
            .chunks_exact(d)
            .map(|c| Cap { center: c.to_vec(), offset: p })
            .collect();
        let packing = CapPacking { dim: d, fraction: r, delta, caps };
        if packing.count_in_range() {
            return Ok(packing);
        }
        last = Some(packing.len());
    }
    Err(Error::PackingFailure(format!(
        "greedy net with n={n}, R={r} produced {} caps, outside [3^-n R, R]",
        last.unwrap_or(0)
    )))
}

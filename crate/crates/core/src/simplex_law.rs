//! Volume law of the simplex spanned by `n + 1` uniform points of `S^{n−1}`:
//! Miles' mean, Monte-Carlo moments, the CDF sandwich, the second-moment
//! inequality and the spherical Blaschke–Petkantschin identity.

use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::geometry::simplex_volume_unchecked;
use crate::linalg::MAX_DIM;
use crate::montecarlo::{pairwise, run_chunks, Proportion, Welford, DEFAULT_CHUNK};
use crate::report::{BoundReport, Side};
use crate::rng::RngStream;
use crate::sampling::{orthonormal_complement, subsphere_point, unit_vector};
use crate::special::{ball_volume, factorial, lgam, ln_factorial, sphere_area};

fn check_dim(n: u32) -> Result<()> {
    if !(2..MAX_DIM as u32).contains(&n) {
        return Err(invalid(format!("simplex dimension must be in 2..{MAX_DIM}, got {n}")));
    }
    Ok(())
}

/// `E vol_n` of the random simplex:
/// `(1/n!) Γ((n²+1)/2)/Γ(n²/2) · (Γ(n/2)/Γ((n+1)/2))ⁿ · Γ(n/2)/Γ(1/2)`.
pub fn miles_expected_volume(n: u32) -> Result<f64> {
    if n < 2 {
        return Err(invalid("miles_expected_volume requires n >= 2"));
    }
    let m = n as f64;
    let ln = -ln_factorial(n) + lgam((m * m + 1.0) / 2.0) - lgam(m * m / 2.0)
        + m * (lgam(m / 2.0) - lgam((m + 1.0) / 2.0))
        + lgam(m / 2.0)
        - lgam(0.5);
    Ok(ln.exp())
}

/// Volume of the simplex on `n + 1` fresh uniform points of `S^{n−1}`.
pub(crate) fn random_simplex_volume<R: Rng + ?Sized>(rng: &mut R, n: usize, buf: &mut [f64]) -> f64 {
    for p in buf[..n * (n + 1)].chunks_exact_mut(n) {
        unit_vector(rng, p);
    }
    let mut pts: [&[f64]; MAX_DIM + 1] = [&[]; MAX_DIM + 1];
    for (i, p) in buf[..n * (n + 1)].chunks_exact(n).enumerate() {
        pts[i] = p;
    }
    simplex_volume_unchecked(&pts[..n + 1])
}

/// Runs `f(volume)` on `samples` random simplices, chunk by chunk.
fn over_volumes<T, F, G>(stream: &RngStream, n: usize, samples: u64, init: G, f: F) -> Vec<T>
where
    T: Send,
    G: Fn() -> T + Sync,
    F: Fn(&mut T, f64) + Sync,
{
    run_chunks(stream, samples, DEFAULT_CHUNK, |_, rng, count| {
        let mut acc = init();
        let mut buf = [0.0; MAX_DIM * (MAX_DIM + 1)];
        for _ in 0..count {
            f(&mut acc, random_simplex_volume(rng, n, &mut buf));
        }
        acc
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub k: u32,
    pub n: u32,
    pub value: f64,
    pub stderr: f64,
    pub samples: u64,
}

/// Monte-Carlo `V_{k,n} = E vol_nᵏ`.
pub fn estimate_moment(stream: &RngStream, n: u32, k: u32, samples: u64) -> Result<MomentEstimate> {
    check_dim(n)?;
    if k < 1 || samples < 1000 {
        return Err(invalid("estimate_moment requires k >= 1 and at least 1000 samples"));
    }
    let parts = over_volumes(stream, n as usize, samples, Welford::default, |w, v| w.push(v.powi(k as i32)));
    let w = pairwise(parts, Welford::merge).unwrap_or_default();
    Ok(MomentEstimate { k, n, value: w.mean, stderr: w.stderr().unwrap_or(0.0), samples })
}

/// Two-sided sandwich on `P(vol_n ≤ t)`. `lower` is `None` outside its range
/// of validity; `upper` is clamped at 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CdfBounds {
    pub lower: Option<f64>,
    pub upper: f64,
    pub upper_raw: f64,
}

/// Lower CDF constant for `n ≥ 3`.
pub fn cdf_lower_constant(n: u32) -> Result<f64> {
    if !(3..MAX_DIM as u32).contains(&n) {
        return Err(invalid(format!("cdf_lower_constant requires 3 <= n < {MAX_DIM}")));
    }
    let m = n as f64;
    let s1 = sphere_area(n - 1)?;
    let s = sphere_area(n)?;
    let ln = -(ball_volume(n)?).ln() - 0.5 - 0.5 * m.ln() + (m + 1.0) * s1.ln()
        - 2.0 * m.ln()
        - m * s.ln()
        + lgam(((m - 1.0).powi(2) + 1.0) / 2.0)
        - lgam((m - 1.0).powi(2) / 2.0)
        + (m - 1.0) * (lgam((m - 1.0) / 2.0) - lgam(m / 2.0))
        + lgam((m - 1.0) / 2.0)
        - lgam(0.5);
    Ok(ln.exp())
}

/// Upper CDF constant for `n ≥ 3`: `n! |S^{n−2}|^{n+1} / |S^{n−1}|ⁿ · B(1/2, (n²−3n+2)/2)`.
pub fn cdf_upper_constant(n: u32) -> Result<f64> {
    if !(3..MAX_DIM as u32).contains(&n) {
        return Err(invalid(format!("cdf_upper_constant requires 3 <= n < {MAX_DIM}")));
    }
    let m = n as f64;
    let b = (m * m - 3.0 * m + 2.0) / 2.0;
    let ln = ln_factorial(n) + (m + 1.0) * sphere_area(n - 1)?.ln() - m * sphere_area(n)?.ln() + lgam(0.5) + lgam(b)
        - lgam(0.5 + b);
    Ok(ln.exp())
}

pub fn cdf_bounds(n: u32, t: f64) -> Result<CdfBounds> {
    check_dim(n)?;
    if !(t >= 0.0) {
        return Err(invalid(format!("cdf_bounds requires t >= 0, got {t}")));
    }
    let pi = std::f64::consts::PI;
    let (lower, upper_raw) = if n == 2 {
        let lower = (t <= pi).then(|| (2.0 * t).powf(2.0 / 3.0) / pi.powf(8.0 / 3.0));
        (lower, 342.0 * t.powf(2.0 / 3.0))
    } else {
        let lower = (t <= ball_volume(n)?).then(|| cdf_lower_constant(n)).transpose()?.map(|a| a * t);
        (lower, cdf_upper_constant(n)? * t)
    };
    Ok(CdfBounds { lower, upper: upper_raw.min(1.0), upper_raw })
}

/// Empirical CDF of the simplex volume on `t_grid`, checked against
/// [`cdf_bounds`] on both sides.
pub fn verify_cdf_sandwich(stream: &RngStream, n: u32, t_grid: &[f64], samples: u64) -> Result<Vec<BoundReport>> {
    check_dim(n)?;
    let bounds: Vec<CdfBounds> = t_grid.iter().map(|&t| cdf_bounds(n, t)).collect::<Result<_>>()?;
    let g = t_grid.len();
    let parts = over_volumes(stream, n as usize, samples, || vec![0u64; g], |hits, v| {
        for (h, &t) in hits.iter_mut().zip(t_grid) {
            if v <= t {
                *h += 1;
            }
        }
    });
    let hits = pairwise(parts, |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect()).unwrap_or(vec![0; g]);
    let mut out = Vec::new();
    for ((&t, b), &h) in t_grid.iter().zip(&bounds).zip(&hits) {
        let p = Proportion { hits: h, trials: samples };
        let (est, se) = (p.estimate(), p.stderr());
        if let Some(lo) = b.lower {
            out.push(BoundReport::new("simplex_cdf_lower", n, Side::Lower, lo, est, se).with_param(t));
        }
        out.push(BoundReport::new("simplex_cdf_upper", n, Side::Upper, b.upper, est, se).with_param(t));
    }
    Ok(out)
}

/// `P(vol ≥ V₁/2) ≥ V₁² / (4 V₂)`, with `V₁` from Miles' formula for the
/// threshold and both moments estimated for the right-hand side.
pub fn verify_second_moment_bound(stream: &RngStream, n: u32, samples: u64) -> Result<BoundReport> {
    check_dim(n)?;
    let half = miles_expected_volume(n)? / 2.0;
    // count, hits, Σv, Σv², Σv³, Σv⁴
    let parts = over_volumes(stream, n as usize, samples, || [0.0f64; 6], |a, v| {
        let v2 = v * v;
        a[0] += 1.0;
        a[1] += if v >= half { 1.0 } else { 0.0 };
        a[2] += v;
        a[3] += v2;
        a[4] += v2 * v;
        a[5] += v2 * v2;
    });
    let s = pairwise(parts, |a, b| std::array::from_fn(|i| a[i] + b[i])).unwrap_or([0.0; 6]);
    let m = s[0];
    let (e1, e2, e3, e4) = (s[2] / m, s[3] / m, s[4] / m, s[5] / m);
    let rhs = e1 * e1 / (4.0 * e2);
    // delta method for the ratio of sample moments
    let (g1, g2) = (e1 / (2.0 * e2), -e1 * e1 / (4.0 * e2 * e2));
    let var = (g1 * g1 * (e2 - e1 * e1) + 2.0 * g1 * g2 * (e3 - e1 * e2) + g2 * g2 * (e4 - e2 * e2)) / m;
    let lhs = Proportion { hits: s[1] as u64, trials: samples };
    let se = (lhs.stderr().powi(2) + var.max(0.0)).sqrt();
    Ok(BoundReport::new("second_moment", n, Side::Lower, rhs, lhs.estimate(), se)
        .with_note(format!("rhs = V1^2/(4 V2) = {rhs:.6e}")))
}

/// Monte-Carlo of the right-hand side of the spherical Blaschke–Petkantschin
/// formula with `f ≡ 1`, compared with `|S^{n−1}|ⁿ`.
///
/// Draw `p ~ U[0,1]`, `θ` uniform on `S^{n−1}`, and `ξ₁…ξ_n` uniform on the
/// section `H(θ, p) ∩ S^{n−1}`; the estimator is
/// `(n−1)! |S^{n−1}| (|S^{n−2}| rⁿ⁻²)ⁿ vol_{n−1}[ξ] / (1−p²)^{n/2}`, `r = √(1−p²)`.
pub fn verify_blaschke_petkantschin(stream: &RngStream, n: u32, samples: u64) -> Result<BoundReport> {
    if n == 2 {
        return Err(Error::Unsupported("the section of S^1 is a point pair; n = 2 is excluded".into()));
    }
    check_dim(n)?;
    let d = n as usize;
    let s = sphere_area(n)?;
    let sub = sphere_area(n - 1)?;
    let lhs = s.powi(n as i32);
    let fact = factorial(n - 1);
    let parts = run_chunks(stream, samples, DEFAULT_CHUNK, |_, rng, count| {
        let mut w = Welford::default();
        let mut theta = [0.0; MAX_DIM];
        let mut pts = [0.0; MAX_DIM * MAX_DIM];
        for _ in 0..count {
            let p: f64 = rng.gen();
            unit_vector(rng, &mut theta[..d]);
            let basis = orthonormal_complement(&theta[..d]);
            for x in pts[..d * d].chunks_exact_mut(d) {
                subsphere_point(rng, &theta[..d], &basis, p, x);
            }
            let refs: Vec<&[f64]> = pts[..d * d].chunks_exact(d).collect();
            let vol = simplex_volume_unchecked(&refs);
            let r2 = 1.0 - p * p;
            let section = (sub * r2.sqrt().powi(d as i32 - 2)).powi(d as i32);
            w.push(fact * s * section * vol / r2.powf(d as f64 / 2.0));
        }
        w
    });
    let w = pairwise(parts, Welford::merge).unwrap_or_default();
    Ok(BoundReport::new("blaschke_petkantschin", n, Side::Equal, lhs, w.mean, w.stderr().unwrap_or(0.0)))
}

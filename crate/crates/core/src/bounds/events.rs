//! Monte-Carlo estimates of the probability that `n` uniform points span a
//! hyperplane whose section of the sphere lies inside a fixed small cap `C`
//! and whose simplex is large (resp. small).
//!
//! Both events force every point into `C`, so points are drawn uniformly
//! inside `C` and the hit rate is multiplied by `(|C|/|S^{n−1}|)ⁿ`. That is
//! exact conditioning, not an approximation.

use std::f64::consts::PI;

use crate::caps::cap_angle_from_fraction;
use crate::error::{invalid, Result};
use crate::geometry::raw_normal;
use crate::linalg::{dot, norm, MAX_DIM};
use crate::montecarlo::{pairwise, run_chunks, Proportion, DEFAULT_CHUNK};
use crate::report::{BoundReport, Side};
use crate::rng::RngStream;
use crate::sampling::CapSampler;
use crate::simplex_law::{cdf_lower_constant, cdf_upper_constant};
use crate::special::{factorial, sphere_area};

use super::{large_facet_threshold, subball};

#[derive(Debug, Clone, Copy)]
pub struct EventBudget {
    pub samples: u64,
}

impl Default for EventBudget {
    fn default() -> Self {
        Self { samples: 1_000_000 }
    }
}

/// Geometry of one tuple drawn inside the cap.
struct Section {
    /// Simplex `(n−1)`-volume.
    volume: f64,
    /// Distance of the spanned hyperplane from the origin.
    q: f64,
    /// Angle between the section's pole and the cap centre `e₁`.
    tilt: f64,
}

fn section_of(points: &[f64], n: usize) -> Section {
    let refs: Vec<&[f64]> = points.chunks_exact(n).collect();
    let raw = raw_normal(&refs, n);
    let len = norm(&raw[..n]);
    let mut eta = [0.0; MAX_DIM];
    for j in 0..n {
        eta[j] = raw[j] / len;
    }
    let mut q = dot(&eta[..n], refs[0]);
    if q < 0.0 {
        q = -q;
        eta.iter_mut().for_each(|x| *x = -*x);
    }
    Section {
        volume: len / factorial(n as u32 - 1),
        q,
        tilt: eta[0].clamp(-1.0, 1.0).acos(),
    }
}

/// Hit count of `accept` over `samples` tuples of `n` points uniform in the
/// cap around `e₁` with angle `phi`. The section-inside-cap condition
/// `tilt + arccos q ≤ φ` is applied before `accept` and is non-strict.
fn count_hits<F>(stream: &RngStream, n: usize, phi: f64, samples: u64, accept: F) -> Result<Proportion>
where
    F: Fn(&Section) -> bool + Sync,
{
    let mut center = vec![0.0; n];
    center[0] = 1.0;
    let sampler = CapSampler::new(&center, phi)?;
    let parts = run_chunks(stream, samples, DEFAULT_CHUNK, |_, rng, count| {
        let mut pts = vec![0.0; n * n];
        let mut hits = 0;
        for _ in 0..count {
            for x in pts.chunks_exact_mut(n) {
                sampler.sample(rng, x);
            }
            let s = section_of(&pts, n);
            if s.volume > 0.0 && s.tilt + s.q.min(1.0).acos() <= phi && accept(&s) {
                hits += 1;
            }
        }
        Proportion { hits, trials: count }
    });
    Ok(pairwise(parts, Proportion::merge).unwrap_or_default())
}

/// Two-sided comparison of a scaled hit rate with `[lower, upper]`; zero hits
/// make both sides inconclusive.
fn sandwich(name: &str, n: u32, param: f64, hits: Proportion, scale: f64, lower: Option<f64>, upper: f64) -> Vec<BoundReport> {
    let est = hits.estimate() * scale;
    let se = hits.stderr() * scale;
    let mut out = Vec::new();
    if let Some(lo) = lower {
        out.push(BoundReport::new(format!("{name}_lower"), n, Side::Lower, lo, est, se).with_param(param));
    }
    out.push(BoundReport::new(format!("{name}_upper"), n, Side::Upper, upper, est, se).with_param(param));
    if hits.hits == 0 {
        let note = format!("no events in {} tuples", hits.trials);
        out = out.into_iter().map(|r| r.inconclusive(note.clone())).collect();
    }
    out
}

/// `(lower, upper)` for the large-facet cap event, with `v1`, `v2` the first
/// two moments of the volume of `n` uniform points on `S^{n−2}`.
pub fn large_facet_event_bounds(n: u32, r: f64, v1: f64, v2: f64) -> Result<(f64, f64)> {
    if n < 3 {
        return Err(invalid("the large-facet cap event needs n >= 3"));
    }
    let m = n as f64;
    let common = sphere_area(n - 1)? * factorial(n - 1) * (m - 1.0).powi(n as i32 - 3) * r.powf(-m);
    let lower = common * v1.powi(3) / (3.0 * 32.0 * PI.powf(m * m - 2.0 * m - 1.0) * v2);
    let upper = common * (PI / 2.0).powf(m * (m - 2.0)) * v1;
    Ok((lower, upper))
}

/// Probability that `n` uniform points of `S^{n−1}` span a section inside a
/// fixed cap of area `|S^{n−1}|/R` with simplex volume at least the large-facet
/// threshold; compared with [`large_facet_event_bounds`].
pub fn estimate_large_facet_event(stream: &RngStream, n: u32, r: f64, v1: f64, v2: f64, budget: EventBudget) -> Result<Vec<BoundReport>> {
    if !(3..=MAX_DIM as u32).contains(&n) {
        return Err(invalid("the large-facet cap event needs 3 <= n <= 10"));
    }
    // relative slack: `powi` may round differently when constant-folded
    if !(r >= PI.powi(n as i32) * n as f64 * (1.0 - 1e-12)) {
        return Err(invalid(format!("the large-facet cap event needs R >= pi^n n, got {r}")));
    }
    let phi = cap_angle_from_fraction(n, r)?.phi;
    let threshold = large_facet_threshold(n, r, v1)?;
    let hits = count_hits(stream, n as usize, phi, budget.samples, |s| s.volume >= threshold)?;
    let (lo, hi) = large_facet_event_bounds(n, r, v1, v2)?;
    Ok(sandwich("large_facet_event", n, r, hits, r.powf(-(n as f64)), Some(lo), hi))
}

/// `(lower, upper)` for the small-facet cap event with cap area
/// `|S^{n−1}|/N`; `lower` is `None` where it is not claimed.
pub fn small_facet_event_bounds(n: u32, big_n: f64, t: f64) -> Result<(Option<f64>, f64)> {
    let m = n as f64;
    match n {
        3 => {
            let lower = (t <= PI).then(|| 4.0 / (PI.powi(3) * 1e5) * t.powf(5.0 / 3.0) / big_n.powi(3));
            Ok((lower, 171.0 * PI.powi(7) * t.powf(5.0 / 3.0) / (16.0 * big_n.powi(3))))
        }
        4..=9 => {
            let scale = t * t / big_n.powf(m);
            let common = factorial(n - 1) * (m - 1.0).powi(n as i32 - 3) * sphere_area(n - 1)?;
            let (a, b) = (cdf_lower_constant(n - 1)?, cdf_upper_constant(n - 1)?);
            let lower = (t <= subball(n)?).then(|| scale * 3.0 * a * a * common / (32.0 * b * PI.powf(m * m - m - 2.0)));
            Ok((lower, scale * b * (PI / 2.0).powf(m * m - m) * common))
        }
        _ => Err(invalid("the small-facet cap event needs 3 <= n <= 9")),
    }
}

/// Probability that `n` uniform points span a section inside a fixed cap of
/// area `|S^{n−1}|/N` with `vol ≤ t (1 − q²)^{(n−1)/2}`; compared with
/// [`small_facet_event_bounds`].
pub fn estimate_small_facet_event(stream: &RngStream, n: u32, big_n: u64, t: f64, budget: EventBudget) -> Result<Vec<BoundReport>> {
    if !(3..=5).contains(&n) {
        return Err(invalid("the small-facet cap event is checked for n in 3..=5"));
    }
    if !(t >= 0.0) || big_n < 2 {
        return Err(invalid("the small-facet cap event needs t >= 0 and N >= 2"));
    }
    let m = big_n as f64;
    let phi = cap_angle_from_fraction(n, m)?.phi;
    let half = (n as f64 - 1.0) / 2.0;
    let hits = count_hits(stream, n as usize, phi, budget.samples, |s| s.volume <= t * (1.0 - s.q * s.q).powf(half))?;
    let (lo, hi) = small_facet_event_bounds(n, m, t)?;
    let mut reports = sandwich("small_facet_event", n, t, hits, m.powf(-(n as f64)), lo, hi);
    reports.iter_mut().for_each(|r| r.big_n = Some(big_n));
    Ok(reports)
}

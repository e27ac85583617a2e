//! Verification suites: each runs one family of checks and returns the
//! individual [`BoundReport`]s. Shared by the CLI and the acceptance tests.

use std::f64::consts::PI;

use crate::bounds::{
    empty_cap_integral_check, estimate_large_facet_event, estimate_small_facet_event, first_satisfying_n, hausdorff_tail_bound,
    max_facet_expectation_bound, max_facet_tail_bound, max_facet_tail_constants, min_facet_existence_bound, min_facet_existence_constant,
    EventBudget,
};
use crate::caps::{build_cap_packing, cap_angle_from_fraction, cap_area, cap_area_bounds, cap_area_by_quadrature};
use crate::error::Result;
use crate::extremal::TrialSummary;
use crate::montecarlo::{pairwise, run_chunks, Proportion, Welford, DEFAULT_CHUNK};
use crate::report::{BoundReport, Side};
use crate::rng::RngStream;
use crate::sampling::unit_vector;
use crate::simplex_law::{estimate_moment, miles_expected_volume, verify_blaschke_petkantschin, verify_cdf_sandwich, verify_second_moment_bound};
use crate::special::sphere_area;

/// Probability levels at which tail bounds are probed.
pub const TAIL_LEVELS: [f64; 8] = [0.9, 0.5, 0.2, 0.1, 0.05, 0.02, 0.01, 0.001];
/// Probability levels at which the small-facet existence bound is probed.
pub const EXISTENCE_LEVELS: [f64; 6] = [0.01, 0.02, 0.05, 0.1, 0.2, 0.5];

/// Largest `x` in `(lo, hi)` with `f(x) ≥ level` for a decreasing `f`.
fn invert_decreasing(f: impl Fn(f64) -> f64, level: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Thresholds `t` at which the max-facet tail bound equals each level.
pub fn max_facet_t_grid(n: u32, big_n: u64) -> Result<Vec<f64>> {
    let (_, decay) = max_facet_tail_constants(n)?;
    TAIL_LEVELS
        .iter()
        .map(|&level| {
            let f = |t: f64| max_facet_tail_bound(n, big_n, t).map(|b| b.value).unwrap_or(0.0);
            Ok(invert_decreasing(f, level, 1e-12, 1.0 / decay))
        })
        .collect()
}

/// Heights `Δ ∈ (0, 1]` at which the Hausdorff tail bound equals each level
/// (levels the bound never reaches on `(0, 1]` are skipped).
pub fn hausdorff_delta_grid(n: u32, big_n: u64) -> Result<Vec<f64>> {
    let at_one = hausdorff_tail_bound(n, big_n, 1.0)?.value;
    Ok(TAIL_LEVELS
        .iter()
        .filter(|&&l| l > at_one)
        .map(|&level| {
            let f = |d: f64| hausdorff_tail_bound(n, big_n, d).map(|b| b.value).unwrap_or(1.0);
            invert_decreasing(f, level, 1e-12, 1.0)
        })
        .collect())
}

/// Thresholds `t` at which the small-facet existence bound equals each level.
pub fn existence_t_grid(n: u32, big_n: u64) -> Result<Vec<f64>> {
    let k = min_facet_existence_constant(n)?;
    let m = big_n as f64;
    Ok(EXISTENCE_LEVELS
        .iter()
        .map(|&level| if n == 3 { (level / (k * m.powf(8.0 / 3.0))).powf(0.6) } else { (level / (k * m.powi(3))).sqrt() })
        .collect())
}

fn proportion(trials: &[TrialSummary], hit: impl Fn(&TrialSummary) -> bool) -> Proportion {
    Proportion { hits: trials.iter().filter(|t| hit(t)).count() as u64, trials: trials.len() as u64 }
}

/// `P(max facet ≥ t)` against the tail bound on [`max_facet_t_grid`].
pub fn max_facet_tail_reports(trials: &[TrialSummary], n: u32, big_n: u64) -> Result<Vec<BoundReport>> {
    max_facet_t_grid(n, big_n)?
        .into_iter()
        .map(|t| {
            let p = proportion(trials, |x| x.max_facet_vol >= t);
            let b = max_facet_tail_bound(n, big_n, t)?.value;
            Ok(BoundReport::new("max_facet_tail", n, Side::Upper, b, p.estimate(), p.stderr()).with_big_n(big_n).with_param(t))
        })
        .collect()
}

/// `P(max cap height ≥ Δ)` against the Hausdorff tail bound. The cap height
/// is a lower bound on the Hausdorff distance, so the bound applies.
pub fn hausdorff_tail_reports(trials: &[TrialSummary], n: u32, big_n: u64) -> Result<Vec<BoundReport>> {
    hausdorff_delta_grid(n, big_n)?
        .into_iter()
        .map(|d| {
            let p = proportion(trials, |x| x.max_cap_height >= d);
            let b = hausdorff_tail_bound(n, big_n, d)?.value;
            Ok(BoundReport::new("hausdorff_tail", n, Side::Upper, b, p.estimate(), p.stderr()).with_big_n(big_n).with_param(d))
        })
        .collect()
}

/// Mean largest facet against the `log N / N` expectation bound.
pub fn max_facet_expectation_report(trials: &[TrialSummary], n: u32, big_n: u64) -> Result<BoundReport> {
    let mut w = Welford::default();
    trials.iter().for_each(|t| w.push(t.max_facet_vol));
    let b = max_facet_expectation_bound(n, big_n as f64)?;
    Ok(BoundReport::new("max_facet_expectation", n, Side::Upper, b, w.mean, w.stderr().unwrap_or(0.0)).with_big_n(big_n))
}

/// `P(∃ facet with vol ≤ t)` against the existence bound on [`existence_t_grid`].
pub fn existence_reports(trials: &[TrialSummary], n: u32, big_n: u64) -> Result<Vec<BoundReport>> {
    existence_t_grid(n, big_n)?
        .into_iter()
        .map(|t| {
            let p = proportion(trials, |x| x.min_facet_vol <= t);
            let b = min_facet_existence_bound(n, big_n, t)?.value;
            Ok(BoundReport::new("min_facet_existence", n, Side::Upper, b, p.estimate(), p.stderr()).with_big_n(big_n).with_param(t))
        })
        .collect()
}

/// Total facets over all trials that exceed the cap-height volume bound.
pub fn cap_bound_report(trials: &[TrialSummary], n: u32, big_n: u64) -> BoundReport {
    let v: u64 = trials.iter().map(|t| t.cap_bound_violations as u64).sum();
    BoundReport::new("facet_cap_volume_violations", n, Side::Upper, 0.0, v as f64, 0.0).with_big_n(big_n)
}

/// Fraction of `samples` uniform points with `⟨x, e₁⟩ ≥ p`, against the
/// exact area fraction.
pub fn cap_hit_report(stream: &RngStream, n: u32, p: f64, samples: u64) -> Result<BoundReport> {
    let d = n as usize;
    let parts = run_chunks(stream, samples, DEFAULT_CHUNK, |_, rng, count| {
        let mut x = vec![0.0; d];
        let mut hits = 0;
        for _ in 0..count {
            unit_vector(rng, &mut x);
            if x[0] >= p {
                hits += 1;
            }
        }
        Proportion { hits, trials: count }
    });
    let hits = pairwise(parts, Proportion::merge).unwrap_or_default();
    let exact = cap_area(n, p)? / sphere_area(n)?;
    let se = (exact * (1.0 - exact) / samples as f64).sqrt();
    Ok(BoundReport::new("cap_hit_fraction", n, Side::Equal, exact, hits.estimate(), se).with_param(p))
}

fn exact(name: &str, n: u32, side: Side, bound: f64, value: f64) -> BoundReport {
    BoundReport::exact(name, n, side, bound, value, 0.0)
}

pub struct CapsConfig {
    pub dims: Vec<u32>,
    pub offsets: Vec<f64>,
    pub samples: u64,
    pub packing_dims: Vec<u32>,
    pub packing_fractions: Vec<f64>,
}

impl Default for CapsConfig {
    fn default() -> Self {
        Self {
            dims: vec![2, 3, 4, 5],
            offsets: vec![-0.5, 0.0, 0.3, 0.8],
            samples: 1_000_000,
            packing_dims: vec![2, 3, 4],
            packing_fractions: vec![10.0, 100.0, 1000.0],
        }
    }
}

pub fn caps_suite(stream: &RngStream, cfg: &CapsConfig) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for (i, &n) in cfg.dims.iter().enumerate() {
        for (j, &p) in cfg.offsets.iter().enumerate() {
            let s = stream.derive(((i as u64) << 16) | j as u64);
            out.push(cap_hit_report(&s, n, p, cfg.samples)?);
            // closed form / special function against independent quadrature
            let q = cap_area_by_quadrature(n, p)?;
            out.push(BoundReport::exact("cap_area_quadrature", n, Side::Equal, q, cap_area(n, p)?, 1e-10 * q).with_param(p));
            if n == 3 {
                out.push(
                    BoundReport::exact("cap_area_closed_form", n, Side::Equal, 2.0 * PI * (1.0 - p), cap_area(n, p)?, 1e-12)
                        .with_param(p),
                );
            }
        }
    }
    for n in 4..=6 {
        for k in 1..=9 {
            let p = k as f64 / 10.0;
            let (lo, hi) = cap_area_bounds(n, p)?;
            let a = cap_area_by_quadrature(n, p)?;
            out.push(exact("cap_area_lower", n, Side::Lower, lo, a).with_param(p));
            out.push(exact("cap_area_upper", n, Side::Upper, hi, a).with_param(p));
        }
    }
    for n in 2..=6 {
        for r in [2.0, 10.0, 100.0, 1e4] {
            let a = cap_angle_from_fraction(n, r)?;
            out.push(BoundReport::exact("cap_angle_lower", n, Side::Lower, a.lower, a.phi, 1e-12).with_param(r));
            out.push(BoundReport::exact("cap_angle_upper", n, Side::Upper, a.upper, a.phi, 1e-12).with_param(r));
        }
    }
    for &n in &cfg.packing_dims {
        for &r in &cfg.packing_fractions {
            let s = stream.derive(0xCAB0_0000 | ((n as u64) << 20) | r as u64);
            let pk = build_cap_packing(&s, n, r)?;
            let k = pk.len() as f64;
            out.push(exact("cap_packing_count_lower", n, Side::Lower, 3f64.powi(-(n as i32)) * r, k).with_param(r));
            out.push(exact("cap_packing_count_upper", n, Side::Upper, r, k).with_param(r));
            let twice = 2.0 * pk.caps[0].angle();
            let min_sep = min_center_angle(&pk.caps.iter().map(|c| c.center.as_slice()).collect::<Vec<_>>());
            out.push(BoundReport::exact("cap_packing_separation", n, Side::Lower, twice, min_sep, 1e-12).with_param(r));
        }
    }
    Ok(out)
}

fn min_center_angle(centers: &[&[f64]]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in centers.iter().enumerate() {
        for b in &centers[i + 1..] {
            let c: f64 = a.iter().zip(*b).map(|(x, y)| x * y).sum();
            best = best.min(c.clamp(-1.0, 1.0).acos());
        }
    }
    best
}

pub struct SimplexConfig {
    pub samples: u64,
}

impl Default for SimplexConfig {
    fn default() -> Self {
        Self { samples: 1_000_000 }
    }
}

/// Miles' mean versus Monte-Carlo for `n = 2, 3`, with 5σ slack.
pub fn miles_reports(stream: &RngStream, samples: u64) -> Result<Vec<BoundReport>> {
    [2u32, 3]
        .iter()
        .map(|&n| {
            let est = estimate_moment(&stream.derive(n as u64), n, 1, samples)?;
            let exact = miles_expected_volume(n)?;
            Ok(BoundReport::new("miles_mean", n, Side::Equal, exact, est.value, est.stderr).with_sigmas(5.0))
        })
        .collect()
}

pub const CDF_GRID_2: [f64; 4] = [0.001, 0.01, 0.1, 1.0];
pub const CDF_GRID_3: [f64; 4] = [0.001, 0.01, 0.1, 1.0];

pub fn cdf_reports(stream: &RngStream, samples: u64) -> Result<Vec<BoundReport>> {
    let mut out = verify_cdf_sandwich(&stream.derive(102), 2, &CDF_GRID_2, samples)?;
    out.extend(verify_cdf_sandwich(&stream.derive(103), 3, &CDF_GRID_3, samples)?);
    Ok(out)
}

pub fn simplex_suite(stream: &RngStream, cfg: &SimplexConfig) -> Result<Vec<BoundReport>> {
    let mut out = miles_reports(stream, cfg.samples)?;
    out.extend(cdf_reports(stream, cfg.samples)?);
    for n in [2u32, 3] {
        out.push(verify_second_moment_bound(&stream.derive(200 + n as u64), n, cfg.samples)?);
        let v1 = estimate_moment(&stream.derive(300 + n as u64), n, 1, cfg.samples)?;
        let v2 = estimate_moment(&stream.derive(400 + n as u64), n, 2, cfg.samples)?;
        let se = (v2.stderr.powi(2) + (2.0 * v1.value * v1.stderr).powi(2)).sqrt();
        out.push(BoundReport::new("moment_jensen", n, Side::Lower, v1.value * v1.value, v2.value, se));
    }
    Ok(out)
}

pub fn bp_suite(stream: &RngStream, n: u32, samples: u64) -> Result<Vec<BoundReport>> {
    Ok(vec![verify_blaschke_petkantschin(stream, n, samples)?])
}

pub fn integral_suite(dims: &[u32], sizes: &[u64]) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for &n in dims {
        for &m in sizes {
            out.push(empty_cap_integral_check(n, m)?);
        }
        if let Some(first) = first_satisfying_n(n, 1_000_000)? {
            out.push(
                exact("empty_cap_integral_threshold", n, Side::Upper, 1e4, first as f64)
                    .with_note(format!("inequality first holds at N = {first}")),
            );
        }
    }
    Ok(out)
}

pub struct EventsConfig {
    pub samples: u64,
    pub small_dims: Vec<u32>,
    pub small_n: u64,
    pub small_t: Vec<f64>,
}

impl Default for EventsConfig {
    fn default() -> Self {
        Self { samples: 1_000_000, small_dims: vec![3, 4, 5], small_n: 1000, small_t: vec![0.01, 0.1, 0.5] }
    }
}

pub fn events_suite(stream: &RngStream, cfg: &EventsConfig) -> Result<Vec<BoundReport>> {
    let budget = EventBudget { samples: cfg.samples };
    let mut out = Vec::new();
    for n in [3u32, 4] {
        // moments of n points on the subsphere S^{n−2}
        let v1 = miles_expected_volume(n - 1)?;
        let v2 = estimate_moment(&stream.derive(500 + n as u64), n - 1, 2, cfg.samples)?.value;
        let r = PI.powi(n as i32) * n as f64;
        out.extend(estimate_large_facet_event(&stream.derive(600 + n as u64), n, r, v1, v2, budget)?);
    }
    for &n in &cfg.small_dims {
        for (i, &t) in cfg.small_t.iter().enumerate() {
            let s = stream.derive(700 + ((n as u64) << 8) + i as u64);
            out.extend(estimate_small_facet_event(&s, n, cfg.small_n, t, budget)?);
        }
    }
    Ok(out)
}

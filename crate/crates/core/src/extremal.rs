//! Per-trial extremal facet statistics of the random inscribed polytope and
//! their aggregation over independent trials.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::facet_volume_cap_constant;
use crate::error::{invalid, Error, Result};
use crate::geometry::PointCloud;
use crate::hull::{convex_hull, HULL_MAX_DIM};
use crate::montecarlo::{pairwise, Welford};
use crate::rng::RngStream;
use crate::sampling::sample_sphere;

/// Degenerate clouds are redrawn at most this many times per trial.
pub const MAX_RESAMPLES: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialSummary {
    pub n: u32,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub trial_index: u64,
    pub facet_count: u64,
    pub min_facet_vol: f64,
    pub max_facet_vol: f64,
    pub max_cap_height: f64,
    pub min_offset: f64,
    pub contains_origin: bool,
    /// Geodesic gaps between angularly consecutive points (`n = 2` only).
    pub min_arc_gap: Option<f64>,
    pub max_arc_gap: Option<f64>,
    /// Degenerate draws that were discarded before this one.
    pub resamples: u32,
    /// Facets whose volume exceeds the cap-height volume bound.
    pub cap_bound_violations: u32,
}

/// Angular order of points on the circle: `(i, j, gap)` for each consecutive
/// pair, with `gap` the counter-clockwise arc from `i` to `j`.
pub fn angular_gaps(cloud: &PointCloud) -> Result<Vec<(u32, u32, f64)>> {
    if cloud.dim() != 2 {
        return Err(invalid("angular gaps need a planar cloud"));
    }
    let mut ang: Vec<(f64, u32)> = cloud.iter().enumerate().map(|(i, p)| (p[1].atan2(p[0]), i as u32)).collect();
    ang.sort_by(|a, b| a.0.total_cmp(&b.0));
    let m = ang.len();
    Ok((0..m)
        .map(|k| {
            let (a, i) = ang[k];
            let (b, j) = ang[(k + 1) % m];
            let gap = if k + 1 == m { b + TAU - a } else { b - a };
            (i, j, gap)
        })
        .collect())
}

fn summarize(cloud: &PointCloud, n: u32, big_n: u64, trial_index: u64, resamples: u32) -> Result<Option<TrialSummary>> {
    let hull = convex_hull(cloud)?;
    if hull.degenerate {
        return Ok(None);
    }
    let stats = hull.statistics()?;
    let cap = facet_volume_cap_constant(n);
    let half = (n as f64 - 1.0) / 2.0;
    let cap_bound_violations = hull
        .facets
        .iter()
        .filter(|f| f.volume > cap * f.cap_height.max(0.0).powf(half) * (1.0 + 1e-12))
        .count() as u32;
    let (min_arc_gap, max_arc_gap) = if n == 2 {
        let gaps = angular_gaps(cloud)?;
        let lo = gaps.iter().map(|g| g.2).fold(f64::INFINITY, f64::min);
        let hi = gaps.iter().map(|g| g.2).fold(f64::NEG_INFINITY, f64::max);
        (Some(lo), Some(hi))
    } else {
        (None, None)
    };
    Ok(Some(TrialSummary {
        n,
        big_n,
        trial_index,
        facet_count: hull.facets.len() as u64,
        min_facet_vol: stats.min_volume,
        max_facet_vol: stats.max_volume,
        max_cap_height: stats.max_cap_height,
        min_offset: stats.min_offset,
        contains_origin: hull.contains_origin,
        min_arc_gap,
        max_arc_gap,
        resamples,
        cap_bound_violations,
    }))
}

/// One trial on `N` uniform points of `S^{n−1}` drawn from `stream`. A
/// degenerate cloud is redrawn from the substream
/// `stream_index | attempt << 48`.
pub fn run_trial(stream: &RngStream, n: u32, big_n: u64) -> Result<TrialSummary> {
    if !(2..=HULL_MAX_DIM as u32).contains(&n) {
        return Err(invalid(format!("trials support 2 <= n <= {HULL_MAX_DIM}, got {n}")));
    }
    if big_n < n as u64 + 1 {
        return Err(invalid(format!("a trial in dimension {n} needs N >= {}, got {big_n}", n + 1)));
    }
    for attempt in 0..=MAX_RESAMPLES {
        let s = if attempt == 0 {
            *stream
        } else {
            stream.with_index(stream.stream_index | (attempt as u64) << 48)
        };
        let cloud = sample_sphere(&s, n as usize, big_n as usize)?;
        if let Some(t) = summarize(&cloud, n, big_n, stream.stream_index, attempt)? {
            return Ok(t);
        }
    }
    Err(Error::TrialFailure { trial: stream.stream_index, resamples: MAX_RESAMPLES })
}

/// Trials `0..trials` in parallel; trial `i` uses `stream.with_index(i)`.
/// The output is ordered by trial index regardless of scheduling.
pub fn run_trials(stream: &RngStream, n: u32, big_n: u64, trials: u64) -> Result<Vec<TrialSummary>> {
    (0..trials)
        .into_par_iter()
        .map(|i| run_trial(&stream.with_index(i), n, big_n))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatSummary {
    pub stat: &'static str,
    pub mean: f64,
    /// `None` for a single trial, where it is undefined.
    pub stderr: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateStat {
    pub n: u32,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub trials: u64,
    pub stats: Vec<StatSummary>,
    pub contains_origin_fraction: f64,
    pub resamples: u64,
    pub cap_bound_violations: u64,
}

impl AggregateStat {
    pub fn get(&self, stat: &str) -> Option<&StatSummary> {
        self.stats.iter().find(|s| s.stat == stat)
    }
}

/// Statistic names in output order; the gap statistics only exist for `n = 2`.
pub fn stat_names(n: u32) -> &'static [&'static str] {
    if n == 2 {
        &["min_facet", "max_facet", "max_cap_height", "min_arc_gap", "max_arc_gap"]
    } else {
        &["min_facet", "max_facet", "max_cap_height"]
    }
}

fn stat_value(t: &TrialSummary, stat: &str) -> f64 {
    match stat {
        "min_facet" => t.min_facet_vol,
        "max_facet" => t.max_facet_vol,
        "max_cap_height" => t.max_cap_height,
        "min_arc_gap" => t.min_arc_gap.unwrap_or(f64::NAN),
        "max_arc_gap" => t.max_arc_gap.unwrap_or(f64::NAN),
        _ => unreachable!("unknown statistic {stat}"),
    }
}

/// Trial block size of the fixed reduction tree.
const BLOCK: usize = 256;

/// Mean and standard error of every statistic, reduced over fixed blocks of
/// trials in a fixed pairwise tree.
pub fn aggregate_trials(trials: &[TrialSummary]) -> Result<AggregateStat> {
    let first = trials.first().ok_or_else(|| invalid("aggregate needs at least one trial"))?;
    let names = stat_names(first.n);
    let stats = names
        .iter()
        .map(|&stat| {
            let blocks: Vec<Welford> = trials
                .chunks(BLOCK)
                .map(|c| {
                    let mut w = Welford::default();
                    c.iter().for_each(|t| w.push(stat_value(t, stat)));
                    w
                })
                .collect();
            let w = pairwise(blocks, Welford::merge).unwrap_or_default();
            StatSummary { stat, mean: w.mean, stderr: w.stderr() }
        })
        .collect();
    Ok(AggregateStat {
        n: first.n,
        big_n: first.big_n,
        trials: trials.len() as u64,
        stats,
        contains_origin_fraction: trials.iter().filter(|t| t.contains_origin).count() as f64 / trials.len() as f64,
        resamples: trials.iter().map(|t| t.resamples as u64).sum(),
        cap_bound_violations: trials.iter().map(|t| t.cap_bound_violations as u64).sum(),
    })
}

pub fn aggregate(stream: &RngStream, n: u32, big_n: u64, trials: u64) -> Result<AggregateStat> {
    if trials < 1 {
        return Err(invalid("aggregate needs trials >= 1"));
    }
    aggregate_trials(&run_trials(stream, n, big_n, trials)?)
}

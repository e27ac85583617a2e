//! The empty-cap integral
//! `∫_0^1 (1−p²)^{(n²−4n+1)/2} (1 − |cap(p)|/|S^{n−1}|)^{N−n} dp`
//! and its closed-form upper bound.

use crate::caps::{cap_area, offset_for_fraction};
use crate::error::{invalid, Result};
use crate::quad;
use crate::report::{BoundReport, Side};
use crate::special::{lgam, sphere_area};

fn check(n: u32, big_n: u64) -> Result<()> {
    if !(4..=10).contains(&n) || big_n <= n as u64 {
        return Err(invalid(format!("the empty-cap integral needs 4 <= n <= 10 and N > n, got n={n}, N={big_n}")));
    }
    Ok(())
}

pub fn empty_cap_integral(n: u32, big_n: u64) -> Result<f64> {
    check(n, big_n)?;
    let m = n as f64;
    let s = sphere_area(n)?;
    let power = (m * m - 4.0 * m + 1.0) / 2.0;
    let k = (big_n - n as u64) as f64;
    let f = |p: f64| {
        let frac = cap_area(n, p.clamp(-1.0, 1.0)).unwrap_or(0.0) / s;
        (1.0 - p * p).max(0.0).powf(power) * (k * (-frac).ln_1p()).exp()
    };
    // The mass sits where the cap holds O(1) of the N points; break the
    // interval there so no region is skipped by the first Kronrod pass.
    let mut cuts = vec![0.0];
    for c in [1e3, 1e2, 1e1, 1.0, 1e-1, 1e-2] {
        let r = big_n as f64 / c;
        if r > 2.0 {
            let p = offset_for_fraction(n, r)?;
            if p > *cuts.last().unwrap() && p < 1.0 {
                cuts.push(p);
            }
        }
    }
    cuts.push(1.0);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += quad::integrate(f, w[0], w[1], 1e-10, 0.0)?;
    }
    Ok(total)
}

/// `2√2 (n−1)^{n−4} (|S^{n−1}|/|S^{n−2}|)^{n−3} (n−4)! / (N−n)^{n−3}`.
pub fn empty_cap_integral_bound(n: u32, big_n: u64) -> Result<f64> {
    check(n, big_n)?;
    let m = n as f64;
    let ratio = sphere_area(n)? / sphere_area(n - 1)?;
    let ln = 1.5 * 2f64.ln() + (m - 4.0) * (m - 1.0).ln() + (m - 3.0) * ratio.ln() + lgam(m - 3.0)
        - (m - 3.0) * ((big_n - n as u64) as f64).ln();
    Ok(ln.exp())
}

pub fn empty_cap_integral_check(n: u32, big_n: u64) -> Result<BoundReport> {
    let lhs = empty_cap_integral(n, big_n)?;
    let rhs = empty_cap_integral_bound(n, big_n)?;
    Ok(BoundReport::new("empty_cap_integral", n, Side::Upper, rhs, lhs, 0.0).with_big_n(big_n))
}

/// Smallest `N ≤ limit` with integral ≤ bound, found by doubling from `n + 1`
/// and then bisecting the last failing/passing bracket.
pub fn first_satisfying_n(n: u32, limit: u64) -> Result<Option<u64>> {
    let holds = |m: u64| -> Result<bool> { Ok(empty_cap_integral(n, m)? <= empty_cap_integral_bound(n, m)?) };
    let mut lo = n as u64 + 1;
    if holds(lo)? {
        return Ok(Some(lo));
    }
    let mut hi = lo;
    loop {
        if hi >= limit {
            return Ok(None);
        }
        hi = (hi * 2).min(limit);
        if holds(hi)? {
            break;
        }
        lo = hi;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

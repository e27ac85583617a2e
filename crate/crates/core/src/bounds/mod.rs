//! Closed-form bounds on extremal facets of the random inscribed polytope,
//! Monte-Carlo estimators for the cap events behind them, the empty-cap
//! integral inequality, and scaling-law regression.

mod events;
mod fit;
mod integral;

pub use events::{estimate_large_facet_event, estimate_small_facet_event, large_facet_event_bounds, small_facet_event_bounds, EventBudget};
pub use fit::{fit_scaling, FitModel, ScalingFit, ScalingPoint};
pub use integral::{empty_cap_integral, empty_cap_integral_bound, empty_cap_integral_check, first_satisfying_n};

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::simplex_law::cdf_upper_constant;
use crate::special::{ball_volume, lgam, ln_factorial, sphere_area, sphere_over_subball};

/// A bound evaluated both as written and clamped to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Clamped {
    pub raw: f64,
    pub value: f64,
}

impl Clamped {
    fn new(raw: f64) -> Self {
        Self { raw, value: raw.clamp(0.0, 1.0) }
    }
}

fn check_n(n: u32) -> Result<()> {
    if !(2..=10).contains(&n) {
        return Err(invalid(format!("dimension must be in 2..=10, got {n}")));
    }
    Ok(())
}

/// `(2n/(n−1))^{(n−1)/2} √n/(n−1)!`: the largest facet volume per unit of
/// `Δ^{(n−1)/2}` for a facet cutting a cap of height `Δ`.
pub fn facet_volume_cap_constant(n: u32) -> f64 {
    let m = n as f64;
    ((m - 1.0) / 2.0 * (2.0 * m / (m - 1.0)).ln() + 0.5 * m.ln() - ln_factorial(n - 1)).exp()
}

/// Upper bound on the volume of a facet whose cap has height `delta`.
pub fn facet_volume_cap_bound(n: u32, delta: f64) -> f64 {
    facet_volume_cap_constant(n) * delta.max(0.0).powf((n as f64 - 1.0) / 2.0)
}

/// `P(d_H(P_N, B) ≥ Δ) ≤ (1 − (Δ/3)^{(n−1)/2}/ρ)^N (3/Δ)^{(n−1)/2} ρ`,
/// `ρ = |S^{n−1}|/|B^{n−1}|`.
pub fn hausdorff_tail_bound(n: u32, big_n: u64, delta: f64) -> Result<Clamped> {
    check_n(n)?;
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(invalid(format!("hausdorff_tail_bound needs 0 < delta <= 1, got {delta}")));
    }
    let rho = sphere_over_subball(n)?;
    let x = (delta / 3.0).powf((n as f64 - 1.0) / 2.0);
    let raw = (1.0 - x / rho).powf(big_n as f64) * rho / x;
    Ok(Clamped::new(raw))
}

/// Prefactor `A` and decay rate `B` of the max-facet tail bound
/// `min{1, (A/t)(1 − B t)^N}`.
pub fn max_facet_tail_constants(n: u32) -> Result<(f64, f64)> {
    check_n(n)?;
    let m = n as f64;
    let rho = sphere_over_subball(n)?;
    let half = (m - 1.0) / 2.0;
    let a = (0.5 * m.ln() - ln_factorial(n - 1) + half * (6.0 * m / (m - 1.0)).ln()).exp() * rho;
    let b = (ln_factorial(n - 1) - 0.5 * m.ln() + half * ((m - 1.0) / (6.0 * m)).ln()).exp() / rho;
    Ok((a, b))
}

/// Tail bound on the largest facet volume; 0 once `1 − B t ≤ 0`.
pub fn max_facet_tail_bound(n: u32, big_n: u64, t: f64) -> Result<Clamped> {
    if !(t > 0.0) {
        return Err(invalid(format!("max_facet_tail_bound needs t > 0, got {t}")));
    }
    let (a, b) = max_facet_tail_constants(n)?;
    let base = 1.0 - b * t;
    if base <= 0.0 {
        return Ok(Clamped::new(0.0));
    }
    Ok(Clamped::new(a / t * base.powf(big_n as f64)))
}

/// `6^{n/2} √(e n)/(n−1)! · |S^{n−1}|/|B^{n−1}| · log N / N`.
pub fn max_facet_expectation_bound(n: u32, big_n: f64) -> Result<f64> {
    check_n(n)?;
    if !(big_n >= 1.0) {
        return Err(invalid(format!("max_facet_expectation_bound needs N >= 1, got {big_n}")));
    }
    let m = n as f64;
    let c = (m / 2.0 * 6f64.ln() + 0.5 * (std::f64::consts::E * m).ln() - ln_factorial(n - 1)).exp()
        * sphere_over_subball(n)?;
    Ok(c * big_n.ln() / big_n)
}

/// Constant `c` in `E max facet ≥ c log N / N`. For `n ≥ 3`, `v1` and `v2`
/// are the first two moments of the volume of `n` uniform points on
/// `S^{n−2}`; for `n = 2` they are ignored.
pub fn max_facet_lower_constant(n: u32, v1: f64, v2: f64) -> Result<f64> {
    check_n(n)?;
    if n == 2 {
        return Ok(1.0 / (2.0 * PI));
    }
    if !(v2 > 0.0) || !(v1 > 0.0) {
        return Err(invalid(format!("moments must be positive, got v1={v1}, v2={v2}")));
    }
    let m = n as f64;
    let ln = sphere_over_subball(n)?.ln() + 3.0 * v1.ln() - v2.ln() + (m * m - m - 7.0) * 2f64.ln()
        - (m + 3.0) * 3f64.ln()
        - (2.0 * m * m - 3.0 * m - 1.0) * PI.ln();
    Ok(ln.exp())
}

/// `[3√3 N^{−2}, 2π N^{−2}]` for `n = 2`; `None` in higher dimensions where
/// only the exponent is known.
pub fn min_facet_interval(n: u32, big_n: f64) -> Result<Option<(f64, f64)>> {
    check_n(n)?;
    if n > 2 {
        return Ok(None);
    }
    let s = big_n * big_n;
    Ok(Some((3.0 * 3f64.sqrt() / s, 2.0 * PI / s)))
}

/// Constant `K` in `P(∃ facet with vol ≤ t) ≤ K tᵅ Nᵝ`, with `(α, β)` equal
/// to `(5/3, 8/3)` for `n = 3` and `(2, 3)` for `n ≥ 4`.
pub fn min_facet_existence_constant(n: u32) -> Result<f64> {
    check_n(n)?;
    match n {
        2 => Err(Error::Unsupported("no small-facet existence bound for n = 2".into())),
        3 => Ok(57.0 * PI),
        _ => {
            let m = n as f64;
            let s1 = sphere_area(n - 1)?;
            let s = sphere_area(n)?;
            Ok(4.0 * 2f64.sqrt() * cdf_upper_constant(n - 1)? * s1.powi(3) / (m * s * s)
                * (m - 1.0).powi(n as i32 - 4)
                * lgam(m - 3.0).exp())
        }
    }
}

/// Upper bound on `P(∃ facet with vol ≤ t)`.
pub fn min_facet_existence_bound(n: u32, big_n: u64, t: f64) -> Result<Clamped> {
    let k = min_facet_existence_constant(n)?;
    if !(t >= 0.0) {
        return Err(invalid(format!("min_facet_existence_bound needs t >= 0, got {t}")));
    }
    let m = big_n as f64;
    let raw = if n == 3 {
        k * m.powf(8.0 / 3.0) * t.powf(5.0 / 3.0)
    } else {
        k * m.powi(3) * t * t
    };
    Ok(Clamped::new(raw))
}

/// Volume threshold `|S^{n−1}|/|B^{n−1}| · V₁/(2R)` defining a "large" facet
/// inside a cap of area `|S^{n−1}|/R`.
pub fn large_facet_threshold(n: u32, r: f64, v1: f64) -> Result<f64> {
    check_n(n)?;
    Ok(sphere_over_subball(n)? * v1 / (2.0 * r))
}

/// The dimension-dependent constants in one place.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundConstants {
    pub n: u32,
    pub v1: f64,
    pub v2: f64,
    pub max_facet_lower: f64,
    pub tail_prefactor: f64,
    pub tail_decay: f64,
    pub existence: Option<f64>,
    pub facet_cap: f64,
}

impl BoundConstants {
    pub fn new(n: u32, v1: f64, v2: f64) -> Result<Self> {
        let (tail_prefactor, tail_decay) = max_facet_tail_constants(n)?;
        let c = Self {
            n,
            v1,
            v2,
            max_facet_lower: max_facet_lower_constant(n, v1, v2)?,
            tail_prefactor,
            tail_decay,
            existence: if n >= 3 { Some(min_facet_existence_constant(n)?) } else { None },
            facet_cap: facet_volume_cap_constant(n),
        };
        Ok(c)
    }

    pub fn large_facet_threshold(&self, r: f64) -> f64 {
        large_facet_threshold(self.n, r, self.v1).expect("dimension validated")
    }
}

/// `|B^{n−1}|`, the range limit of several lower bounds.
pub(crate) fn subball(n: u32) -> Result<f64> {
    ball_volume(n - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn facet_cap_bound_covers_regular_simplices() {
        // the equilateral triangle inscribed in S^1 has Δ = 1/2 and side √3
        let b = facet_volume_cap_bound(2, 0.5);
        assert!(b >= 3f64.sqrt());
        assert_relative_eq!(facet_volume_cap_constant(2), 2.0 * 2f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn hausdorff_values() {
        let b = hausdorff_tail_bound(2, 50, 1.0).unwrap();
        assert_relative_eq!(b.raw, 2.11919335653951e-4, max_relative = 1e-12);
        assert_eq!(hausdorff_tail_bound(3, 10, 1e-9).unwrap().value, 1.0);
        assert!(hausdorff_tail_bound(3, 1_000_000, 0.5).unwrap().value < 1e-100);
        assert!(hausdorff_tail_bound(3, 10, 0.0).is_err());
        assert!(hausdorff_tail_bound(3, 10, 1.5).is_err());
    }

    #[test]
    fn tail_values() {
        let b = max_facet_tail_bound(2, 100, 1.0).unwrap();
        assert_relative_eq!(b.value, 0.0186033073688997, max_relative = 1e-12);
        assert_eq!(max_facet_tail_bound(3, 100, 1e-12).unwrap().value, 1.0);
        let (_, decay) = max_facet_tail_constants(3).unwrap();
        assert_eq!(max_facet_tail_bound(3, 100, 1.0 / decay).unwrap().value, 0.0);
    }

    #[test]
    fn expectation_values() {
        let e = std::f64::consts::E;
        assert_relative_eq!(max_facet_expectation_bound(2, e).unwrap(), 16.1684683170432, max_relative = 1e-12);
        assert_relative_eq!(max_facet_expectation_bound(2, 1000.0).unwrap(), 0.303598978008833, max_relative = 1e-12);
        assert_relative_eq!(max_facet_expectation_bound(3, 1000.0).unwrap(), 0.579831336813041, max_relative = 1e-12);
        let mut prev = f64::INFINITY;
        for m in 3..200 {
            let v = max_facet_expectation_bound(3, m as f64).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn lower_constants_and_intervals() {
        assert_relative_eq!(max_facet_lower_constant(2, 0.0, 0.0).unwrap(), 1.0 / (2.0 * PI));
        assert!(max_facet_lower_constant(3, 0.4, 0.25).unwrap() > 0.0);
        assert!(max_facet_lower_constant(3, 0.4, 0.0).is_err());
        let (lo, hi) = min_facet_interval(2, 100.0).unwrap().unwrap();
        assert_relative_eq!(lo, 5.19615242270663e-4, max_relative = 1e-13);
        assert_relative_eq!(hi, 6.28318530717959e-4, max_relative = 1e-13);
        assert!(min_facet_interval(3, 100.0).unwrap().is_none());
    }

    #[test]
    fn existence_values() {
        let b = min_facet_existence_bound(3, 100, 1e-5).unwrap();
        assert_relative_eq!(b.raw, 0.179070781254618, max_relative = 1e-12);
        assert_relative_eq!(min_facet_existence_constant(4).unwrap(), 48.0 * 2f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(min_facet_existence_constant(5).unwrap(), 2655.14085430524, max_relative = 1e-12);
        assert_eq!(min_facet_existence_bound(4, 100, 0.0).unwrap().value, 0.0);
        assert!(matches!(min_facet_existence_bound(2, 100, 0.1), Err(Error::Unsupported(_))));
    }

    #[test]
    fn evaluators_are_monotone() {
        let ts: Vec<f64> = (1..40).map(|i| 1e-7 * 1.5f64.powi(i)).collect();
        for n in 3..=5 {
            for w in ts.windows(2) {
                let a = min_facet_existence_bound(n, 200, w[0]).unwrap().raw;
                let b = min_facet_existence_bound(n, 200, w[1]).unwrap().raw;
                assert!(a <= b);
                assert!(min_facet_existence_bound(n, 100, w[0]).unwrap().raw <= a);
            }
        }
        for n in 2..=5 {
            for d in [0.1, 0.3, 0.9] {
                let a = hausdorff_tail_bound(n, 100, d).unwrap().raw;
                assert!(hausdorff_tail_bound(n, 200, d).unwrap().raw <= a);
                assert!(hausdorff_tail_bound(n, 100, d * 1.1).unwrap().raw <= a);
            }
        }
    }

    #[test]
    fn constants_bundle_is_positive() {
        for n in 2..=6 {
            let c = BoundConstants::new(n, 0.3, 0.2).unwrap();
            assert!(c.max_facet_lower > 0.0 && c.tail_prefactor > 0.0 && c.tail_decay > 0.0 && c.facet_cap > 0.0);
            assert!(c.existence.map_or(true, |e| e > 0.0));
            assert!(c.large_facet_threshold(100.0) > 0.0);
        }
    }
}

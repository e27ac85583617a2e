//! Gamma/Beta identities and the standard ball and sphere constants.
//!
//! Everything with factorials is evaluated in log-space so dimensions up to
//! ten (and the `n^2`-sized Gamma arguments of the simplex moments) stay well
//! inside `f64` range.

use crate::error::{invalid, Result};

pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(invalid(format!("ln_gamma requires x > 0, got {x}")));
    }
    Ok(statrs::function::gamma::ln_gamma(x))
}

/// `ln Γ` for arguments already known to be positive.
pub(crate) fn lgam(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    statrs::function::gamma::ln_gamma(x)
}

pub fn ln_beta(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) {
        return Err(invalid(format!("beta requires x, y > 0, got ({x}, {y})")));
    }
    Ok(lgam(x) + lgam(y) - lgam(x + y))
}

/// `B(x, y) = Γ(x)Γ(y)/Γ(x+y)`.
pub fn beta(x: f64, y: f64) -> Result<f64> {
    ln_beta(x, y).map(f64::exp)
}

/// Regularized incomplete Beta function `I_x(a, b)`.
pub fn beta_reg(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !(0.0..=1.0).contains(&x) {
        return Err(invalid(format!("beta_reg({a}, {b}, {x}) out of domain")));
    }
    if x > 0.0 && x < SMALL_X {
        // statrs flushes tiny x to 0; two series terms are exact to ~x²
        let lead = (a * x.ln() - a.ln() - ln_beta(a, b)?).exp();
        return Ok(lead * (1.0 + a * (1.0 - b) * x / (a + 1.0)));
    }
    Ok(statrs::function::beta::beta_reg(a, b, x))
}

const SMALL_X: f64 = 1e-10;

pub fn ln_factorial(k: u32) -> f64 {
    lgam(k as f64 + 1.0)
}

/// `k!`, exact in floating point up to `22!`.
pub fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

fn check_dim(n: u32) -> Result<()> {
    if n == 0 {
        return Err(invalid("dimension must be >= 1"));
    }
    Ok(())
}

/// `ln vol_n(B^n) = (n/2) ln π − ln Γ(n/2 + 1)`.
pub fn ln_ball_volume(n: u32) -> Result<f64> {
    check_dim(n)?;
    let h = n as f64 / 2.0;
    Ok(h * std::f64::consts::PI.ln() - lgam(h + 1.0))
}

/// Volume of the unit ball in `R^n`.
///
/// Uses the recursion `V_n = (2π/n) V_{n−2}` from `V_1 = 2`, `V_2 = π`,
/// which is exact to a few ulps for every supported dimension.
pub fn ball_volume(n: u32) -> Result<f64> {
    check_dim(n)?;
    let mut v = if n % 2 == 1 { 2.0 } else { std::f64::consts::PI };
    let mut k = if n % 2 == 1 { 1 } else { 2 };
    while k < n {
        k += 2;
        v *= std::f64::consts::TAU / k as f64;
    }
    Ok(v)
}

/// `(n−1)`-dimensional surface area of `S^{n−1} ⊂ R^n`, i.e. `n · vol(B^n)`.
pub fn sphere_area(n: u32) -> Result<f64> {
    Ok(n as f64 * ball_volume(n)?)
}

/// `|S^{n-1}| / |B^{n-1}|`, the ratio that appears in every cap estimate.
pub fn sphere_over_subball(n: u32) -> Result<f64> {
    if n < 2 {
        return Err(invalid("sphere_over_subball requires n >= 2"));
    }
    Ok(sphere_area(n)? / ball_volume(n - 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn standard_constants() {
        assert_relative_eq!(ball_volume(2).unwrap(), PI, epsilon = 1e-14);
        assert_relative_eq!(sphere_area(2).unwrap(), 2.0 * PI, epsilon = 1e-14);
        assert_relative_eq!(ball_volume(3).unwrap(), 4.0 * PI / 3.0, epsilon = 1e-14);
        assert_relative_eq!(sphere_area(3).unwrap(), 4.0 * PI, epsilon = 1e-13);
        assert_relative_eq!(ball_volume(1).unwrap(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn beta_half_one() {
        // Γ(1/2)Γ(1)/Γ(3/2) = √π / (√π/2)
        assert_relative_eq!(beta(0.5, 1.0).unwrap(), 2.0, epsilon = 1e-13);
    }

    #[test]
    fn area_over_volume_is_dimension() {
        for n in 1..=10 {
            let r = sphere_area(n).unwrap() / ball_volume(n).unwrap();
            assert!((r - n as f64).abs() <= 1e-12, "n={n}: {r}");
        }
    }

    #[test]
    fn gamma_recurrence() {
        for x in [0.5, 1.0, 2.5, 10.0] {
            let d = ln_gamma(x + 1.0).unwrap() - ln_gamma(x).unwrap() - f64::ln(x);
            assert!(d.abs() <= 1e-12, "x={x}: {d:e}");
        }
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(ln_gamma(0.0).is_err());
        assert!(ln_gamma(-1.5).is_err());
        assert!(beta(0.0, 1.0).is_err());
        assert!(beta(1.0, -2.0).is_err());
        assert!(ball_volume(0).is_err());
    }

    #[test]
    fn beta_reg_matches_symmetric_case() {
        assert_relative_eq!(beta_reg(2.0, 2.0, 0.5).unwrap(), 0.5, epsilon = 1e-14);
        assert!(beta_reg(1.0, 1.0, 1.5).is_err());
    }

    #[test]
    fn beta_reg_small_argument() {
        // I_x(1/2, 3/2) = (2/π)(asin √x + √(x(1−x)))
        for x in [1e-20f64, 1e-16, 1e-11, 1e-9, 1e-6] {
            let exact = 2.0 / PI * (x.sqrt().asin() + (x * (1.0 - x)).sqrt());
            assert!((beta_reg(0.5, 1.5, x).unwrap() / exact - 1.0).abs() < 1e-12, "x={x}");
        }
    }
}

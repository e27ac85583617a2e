//! Weighted log-log regression of an aggregate statistic against `N`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    /// `mean ≈ c N^α`.
    Power,
    /// `mean ≈ c log N / N`.
    LogOverN,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingPoint {
    #[serde(rename = "N")]
    pub big_n: f64,
    pub mean: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingFit {
    pub statistic: String,
    pub n: u32,
    pub model: FitModel,
    #[serde(rename = "N_grid")]
    pub n_grid: Vec<f64>,
    /// Fitted `α` (power model only).
    pub exponent: Option<f64>,
    pub constant: f64,
    /// `log(mean) − log(model)` per grid point.
    pub residuals: Vec<f64>,
    pub residual_rms: f64,
    /// `mean · N / log N` per grid point (log-over-N model only).
    pub ratios: Vec<f64>,
}

impl ScalingFit {
    /// `max ratio / min ratio`, or 1 when no ratios were computed.
    pub fn ratio_spread(&self) -> f64 {
        if self.ratios.is_empty() {
            return 1.0;
        }
        let max = self.ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = self.ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        max / min
    }
}

/// Relative weights `(mean/stderr)²`, the inverse variance of `log mean`;
/// uniform if any point lacks a positive standard error.
fn log_weights(points: &[ScalingPoint]) -> Vec<f64> {
    if points.iter().all(|p| p.stderr > 0.0) {
        points.iter().map(|p| (p.mean / p.stderr).powi(2)).collect()
    } else {
        vec![1.0; points.len()]
    }
}

pub fn fit_scaling(statistic: &str, n: u32, points: &[ScalingPoint], model: FitModel) -> Result<ScalingFit> {
    if points.len() < 4 {
        return Err(Error::InvalidInput(format!("fit needs at least 4 grid points, got {}", points.len())));
    }
    if let Some(p) = points.iter().find(|p| !(p.mean > 0.0) || !(p.big_n > 1.0)) {
        return Err(Error::InvalidInput(format!("fit needs positive means and N > 1, got mean {} at N = {}", p.mean, p.big_n)));
    }
    let w = log_weights(points);
    let x: Vec<f64> = points.iter().map(|p| p.big_n.ln()).collect();
    let y: Vec<f64> = points.iter().map(|p| p.mean.ln()).collect();
    let sw: f64 = w.iter().sum();
    let (exponent, ln_c, ratios) = match model {
        FitModel::Power => {
            let xb = w.iter().zip(&x).map(|(w, x)| w * x).sum::<f64>() / sw;
            let yb = w.iter().zip(&y).map(|(w, y)| w * y).sum::<f64>() / sw;
            let sxy: f64 = (0..x.len()).map(|i| w[i] * (x[i] - xb) * (y[i] - yb)).sum();
            let sxx: f64 = (0..x.len()).map(|i| w[i] * (x[i] - xb).powi(2)).sum();
            if sxx == 0.0 {
                return Err(Error::InvalidInput("fit needs at least two distinct N".into()));
            }
            let a = sxy / sxx;
            (Some(a), yb - a * xb, Vec::new())
        }
        FitModel::LogOverN => {
            // log mean = log c + log(log N / N): the weighted mean offset
            let g: Vec<f64> = points.iter().map(|p| (p.big_n.ln() / p.big_n).ln()).collect();
            let ln_c = (0..x.len()).map(|i| w[i] * (y[i] - g[i])).sum::<f64>() / sw;
            let ratios = points.iter().map(|p| p.mean * p.big_n / p.big_n.ln()).collect();
            (None, ln_c, ratios)
        }
    };
    let residuals: Vec<f64> = points
        .iter()
        .zip(&y)
        .map(|(p, y)| {
            let model_ln = match model {
                FitModel::Power => ln_c + exponent.unwrap() * p.big_n.ln(),
                FitModel::LogOverN => ln_c + (p.big_n.ln() / p.big_n).ln(),
            };
            y - model_ln
        })
        .collect();
    let residual_rms = (residuals.iter().map(|r| r * r).sum::<f64>() / residuals.len() as f64).sqrt();
    Ok(ScalingFit {
        statistic: statistic.to_string(),
        n,
        model,
        n_grid: points.iter().map(|p| p.big_n).collect(),
        exponent,
        constant: ln_c.exp(),
        residuals,
        residual_rms,
        ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(f: impl Fn(f64) -> f64) -> Vec<ScalingPoint> {
        [100.0, 200.0, 400.0, 800.0, 1600.0, 3200.0]
            .iter()
            .map(|&m| ScalingPoint { big_n: m, mean: f(m), stderr: 0.01 * f(m) })
            .collect()
    }

    #[test]
    fn recovers_exact_power_law() {
        let f = fit_scaling("min_facet", 4, &grid(|m| 3.7 * m.powf(-1.5)), FitModel::Power).unwrap();
        assert!((f.exponent.unwrap() + 1.5).abs() < 1e-12);
        assert!((f.constant - 3.7).abs() < 1e-10);
        assert!(f.residual_rms < 1e-12);
    }

    #[test]
    fn exact_log_over_n_has_constant_ratios() {
        let f = fit_scaling("max_facet", 2, &grid(|m| 0.9 * m.ln() / m), FitModel::LogOverN).unwrap();
        for r in &f.ratios {
            assert!((r - 0.9).abs() < 1e-12);
        }
        assert!((f.constant - 0.9).abs() < 1e-12);
        assert!((f.ratio_spread() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        let mut pts = grid(|m| 1.0 / m);
        assert!(fit_scaling("x", 2, &pts[..3], FitModel::Power).is_err());
        pts[2].mean = 0.0;
        assert!(matches!(fit_scaling("x", 2, &pts, FitModel::Power), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn zero_stderr_falls_back_to_unweighted() {
        let mut pts = grid(|m| 2.0 / (m * m));
        pts[0].stderr = 0.0;
        let f = fit_scaling("x", 2, &pts, FitModel::Power).unwrap();
        assert!((f.exponent.unwrap() + 2.0).abs() < 1e-12);
    }
}

//! One-sided and two-sided comparisons of a Monte-Carlo estimate against an
//! analytic value, with a fixed standard-error slack.

use serde::Serialize;

/// Slack, in standard errors, allowed on every statistical comparison.
pub const SLACK_SIGMAS: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// The empirical value must not exceed the bound.
    Upper,
    /// The empirical value must not fall below the bound.
    Lower,
    /// The empirical value must match the bound.
    Equal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Not enough signal to decide (e.g. no events observed).
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub n: u32,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub big_n: Option<u64>,
    /// The bound's free parameter (`t`, `Δ` or `R`), when it has one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub param: Option<f64>,
    pub side: Side,
    pub bound_value: f64,
    pub empirical_value: f64,
    pub empirical_stderr: f64,
    /// Absolute slack the comparison allowed.
    pub slack: f64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl BoundReport {
    /// Builds the report and decides its status with [`SLACK_SIGMAS`].
    pub fn new(name: impl Into<String>, n: u32, side: Side, bound_value: f64, empirical_value: f64, empirical_stderr: f64) -> Self {
        let mut r = Self {
            name: name.into(),
            n,
            big_n: None,
            param: None,
            side,
            bound_value,
            empirical_value,
            empirical_stderr,
            slack: 0.0,
            status: Status::Pass,
            note: None,
        };
        r.decide(SLACK_SIGMAS * empirical_stderr);
        r
    }

    /// A deterministic comparison with an absolute tolerance instead of a
    /// sampling error.
    pub fn exact(name: impl Into<String>, n: u32, side: Side, bound_value: f64, value: f64, tolerance: f64) -> Self {
        let mut r = Self::new(name, n, side, bound_value, value, 0.0);
        r.decide(tolerance);
        r
    }

    /// Re-decides the status with `sigmas` standard errors of slack.
    pub fn with_sigmas(mut self, sigmas: f64) -> Self {
        self.decide(sigmas * self.empirical_stderr);
        self
    }

    fn decide(&mut self, slack: f64) {
        let (v, b) = (self.empirical_value, self.bound_value);
        let ok = match self.side {
            Side::Upper => v <= b + slack,
            Side::Lower => v >= b - slack,
            Side::Equal => (v - b).abs() <= slack,
        };
        self.slack = slack;
        self.status = if ok { Status::Pass } else { Status::Fail };
    }

    pub fn with_big_n(mut self, big_n: u64) -> Self {
        self.big_n = Some(big_n);
        self
    }

    pub fn with_param(mut self, param: f64) -> Self {
        self.param = Some(param);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn inconclusive(mut self, note: impl Into<String>) -> Self {
        self.status = Status::Inconclusive;
        self.note = Some(note.into());
        self
    }

    /// Pass or inconclusive.
    pub fn satisfied(&self) -> bool {
        self.status != Status::Fail
    }
}

impl std::fmt::Display for BoundReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rel = match self.side {
            Side::Upper => "<=",
            Side::Lower => ">=",
            Side::Equal => "==",
        };
        write!(f, "{:?} {} n={}", self.status, self.name, self.n)?;
        if let Some(m) = self.big_n {
            write!(f, " N={m}")?;
        }
        if let Some(p) = self.param {
            write!(f, " param={p:.6e}")?;
        }
        write!(
            f,
            ": empirical {:.6e} ± {:.2e} {rel} bound {:.6e} (slack {:.2e})",
            self.empirical_value, self.empirical_stderr, self.bound_value, self.slack
        )?;
        if let Some(note) = &self.note {
            write!(f, " ({note})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slack_is_applied_per_side() {
        assert!(BoundReport::new("u", 2, Side::Upper, 1.0, 1.3, 0.1).satisfied());
        assert!(!BoundReport::new("u", 2, Side::Upper, 1.0, 1.5, 0.1).satisfied());
        assert!(BoundReport::new("l", 2, Side::Lower, 1.0, 0.7, 0.1).satisfied());
        assert!(!BoundReport::new("e", 2, Side::Equal, 1.0, 0.5, 0.1).satisfied());
        let r = BoundReport::new("e", 2, Side::Equal, 1.0, 0.5, 0.1).inconclusive("no events");
        assert!(r.satisfied());
        assert!(!BoundReport::new("e", 2, Side::Equal, 1.0, 1.45, 0.1).satisfied());
        assert!(BoundReport::new("e", 2, Side::Equal, 1.0, 1.45, 0.1).with_sigmas(5.0).satisfied());
        assert!(BoundReport::exact("x", 2, Side::Equal, 1.0, 1.0 + 1e-13, 1e-12).satisfied());
        assert!(!BoundReport::exact("x", 2, Side::Equal, 1.0, 1.0 + 1e-11, 1e-12).satisfied());
    }
}

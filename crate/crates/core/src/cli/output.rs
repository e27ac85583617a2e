//! Serialization of aggregates and reports.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a CSV
//! re-read by `fit` reproduces the exact values.

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::CliError;
use crate::extremal::AggregateStat;
use crate::report::BoundReport;

pub const CSV_HEADER: &str = "n,N,trials,stat,mean,stderr";

/// Provenance written into every artifact.
#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub command: String,
    pub seed: u64,
    /// SHA-256 (first 16 hex digits) of the settings that determine the
    /// output; thread count and output path are excluded.
    pub config_hash: String,
    pub version: String,
}

impl Meta {
    pub fn new(command: &str, seed: u64, settings: &BTreeMap<&str, String>) -> Self {
        let mut h = Sha256::new();
        for (k, v) in settings {
            h.update(format!("{k}={v}\n"));
        }
        let config_hash = h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect();
        Self { command: command.into(), seed, config_hash, version: env!("CARGO_PKG_VERSION").into() }
    }
}

pub fn json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut v = serde_json::to_vec_pretty(value).map_err(|e| CliError::Failed(format!("json: {e}")))?;
    v.push(b'\n');
    Ok(v)
}

/// Long format: one row per `(n, N, stat)`; a missing stderr is `NA`.
pub fn aggregates_csv(meta: &Meta, cells: &[AggregateStat]) -> Vec<u8> {
    let mut s = format!(
        "# sphere-facets {}\n# seed={}\n# config_hash={}\n# version={}\n{CSV_HEADER}\n",
        meta.command, meta.seed, meta.config_hash, meta.version
    );
    for c in cells {
        for st in &c.stats {
            let se = st.stderr.map_or("NA".to_string(), |v| v.to_string());
            s.push_str(&format!("{},{},{},{},{},{}\n", c.n, c.big_n, c.trials, st.stat, st.mean, se));
        }
    }
    s.into_bytes()
}

pub fn reports_csv(seed: u64, reports: &[BoundReport]) -> Vec<u8> {
    let mut s = format!(
        "# seed={seed}\n# version={}\nname,n,N,param,side,bound,empirical,stderr,slack,status\n",
        env!("CARGO_PKG_VERSION")
    );
    for r in reports {
        s.push_str(&format!(
            "{},{},{},{},{:?},{},{},{},{},{:?}\n",
            r.name,
            r.n,
            r.big_n.map(|v| v.to_string()).unwrap_or_default(),
            r.param.map(|v| v.to_string()).unwrap_or_default(),
            r.side,
            r.bound_value,
            r.empirical_value,
            r.empirical_stderr,
            r.slack,
            r.status
        ));
    }
    s.into_bytes()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub n: u32,
    pub big_n: u64,
    pub trials: u64,
    pub stat: String,
    pub mean: f64,
    pub stderr: Option<f64>,
}

/// Parses an aggregate CSV; returns the recorded seed (if any) and the rows.
pub fn parse_aggregate_csv(text: &str) -> Result<(Option<u64>, Vec<AggregateRow>), String> {
    let mut seed = None;
    let mut header_seen = false;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if let Some(c) = line.strip_prefix('#') {
            if let Some(v) = c.trim().strip_prefix("seed=") {
                seed = v.parse().ok();
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if !header_seen {
            if line.trim_end() != CSV_HEADER {
                return Err(format!("line {lineno}: expected header '{CSV_HEADER}'"));
            }
            header_seen = true;
            continue;
        }
        let f: Vec<&str> = line.trim_end().split(',').collect();
        if f.len() != 6 {
            return Err(format!("line {lineno}: expected 6 fields, got {}", f.len()));
        }
        let bad = |what: &str| format!("line {lineno}: bad {what}");
        rows.push(AggregateRow {
            n: f[0].parse().map_err(|_| bad("n"))?,
            big_n: f[1].parse().map_err(|_| bad("N"))?,
            trials: f[2].parse().map_err(|_| bad("trials"))?,
            stat: f[3].to_string(),
            mean: f[4].parse().map_err(|_| bad("mean"))?,
            stderr: match f[5] {
                "NA" => None,
                s => Some(s.parse().map_err(|_| bad("stderr"))?),
            },
        });
    }
    if !header_seen {
        return Err("missing header".into());
    }
    Ok((seed, rows))
}

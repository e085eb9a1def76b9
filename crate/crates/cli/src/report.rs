//! Report types written by every subcommand. JSON reports embed the full
//! configuration (seed included) so a failure is reproducible from the
//! report alone; field order is fixed by the struct layout and all
//! randomness is seeded, so identical configurations produce byte-identical
//! files.

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

/// One residual or property check inside a suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Measured value (residual, ratio, eigenvalue, ...).
    pub value: f64,
    /// Upper bound the value must stay below, when one applies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    /// Lower bound, for window or definiteness checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<f64>,
    pub pass: bool,
    /// Free-form context: sample point, step size, and similar.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn upper(name: impl Into<String>, value: f64, threshold: f64) -> Check {
        Check {
            name: name.into(),
            value,
            threshold: Some(threshold),
            lower: None,
            pass: value < threshold,
            detail: None,
        }
    }

    pub fn window(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Check {
        Check {
            name: name.into(),
            value,
            threshold: Some(hi),
            lower: Some(lo),
            pass: (lo..=hi).contains(&value),
            detail: None,
        }
    }

    pub fn above(name: impl Into<String>, value: f64, lo: f64) -> Check {
        Check {
            name: name.into(),
            value,
            threshold: None,
            lower: Some(lo),
            pass: value > lo,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Check {
        self.detail = Some(detail.into());
        self
    }
}

/// A verification suite's outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub config: RunConfig,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, config: RunConfig, checks: Vec<Check>) -> SuiteReport {
        let pass = checks.iter().all(|c| c.pass);
        SuiteReport {
            suite: suite.into(),
            config,
            checks,
            pass,
        }
    }
}

/// Structure-level output of the `structure` subcommand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    pub instance: String,
    /// Simple-root coordinates of the parameter.
    pub lambda: Vec<String>,
    /// Fundamental-weight coordinates (the CLI input convention).
    pub lambda_fundamental: Vec<String>,
    pub l_roots: Vec<Vec<String>>,
    pub u_roots: Vec<Vec<String>>,
    pub u_cap_p: Vec<Vec<String>>,
    pub u_cap_k: Vec<Vec<String>>,
    pub n: usize,
    pub s: usize,
    pub rho_u_cap_p: Vec<String>,
    pub mu: Option<Vec<String>>,
    /// Pairing of mu with each simple root (integer for liftable data).
    pub mu_fundamental: Option<Vec<String>>,
    pub positivity: String,
    pub degenerate: bool,
    pub integral: bool,
}

/// K-type data emitted by the `ktypes` subcommand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KtypesReport {
    pub instance: String,
    pub lambda: Vec<String>,
    pub mu: Vec<String>,
    pub dim_mu: u64,
    pub vmu_minus: Vec<KTypeEntry>,
    /// Candidates mu - beta discarded for failing compact dominance.
    pub dropped: Vec<Vec<String>>,
    /// The first members of the cone mu + N . Delta(u cap p), by height.
    pub cone_members: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KTypeEntry {
    pub highest_weight: Vec<String>,
    pub dim: u64,
}

/// Serializes any report as pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}

//! Seeded property suites.
//!
//! Each check runs its trials in parallel; trial `i` of a check draws from
//! its own stream, and results are reduced in trial order, so a seed fixes
//! the report byte for byte.

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, SpError};
use crate::io::REPORT_VERSION;
use crate::sample::stream_rng;

mod axioms;
mod fixtures;
mod lattice;
mod prob;
mod rv;
mod sigma;
mod similarity;

pub use fixtures::{half_matrix, planar_rays, square_field_table};

/// Suite ids accepted by [`run_property_suite`], in the order `all` runs them.
pub const SUITES: [&str; 6] = ["lattice", "similarity", "sigma", "prob", "rv", "axioms"];

/// Witnesses kept per check.
const MAX_WITNESSES: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub law: String,
    pub trials: u64,
    pub failures: u64,
    pub inconclusive: u64,
    pub max_residual: f64,
    pub witnesses: Vec<String>,
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.inconclusive == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub report_version: u32,
    pub suite: String,
    pub seed: u64,
    pub scale: Option<usize>,
    pub checks: Vec<CheckRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteVerdict {
    Pass,
    Fail,
    Inconclusive,
}

impl SuiteReport {
    pub fn verdict(&self) -> SuiteVerdict {
        if self.checks.iter().any(|c| c.failures > 0) {
            SuiteVerdict::Fail
        } else if self.checks.iter().any(|c| c.inconclusive > 0) {
            SuiteVerdict::Inconclusive
        } else {
            SuiteVerdict::Pass
        }
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Trial count of each suite's main randomized loop; `None` keeps the defaults.
    pub scale: Option<usize>,
}

/// Runs one suite, or every suite for `"all"`.
pub fn run_property_suite(id: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let ids: Vec<&str> = match id {
        "all" => SUITES.to_vec(),
        one if SUITES.contains(&one) => vec![one],
        other => return Err(SpError::UnknownSuite(other.to_string())),
    };
    let mut checks = Vec::new();
    for s in ids {
        checks.extend(match s {
            "lattice" => lattice::run(cfg),
            "similarity" => similarity::run(cfg),
            "sigma" => sigma::run(cfg),
            "prob" => prob::run(cfg),
            "rv" => rv::run(cfg),
            "axioms" => axioms::run(cfg),
            _ => unreachable!(),
        });
    }
    Ok(SuiteReport {
        report_version: REPORT_VERSION,
        suite: id.to_string(),
        seed: cfg.seed,
        scale: cfg.scale,
        checks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Status {
    Pass,
    Fail,
    Inconclusive,
}

pub(crate) struct Trial {
    status: Status,
    residual: f64,
    witness: Option<String>,
}

impl Trial {
    pub(crate) fn pass(residual: f64) -> Self {
        Trial {
            status: Status::Pass,
            residual,
            witness: None,
        }
    }

    pub(crate) fn fail(residual: f64, witness: String) -> Self {
        Trial {
            status: Status::Fail,
            residual,
            witness: Some(witness),
        }
    }

    pub(crate) fn inconclusive(residual: f64, witness: String) -> Self {
        Trial {
            status: Status::Inconclusive,
            residual,
            witness: Some(witness),
        }
    }

    /// Passes when `residual <= limit`.
    pub(crate) fn within(residual: f64, limit: f64, witness: impl FnOnce() -> String) -> Self {
        if residual <= limit {
            Trial::pass(residual)
        } else {
            Trial::fail(residual, witness())
        }
    }

    pub(crate) fn holds(ok: bool, witness: impl FnOnce() -> String) -> Self {
        if ok {
            Trial::pass(0.0)
        } else {
            Trial::fail(1.0, witness())
        }
    }
}

/// Generator for trial `trial` of the check tagged `tag`.
pub(crate) fn trial_rng(seed: u64, tag: u32, trial: usize) -> ChaCha8Rng {
    stream_rng(seed, (u64::from(tag) << 32) | trial as u64)
}

/// Runs `n` trials in parallel and reduces them in index order.
pub(crate) fn run_trials<F>(id: &str, law: &str, n: usize, f: F) -> CheckRecord
where
    F: Fn(usize) -> Result<Trial> + Sync,
{
    let outcomes: Vec<Result<Trial>> = (0..n).into_par_iter().map(&f).collect();
    let mut rec = CheckRecord {
        id: id.to_string(),
        law: law.to_string(),
        trials: 0,
        failures: 0,
        inconclusive: 0,
        max_residual: 0.0,
        witnesses: Vec::new(),
    };
    for (i, outcome) in outcomes.into_iter().enumerate() {
        let t = outcome.unwrap_or_else(|e| Trial::fail(f64::INFINITY, format!("error: {e}")));
        rec.trials += 1;
        if t.residual > rec.max_residual || t.residual.is_nan() {
            rec.max_residual = t.residual;
        }
        match t.status {
            Status::Pass => continue,
            Status::Fail => rec.failures += 1,
            Status::Inconclusive => rec.inconclusive += 1,
        }
        if rec.witnesses.len() < MAX_WITNESSES {
            if let Some(w) = t.witness {
                rec.witnesses.push(format!("trial {i}: {w}"));
            }
        }
    }
    rec
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected() {
        let cfg = SuiteConfig {
            seed: 1,
            scale: None,
        };
        assert_eq!(
            run_property_suite("nope", &cfg).unwrap_err(),
            SpError::UnknownSuite("nope".into())
        );
    }

    #[test]
    fn reduction_is_in_trial_order() {
        let rec = run_trials("t", "law", 10, |i| {
            Ok(if i % 3 == 0 {
                Trial::fail(i as f64, format!("{i}"))
            } else {
                Trial::pass(0.0)
            })
        });
        assert_eq!(rec.failures, 4);
        assert_eq!(rec.witnesses, ["trial 0: 0", "trial 3: 3", "trial 6: 6"]);
        assert_eq!(rec.max_residual, 9.0);
    }

    #[test]
    fn errors_count_as_failures() {
        let rec = run_trials("t", "law", 2, |i| {
            if i == 1 {
                Err(SpError::EmptySubspace)
            } else {
                Ok(Trial::pass(0.0))
            }
        });
        assert_eq!(rec.failures, 1);
        assert!(rec.witnesses[0].starts_with("trial 1: error"));
    }
}

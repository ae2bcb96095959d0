//! Randomized verification of `ncvx-core`.
//!
//! [`theorem_check`] runs a named battery of trials, each drawing seeded
//! random instances, testing the hypothesis of a theorem and asserting its
//! conclusion with exact arithmetic. Failures carry a workbench file that
//! reproduces the instance.

pub mod checks;
pub mod examples;
pub mod gen;
pub mod oracle;
mod theorems;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use gen::{gen_fn, gen_map, gen_set, Gen, InstanceSpec};
pub use oracle::{oracle_membership_grid, GridReport};
pub use theorems::{NEGATIVE_IDS, THEOREM_IDS};

use theorems::{Ctx, Outcome};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HarnessError {
    UnknownTheoremId(String),
    InvalidSpec(String),
}

impl HarnessError {
    pub fn code(&self) -> &'static str {
        match self {
            HarnessError::UnknownTheoremId(_) => "UnknownTheoremId",
            HarnessError::InvalidSpec(_) => "InvalidSpec",
        }
    }
}

impl std::fmt::Display for HarnessError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HarnessError::UnknownTheoremId(id) => write!(f, "unknown theorem id {id}"),
            HarnessError::InvalidSpec(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for HarnessError {}

/// A failed trial with a replayable workbench file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub trial: usize,
    pub message: String,
    pub instance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub id: String,
    pub trials: usize,
    pub passes: usize,
    pub failures: Vec<Failure>,
    /// Trials whose qualification condition failed.
    pub skips: usize,
    pub skip_reasons: BTreeMap<String, usize>,
}

impl TheoremReport {
    pub fn skip_ratio(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.skips as f64 / self.trials as f64
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

enum TrialOutcome {
    Pass,
    Skip(String),
    Fail(Failure),
}

fn run_trial(id: &str, f: theorems::TrialFn, spec: &InstanceSpec, trial: usize) -> TrialOutcome {
    let mut ctx = Ctx::new(spec, id, trial);
    let result = catch_unwind(AssertUnwindSafe(|| f(&mut ctx)));
    let message = match result {
        Ok(Ok(Outcome::Pass)) => return TrialOutcome::Pass,
        Ok(Ok(Outcome::Skip(r))) => return TrialOutcome::Skip(r),
        Ok(Ok(Outcome::Fail(m))) => m,
        Ok(Err(e)) => format!("{}: {e}", e.code()),
        Err(panic) => {
            let text = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            format!("panic: {text}")
        }
    };
    let header = format!(
        "{id} trial {trial} seed {} dims {},{}: {message}",
        spec.seed, ctx.n, ctx.p
    );
    TrialOutcome::Fail(Failure {
        trial,
        message,
        instance: ctx.instance(&header),
    })
}

/// Runs `trials` independent trials of theorem `id`. Trials run in
/// parallel; the report does not depend on the thread count.
pub fn theorem_check(id: &str, spec: &InstanceSpec, trials: usize) -> Result<TheoremReport, HarnessError> {
    theorem_check_range(id, spec, 0..trials)
}

/// Runs trials `range` of theorem `id`; a single trial replays on its own.
pub fn theorem_check_range(
    id: &str,
    spec: &InstanceSpec,
    range: std::ops::Range<usize>,
) -> Result<TheoremReport, HarnessError> {
    spec.validate().map_err(HarnessError::InvalidSpec)?;
    let f = theorems::lookup(id).ok_or_else(|| HarnessError::UnknownTheoremId(id.to_string()))?;
    let trials = range.len();
    let outcomes: Vec<TrialOutcome> = range
        .into_par_iter()
        .map(|t| run_trial(id, f, spec, t))
        .collect();
    let mut report = TheoremReport {
        id: id.to_string(),
        trials,
        passes: 0,
        failures: Vec::new(),
        skips: 0,
        skip_reasons: BTreeMap::new(),
    };
    for o in outcomes {
        match o {
            TrialOutcome::Pass => report.passes += 1,
            TrialOutcome::Skip(reason) => {
                report.skips += 1;
                *report.skip_reasons.entry(reason).or_default() += 1;
            }
            TrialOutcome::Fail(f) => report.failures.push(f),
        }
    }
    Ok(report)
}

/// Every theorem id followed by the negative ids.
pub fn all_ids() -> Vec<&'static str> {
    THEOREM_IDS.iter().chain(NEGATIVE_IDS.iter()).copied().collect()
}

/// Reports for `id`, or for every id when `id` is `"all"`.
pub fn verify(id: &str, spec: &InstanceSpec, trials: usize) -> Result<Vec<TheoremReport>, HarnessError> {
    if id.eq_ignore_ascii_case("all") {
        all_ids().into_iter().map(|i| theorem_check(i, spec, trials)).collect()
    } else {
        Ok(vec![theorem_check(id, spec, trials)?])
    }
}

/// A battery summary in the JSON layout shared with the command line.
pub fn reports_json(reports: &[TheoremReport], spec: &InstanceSpec) -> serde_json::Value {
    serde_json::json!({
        "format_version": 1,
        "spec": spec,
        "reports": reports,
        "failures": reports.iter().map(|r| r.failures.len()).sum::<usize>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_id() {
        let e = theorem_check("NOPE", &InstanceSpec::default(), 1).unwrap_err();
        assert_eq!(e.code(), "UnknownTheoremId");
    }

    #[test]
    fn report_counts_add_up() {
        let r = theorem_check("SUM_FN", &InstanceSpec::with_seed(5).dims(2, 1), 12).unwrap();
        assert_eq!(r.passes + r.skips + r.failures.len(), r.trials);
    }

    #[test]
    fn fixed_counterexample_reproduces() {
        let r = theorem_check("SUM_FN_NEGATIVE", &InstanceSpec::default(), 1).unwrap();
        assert_eq!((r.passes, r.failures.len()), (1, 0), "{:?}", r.failures);
    }
}

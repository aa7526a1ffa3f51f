//! Pass/fail verdicts with concrete counterexamples.
//!
//! Every law checker in this crate returns a [`CheckResult`] rather than a
//! bare bool: a failing check always carries the first witness found —
//! the elements involved, the inequality that broke, and both exact sides —
//! so a violation can be replayed by hand.

use crate::rat::{rat_string, Rat};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Concrete counterexample to a law.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Witness {
    /// Labels of the elements instantiating the law (in law order).
    pub elements: Vec<String>,
    /// The inequality or identity that failed, human-readable.
    pub law: String,
    /// Exact value of the left-hand side.
    #[serde(with = "rat_string")]
    pub lhs: Rat,
    /// Exact value of the right-hand side.
    #[serde(with = "rat_string")]
    pub rhs: Rat,
}

impl Witness {
    pub fn new(
        elements: impl IntoIterator<Item = impl Into<String>>,
        law: impl Into<String>,
        lhs: Rat,
        rhs: Rat,
    ) -> Self {
        Witness {
            elements: elements.into_iter().map(Into::into).collect(),
            law: law.into(),
            lhs,
            rhs,
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} fails at ({}): lhs = {}, rhs = {}",
            self.law,
            self.elements.join(", "),
            self.lhs,
            self.rhs
        )
    }
}

/// Outcome of a single law check.
///
/// Scanners report the first violation in a deterministic element order, so
/// the same input always produces the same witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase", deny_unknown_fields)]
pub enum CheckResult {
    Pass,
    Fail { witness: Witness },
}

impl CheckResult {
    pub fn pass() -> Self {
        CheckResult::Pass
    }

    pub fn fail(witness: Witness) -> Self {
        CheckResult::Fail { witness }
    }

    /// Builds a verdict from a condition, computing the witness lazily.
    pub fn from_condition(ok: bool, witness: impl FnOnce() -> Witness) -> Self {
        if ok {
            CheckResult::Pass
        } else {
            CheckResult::Fail { witness: witness() }
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, CheckResult::Pass)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            CheckResult::Pass => None,
            CheckResult::Fail { witness } => Some(witness),
        }
    }

    /// Combines two verdicts; the first failure wins.
    pub fn and(self, other: CheckResult) -> CheckResult {
        match self {
            CheckResult::Pass => other,
            fail => fail,
        }
    }

    /// Folds many verdicts, keeping the first failure.
    pub fn all(results: impl IntoIterator<Item = CheckResult>) -> CheckResult {
        results
            .into_iter()
            .fold(CheckResult::Pass, CheckResult::and)
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckResult::Pass => write!(f, "pass"),
            CheckResult::Fail { witness } => write!(f, "FAIL: {witness}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn sample_witness() -> Witness {
        Witness::new(["x", "y"], "f(x) <= f(y)", rat_int(3), rat(5, 2))
    }

    #[test]
    fn and_keeps_first_failure() {
        let fail = CheckResult::fail(sample_witness());
        assert_eq!(CheckResult::pass().and(fail.clone()), fail);
        assert_eq!(fail.clone().and(CheckResult::pass()), fail);
        assert!(CheckResult::pass().and(CheckResult::pass()).is_pass());
    }

    #[test]
    fn json_shape_is_tagged_by_verdict() {
        let pass = serde_json::to_value(CheckResult::pass()).unwrap();
        assert_eq!(pass, serde_json::json!({"verdict": "pass"}));

        let fail = serde_json::to_value(CheckResult::fail(sample_witness())).unwrap();
        assert_eq!(fail["verdict"], "fail");
        assert_eq!(fail["witness"]["lhs"], "3/1");
        assert_eq!(fail["witness"]["rhs"], "5/2");
    }

    #[test]
    fn json_round_trip() {
        for r in [CheckResult::pass(), CheckResult::fail(sample_witness())] {
            let s = serde_json::to_string(&r).unwrap();
            let back: CheckResult = serde_json::from_str(&s).unwrap();
            assert_eq!(back, r);
        }
    }
}

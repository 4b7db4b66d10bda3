//! Verdict-bearing reports shared by every inequality check.

use serde::{Deserialize, Serialize};

use crate::integrate::IntegrationMethod;
use crate::tol;

/// Outcome of comparing `lhs <= rhs` at a tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// The two sides agree within tolerance.
    Equality,
    /// Strict inequality with room beyond the tolerance.
    Pass,
    /// The left side exceeds the right by more than the tolerance.
    Fail,
}

impl Verdict {
    pub fn of(lhs: f64, rhs: f64, tolerance: f64) -> Verdict {
        if (lhs - rhs).abs() <= tolerance {
            Verdict::Equality
        } else if lhs <= rhs + tolerance {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_fail(self) -> bool {
        self == Verdict::Fail
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Equality => "equality",
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

/// One checked inequality: the two sides, how each was computed, the
/// tolerance used for the verdict, and enough instance data to reproduce
/// the run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs`; 1 when both sides vanish within tolerance.
    pub ratio: f64,
    /// `rhs - lhs`: nonnegative slack means the inequality holds.
    pub slack: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub lhs_method: IntegrationMethod,
    pub rhs_method: IntegrationMethod,
    /// Instance descriptors (dimensions, function shapes, sample budgets).
    pub instance: serde_json::Value,
    pub seed: u64,
}

impl InequalityReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: &str,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
        lhs_method: IntegrationMethod,
        rhs_method: IntegrationMethod,
        instance: serde_json::Value,
        seed: u64,
    ) -> InequalityReport {
        let ratio = if rhs.abs() > tol::GEOM * lhs.abs().max(1.0) {
            lhs / rhs
        } else if lhs.abs() <= tolerance {
            1.0
        } else {
            f64::INFINITY
        };
        InequalityReport {
            name: name.to_owned(),
            lhs,
            rhs,
            ratio,
            slack: rhs - lhs,
            tolerance,
            verdict: Verdict::of(lhs, rhs, tolerance),
            lhs_method,
            rhs_method,
            instance,
            seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_boundaries() {
        assert_eq!(Verdict::of(1.0, 1.0, 1e-9), Verdict::Equality);
        assert_eq!(Verdict::of(0.5, 1.0, 1e-9), Verdict::Pass);
        assert_eq!(Verdict::of(1.1, 1.0, 1e-9), Verdict::Fail);
        assert_eq!(Verdict::of(1.0 + 5e-10, 1.0, 1e-9), Verdict::Equality);
    }

    #[test]
    fn report_round_trips_through_json() {
        let r = InequalityReport::new(
            "unit",
            0.5,
            1.0,
            1e-7,
            IntegrationMethod::MonteCarlo,
            IntegrationMethod::ClosedForm,
            serde_json::json!({"dim": 2}),
            42,
        );
        assert_eq!(r.verdict, Verdict::Pass);
        assert!((r.ratio - 0.5).abs() < 1e-15);
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"monte_carlo\""));
        let back: InequalityReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back.verdict, r.verdict);
        assert_eq!(back.seed, 42);
    }

    #[test]
    fn vanishing_sides_get_unit_ratio() {
        let r = InequalityReport::new(
            "zero",
            0.0,
            0.0,
            1e-7,
            IntegrationMethod::ClosedForm,
            IntegrationMethod::ClosedForm,
            serde_json::Value::Null,
            0,
        );
        assert_eq!(r.ratio, 1.0);
        assert_eq!(r.verdict, Verdict::Equality);
    }
}

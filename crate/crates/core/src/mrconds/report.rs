use serde::{Deserialize, Serialize};

use super::ids::{ConditionId, Family};
use crate::settings::SATISFACTION_TOL;

/// How the left-hand side is compared with the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// `lhs ≥ threshold`; margin `lhs − threshold`.
    Lower,
    /// `lhs ≤ threshold`; margin `threshold − lhs`.
    Upper,
    /// `|lhs| ≤ threshold`; margin `threshold − |lhs|`.
    Abs,
}

/// Evaluated condition. `satisfied ⇔ margin ≥ −tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub id: ConditionId,
    pub family: Family,
    pub lhs: f64,
    pub threshold: f64,
    pub bound: Bound,
    pub margin: f64,
    pub satisfied: bool,
}

impl ConditionReport {
    pub fn new(id: ConditionId, lhs: f64, threshold: f64, bound: Bound) -> Self {
        Self::with_tol(id, lhs, threshold, bound, SATISFACTION_TOL)
    }

    pub fn with_tol(id: ConditionId, lhs: f64, threshold: f64, bound: Bound, tol: f64) -> Self {
        let margin = match bound {
            Bound::Lower => lhs - threshold,
            Bound::Upper => threshold - lhs,
            Bound::Abs => threshold - lhs.abs(),
        };
        Self {
            family: id.family,
            id,
            lhs,
            threshold,
            bound,
            margin,
            satisfied: margin >= -tol,
        }
    }

    pub fn lower(id: ConditionId, lhs: f64) -> Self {
        Self::new(id, lhs, 0.0, Bound::Lower)
    }

    /// Re-evaluate `satisfied` at a different tolerance.
    pub fn rethreshold(&self, tol: f64) -> Self {
        Self {
            satisfied: self.margin >= -tol,
            ..self.clone()
        }
    }
}

/// Smallest margin in a report list (`+∞` when empty).
pub fn worst_margin(reports: &[ConditionReport]) -> f64 {
    reports.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min)
}

pub fn all_satisfied(reports: &[ConditionReport]) -> bool {
    reports.iter().all(|r| r.satisfied)
}

use rayon::prelude::*;
use serde::Serialize;

use super::feasibility::{joint_feasibility, vertex_feasibility, VERTEX_ORACLE_MAX_COLS};
use super::marginals::MarginalSet;
use crate::error::Result;
use crate::histories::{Policy, Scenario};
use crate::mrconds::{
    all_satisfied, lg2_sign_variants, lg2_suite, lg3_sign_variants, lg3_suite, worst_margin,
    ThreeTimeMoments,
};

/// Disagreements whose worst LG margin lies within this band of zero are
/// attributed to floating point, not to the theorem.
pub const AUDIT_BAND: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditEntry {
    pub index: usize,
    /// Pair nonnegativity on all three pairs and the all-plus three-time suite.
    pub suite_holds: bool,
    pub suite_margin: f64,
    /// Every sign variant of the two- and three-time suites.
    pub variants_hold: bool,
    pub variant_margin: f64,
    pub feasible: bool,
    /// Second oracle by basis enumeration, run when the joint is small.
    pub vertex_feasible: Option<bool>,
    pub phase_one_objective: f64,
}

impl AuditEntry {
    pub fn mismatch(&self) -> bool {
        self.suite_holds != self.feasible
    }

    pub fn robust_mismatch(&self) -> bool {
        self.mismatch() && self.suite_margin.abs() > AUDIT_BAND
    }

    pub fn variant_mismatch(&self) -> bool {
        self.variants_hold != self.feasible
    }

    pub fn robust_variant_mismatch(&self) -> bool {
        self.variant_mismatch() && self.variant_margin.abs() > AUDIT_BAND
    }

    pub fn oracles_disagree(&self) -> bool {
        self.vertex_feasible.is_some_and(|v| v != self.feasible)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub entries: Vec<AuditEntry>,
    pub feasible_count: usize,
    pub robust_mismatches: usize,
    pub band_mismatches: usize,
    pub robust_variant_mismatches: usize,
    pub oracle_disagreements: usize,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.robust_mismatches == 0 && self.oracle_disagreements == 0
    }
}

/// Audit one three-time scenario. Moments are taken under Lüders
/// correlators so that pair tables share their single-time marginals.
pub fn audit_scenario(index: usize, scenario: &Scenario) -> Result<AuditEntry> {
    let scenario = scenario.with_policy(Policy::Luders);
    let tm = ThreeTimeMoments::from_scenario(&scenario)?;
    let mut suite = Vec::new();
    for pm in [&tm.p12, &tm.p23, &tm.p13] {
        suite.extend(lg2_suite(pm));
    }
    suite.extend(lg3_suite(&tm));
    let mut variants = Vec::new();
    for pm in [&tm.p12, &tm.p23, &tm.p13] {
        variants.extend(lg2_sign_variants(pm));
    }
    variants.extend(lg3_sign_variants(&tm));

    let marginals = MarginalSet::from_three_time_moments(&tm)?;
    let res = joint_feasibility(&marginals)?;
    let joint_size: usize = marginals.outcomes().iter().product();
    let vertex_feasible = if joint_size <= VERTEX_ORACLE_MAX_COLS {
        Some(vertex_feasibility(&marginals)?)
    } else {
        None
    };
    Ok(AuditEntry {
        index,
        suite_holds: all_satisfied(&suite),
        suite_margin: worst_margin(&suite),
        variants_hold: all_satisfied(&variants),
        variant_margin: worst_margin(&variants),
        feasible: res.feasible,
        vertex_feasible,
        phase_one_objective: res.phase_one_objective,
    })
}

/// Compare LG verdicts with the feasibility oracle over a batch, in parallel.
/// Entries come back in input order.
pub fn equivalence_audit(scenarios: &[Scenario]) -> Result<AuditReport> {
    let entries = scenarios
        .par_iter()
        .enumerate()
        .map(|(i, s)| audit_scenario(i, s))
        .collect::<Result<Vec<_>>>()?;
    let count = |f: fn(&AuditEntry) -> bool| entries.iter().filter(|e| f(e)).count();
    Ok(AuditReport {
        feasible_count: count(|e| e.feasible),
        robust_mismatches: count(AuditEntry::robust_mismatch),
        band_mismatches: count(|e| e.mismatch() && !e.robust_mismatch()),
        robust_variant_mismatches: count(AuditEntry::robust_variant_mismatch),
        oracle_disagreements: count(AuditEntry::oracles_disagree),
        entries,
    })
}

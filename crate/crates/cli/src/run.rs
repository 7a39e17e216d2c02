use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use macroreal::fine::equivalence_audit;
use macroreal::histories::{decoherence_functional, interference_terms, Scenario};
use macroreal::mrconds::{assess_scenario, complete_nsit_observables, nsit2_suite, ConditionReport, Family};
use macroreal::scan::{
    applicable_families, evaluate_families, evaluate_point, generate_batch, generate_scenario,
    maximize_violation, seeded_batch, sweep, ParamTarget, ScenarioSpec,
};
use macroreal::settings::SATISFACTION_TOL;

use crate::bundle::{
    AuditRow, AuditSummary, Format, InterferenceEntry, InterferenceSummary, Metadata, ReportBundle,
    ScenarioReports,
};
use crate::config::{Command, RunConfig};
use crate::CliError;

/// Everything the binary needs besides argument parsing.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub config: PathBuf,
    pub out: PathBuf,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub format: Format,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub bundle: ReportBundle,
    /// True when at least one evaluated condition is violated.
    pub violation: bool,
    pub written: Vec<PathBuf>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        i32::from(self.violation)
    }
}

fn rethreshold(reports: Vec<ConditionReport>, tol: f64) -> Vec<ConditionReport> {
    reports.into_iter().map(|r| r.rethreshold(tol)).collect()
}

fn families_for(cfg: &RunConfig, scenario: &Scenario) -> Vec<Family> {
    cfg.families.clone().unwrap_or_else(|| {
        applicable_families(scenario.schedule().len(), scenario.outcomes())
    })
}

fn scenario_label(spec: &ScenarioSpec) -> String {
    format!("seed-{}", spec.seed)
}

fn interference_summaries(scenario: &Scenario) -> Result<Vec<InterferenceSummary>, CliError> {
    let dec = scenario.decomposition();
    let observables = complete_nsit_observables(dec, dec.len())?;
    let k = scenario.schedule().len();
    let mut out = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let sub = scenario.schedule().select(&[i, j])?;
            let record = decoherence_functional(
                scenario.rho(),
                &sub,
                &[dec.clone(), dec.clone()],
                scenario.hamiltonian(),
            )?;
            let table = interference_terms(&record)?;
            let suite = nsit2_suite(&record, (i + 1, j + 1), &observables)?;
            let mut entries = Vec::new();
            for (a, b) in table.pairs() {
                for n2 in 0..table.second_outcomes() {
                    entries.push(InterferenceEntry {
                        n1: a + 1,
                        n1p: b + 1,
                        n2: n2 + 1,
                        value: table.get(a, b, n2),
                    });
                }
            }
            out.push(InterferenceSummary {
                times: [i + 1, j + 1],
                independent: table.independent_count(),
                rank: suite.rank,
                complete: suite.complete,
                entries,
            });
        }
    }
    Ok(out)
}

/// Run a configuration and write its exports. Violations are reported in
/// the outcome, not as errors.
pub fn run(opts: &RunOptions) -> Result<Outcome, CliError> {
    let mut cfg = RunConfig::load(&opts.config)?;
    if let Some(seed) = opts.seed {
        match &mut cfg.batch {
            Some(b) => b.base_seed = seed,
            None => cfg.scenario.seed = seed,
        }
    }
    let tol = opts.tol.or(cfg.tolerance).unwrap_or(SATISFACTION_TOL);
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(CliError::Config(format!("tolerance must be finite and nonnegative, got {tol}")));
    }
    let seed = cfg.batch.as_ref().map_or(cfg.scenario.seed, |b| b.base_seed);
    let mut bundle = ReportBundle {
        metadata: Metadata {
            tool: "macroreal".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: cfg.command,
            seed,
            tolerance: tol,
            created_unix: 0,
        },
        conditions: vec![],
        classification: None,
        interference: vec![],
        audit: None,
        sweep: None,
        extremum: None,
    };
    let violation;
    match cfg.command {
        Command::Evaluate => {
            let scenario = generate_scenario(&cfg.scenario)?;
            let families = families_for(&cfg, &scenario);
            let reports = rethreshold(evaluate_families(&scenario, &families)?, tol);
            violation = reports.iter().any(|r| !r.satisfied);
            if (2..=3).contains(&scenario.schedule().len()) {
                bundle.classification = Some(assess_scenario(&scenario)?.class);
            }
            bundle.conditions.push(ScenarioReports {
                scenario: scenario_label(&cfg.scenario),
                reports,
            });
        }
        Command::Nsit => {
            let scenario = generate_scenario(&cfg.scenario)?;
            let families = cfg.families.clone().unwrap_or_else(|| {
                families_for(&cfg, &scenario)
                    .into_iter()
                    .filter(|f| f.is_nsit())
                    .collect()
            });
            if let Some(f) = families.iter().find(|f| !f.is_nsit()) {
                return Err(CliError::Config(format!("family {f} is not an NSIT family")));
            }
            let reports = rethreshold(evaluate_families(&scenario, &families)?, tol);
            violation = reports.iter().any(|r| !r.satisfied);
            bundle.interference = interference_summaries(&scenario)?;
            bundle.conditions.push(ScenarioReports {
                scenario: scenario_label(&cfg.scenario),
                reports,
            });
        }
        Command::FineAudit => {
            let batch = cfg.batch.as_ref().expect("validated");
            let specs = seeded_batch(&cfg.scenario, batch.base_seed, batch.count);
            let scenarios = generate_batch(&specs)?;
            let report = equivalence_audit(&scenarios)?;
            let entries: Vec<AuditRow> = report
                .entries
                .iter()
                .map(|e| AuditRow {
                    index: e.index,
                    seed: specs[e.index].seed,
                    suite_holds: e.suite_margin >= -tol,
                    suite_margin: e.suite_margin,
                    variants_hold: e.variant_margin >= -tol,
                    variant_margin: e.variant_margin,
                    feasible: e.feasible,
                    vertex_feasible: e.vertex_feasible,
                    robust_mismatch: e.robust_mismatch(),
                })
                .collect();
            violation = entries.iter().any(|e| !e.suite_holds);
            bundle.audit = Some(AuditSummary {
                count: entries.len(),
                feasible: report.feasible_count,
                robust_mismatches: report.robust_mismatches,
                band_mismatches: report.band_mismatches,
                robust_variant_mismatches: report.robust_variant_mismatches,
                oracle_disagreements: report.oracle_disagreements,
                entries,
            });
        }
        Command::Sweep | Command::Maximize => {
            let families = match &cfg.families {
                Some(f) => f.clone(),
                None => families_for(&cfg, &generate_scenario(&cfg.scenario)?),
            };
            let extremum = if cfg.command == Command::Sweep {
                let result = sweep(&cfg.scenario, &cfg.params, &families)?;
                let e = result.extremum.clone();
                bundle.sweep = Some(result);
                e
            } else {
                let opts = cfg.maximize.clone().unwrap_or_default();
                Some(maximize_violation(&cfg.scenario, &cfg.params, &families, &opts)?)
            };
            violation = extremum.as_ref().is_some_and(|e| e.value < -tol);
            if let Some(e) = &extremum {
                let targets: Vec<ParamTarget> = cfg.params.iter().map(|p| p.target).collect();
                let reports = evaluate_point(&cfg.scenario, &targets, &e.coords, &families)?;
                bundle.conditions.push(ScenarioReports {
                    scenario: "extremum".into(),
                    reports: rethreshold(reports, tol),
                });
            }
            bundle.extremum = extremum;
        }
    }
    bundle.metadata.created_unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let written = bundle.emit(&opts.out, opts.format)?;
    Ok(Outcome {
        bundle,
        violation,
        written,
    })
}

use serde::{Deserialize, Serialize};

use super::lg::{lg2_suite, lg3_suite};
use super::moments::{PairMoments, ThreeTimeMoments};
use super::nsit::{complete_nsit_observables, nsit2_suite, nsit3_suite, NsitSuite, ThreeTimeTables};
use super::report::{all_satisfied, ConditionReport};
use crate::error::{Error, Result};
use crate::histories::{decoherence_functional, Scenario};
use crate::qcore::DichotomicObservable;

/// Evaluated condition sets for one scenario, with completeness flags.
#[derive(Debug, Clone, Default)]
pub struct MrInputs {
    /// Number of measurement times (2 or 3).
    pub times: usize,
    pub lg2: Vec<ConditionReport>,
    /// All `N²` reports for every time pair were evaluated.
    pub lg2_complete: bool,
    pub lg3: Vec<ConditionReport>,
    pub lg3_complete: bool,
    pub nsit2: Vec<NsitSuite>,
    /// Every time pair has a complete two-time NSIT set.
    pub nsit2_complete: bool,
    pub nsit3: Vec<ConditionReport>,
    pub nsit3_complete: bool,
}

/// Weak / intermediate / strong macrorealism verdicts. `None` marks a
/// verdict whose condition set was not completely evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MrClass {
    pub weak: Option<bool>,
    pub intermediate: Option<bool>,
    pub strong: Option<bool>,
    /// `strong ⇒ intermediate ⇒ weak` on the decided verdicts; `None` unless
    /// all three were decided.
    pub hierarchy_consistent: Option<bool>,
    pub missing: Vec<String>,
}

pub fn classify_mr(inputs: &MrInputs) -> Result<MrClass> {
    if !(2..=3).contains(&inputs.times) {
        return Err(Error::Arity {
            expected: "2 or 3 times".into(),
            found: inputs.times,
        });
    }
    let three = inputs.times == 3;
    let mut missing = Vec::new();
    if !inputs.lg2_complete {
        missing.push("two-time LG set".to_string());
    }
    if three && !inputs.lg3_complete {
        missing.push("three-time LG set".to_string());
    }
    if !inputs.nsit2_complete {
        missing.push("two-time NSIT set".to_string());
    }
    if three && !inputs.nsit3_complete {
        missing.push("three-time NSIT set".to_string());
    }
    let nsit2_ok = inputs.nsit2.iter().all(|s| all_satisfied(&s.reports));
    let lg_ok = all_satisfied(&inputs.lg2) && all_satisfied(&inputs.lg3);
    let weak = (inputs.lg2_complete && (!three || inputs.lg3_complete)).then_some(lg_ok);
    let strong = (inputs.nsit2_complete && (!three || inputs.nsit3_complete))
        .then(|| nsit2_ok && all_satisfied(&inputs.nsit3));
    let intermediate = (three && inputs.nsit2_complete && inputs.lg3_complete)
        .then(|| nsit2_ok && all_satisfied(&inputs.lg3));
    let hierarchy_consistent = match (weak, intermediate, strong) {
        (Some(w), Some(i), Some(s)) => Some((!s || i) && (!i || w)),
        (Some(w), None, Some(s)) if !three => Some(!s || w),
        _ => None,
    };
    Ok(MrClass {
        weak,
        intermediate,
        strong,
        hierarchy_consistent,
        missing,
    })
}

/// Everything evaluated by [`assess_scenario`].
#[derive(Debug, Clone)]
pub struct MrAssessment {
    pub inputs: MrInputs,
    pub class: MrClass,
}

/// Whether the three-time NSIT conditions with the given earlier-time
/// instruments are known to form a complete set: fine measurements for two
/// outcomes, or all three single-`+1` variables for three outcomes.
pub fn nsit3_instruments(scenario: &Scenario) -> Result<(Vec<Option<DichotomicObservable>>, bool)> {
    match scenario.outcomes() {
        2 => Ok((vec![None], true)),
        3 => Ok((
            scenario
                .single_plus_observables()?
                .into_iter()
                .map(Some)
                .collect(),
            true,
        )),
        _ => Ok((vec![None], false)),
    }
}

/// Evaluate every two- and three-time LG and NSIT set on a scenario and classify it.
pub fn assess_scenario(scenario: &Scenario) -> Result<MrAssessment> {
    let k = scenario.schedule().len();
    if !(2..=3).contains(&k) {
        return Err(Error::Arity {
            expected: "2 or 3 times".into(),
            found: k,
        });
    }
    let pairs: Vec<(usize, usize)> = if k == 2 {
        vec![(0, 1)]
    } else {
        vec![(0, 1), (1, 2), (0, 2)]
    };
    let dec = scenario.decomposition();
    let observables = complete_nsit_observables(dec, dec.len())?;
    let mut inputs = MrInputs {
        times: k,
        lg2_complete: true,
        nsit2_complete: true,
        ..Default::default()
    };
    for &(i, j) in &pairs {
        inputs
            .lg2
            .extend(lg2_suite(&PairMoments::from_scenario(scenario, i, j)?));
        let sub = scenario.schedule().select(&[i, j])?;
        let record = decoherence_functional(
            scenario.rho(),
            &sub,
            &[dec.clone(), dec.clone()],
            scenario.hamiltonian(),
        )?;
        let suite = nsit2_suite(&record, (i + 1, j + 1), &observables)?;
        inputs.nsit2_complete &= suite.complete;
        inputs.nsit2.push(suite);
    }
    if k == 3 {
        inputs.lg3 = lg3_suite(&ThreeTimeMoments::from_scenario(scenario)?);
        inputs.lg3_complete = true;
        let (instruments, complete) = nsit3_instruments(scenario)?;
        for inst in &instruments {
            let tables = ThreeTimeTables::from_scenario(scenario, inst.as_ref())?;
            inputs.nsit3.extend(nsit3_suite(&tables)?);
        }
        inputs.nsit3_complete = complete;
    }
    let class = classify_mr(&inputs)?;
    Ok(MrAssessment { inputs, class })
}

use crate::error::{Error, Result};
use crate::histories::{decoherence_functional, Scenario};
use crate::mrconds::{
    complete_nsit_observables, lg2_dichotomic, lg2_qrs_reduced, lg2_suite, lg3_dichotomic,
    lg3_qrs_full, lg3_suite, lg4_suite, nsit2_suite, nsit3_instruments, nsit3_suite,
    ConditionReport, Family, FourTimeMoments, PairMoments, QrPair, QrTriple, ThreeTimeMoments,
    ThreeTimeTables,
};
use crate::qcore::DichotomicObservable;

fn time_pairs(k: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            out.push((i, j));
        }
    }
    out
}

fn need_times(scenario: &Scenario, k: usize, family: Family) -> Result<()> {
    let have = scenario.schedule().len();
    if have != k {
        return Err(Error::Arity {
            expected: format!("{k}-time schedule for {}", family.tag()),
            found: have,
        });
    }
    Ok(())
}

fn single_plus_label(scenario: &Scenario, n: usize) -> Result<String> {
    Ok(DichotomicObservable::single_plus(scenario.decomposition(), n)?.label())
}

/// Evaluate one condition family on a scenario. Two-time families run over
/// every pair of schedule times; three- and four-time families need exactly
/// that many times.
pub fn evaluate_family(scenario: &Scenario, family: Family) -> Result<Vec<ConditionReport>> {
    let k = scenario.schedule().len();
    let mut out = Vec::new();
    match family {
        Family::Lg2Nvalued => {
            for (i, j) in time_pairs(k) {
                out.extend(lg2_suite(&PairMoments::from_scenario(scenario, i, j)?));
            }
        }
        Family::Lg2Dichotomic => {
            for (i, j) in time_pairs(k) {
                let pm = PairMoments::from_scenario(scenario, i, j)?;
                for n in 0..scenario.outcomes() {
                    out.extend(lg2_dichotomic(
                        pm.times,
                        pm.mean_first[n],
                        pm.mean_second[n],
                        pm.corr(n, n),
                        &single_plus_label(scenario, n)?,
                    ));
                }
            }
        }
        Family::Lg2Qrs => {
            for (i, j) in time_pairs(k) {
                let pm = PairMoments::from_scenario(scenario, i, j)?;
                out.extend(lg2_qrs_reduced(&QrPair::from_pair_moments(&pm)?));
            }
        }
        Family::Lg3Nvalued => {
            need_times(scenario, 3, family)?;
            out.extend(lg3_suite(&ThreeTimeMoments::from_scenario(scenario)?));
        }
        Family::Lg3Dichotomic => {
            need_times(scenario, 3, family)?;
            let tm = ThreeTimeMoments::from_scenario(scenario)?;
            for n in 0..scenario.outcomes() {
                out.extend(lg3_dichotomic(
                    [1, 2, 3],
                    tm.p12.corr(n, n),
                    tm.p23.corr(n, n),
                    tm.p13.corr(n, n),
                    &single_plus_label(scenario, n)?,
                ));
            }
        }
        Family::Lg3Qrs => {
            need_times(scenario, 3, family)?;
            let tm = ThreeTimeMoments::from_scenario(scenario)?;
            out.extend(lg3_qrs_full(&QrTriple::from_moments(&tm)?));
        }
        Family::Lg4Chsh => {
            need_times(scenario, 4, family)?;
            out.extend(lg4_suite(&FourTimeMoments::from_scenario(scenario)?));
        }
        Family::NsitFull | Family::NsitDichotomic => {
            let dec = scenario.decomposition();
            let observables = if family == Family::NsitDichotomic {
                complete_nsit_observables(dec, dec.len())?
            } else {
                Vec::new()
            };
            for (i, j) in time_pairs(k) {
                let sub = scenario.schedule().select(&[i, j])?;
                let record = decoherence_functional(
                    scenario.rho(),
                    &sub,
                    &[dec.clone(), dec.clone()],
                    scenario.hamiltonian(),
                )?;
                let suite = nsit2_suite(&record, (i + 1, j + 1), &observables)?;
                out.extend(suite.reports.into_iter().filter(|r| r.family == family));
            }
        }
        Family::Nsit3Second | Family::Nsit3First | Family::Nsit3Middle => {
            need_times(scenario, 3, family)?;
            let (instruments, _) = nsit3_instruments(scenario)?;
            for inst in &instruments {
                let tables = ThreeTimeTables::from_scenario(scenario, inst.as_ref())?;
                out.extend(
                    nsit3_suite(&tables)?
                        .into_iter()
                        .filter(|r| r.family == family),
                );
            }
        }
    }
    Ok(out)
}

pub fn evaluate_families(scenario: &Scenario, families: &[Family]) -> Result<Vec<ConditionReport>> {
    let mut out = Vec::new();
    for &f in families {
        out.extend(evaluate_family(scenario, f)?);
    }
    Ok(out)
}

/// Families applicable to a scenario with `times` measurement times and
/// `outcomes` outcomes per time.
pub fn applicable_families(times: usize, outcomes: usize) -> Vec<Family> {
    Family::ALL
        .iter()
        .copied()
        .filter(|f| match f {
            Family::Lg2Qrs => outcomes == 3 && times >= 2,
            Family::Lg3Qrs => outcomes == 3 && times == 3,
            _ => match f.time_count() {
                2 => times >= 2,
                k => times == k,
            },
        })
        .collect()
}

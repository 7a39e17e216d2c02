use nalgebra::DMatrix;

use super::ids::{ConditionId, Family};
use super::report::{Bound, ConditionReport};
use crate::error::{Error, Result};
use crate::histories::{
    coherence_witness, sequential_prob, DecoherenceRecord, HistoryTable, Scenario,
};
use crate::qcore::{make_dichotomic, DichotomicObservable, ProjectiveDecomposition, Sign};

/// Rank tolerance when deciding whether evaluated witnesses pin every
/// interference term to zero.
pub const COMPLETENESS_TOL: f64 = 1e-9;

/// Two-time NSIT reports plus whether they form a complete set.
#[derive(Debug, Clone, PartialEq)]
pub struct NsitSuite {
    pub reports: Vec<ConditionReport>,
    /// Rank of the map from independent interference terms to witnesses.
    pub rank: usize,
    /// Number of independent interference terms.
    pub independent: usize,
    pub complete: bool,
}

fn witness_report(id: ConditionId, w: f64) -> ConditionReport {
    ConditionReport::new(id, w, 0.0, Bound::Abs)
}

/// Witness coefficients on the independent interference coordinates
/// `I_{ab}(n₂)`, `a < b`, `n₂ < N₂ − 1` (the last `n₂` is fixed by the zero sum).
fn coordinate_rows(first: usize, second: usize, separating: &dyn Fn(usize, usize) -> bool) -> Vec<Vec<f64>> {
    let pairs: Vec<(usize, usize)> = (0..first)
        .flat_map(|a| (a + 1..first).map(move |b| (a, b)))
        .collect();
    let cols = pairs.len() * (second - 1);
    (0..second)
        .map(|n2| {
            let mut row = vec![0.0; cols];
            for (p, &(a, b)) in pairs.iter().enumerate() {
                if !separating(a, b) {
                    continue;
                }
                if n2 + 1 < second {
                    row[p * (second - 1) + n2] += 2.0;
                } else {
                    for m in 0..second - 1 {
                        row[p * (second - 1) + m] -= 2.0;
                    }
                }
            }
            row
        })
        .collect()
}

/// Rank of the witness map for the full condition plus the given dichotomics
/// at the earlier time.
pub fn witness_rank(first: usize, second: usize, dichotomics: &[Vec<Sign>]) -> (usize, usize) {
    let independent = first * (first - 1) / 2 * (second - 1);
    let mut rows = coordinate_rows(first, second, &|_, _| true);
    for signs in dichotomics {
        rows.extend(coordinate_rows(first, second, &|a, b| signs[a] != signs[b]));
    }
    if independent == 0 {
        return (0, 0);
    }
    let m = DMatrix::from_fn(rows.len(), independent, |i, j| rows[i][j]);
    (m.rank(COMPLETENESS_TOL), independent)
}

/// Coherence witnesses for the full first-time measurement and for each
/// dichotomic observable measured at the earlier time.
pub fn nsit2_suite(
    record: &DecoherenceRecord,
    times: (usize, usize),
    dichotomics: &[DichotomicObservable],
) -> Result<NsitSuite> {
    let mut reports = Vec::new();
    let tlabels = vec![times.0, times.1];
    for (n2, w) in coherence_witness(record, None)?.into_iter().enumerate() {
        let id = ConditionId::new(Family::NsitFull, tlabels.clone()).outcomes(&[n2]);
        reports.push(witness_report(id, w));
    }
    for q in dichotomics {
        for (n2, w) in coherence_witness(record, Some(q))?.into_iter().enumerate() {
            let id = ConditionId::new(Family::NsitDichotomic, tlabels.clone())
                .outcomes(&[n2])
                .observable(q.label());
            reports.push(witness_report(id, w));
        }
    }
    let shape = record.shape();
    let signs: Vec<Vec<Sign>> = dichotomics.iter().map(|q| q.signs().to_vec()).collect();
    let (rank, independent) = witness_rank(shape[0], shape[1], &signs);
    Ok(NsitSuite {
        reports,
        rank,
        independent,
        complete: rank == independent,
    })
}

/// Single-`+1` observables, extended greedily by further dichotomics (first
/// sign fixed to `+1`) until the witness map has full rank.
pub fn complete_nsit_observables(
    dec: &ProjectiveDecomposition,
    second: usize,
) -> Result<Vec<DichotomicObservable>> {
    let n = dec.len();
    let mut chosen = DichotomicObservable::single_plus_family(dec)?;
    let signs_of = |qs: &[DichotomicObservable]| -> Vec<Vec<Sign>> {
        qs.iter().map(|q| q.signs().to_vec()).collect()
    };
    let (mut rank, independent) = witness_rank(n, second, &signs_of(&chosen));
    if rank == independent || n > 12 {
        return Ok(chosen);
    }
    for mask in 0..(1u32 << (n - 1)) {
        let signs: Vec<i8> = (0..n)
            .map(|k| if k == 0 || mask & (1 << (k - 1)) == 0 { 1 } else { -1 })
            .collect();
        let plus = signs.iter().filter(|&&s| s > 0).count();
        if plus <= 1 || plus == n || plus == n - 1 {
            continue;
        }
        let q = make_dichotomic(dec, &signs)?;
        let mut trial = chosen.clone();
        trial.push(q);
        let (r, _) = witness_rank(n, second, &signs_of(&trial));
        if r > rank {
            rank = r;
            chosen = trial;
            if rank == independent {
                break;
            }
        }
    }
    Ok(chosen)
}

/// Sequential tables at three times with either fine measurements or a
/// dichotomic observable at the first two times, and a fine measurement at
/// the last.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeTimeTables {
    pub times: [usize; 3],
    /// Sign label of the earlier-time observable; `None` for fine measurements.
    pub observable: Option<String>,
    pub p3: Vec<f64>,
    pub p23: HistoryTable,
    pub p13: HistoryTable,
    pub p123: HistoryTable,
}

impl ThreeTimeTables {
    pub fn from_scenario(scenario: &Scenario, earlier: Option<&DichotomicObservable>) -> Result<Self> {
        if scenario.schedule().len() != 3 {
            return Err(Error::Arity {
                expected: "3-time schedule".into(),
                found: scenario.schedule().len(),
            });
        }
        let fine = scenario.decomposition().clone();
        let early = match earlier {
            Some(q) => q.luders_decomposition(),
            None => fine.clone(),
        };
        let table = |idx: &[usize]| -> Result<HistoryTable> {
            let sub = scenario.schedule().select(idx)?;
            let mut decs = vec![early.clone(); idx.len() - 1];
            decs.push(fine.clone());
            sequential_prob(scenario.rho(), &sub, &decs, scenario.hamiltonian())
        };
        Ok(Self {
            times: [1, 2, 3],
            observable: earlier.map(|q| q.label()),
            p3: scenario.single(2)?,
            p23: table(&[1, 2])?,
            p13: table(&[0, 2])?,
            p123: table(&[0, 1, 2])?,
        })
    }
}

/// The three three-time NSIT conditions as signed witnesses
/// (undisturbed minus marginalized).
pub fn nsit3_suite(t: &ThreeTimeTables) -> Result<Vec<ConditionReport>> {
    let make = |family: Family, outcomes: &[usize], w: f64| {
        let mut id = ConditionId::new(family, t.times.to_vec()).outcomes(outcomes);
        if let Some(o) = &t.observable {
            id = id.observable(o.clone());
        }
        witness_report(id, w)
    };
    let mut out = Vec::new();
    let summed23 = t.p23.marginal_vec(1)?;
    for (n3, (&p, s)) in t.p3.iter().zip(&summed23).enumerate() {
        out.push(make(Family::Nsit3Second, &[n3], p - s));
    }
    let drop_first = t.p123.marginal(&[1, 2])?;
    for (idx, v) in t.p23.iter() {
        out.push(make(Family::Nsit3First, &idx, v - drop_first.get(&idx)));
    }
    let drop_middle = t.p123.marginal(&[0, 2])?;
    for (idx, v) in t.p13.iter() {
        out.push(make(Family::Nsit3Middle, &idx, v - drop_middle.get(&idx)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signs(v: &[i8]) -> Vec<Sign> {
        v.iter().map(|&x| Sign::from_i8(x).unwrap()).collect()
    }

    #[test]
    fn qutrit_dichotomics_complete_the_set() {
        let qrs: Vec<Vec<Sign>> = vec![signs(&[1, -1, -1]), signs(&[-1, 1, -1]), signs(&[-1, -1, 1])];
        assert_eq!(witness_rank(3, 3, &qrs), (6, 6));
        assert_eq!(witness_rank(3, 3, &[]).0, 2);
    }

    #[test]
    fn four_levels_need_two_block_variables() {
        let singles: Vec<Vec<Sign>> = (0..4)
            .map(|n| signs(&(0..4).map(|k| if k == n { 1 } else { -1 }).collect::<Vec<_>>()))
            .collect();
        let (r, ind) = witness_rank(4, 4, &singles);
        assert_eq!(ind, 18);
        assert_eq!(r, 12);
        let mut more = singles.clone();
        more.push(signs(&[1, 1, -1, -1]));
        assert_eq!(witness_rank(4, 4, &more).0, 15);
        more.push(signs(&[1, -1, 1, -1]));
        assert_eq!(witness_rank(4, 4, &more).0, 18);
    }

    #[test]
    fn greedy_completion() {
        for n in 2..=5 {
            let dec = ProjectiveDecomposition::fine(n);
            let qs = complete_nsit_observables(&dec, n).unwrap();
            let s: Vec<Vec<Sign>> = qs.iter().map(|q| q.signs().to_vec()).collect();
            let (r, ind) = witness_rank(n, n, &s);
            assert_eq!(r, ind, "n = {n}");
        }
    }
}

use crate::error::{Error, Result};
use crate::histories::HistoryTable;
use crate::mrconds::{PairMoments, ThreeTimeMoments};
use crate::settings::FEASIBILITY_BAND;

/// Pairwise probability tables handed to the joint-distribution oracle.
/// Entries may be negative; negativity is reported, not rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalSet {
    outcomes: Vec<usize>,
    pairs: Vec<((usize, usize), HistoryTable)>,
}

impl MarginalSet {
    /// Tables keyed by zero-based time indices `(i, j)` with `i < j`.
    pub fn new(outcomes: Vec<usize>, pairs: Vec<((usize, usize), HistoryTable)>) -> Result<Self> {
        Self::with_tol(outcomes, pairs, FEASIBILITY_BAND)
    }

    pub fn with_tol(
        outcomes: Vec<usize>,
        pairs: Vec<((usize, usize), HistoryTable)>,
        tol: f64,
    ) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::MissingInput("no pair tables".into()));
        }
        let mut singles: Vec<Option<Vec<f64>>> = vec![None; outcomes.len()];
        for ((i, j), table) in &pairs {
            let (i, j) = (*i, *j);
            if i >= j || j >= outcomes.len() {
                return Err(Error::InvalidSpec(format!("bad time pair ({i}, {j})")));
            }
            if table.shape() != [outcomes[i], outcomes[j]] {
                return Err(Error::Arity {
                    expected: format!("{}x{} table for pair ({i}, {j})", outcomes[i], outcomes[j]),
                    found: table.len(),
                });
            }
            let total = table.sum();
            if (total - 1.0).abs() > tol {
                return Err(Error::InconsistentMarginals(format!(
                    "pair ({i}, {j}) sums to {total}"
                )));
            }
            for (axis, k) in [(0, i), (1, j)] {
                let m = table.marginal_vec(axis)?;
                match &singles[k] {
                    None => singles[k] = Some(m),
                    Some(prev) => {
                        let dev = prev
                            .iter()
                            .zip(&m)
                            .map(|(a, b)| (a - b).abs())
                            .fold(0.0, f64::max);
                        if dev > tol {
                            return Err(Error::InconsistentMarginals(format!(
                                "time {} marginal differs by {dev:.3e} across tables",
                                k + 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(Self { outcomes, pairs })
    }

    /// Tables for (1,2), (2,3), (1,3).
    pub fn three_time(p12: HistoryTable, p23: HistoryTable, p13: HistoryTable) -> Result<Self> {
        let outcomes = vec![p12.shape()[0], p12.shape()[1], p23.shape()[1]];
        Self::new(outcomes, vec![((0, 1), p12), ((1, 2), p23), ((0, 2), p13)])
    }

    /// Tables for (1,2), (2,3), (3,4), (1,4).
    pub fn four_time(
        p12: HistoryTable,
        p23: HistoryTable,
        p34: HistoryTable,
        p14: HistoryTable,
    ) -> Result<Self> {
        let outcomes = vec![p12.shape()[0], p12.shape()[1], p23.shape()[1], p34.shape()[1]];
        Self::new(
            outcomes,
            vec![((0, 1), p12), ((1, 2), p23), ((2, 3), p34), ((0, 3), p14)],
        )
    }

    /// `p(n, m) = ¼(1 + ⟨Q_i(n)⟩ + ⟨Q_j(m)⟩ + ⟨Q_i(n)Q_j(m)⟩)`.
    pub fn pair_from_moments(pm: &PairMoments) -> HistoryTable {
        let (a, b) = (pm.first_outcomes(), pm.second_outcomes());
        let mut t = HistoryTable::zeros(vec![a, b]);
        for n in 0..a {
            for m in 0..b {
                let v = 1.0 + pm.mean_first[n] + pm.mean_second[m] + pm.corr(n, m);
                t.set(&[n, m], v / 4.0);
            }
        }
        t
    }

    pub fn from_three_time_moments(tm: &ThreeTimeMoments) -> Result<Self> {
        Self::three_time(
            Self::pair_from_moments(&tm.p12),
            Self::pair_from_moments(&tm.p23),
            Self::pair_from_moments(&tm.p13),
        )
    }

    pub fn outcomes(&self) -> &[usize] {
        &self.outcomes
    }

    pub fn pairs(&self) -> &[((usize, usize), HistoryTable)] {
        &self.pairs
    }

    pub fn pair(&self, i: usize, j: usize) -> Option<&HistoryTable> {
        self.pairs
            .iter()
            .find(|((a, b), _)| (*a, *b) == (i, j))
            .map(|(_, t)| t)
    }

    pub fn min_entry(&self) -> f64 {
        self.pairs
            .iter()
            .map(|(_, t)| t.min())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn has_negative_entries(&self, tol: f64) -> bool {
        self.min_entry() < -tol
    }

    /// Largest deviation between a joint table's pair marginals and the inputs.
    pub fn marginal_residual(&self, joint: &HistoryTable) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for ((i, j), t) in &self.pairs {
            let m = joint.marginal(&[*i, *j])?;
            worst = worst.max(m.max_abs_diff(t));
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inconsistent_single_time_marginals_rejected() {
        let p12 = HistoryTable::new(vec![2, 2], vec![0.25; 4]).unwrap();
        let p23 = HistoryTable::new(vec![2, 2], vec![0.4, 0.4, 0.1, 0.1]).unwrap();
        let p13 = HistoryTable::new(vec![2, 2], vec![0.25; 4]).unwrap();
        assert!(matches!(
            MarginalSet::three_time(p12, p23, p13),
            Err(Error::InconsistentMarginals(_))
        ));
    }

    #[test]
    fn negative_entries_detected() {
        let p = HistoryTable::new(vec![2, 2], vec![0.6, -0.1, -0.1, 0.6]).unwrap();
        let set = MarginalSet::three_time(p.clone(), p.clone(), p).unwrap();
        assert!(set.has_negative_entries(1e-12));
    }
}

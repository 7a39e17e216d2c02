use crate::error::{Error, Result};
use crate::histories::{HistoryTable, Policy, Scenario};

/// Averages `⟨Q_i(n)⟩`, `⟨Q_j(m)⟩` and correlators `⟨Q_i(n) Q_j(m)⟩` of the
/// single-`+1` dichotomic variables at one time pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairMoments {
    pub times: (usize, usize),
    pub mean_first: Vec<f64>,
    pub mean_second: Vec<f64>,
    corr: Vec<f64>,
}

/// `Σ_{a,b} ε_n(a) ε_m(b) t(a,b)` with `ε_n(a) = 2δ_{an} − 1`.
pub(crate) fn single_plus_correlator(table: &HistoryTable, n: usize, m: usize) -> f64 {
    let (rows, cols) = (table.shape()[0], table.shape()[1]);
    let mut total = 0.0;
    for a in 0..rows {
        for b in 0..cols {
            let ea = if a == n { 1.0 } else { -1.0 };
            let eb = if b == m { 1.0 } else { -1.0 };
            total += ea * eb * table.get(&[a, b]);
        }
    }
    total
}

impl PairMoments {
    pub fn new(
        times: (usize, usize),
        mean_first: Vec<f64>,
        mean_second: Vec<f64>,
        corr: Vec<f64>,
    ) -> Result<Self> {
        if corr.len() != mean_first.len() * mean_second.len() {
            return Err(Error::Arity {
                expected: format!("{} correlators", mean_first.len() * mean_second.len()),
                found: corr.len(),
            });
        }
        Ok(Self {
            times,
            mean_first,
            mean_second,
            corr,
        })
    }

    /// Moments carried by a two-time (quasi-)probability table: means from its
    /// marginals, correlators from its entries.
    pub fn from_table(times: (usize, usize), table: &HistoryTable) -> Result<Self> {
        if table.arity() != 2 {
            return Err(Error::Arity {
                expected: "two-time table".into(),
                found: table.arity(),
            });
        }
        let m1 = table.marginal_vec(0)?;
        let m2 = table.marginal_vec(1)?;
        let (n1, n2) = (m1.len(), m2.len());
        let mut corr = Vec::with_capacity(n1 * n2);
        for a in 0..n1 {
            for b in 0..n2 {
                corr.push(single_plus_correlator(table, a, b));
            }
        }
        Self::new(
            times,
            m1.iter().map(|p| 2.0 * p - 1.0).collect(),
            m2.iter().map(|p| 2.0 * p - 1.0).collect(),
            corr,
        )
    }

    /// Moments for time indices `(i, j)` of a scenario. Means are always the
    /// undisturbed single-time values; correlators follow the scenario policy
    /// (symmetrized operator correlator for Lüders, fine-grained sequential
    /// table for von Neumann).
    pub fn from_scenario(scenario: &Scenario, i: usize, j: usize) -> Result<Self> {
        let single = |k: usize| -> Result<Vec<f64>> {
            Ok(scenario.single(k)?.iter().map(|p| 2.0 * p - 1.0).collect())
        };
        let table = match scenario.policy() {
            Policy::Luders => scenario.quasi_at(&[i, j])?,
            Policy::VonNeumann => scenario.sequential_at(&[i, j])?,
        };
        let corr_only = Self::from_table((i + 1, j + 1), &table)?;
        Self::new((i + 1, j + 1), single(i)?, single(j)?, corr_only.corr)
    }

    pub fn first_outcomes(&self) -> usize {
        self.mean_first.len()
    }

    pub fn second_outcomes(&self) -> usize {
        self.mean_second.len()
    }

    pub fn corr(&self, n: usize, m: usize) -> f64 {
        self.corr[n * self.second_outcomes() + m]
    }

    pub fn correlators(&self) -> &[f64] {
        &self.corr
    }
}

/// Pair moments for (1,2), (2,3), (1,3).
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeTimeMoments {
    pub p12: PairMoments,
    pub p23: PairMoments,
    pub p13: PairMoments,
}

impl ThreeTimeMoments {
    pub fn from_scenario(scenario: &Scenario) -> Result<Self> {
        require_times(scenario, 3)?;
        Ok(Self {
            p12: PairMoments::from_scenario(scenario, 0, 1)?,
            p23: PairMoments::from_scenario(scenario, 1, 2)?,
            p13: PairMoments::from_scenario(scenario, 0, 2)?,
        })
    }

    pub fn outcomes(&self) -> [usize; 3] {
        [
            self.p12.first_outcomes(),
            self.p12.second_outcomes(),
            self.p23.second_outcomes(),
        ]
    }
}

/// Pair moments for (1,2), (2,3), (3,4), (1,4).
#[derive(Debug, Clone, PartialEq)]
pub struct FourTimeMoments {
    pub p12: PairMoments,
    pub p23: PairMoments,
    pub p34: PairMoments,
    pub p14: PairMoments,
}

impl FourTimeMoments {
    pub fn from_scenario(scenario: &Scenario) -> Result<Self> {
        require_times(scenario, 4)?;
        Ok(Self {
            p12: PairMoments::from_scenario(scenario, 0, 1)?,
            p23: PairMoments::from_scenario(scenario, 1, 2)?,
            p34: PairMoments::from_scenario(scenario, 2, 3)?,
            p14: PairMoments::from_scenario(scenario, 0, 3)?,
        })
    }
}

pub(crate) fn require_times(scenario: &Scenario, k: usize) -> Result<()> {
    if scenario.schedule().len() != k {
        return Err(Error::Arity {
            expected: format!("{k}-time schedule"),
            found: scenario.schedule().len(),
        });
    }
    Ok(())
}

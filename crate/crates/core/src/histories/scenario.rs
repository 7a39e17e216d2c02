use serde::{Deserialize, Serialize};

use super::probabilities::{quasi_prob, sequential_prob, single_time_prob};
use super::table::HistoryTable;
use crate::error::{Error, Result};
use crate::qcore::{
    DensityOperator, DichotomicObservable, Hamiltonian, ProjectiveDecomposition, Schedule,
};

/// How a dichotomic variable is measured in sequential experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// Projection onto the two eigenspaces of `Q`.
    Luders,
    /// Fine-grained projection onto every `E_n`, signs applied afterwards.
    VonNeumann,
}

impl Policy {
    pub fn label(self) -> &'static str {
        match self {
            Policy::Luders => "luders",
            Policy::VonNeumann => "von_neumann",
        }
    }
}

/// Initial state, dynamics, measurement times, one decomposition measured at
/// every time, and a measurement policy.
#[derive(Debug, Clone)]
pub struct Scenario {
    rho: DensityOperator,
    hamiltonian: Hamiltonian,
    schedule: Schedule,
    decomposition: ProjectiveDecomposition,
    policy: Policy,
}

impl Scenario {
    pub fn new(
        rho: DensityOperator,
        hamiltonian: Hamiltonian,
        schedule: Schedule,
        decomposition: ProjectiveDecomposition,
        policy: Policy,
    ) -> Result<Self> {
        let dim = rho.dim();
        for found in [hamiltonian.dim(), decomposition.dim()] {
            if found != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found,
                });
            }
        }
        Ok(Self {
            rho,
            hamiltonian,
            schedule,
            decomposition,
            policy,
        })
    }

    pub fn rho(&self) -> &DensityOperator {
        &self.rho
    }

    pub fn hamiltonian(&self) -> &Hamiltonian {
        &self.hamiltonian
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn decomposition(&self) -> &ProjectiveDecomposition {
        &self.decomposition
    }

    pub fn policy(&self) -> Policy {
        self.policy
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    /// Number of outcomes `N` of the decomposition.
    pub fn outcomes(&self) -> usize {
        self.decomposition.len()
    }

    pub fn with_policy(&self, policy: Policy) -> Self {
        Self {
            policy,
            ..self.clone()
        }
    }

    pub fn with_schedule(&self, schedule: Schedule) -> Self {
        Self {
            schedule,
            ..self.clone()
        }
    }

    pub fn decompositions(&self) -> Vec<ProjectiveDecomposition> {
        vec![self.decomposition.clone(); self.schedule.len()]
    }

    /// `Q(1), …, Q(N)` built on the scenario decomposition.
    pub fn single_plus_observables(&self) -> Result<Vec<DichotomicObservable>> {
        DichotomicObservable::single_plus_family(&self.decomposition)
    }

    /// Outcome probabilities at time index `k` with no earlier measurement.
    pub fn single(&self, k: usize) -> Result<Vec<f64>> {
        single_time_prob(
            &self.rho,
            &self.decomposition,
            &self.hamiltonian,
            self.schedule.time(k),
        )
    }

    /// Sequential-measurement table over all scheduled times.
    pub fn sequential(&self) -> Result<HistoryTable> {
        sequential_prob(
            &self.rho,
            &self.schedule,
            &self.decompositions(),
            &self.hamiltonian,
        )
    }

    pub fn quasi(&self) -> Result<HistoryTable> {
        quasi_prob(
            &self.rho,
            &self.schedule,
            &self.decompositions(),
            &self.hamiltonian,
        )
    }

    /// Sequential table with only the listed time indices measured.
    pub fn sequential_at(&self, indices: &[usize]) -> Result<HistoryTable> {
        let sub = self.schedule.select(indices)?;
        sequential_prob(
            &self.rho,
            &sub,
            &vec![self.decomposition.clone(); indices.len()],
            &self.hamiltonian,
        )
    }

    /// Quasi-probability with only the listed time indices.
    pub fn quasi_at(&self, indices: &[usize]) -> Result<HistoryTable> {
        let sub = self.schedule.select(indices)?;
        quasi_prob(
            &self.rho,
            &sub,
            &vec![self.decomposition.clone(); indices.len()],
            &self.hamiltonian,
        )
    }
}

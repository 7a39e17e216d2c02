use nalgebra::DVector;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::histories::{Policy, Scenario};
use crate::qcore::{build_decomposition, c64, CMatrix, DensityOperator, Hamiltonian, ProjectiveDecomposition, Schedule};

/// Real and imaginary parts of a square matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixSpec {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let rows = |f: fn(&num_complex::Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        let im = rows(|z| z.im);
        Self {
            re: rows(|z| z.re),
            im: im.iter().flatten().any(|v| *v != 0.0).then_some(im),
        }
    }

    pub fn to_matrix(&self, dim: usize) -> Result<CMatrix> {
        let check = |rows: &Vec<Vec<f64>>| -> Result<()> {
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: rows.len(),
                });
            }
            Ok(())
        };
        check(&self.re)?;
        if let Some(im) = &self.im {
            check(im)?;
        }
        Ok(CMatrix::from_fn(dim, dim, |i, j| {
            let im = self.im.as_ref().map_or(0.0, |m| m[i][j]);
            c64(self.re[i][j], im)
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    /// Normalized complex Gaussian vector (unitarily invariant).
    PureRandom {},
    /// `G G† / Tr` with `G` a `dim × rank` complex Gaussian matrix.
    MixedRandom { rank: usize },
    /// `(1 − p)|ψ⟩⟨ψ| + p I/N` with random pure `ψ`.
    Depolarized { p: f64 },
    MaximallyMixed {},
    Diagonal { populations: Vec<f64> },
    /// Qubit pure state `cos(θ/2)|1⟩ + e^{iφ} sin(θ/2)|2⟩`.
    Bloch { theta: f64, phi: f64 },
    Explicit(MatrixSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum HamiltonianSpec {
    /// `scale · (A + A†)/2`, `A` with standard complex Gaussian entries.
    RandomHermitian {
        #[serde(default = "one")]
        scale: f64,
    },
    /// `ω n̂·J`; for a qubit `(ω/2) n̂·σ`.
    SpinPrecession {
        omega: f64,
        #[serde(default = "x_axis")]
        axis: [f64; 3],
    },
    Explicit(MatrixSpec),
    Zero {},
}

fn one() -> f64 {
    1.0
}

fn x_axis() -> [f64; 3] {
    [1.0, 0.0, 0.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleSpec {
    Explicit { times: Vec<f64> },
    /// `start + kτ` for `k = 0..count`.
    Equal {
        count: usize,
        spacing: f64,
        #[serde(default)]
        start: f64,
    },
    /// `count` evenly spaced points covering `[0, span]`.
    UniformGrid { count: usize, span: f64 },
    /// Sorted uniform draws from `[0, max]`.
    Random { count: usize, max: f64 },
}

impl ScheduleSpec {
    pub fn count(&self) -> usize {
        match self {
            ScheduleSpec::Explicit { times } => times.len(),
            ScheduleSpec::Equal { count, .. }
            | ScheduleSpec::UniformGrid { count, .. }
            | ScheduleSpec::Random { count, .. } => *count,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DecompositionSpec {
    /// Rank-one projectors onto the basis vectors.
    Fine {},
    /// Consecutive blocks of basis vectors with the given ranks.
    Ranks { ranks: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub dim: usize,
    pub state: StateSpec,
    pub hamiltonian: HamiltonianSpec,
    pub schedule: ScheduleSpec,
    #[serde(default = "fine_decomposition")]
    pub decomposition: DecompositionSpec,
    #[serde(default = "luders")]
    pub policy: Policy,
    #[serde(default)]
    pub seed: u64,
}

fn fine_decomposition() -> DecompositionSpec {
    DecompositionSpec::Fine {}
}

fn luders() -> Policy {
    Policy::Luders
}

/// Free parameter of a sweep or search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamTarget {
    /// Equal spacing `τ`; times become `t₁ + kτ`.
    Spacing,
    /// Precession frequency of a spin-precession Hamiltonian.
    Omega,
    /// Bloch angles of a qubit state.
    Theta,
    Phi,
    #[serde(rename = "t1")]
    T1,
    #[serde(rename = "t2")]
    T2,
    #[serde(rename = "t3")]
    T3,
    #[serde(rename = "t4")]
    T4,
}

/// Per-item seed for batch `index` under `base`.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(index);
    rng.next_u64()
}

fn gaussian_complex(rng: &mut ChaCha8Rng) -> num_complex::Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c64(re, im)
}

fn random_pure(dim: usize, rng: &mut ChaCha8Rng) -> Result<DensityOperator> {
    let psi = DVector::from_fn(dim, |_, _| gaussian_complex(rng));
    DensityOperator::pure(&psi)
}

fn build_state(spec: &StateSpec, dim: usize, rng: &mut ChaCha8Rng) -> Result<DensityOperator> {
    match spec {
        StateSpec::PureRandom {} => random_pure(dim, rng),
        StateSpec::MixedRandom { rank } => {
            if *rank == 0 || *rank > dim {
                return Err(Error::InvalidSpec(format!("mixed state rank {rank} outside 1..={dim}")));
            }
            let g = CMatrix::from_fn(dim, *rank, |_, _| gaussian_complex(rng));
            let m = &g * g.adjoint();
            let tr = m.trace();
            DensityOperator::new(m / tr)
        }
        StateSpec::Depolarized { p } => {
            if !(0.0..=1.0).contains(p) {
                return Err(Error::InvalidSpec(format!("depolarizing weight {p} outside [0, 1]")));
            }
            let pure = random_pure(dim, rng)?;
            let m = pure.matrix() * c64(1.0 - p, 0.0)
                + CMatrix::identity(dim, dim) * c64(p / dim as f64, 0.0);
            DensityOperator::new(m)
        }
        StateSpec::MaximallyMixed {} => Ok(DensityOperator::maximally_mixed(dim)),
        StateSpec::Diagonal { populations } => {
            if populations.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: populations.len(),
                });
            }
            DensityOperator::diagonal(populations)
        }
        StateSpec::Bloch { theta, phi } => {
            if dim != 2 {
                return Err(Error::InvalidSpec("Bloch states need dim 2".into()));
            }
            let psi = DVector::from_vec(vec![
                c64((theta / 2.0).cos(), 0.0),
                c64(phi.cos(), phi.sin()) * (theta / 2.0).sin(),
            ]);
            DensityOperator::pure(&psi)
        }
        StateSpec::Explicit(m) => DensityOperator::new(m.to_matrix(dim)?),
    }
}

fn build_hamiltonian(spec: &HamiltonianSpec, dim: usize, rng: &mut ChaCha8Rng) -> Result<Hamiltonian> {
    match spec {
        HamiltonianSpec::RandomHermitian { scale } => {
            let a = CMatrix::from_fn(dim, dim, |_, _| gaussian_complex(rng));
            Hamiltonian::new((&a + a.adjoint()) * c64(0.5 * scale, 0.0))
        }
        HamiltonianSpec::SpinPrecession { omega, axis } => Hamiltonian::spin_precession(dim, *omega, *axis),
        HamiltonianSpec::Explicit(m) => Hamiltonian::new(m.to_matrix(dim)?),
        HamiltonianSpec::Zero {} => Ok(Hamiltonian::zero(dim)),
    }
}

fn build_schedule(spec: &ScheduleSpec, rng: &mut ChaCha8Rng) -> Result<Schedule> {
    let times = match spec {
        ScheduleSpec::Explicit { times } => times.clone(),
        ScheduleSpec::Equal { count, spacing, start } => {
            (0..*count).map(|k| start + k as f64 * spacing).collect()
        }
        ScheduleSpec::UniformGrid { count, span } => match count {
            0 => vec![],
            1 => vec![0.0],
            c => (0..*c).map(|k| span * k as f64 / (*c - 1) as f64).collect(),
        },
        ScheduleSpec::Random { count, max } => {
            if !(max.is_finite() && *max > 0.0) {
                return Err(Error::InvalidSchedule(format!("random schedule bound {max}")));
            }
            let mut t: Vec<f64> = (0..*count).map(|_| rng.random_range(0.0..*max)).collect();
            t.sort_by(f64::total_cmp);
            t
        }
    };
    Schedule::new(times)
}

fn build_decomposition_spec(spec: &DecompositionSpec, dim: usize) -> Result<ProjectiveDecomposition> {
    match spec {
        DecompositionSpec::Fine {} => Ok(ProjectiveDecomposition::fine(dim)),
        DecompositionSpec::Ranks { ranks } => build_decomposition(dim, ranks),
    }
}

/// Resolve a spec into a scenario. Random draws are made in the order
/// state, Hamiltonian, times, all from one generator seeded by `spec.seed`.
pub fn generate_scenario(spec: &ScenarioSpec) -> Result<Scenario> {
    if spec.dim == 0 {
        return Err(Error::InvalidSpec("dim must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let rho = build_state(&spec.state, spec.dim, &mut rng)?;
    let h = build_hamiltonian(&spec.hamiltonian, spec.dim, &mut rng)?;
    let schedule = build_schedule(&spec.schedule, &mut rng)?;
    let dec = build_decomposition_spec(&spec.decomposition, spec.dim)?;
    Scenario::new(rho, h, schedule, dec, spec.policy)
}

/// Generate the scenario with free parameters overridden. State and
/// Hamiltonian parameters edit the spec; time parameters edit the schedule
/// of the generated scenario, so random draws are unaffected by them.
pub fn generate_with_params(spec: &ScenarioSpec, params: &[(ParamTarget, f64)]) -> Result<Scenario> {
    let mut spec = spec.clone();
    for &(target, v) in params {
        match target {
            ParamTarget::Omega => match &mut spec.hamiltonian {
                HamiltonianSpec::SpinPrecession { omega, .. } => *omega = v,
                _ => return Err(Error::InvalidSpec("omega needs a spin-precession Hamiltonian".into())),
            },
            ParamTarget::Theta | ParamTarget::Phi => match &mut spec.state {
                StateSpec::Bloch { theta, phi } => {
                    if target == ParamTarget::Theta {
                        *theta = v
                    } else {
                        *phi = v
                    }
                }
                _ => return Err(Error::InvalidSpec("Bloch angles need a Bloch state".into())),
            },
            _ => {}
        }
    }
    let scenario = generate_scenario(&spec)?;
    let mut times = scenario.schedule().times().to_vec();
    let mut touched = false;
    for &(target, v) in params {
        let slot = match target {
            ParamTarget::Spacing => {
                let start = times[0];
                for (k, t) in times.iter_mut().enumerate() {
                    *t = start + k as f64 * v;
                }
                touched = true;
                continue;
            }
            ParamTarget::T1 => 0,
            ParamTarget::T2 => 1,
            ParamTarget::T3 => 2,
            ParamTarget::T4 => 3,
            _ => continue,
        };
        if slot >= times.len() {
            return Err(Error::InvalidSpec(format!("no time t{} in a {}-time schedule", slot + 1, times.len())));
        }
        times[slot] = v;
        touched = true;
    }
    if touched {
        Ok(scenario.with_schedule(Schedule::new(times)?))
    } else {
        Ok(scenario)
    }
}

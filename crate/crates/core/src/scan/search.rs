use nalgebra::SymmetricEigen;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::families::evaluate_family;
use super::spec::{
    derive_seed, generate_scenario, DecompositionSpec, HamiltonianSpec, MatrixSpec, ScenarioSpec,
    ScheduleSpec, StateSpec,
};
use super::sweep::{extremum_order, worst_report};
use crate::error::{Error, Result};
use crate::histories::{Policy, Scenario};
use crate::mrconds::{ConditionId, Family};
use crate::qcore::{c64, CMatrix, Hamiltonian, ProjectiveDecomposition};

/// Random three-time N-level specs: random pure state, random Hermitian
/// Hamiltonian, times uniform in `[0, max_time]`, fine measurements.
pub fn random_spec(dim: usize, times: usize, max_time: f64, policy: Policy, seed: u64) -> ScenarioSpec {
    ScenarioSpec {
        dim,
        state: StateSpec::PureRandom {},
        hamiltonian: HamiltonianSpec::RandomHermitian { scale: 1.0 },
        schedule: ScheduleSpec::Random {
            count: times,
            max: max_time,
        },
        decomposition: DecompositionSpec::Fine {},
        policy,
        seed,
    }
}

/// `count` specs built from `template`, each with a seed derived from `base`.
pub fn seeded_batch(template: &ScenarioSpec, base: u64, count: usize) -> Vec<ScenarioSpec> {
    (0..count)
        .map(|i| ScenarioSpec {
            seed: derive_seed(base, i as u64),
            ..template.clone()
        })
        .collect()
}

pub fn generate_batch(specs: &[ScenarioSpec]) -> Result<Vec<Scenario>> {
    specs.par_iter().map(generate_scenario).collect()
}

/// Scenario found by a seeded search, stored in explicit form so it can be
/// regenerated without the search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchHit {
    pub trial: usize,
    pub spec: ScenarioSpec,
    pub margin: f64,
    pub condition: ConditionId,
}

/// Most negative three-time LG margin over `trials` random qutrit-style
/// scenarios of dimension `dim`, evaluated under `policy`.
pub fn search_lg3_violation(
    dim: usize,
    policy: Policy,
    base: u64,
    trials: usize,
    max_time: f64,
) -> Result<SearchHit> {
    let template = random_spec(dim, 3, max_time, policy, 0);
    let specs = seeded_batch(&template, base, trials);
    let found: Vec<(usize, f64, ConditionId)> = specs
        .par_iter()
        .enumerate()
        .map(|(i, spec)| {
            let s = generate_scenario(spec)?;
            let reports = evaluate_family(&s, Family::Lg3Nvalued)?;
            let w = worst_report(&reports).expect("nonempty suite");
            Ok((i, w.margin, w.id.clone()))
        })
        .collect::<Result<_>>()?;
    let (trial, margin, condition) = found
        .into_iter()
        .min_by(|a, b| extremum_order((a.1, &[a.0 as f64]), (b.1, &[b.0 as f64])))
        .ok_or(Error::EmptyGrid)?;
    Ok(SearchHit {
        trial,
        spec: specs[trial].clone(),
        margin,
        condition,
    })
}

/// Result of [`search_nsit_without_lg2`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NsitLgHit {
    pub trial: usize,
    pub spec: ScenarioSpec,
    /// Largest |witness| among the full NSIT conditions at times (1,2).
    pub nsit_max_abs: f64,
    /// Worst two-time LG margin at times (1,2).
    pub lg2_margin: f64,
    pub condition: ConditionId,
}

fn gaussian_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let a = CMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c64(re, im)
    });
    (&a + a.adjoint()) * c64(0.5, 0.0)
}

fn hs(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Density operator with every full NSIT witness at `(t1, t2)` equal to zero:
/// a random Hermitian direction, made orthogonal to the identity and to the
/// witness operators `E_m(t₂) − Σ_n E_n(t₁)E_m(t₂)E_n(t₁)`, added to `I/N`
/// with the largest weight keeping the state positive.
pub fn nsit_null_state(
    dec: &ProjectiveDecomposition,
    h: &Hamiltonian,
    t1: f64,
    t2: f64,
    rng: &mut ChaCha8Rng,
) -> Result<CMatrix> {
    let dim = dec.dim();
    let e1 = dec.evolved(h, t1)?;
    let e2 = dec.evolved(h, t2)?;
    let mut basis: Vec<CMatrix> = vec![CMatrix::identity(dim, dim)];
    for em in &e2 {
        let mut x = em.clone();
        for en in &e1 {
            x -= en * em * en;
        }
        basis.push(x);
    }
    // Gram–Schmidt under the Hilbert–Schmidt inner product.
    let mut ortho: Vec<CMatrix> = Vec::new();
    for b in basis {
        let mut v = b;
        for o in &ortho {
            v -= o * c64(hs(o, &v), 0.0);
        }
        let norm = hs(&v, &v).sqrt();
        if norm > 1e-10 {
            ortho.push(v / c64(norm, 0.0));
        }
    }
    let mut delta = gaussian_hermitian(dim, rng);
    for o in &ortho {
        delta -= o * c64(hs(o, &delta), 0.0);
    }
    let min_eig = SymmetricEigen::new(delta.clone())
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if !(min_eig < 0.0) {
        return Err(Error::InvalidState("direction has no negative eigenvalue".into()));
    }
    let lambda = (1.0 / dim as f64) / (-min_eig);
    Ok(CMatrix::identity(dim, dim) * c64(1.0 / dim as f64, 0.0) + delta * c64(lambda, 0.0))
}

/// Seeded search for a two-time scenario whose full NSIT conditions hold
/// to `nsit_tol` while some two-time LG inequality fails by at least
/// `lg_gap`. Stops at the first hit.
pub fn search_nsit_without_lg2(
    dim: usize,
    base: u64,
    trials: usize,
    nsit_tol: f64,
    lg_gap: f64,
) -> Result<Option<NsitLgHit>> {
    let dec = ProjectiveDecomposition::fine(dim);
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(base, trial as u64));
        let h = Hamiltonian::new(gaussian_hermitian(dim, &mut rng))?;
        let mut times = [rng.random_range(0.0..3.0), rng.random_range(0.0..3.0)];
        times.sort_by(f64::total_cmp);
        if times[1] - times[0] < 1e-3 {
            continue;
        }
        let rho = match nsit_null_state(&dec, &h, times[0], times[1], &mut rng) {
            Ok(r) => r,
            Err(Error::InvalidState(_)) => continue,
            Err(e) => return Err(e),
        };
        let spec = ScenarioSpec {
            dim,
            state: StateSpec::Explicit(MatrixSpec::from_matrix(&rho)),
            hamiltonian: HamiltonianSpec::Explicit(MatrixSpec::from_matrix(h.matrix())),
            schedule: ScheduleSpec::Explicit {
                times: times.to_vec(),
            },
            decomposition: DecompositionSpec::Fine {},
            policy: Policy::Luders,
            seed: 0,
        };
        let scenario = match generate_scenario(&spec) {
            Ok(s) => s,
            Err(Error::InvalidState(_)) => continue,
            Err(e) => return Err(e),
        };
        let nsit = evaluate_family(&scenario, Family::NsitFull)?;
        let nsit_max_abs = nsit.iter().map(|r| r.lhs.abs()).fold(0.0, f64::max);
        let lg = evaluate_family(&scenario, Family::Lg2Nvalued)?;
        let w = worst_report(&lg).expect("nonempty suite");
        if nsit_max_abs <= nsit_tol && w.margin <= -lg_gap {
            return Ok(Some(NsitLgHit {
                trial,
                spec,
                nsit_max_abs,
                lg2_margin: w.margin,
                condition: w.id.clone(),
            }));
        }
    }
    Ok(None)
}

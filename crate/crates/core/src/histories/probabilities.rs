use num_complex::Complex64;

use super::table::HistoryTable;
use crate::error::{Error, Result};
use crate::qcore::{
    heisenberg_evolve, trace, CMatrix, DensityOperator, Hamiltonian, ProjectiveDecomposition,
    Schedule,
};

/// Histories beyond this count are refused by routines that build every class operator.
pub const MAX_HISTORIES: usize = 4096;

/// `pₙ = Tr(Eₙ(t) ρ)`.
pub fn single_time_prob(
    rho: &DensityOperator,
    dec: &ProjectiveDecomposition,
    h: &Hamiltonian,
    t: f64,
) -> Result<Vec<f64>> {
    check_dims(rho, &[dec.clone()], h)?;
    dec.projectors()
        .iter()
        .map(|e| Ok(rho.expectation(&heisenberg_evolve(e, h, t)?).re))
        .collect()
}

pub(crate) fn check_dims(
    rho: &DensityOperator,
    decs: &[ProjectiveDecomposition],
    h: &Hamiltonian,
) -> Result<()> {
    let dim = rho.dim();
    if h.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: h.dim(),
        });
    }
    for d in decs {
        if d.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: d.dim(),
            });
        }
    }
    Ok(())
}

fn check_schedule(schedule: &Schedule, decs: &[ProjectiveDecomposition]) -> Result<()> {
    if decs.len() != schedule.len() {
        return Err(Error::Arity {
            expected: format!("{} decompositions", schedule.len()),
            found: decs.len(),
        });
    }
    Ok(())
}

/// Heisenberg-picture projectors, one list per time.
pub(crate) fn evolved_projectors(
    schedule: &Schedule,
    decs: &[ProjectiveDecomposition],
    h: &Hamiltonian,
) -> Result<Vec<Vec<CMatrix>>> {
    decs.iter()
        .zip(schedule.times())
        .map(|(d, &t)| d.evolved(h, t))
        .collect()
}

/// Class operators `C_α = E_{αk}(t_k)…E_{α1}(t_1)` in row-major history order.
pub(crate) fn class_operators(evolved: &[Vec<CMatrix>]) -> Vec<CMatrix> {
    let mut ops: Vec<CMatrix> = evolved[0].clone();
    for layer in &evolved[1..] {
        let mut next = Vec::with_capacity(ops.len() * layer.len());
        for c in &ops {
            for e in layer {
                next.push(e * c);
            }
        }
        ops = next;
    }
    ops
}

pub(crate) fn shape_of(decs: &[ProjectiveDecomposition]) -> Vec<usize> {
    decs.iter().map(|d| d.len()).collect()
}

/// `p(α) = Tr(C_α ρ C_α†)`, computed by repeated Lüders updates of `ρ`.
pub(crate) fn sequential_from_operators(rho: &CMatrix, evolved: &[Vec<CMatrix>]) -> HistoryTable {
    let shape: Vec<usize> = evolved.iter().map(|l| l.len()).collect();
    let mut states: Vec<CMatrix> = vec![rho.clone()];
    for layer in evolved {
        let mut next = Vec::with_capacity(states.len() * layer.len());
        for s in &states {
            for e in layer {
                next.push(e * s * e);
            }
        }
        states = next;
    }
    let values = states.iter().map(|s| trace(s).re).collect();
    HistoryTable::new(shape, values).expect("shape matches operator count")
}

/// Sequential-measurement probabilities over every history string.
pub fn sequential_prob(
    rho: &DensityOperator,
    schedule: &Schedule,
    decs: &[ProjectiveDecomposition],
    h: &Hamiltonian,
) -> Result<HistoryTable> {
    check_schedule(schedule, decs)?;
    check_dims(rho, decs, h)?;
    let evolved = evolved_projectors(schedule, decs, h)?;
    Ok(sequential_from_operators(rho.matrix(), &evolved))
}

/// `q(α) = Re Tr(C_α ρ)`.
pub fn quasi_prob(
    rho: &DensityOperator,
    schedule: &Schedule,
    decs: &[ProjectiveDecomposition],
    h: &Hamiltonian,
) -> Result<HistoryTable> {
    check_schedule(schedule, decs)?;
    check_dims(rho, decs, h)?;
    let evolved = evolved_projectors(schedule, decs, h)?;
    Ok(quasi_from_operators(rho.matrix(), &evolved))
}

pub(crate) fn quasi_from_operators(rho: &CMatrix, evolved: &[Vec<CMatrix>]) -> HistoryTable {
    let shape: Vec<usize> = evolved.iter().map(|l| l.len()).collect();
    // Propagate C_α ρ layer by layer; only traces are needed at the end.
    let mut partial: Vec<CMatrix> = vec![rho.clone()];
    for layer in evolved {
        let mut next = Vec::with_capacity(partial.len() * layer.len());
        for p in &partial {
            for e in layer {
                next.push(e * p);
            }
        }
        partial = next;
    }
    let values = partial.iter().map(|m| trace(m).re).collect();
    HistoryTable::new(shape, values).expect("shape matches operator count")
}

/// `Tr(A B†)` as a Frobenius inner product.
pub(crate) fn trace_with_adjoint(a: &CMatrix, b: &CMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum()
}

pub(crate) fn history_count(shape: &[usize]) -> usize {
    shape.iter().product()
}

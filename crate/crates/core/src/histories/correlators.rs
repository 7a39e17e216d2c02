use super::probabilities::{check_dims, quasi_from_operators, sequential_from_operators};
use super::scenario::Policy;
use super::table::HistoryTable;
use crate::error::{Error, Result};
use crate::qcore::{heisenberg_evolve, CMatrix, DensityOperator, DichotomicObservable, Hamiltonian, Schedule, Sign};

/// Time pairs in the order used by [`CorrelatorSet::pair`]: (1,2), (2,3), (1,3).
pub const PAIRS: [(usize, usize); 3] = [(0, 1), (1, 2), (0, 2)];

fn check_observable(rho: &DensityOperator, h: &Hamiltonian, q: &DichotomicObservable) -> Result<()> {
    check_dims(rho, std::slice::from_ref(q.decomposition()), h)
}

/// Symmetrized correlator `½⟨Q_i(t_i) Q_j(t_j) + Q_j(t_j) Q_i(t_i)⟩`.
pub fn correlator_luders(
    rho: &DensityOperator,
    h: &Hamiltonian,
    ti: f64,
    tj: f64,
    qi: &DichotomicObservable,
    qj: &DichotomicObservable,
) -> Result<f64> {
    check_observable(rho, h, qi)?;
    check_observable(rho, h, qj)?;
    let a = heisenberg_evolve(qi.operator(), h, ti)?;
    let b = heisenberg_evolve(qj.operator(), h, tj)?;
    let sym = (&a * &b + &b * &a) * crate::qcore::c64(0.5, 0.0);
    Ok(rho.expectation(&sym).re)
}

/// `Σ ε_i(n₁) ε_j(n₂) p₁₂(n₁,n₂)` with fine-grained sequential measurements,
/// the earlier time measured first.
pub fn correlator_vn(
    rho: &DensityOperator,
    h: &Hamiltonian,
    ti: f64,
    tj: f64,
    qi: &DichotomicObservable,
    qj: &DichotomicObservable,
) -> Result<f64> {
    check_observable(rho, h, qi)?;
    check_observable(rho, h, qj)?;
    let (first, second, t1, t2) = if ti <= tj {
        (qi, qj, ti, tj)
    } else {
        (qj, qi, tj, ti)
    };
    let table = sign_table_at(rho, h, &[t1, t2], &[first, second], Policy::VonNeumann)?;
    Ok(moment(&table, &[0, 1]))
}

fn measured_layers(
    h: &Hamiltonian,
    times: &[f64],
    observables: &[&DichotomicObservable],
    policy: Policy,
) -> Result<Vec<Vec<CMatrix>>> {
    times
        .iter()
        .zip(observables)
        .map(|(&t, q)| match policy {
            Policy::Luders => Sign::BOTH
                .iter()
                .map(|&s| heisenberg_evolve(&q.eigenprojector(s), h, t))
                .collect(),
            Policy::VonNeumann => q.decomposition().evolved(h, t),
        })
        .collect()
}

fn sign_maps(observables: &[&DichotomicObservable], policy: Policy) -> Vec<Vec<usize>> {
    observables
        .iter()
        .map(|q| match policy {
            Policy::Luders => vec![0, 1],
            Policy::VonNeumann => q.signs().iter().map(|s| s.index()).collect(),
        })
        .collect()
}

/// Sequential table over signs (index 0 = `+1`) for observables measured at
/// nondecreasing times under the given policy.
pub fn sign_table_at(
    rho: &DensityOperator,
    h: &Hamiltonian,
    times: &[f64],
    observables: &[&DichotomicObservable],
    policy: Policy,
) -> Result<HistoryTable> {
    if times.len() != observables.len() || times.is_empty() {
        return Err(Error::Arity {
            expected: format!("{} observables", times.len()),
            found: observables.len(),
        });
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidSchedule("times must be nondecreasing".into()));
    }
    for q in observables {
        check_observable(rho, h, q)?;
    }
    let layers = measured_layers(h, times, observables, policy)?;
    let table = sequential_from_operators(rho.matrix(), &layers);
    Ok(table.regroup(&sign_maps(observables, policy), vec![2; times.len()]))
}

/// Quasi-probability over signs, `Re Tr(P_{s_k}(t_k)…P_{s_1}(t_1) ρ)`.
pub fn quasi_sign_table_at(
    rho: &DensityOperator,
    h: &Hamiltonian,
    times: &[f64],
    observables: &[&DichotomicObservable],
) -> Result<HistoryTable> {
    for q in observables {
        check_observable(rho, h, q)?;
    }
    let layers = measured_layers(h, times, observables, Policy::Luders)?;
    Ok(quasi_from_operators(rho.matrix(), &layers))
}

/// `Σ_s (Π_{k∈axes} s_k) t(s)` for a sign-indexed table.
pub fn moment(table: &HistoryTable, axes: &[usize]) -> f64 {
    table
        .iter()
        .map(|(idx, v)| {
            let sign: f64 = axes.iter().map(|&a| Sign::from_index(idx[a]).value()).product();
            sign * v
        })
        .sum()
}

/// First moments, correlators and dressed moments of dichotomic observables
/// at two or three times.
///
/// `pair` holds correlators of each time pair measured on its own under the
/// policy; `pair_quasi` holds the same moments taken from the
/// quasi-probability (the symmetrized operator correlator). Under the Lüders
/// policy the two coincide.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorSet {
    pub policy: Policy,
    pub means: Vec<f64>,
    pub pair: Vec<f64>,
    pub pair_quasi: Vec<f64>,
    /// `Σ s₁s₂s₃ q(s₁,s₂,s₃)`.
    pub triple: Option<f64>,
    /// `Σ s₁s₂s₃ p₁₂₃(s₁,s₂,s₃)`; differs from `triple` in general.
    pub triple_sequential: Option<f64>,
    /// `⟨Q₂⟩` with an earlier measurement at `t₁` summed out.
    pub q2_given_1: f64,
    pub q3_given_12: Option<f64>,
    pub c23_given_1: Option<f64>,
    pub c13_given_2: Option<f64>,
}

fn sign(i: usize) -> f64 {
    Sign::from_index(i).value()
}

impl CorrelatorSet {
    pub fn times(&self) -> usize {
        self.means.len()
    }

    pub fn c12(&self) -> f64 {
        self.pair[0]
    }

    pub fn c23(&self) -> Option<f64> {
        self.pair.get(1).copied()
    }

    pub fn c13(&self) -> Option<f64> {
        self.pair.get(2).copied()
    }

    /// `q(s₁,s₂) = ¼(1 + s₁⟨Q₁⟩ + s₂⟨Q₂⟩ + s₁s₂C₁₂)` for the first two times.
    pub fn quasi_pair_from_moments(&self) -> HistoryTable {
        let mut t = HistoryTable::zeros(vec![2, 2]);
        for a in 0..2 {
            for b in 0..2 {
                let (s1, s2) = (sign(a), sign(b));
                let v = 1.0 + s1 * self.means[0] + s2 * self.means[1] + s1 * s2 * self.pair_quasi[0];
                t.set(&[a, b], v / 4.0);
            }
        }
        t
    }

    /// `p₁₂(s₁,s₂) = ¼(1 + s₁⟨Q₁⟩ + s₂⟨Q₂^{(1)}⟩ + s₁s₂C₁₂)`.
    pub fn sequential_pair_from_moments(&self) -> HistoryTable {
        let mut t = HistoryTable::zeros(vec![2, 2]);
        for a in 0..2 {
            for b in 0..2 {
                let (s1, s2) = (sign(a), sign(b));
                let v = 1.0 + s1 * self.means[0] + s2 * self.q2_given_1 + s1 * s2 * self.pair[0];
                t.set(&[a, b], v / 4.0);
            }
        }
        t
    }

    /// Three-time quasi-probability rebuilt from its moment expansion.
    pub fn quasi_triple_from_moments(&self) -> Option<HistoryTable> {
        let d = self.triple?;
        let c = &self.pair_quasi;
        let m = &self.means;
        Some(triple_expansion(|s1, s2, s3| {
            1.0 + s1 * m[0] + s2 * m[1] + s3 * m[2]
                + s1 * s2 * c[0]
                + s2 * s3 * c[1]
                + s1 * s3 * c[2]
                + s1 * s2 * s3 * d
        }))
    }

    /// Three-time sequential table rebuilt from dressed moments.
    pub fn sequential_triple_from_moments(&self) -> Option<HistoryTable> {
        let d = self.triple_sequential?;
        let (q3, c23, c13) = (self.q3_given_12?, self.c23_given_1?, self.c13_given_2?);
        Some(triple_expansion(|s1, s2, s3| {
            1.0 + s1 * self.means[0]
                + s2 * self.q2_given_1
                + s3 * q3
                + s1 * s2 * self.pair[0]
                + s2 * s3 * c23
                + s1 * s3 * c13
                + s1 * s2 * s3 * d
        }))
    }

    /// `1 + C₁₂ + C₁₃ + C₂₃` from the quasi-probability moments.
    pub fn l1(&self) -> Option<f64> {
        (self.pair_quasi.len() == 3).then(|| 1.0 + self.pair_quasi.iter().sum::<f64>())
    }

    /// Right-hand side of the sequential split of `L₁`:
    /// `Σ[1+s₁s₂+s₁s₃+s₂s₃]p₁₂₃ + (C₂₃ − C₂₃^{(1)}) + (C₁₃ − C₁₃^{(2)})`.
    pub fn l1_sequential_split(&self, p123: &HistoryTable) -> Option<f64> {
        let (c23, c13) = (*self.pair_quasi.get(1)?, *self.pair_quasi.get(2)?);
        let weighted: f64 = p123
            .iter()
            .map(|(i, v)| {
                let (s1, s2, s3) = (sign(i[0]), sign(i[1]), sign(i[2]));
                (1.0 + s1 * s2 + s1 * s3 + s2 * s3) * v
            })
            .sum();
        Some(weighted + (c23 - self.c23_given_1?) + (c13 - self.c13_given_2?))
    }
}

fn triple_expansion(f: impl Fn(f64, f64, f64) -> f64) -> HistoryTable {
    let mut t = HistoryTable::zeros(vec![2, 2, 2]);
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                t.set(&[a, b, c], f(sign(a), sign(b), sign(c)) / 8.0);
            }
        }
    }
    t
}

/// Moments of sequential and quasi tables for one dichotomic observable per time.
pub fn dressed_moments(
    rho: &DensityOperator,
    h: &Hamiltonian,
    schedule: &Schedule,
    observables: &[DichotomicObservable],
    policy: Policy,
) -> Result<CorrelatorSet> {
    let k = schedule.len();
    if !(2..=3).contains(&k) {
        return Err(Error::Arity {
            expected: "2 or 3 times".into(),
            found: k,
        });
    }
    if observables.len() != k {
        return Err(Error::Arity {
            expected: format!("{k} observables"),
            found: observables.len(),
        });
    }
    let obs: Vec<&DichotomicObservable> = observables.iter().collect();
    let times = schedule.times();
    let means = (0..k)
        .map(|i| {
            let q = heisenberg_evolve(obs[i].operator(), h, times[i])?;
            Ok(rho.expectation(&q).re)
        })
        .collect::<Result<Vec<_>>>()?;
    let pairs: Vec<(usize, usize)> = PAIRS.iter().copied().filter(|&(_, j)| j < k).collect();
    let mut pair = Vec::new();
    let mut pair_quasi = Vec::new();
    for &(i, j) in &pairs {
        let ts = [times[i], times[j]];
        let os = [obs[i], obs[j]];
        pair.push(moment(&sign_table_at(rho, h, &ts, &os, policy)?, &[0, 1]));
        pair_quasi.push(moment(&quasi_sign_table_at(rho, h, &ts, &os)?, &[0, 1]));
    }
    let p12 = sign_table_at(rho, h, &times[..2], &obs[..2], policy)?;
    let q2_given_1 = moment(&p12, &[1]);
    let mut set = CorrelatorSet {
        policy,
        means,
        pair,
        pair_quasi,
        triple: None,
        triple_sequential: None,
        q2_given_1,
        q3_given_12: None,
        c23_given_1: None,
        c13_given_2: None,
    };
    if k == 3 {
        let p123 = sign_table_at(rho, h, times, &obs, policy)?;
        let q123 = quasi_sign_table_at(rho, h, times, &obs)?;
        set.triple = Some(moment(&q123, &[0, 1, 2]));
        set.triple_sequential = Some(moment(&p123, &[0, 1, 2]));
        set.q3_given_12 = Some(moment(&p123, &[2]));
        set.c23_given_1 = Some(moment(&p123, &[1, 2]));
        set.c13_given_2 = Some(moment(&p123, &[0, 2]));
    }
    Ok(set)
}

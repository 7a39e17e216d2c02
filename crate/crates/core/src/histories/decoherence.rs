use num_complex::Complex64;

use super::probabilities::{
    check_dims, class_operators, evolved_projectors, history_count, shape_of, trace_with_adjoint,
    MAX_HISTORIES,
};
use super::table::{flatten, HistoryString, HistoryTable};
use crate::error::{Error, Result};
use crate::qcore::{
    max_abs, DensityOperator, DichotomicObservable, Hamiltonian, ProjectiveDecomposition, Schedule,
};

/// Full decoherence functional `D(α, α′) = Tr(C_α ρ C_α′†)` over ordered
/// history pairs, plus the undisturbed outcome distribution at the final time.
#[derive(Debug, Clone)]
pub struct DecoherenceRecord {
    schedule: Schedule,
    decompositions: Vec<ProjectiveDecomposition>,
    shape: Vec<usize>,
    values: Vec<Complex64>,
    final_undisturbed: Vec<f64>,
}

/// Build the full record. Refuses more than [`MAX_HISTORIES`] histories.
pub fn decoherence_functional(
    rho: &DensityOperator,
    schedule: &Schedule,
    decs: &[ProjectiveDecomposition],
    h: &Hamiltonian,
) -> Result<DecoherenceRecord> {
    if decs.len() != schedule.len() {
        return Err(Error::Arity {
            expected: format!("{} decompositions", schedule.len()),
            found: decs.len(),
        });
    }
    check_dims(rho, decs, h)?;
    let shape = shape_of(decs);
    let histories = history_count(&shape);
    if histories > MAX_HISTORIES {
        return Err(Error::TooLarge {
            histories,
            limit: MAX_HISTORIES,
        });
    }
    let evolved = evolved_projectors(schedule, decs, h)?;
    let ops = class_operators(&evolved);
    let with_rho: Vec<_> = ops.iter().map(|c| c * rho.matrix()).collect();
    let mut values = vec![Complex64::new(0.0, 0.0); histories * histories];
    for a in 0..histories {
        for b in a..histories {
            let d = trace_with_adjoint(&with_rho[a], &ops[b]);
            values[a * histories + b] = d;
            values[b * histories + a] = d.conj();
        }
    }
    let last = evolved.last().expect("schedule is nonempty");
    let final_undisturbed = last
        .iter()
        .map(|e| rho.expectation(e).re)
        .collect();
    Ok(DecoherenceRecord {
        schedule: schedule.clone(),
        decompositions: decs.to_vec(),
        shape,
        values,
        final_undisturbed,
    })
}

impl DecoherenceRecord {
    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn decompositions(&self) -> &[ProjectiveDecomposition] {
        &self.decompositions
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn arity(&self) -> usize {
        self.shape.len()
    }

    pub fn history_count(&self) -> usize {
        history_count(&self.shape)
    }

    pub fn histories(&self) -> Vec<HistoryString> {
        HistoryString::all(&self.shape)
    }

    pub fn get_flat(&self, a: usize, b: usize) -> Complex64 {
        self.values[a * self.history_count() + b]
    }

    pub fn get(&self, a: &[usize], b: &[usize]) -> Complex64 {
        self.get_flat(flatten(&self.shape, a), flatten(&self.shape, b))
    }

    pub fn d(&self, a: &HistoryString, b: &HistoryString) -> Complex64 {
        self.get(&a.outcomes, &b.outcomes)
    }

    /// Diagonal entries: sequential-measurement probabilities.
    pub fn sequential_table(&self) -> HistoryTable {
        let n = self.history_count();
        let values = (0..n).map(|a| self.get_flat(a, a).re).collect();
        HistoryTable::new(self.shape.clone(), values).expect("record shape")
    }

    /// Row sums `Σ_α′ Re D(α, α′) = Re Tr(C_α ρ)`.
    pub fn quasi_table(&self) -> HistoryTable {
        let n = self.history_count();
        let values = (0..n)
            .map(|a| (0..n).map(|b| self.get_flat(a, b).re).sum())
            .collect();
        HistoryTable::new(self.shape.clone(), values).expect("record shape")
    }

    /// `Re D(α, ᾱ)`: interference of each history with its negation.
    pub fn negation_interference(&self) -> HistoryTable {
        let n = self.history_count();
        let values = (0..n)
            .map(|a| (0..n).filter(|&b| b != a).map(|b| self.get_flat(a, b).re).sum())
            .collect();
        HistoryTable::new(self.shape.clone(), values).expect("record shape")
    }

    /// Outcome distribution at the final time with no earlier measurement.
    pub fn final_undisturbed(&self) -> &[f64] {
        &self.final_undisturbed
    }

    /// Largest `|D(α,α′) − conj D(α′,α)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.history_count();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                worst = worst.max((self.get_flat(a, b) - self.get_flat(b, a).conj()).norm());
            }
        }
        worst
    }

    pub fn total(&self) -> Complex64 {
        self.values.iter().sum()
    }

    /// Record with the first-time outcomes regrouped by a dichotomic
    /// observable: `D(s₁,…|s₁′,…) = Σ c_{s₁n₁} c_{s₁′n₁′} D(n₁,…|n₁′,…)`.
    pub fn coarse_first(&self, q: &DichotomicObservable) -> Result<DecoherenceRecord> {
        let first = &self.decompositions[0];
        let same = q.decomposition().len() == first.len()
            && q
                .decomposition()
                .projectors()
                .iter()
                .zip(first.projectors())
                .all(|(a, b)| max_abs(&(a - b)) <= 1e-12);
        if !same {
            return Err(Error::InvalidDecomposition(
                "observable is not built on the first-time decomposition".into(),
            ));
        }
        let mut shape = self.shape.clone();
        shape[0] = 2;
        let new_count = history_count(&shape);
        let old = self.history_count();
        let map_first = |flat: usize| -> usize {
            let rest: usize = self.shape[1..].iter().product();
            let n1 = flat / rest;
            q.signs()[n1].index() * rest + flat % rest
        };
        let mut values = vec![Complex64::new(0.0, 0.0); new_count * new_count];
        for a in 0..old {
            let na = map_first(a);
            for b in 0..old {
                values[na * new_count + map_first(b)] += self.get_flat(a, b);
            }
        }
        let mut decompositions = self.decompositions.clone();
        decompositions[0] = q.luders_decomposition();
        Ok(DecoherenceRecord {
            schedule: self.schedule.clone(),
            decompositions,
            shape,
            values,
            final_undisturbed: self.final_undisturbed.clone(),
        })
    }
}

/// Two-time interference terms `I_{n₁n₁′}(n₂) = Re D(n₁,n₂|n₁′,n₂)` for `n₁ < n₁′`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceTable {
    first: usize,
    second: usize,
    entries: Vec<f64>,
}

impl InterferenceTable {
    fn pair_index(&self, a: usize, b: usize) -> usize {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        // Pairs enumerated (0,1),(0,2),…,(1,2),…
        a * (2 * self.first - a - 1) / 2 + (b - a - 1)
    }

    pub fn first_outcomes(&self) -> usize {
        self.first
    }

    pub fn second_outcomes(&self) -> usize {
        self.second
    }

    /// `I_{n₁n₁′}(n₂)`, symmetric in the first pair. Panics when `n₁ = n₁′`.
    pub fn get(&self, n1: usize, n1p: usize, n2: usize) -> f64 {
        assert_ne!(n1, n1p, "interference needs distinct first outcomes");
        self.entries[self.pair_index(n1, n1p) * self.second + n2]
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.first {
            for b in a + 1..self.first {
                out.push((a, b));
            }
        }
        out
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// `N₁(N₁−1)/2 · (N₂−1)`; equals `N(N−1)²/2` when both times have `N` outcomes.
    pub fn independent_count(&self) -> usize {
        self.first * (self.first - 1) / 2 * (self.second - 1)
    }

    /// `Σ_{n₂} I_{n₁n₁′}(n₂)` for each pair; all zero for a valid record.
    pub fn pair_sums(&self) -> Vec<f64> {
        self.entries
            .chunks(self.second)
            .map(|c| c.iter().sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

fn ensure_two_time(record: &DecoherenceRecord) -> Result<()> {
    if record.arity() != 2 {
        return Err(Error::Arity {
            expected: "two-time record".into(),
            found: record.arity(),
        });
    }
    Ok(())
}

pub fn interference_terms(record: &DecoherenceRecord) -> Result<InterferenceTable> {
    ensure_two_time(record)?;
    let (first, second) = (record.shape[0], record.shape[1]);
    let mut table = InterferenceTable {
        first,
        second,
        entries: Vec::new(),
    };
    for (a, b) in table.pairs() {
        for n2 in 0..second {
            table.entries.push(record.get(&[a, n2], &[b, n2]).re);
        }
    }
    Ok(table)
}

/// `p₂(n₂) − Σ_{first} p₁₂(·, n₂)`, with the first measurement optionally
/// regrouped by a dichotomic observable.
pub fn coherence_witness(
    record: &DecoherenceRecord,
    coarse: Option<&DichotomicObservable>,
) -> Result<Vec<f64>> {
    ensure_two_time(record)?;
    let rec = match coarse {
        Some(q) => record.coarse_first(q)?,
        None => record.clone(),
    };
    let p12 = rec.sequential_table();
    let disturbed = p12.marginal_vec(1)?;
    Ok(rec
        .final_undisturbed
        .iter()
        .zip(disturbed)
        .map(|(p2, d)| p2 - d)
        .collect())
}

/// `2 Σ I_{n₁n₁′}(n₂)` over pairs the coarse graining separates (all pairs without one).
pub fn witness_from_interference(
    table: &InterferenceTable,
    coarse: Option<&DichotomicObservable>,
) -> Vec<f64> {
    (0..table.second)
        .map(|n2| {
            table
                .pairs()
                .into_iter()
                .filter(|&(a, b)| coarse.is_none_or(|q| q.signs()[a] != q.signs()[b]))
                .map(|(a, b)| 2.0 * table.get(a, b, n2))
                .sum()
        })
        .collect()
}

use std::fmt;

use serde::{Deserialize, Serialize};

use super::hamiltonian::{heisenberg_evolve, Hamiltonian};
use super::matrix::{c64, ensure_dim, ensure_square, hermitian_deviation, identity, max_abs, CMatrix};
use crate::error::{Error, Result};
use crate::settings::structure_tol;

/// Outcome of a dichotomic measurement. Index 0 is `+1`, index 1 is `-1`
/// wherever sign-valued tables are stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    pub fn from_index(i: usize) -> Self {
        if i == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn from_i8(v: i8) -> Result<Self> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(Error::InvalidSigns(format!("sign must be ±1, got {other}"))),
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Ordered list of mutually orthogonal projectors `E_n` summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveDecomposition {
    dim: usize,
    projectors: Vec<CMatrix>,
}

impl ProjectiveDecomposition {
    pub fn new(projectors: Vec<CMatrix>) -> Result<Self> {
        let first = projectors
            .first()
            .ok_or_else(|| Error::InvalidDecomposition("no projectors".into()))?;
        let dim = ensure_square(first)?;
        if projectors.len() > dim {
            return Err(Error::InvalidDecomposition(format!(
                "{} outcomes exceed dimension {dim}",
                projectors.len()
            )));
        }
        let tol = structure_tol();
        let mut sum = CMatrix::zeros(dim, dim);
        for (n, e) in projectors.iter().enumerate() {
            ensure_dim(e, dim)?;
            let dev = hermitian_deviation(e);
            if dev > tol {
                return Err(Error::InvalidDecomposition(format!(
                    "projector {n} not Hermitian (deviation {dev:.3e})"
                )));
            }
            let idem = max_abs(&(e * e - e));
            if idem > tol {
                return Err(Error::InvalidDecomposition(format!(
                    "projector {n} not idempotent (deviation {idem:.3e})"
                )));
            }
            if max_abs(e) <= tol {
                return Err(Error::InvalidDecomposition(format!("projector {n} is zero")));
            }
            for (m, f) in projectors.iter().enumerate().skip(n + 1) {
                let overlap = max_abs(&(e * f));
                if overlap > tol {
                    return Err(Error::InvalidDecomposition(format!(
                        "projectors {n} and {m} not orthogonal (overlap {overlap:.3e})"
                    )));
                }
            }
            sum += e;
        }
        let completeness = max_abs(&(sum - identity(dim)));
        if completeness > tol {
            return Err(Error::InvalidDecomposition(format!(
                "projectors do not sum to identity (deviation {completeness:.3e})"
            )));
        }
        Ok(Self { dim, projectors })
    }

    /// Rank-1 projectors onto the computational basis.
    pub fn fine(dim: usize) -> Self {
        build_decomposition(dim, &vec![1; dim]).expect("unit ranks always sum to dim")
    }

    /// `U E_n U†` for a unitary `U`.
    pub fn conjugated(&self, unitary: &CMatrix) -> Result<Self> {
        ensure_dim(unitary, self.dim)?;
        let unitarity = max_abs(&(unitary * unitary.adjoint() - identity(self.dim)));
        if unitarity > 1e3 * structure_tol() {
            return Err(Error::InvalidDecomposition(format!(
                "conjugating matrix not unitary (deviation {unitarity:.3e})"
            )));
        }
        let projectors = self
            .projectors
            .iter()
            .map(|e| {
                let p = unitary * e * unitary.adjoint();
                (&p + p.adjoint()) * c64(0.5, 0.0)
            })
            .collect();
        Self::new(projectors)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of outcomes.
    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn projectors(&self) -> &[CMatrix] {
        &self.projectors
    }

    pub fn projector(&self, n: usize) -> &CMatrix {
        &self.projectors[n]
    }

    /// `Ē_n = 1 - E_n`.
    pub fn negation(&self, n: usize) -> CMatrix {
        identity(self.dim) - &self.projectors[n]
    }

    /// Heisenberg-picture projectors `E_n(t)`.
    pub fn evolved(&self, h: &Hamiltonian, t: f64) -> Result<Vec<CMatrix>> {
        self.projectors
            .iter()
            .map(|e| heisenberg_evolve(e, h, t))
            .collect()
    }
}

/// Projectors onto consecutive basis blocks of the given ranks.
pub fn build_decomposition(dim: usize, ranks: &[usize]) -> Result<ProjectiveDecomposition> {
    if ranks.is_empty() {
        return Err(Error::InvalidRanks("empty rank list".into()));
    }
    if ranks.contains(&0) {
        return Err(Error::InvalidRanks("zero rank".into()));
    }
    let total: usize = ranks.iter().sum();
    if total != dim {
        return Err(Error::InvalidRanks(format!(
            "ranks sum to {total}, dimension is {dim}"
        )));
    }
    let mut start = 0;
    let projectors = ranks
        .iter()
        .map(|&r| {
            let mut e = CMatrix::zeros(dim, dim);
            for k in start..start + r {
                e[(k, k)] = c64(1.0, 0.0);
            }
            start += r;
            e
        })
        .collect();
    ProjectiveDecomposition::new(projectors)
}

/// Dichotomic variable `Q = Σ ε(n) E_n` over a projective decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct DichotomicObservable {
    decomposition: ProjectiveDecomposition,
    signs: Vec<Sign>,
    operator: CMatrix,
}

impl DichotomicObservable {
    /// `Q(n) = E_n - Ē_n`: `+1` on outcome `n` only.
    pub fn single_plus(dec: &ProjectiveDecomposition, n: usize) -> Result<Self> {
        if n >= dec.len() {
            return Err(Error::InvalidSigns(format!(
                "outcome {n} out of range for {} outcomes",
                dec.len()
            )));
        }
        let signs: Vec<i8> = (0..dec.len()).map(|k| if k == n { 1 } else { -1 }).collect();
        make_dichotomic(dec, &signs)
    }

    /// The `N` single-`+1` variables `Q(1), …, Q(N)`.
    pub fn single_plus_family(dec: &ProjectiveDecomposition) -> Result<Vec<Self>> {
        (0..dec.len()).map(|n| Self::single_plus(dec, n)).collect()
    }

    pub fn decomposition(&self) -> &ProjectiveDecomposition {
        &self.decomposition
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    /// `ε(n)` as a float.
    pub fn epsilon(&self, n: usize) -> f64 {
        self.signs[n].value()
    }

    pub fn operator(&self) -> &CMatrix {
        &self.operator
    }

    /// `c_{sn}`: 1 when `ε(n) = s`, else 0.
    pub fn coefficient(&self, s: Sign, n: usize) -> f64 {
        if self.signs[n] == s {
            1.0
        } else {
            0.0
        }
    }

    /// Lüders projector `P_s = (1 + sQ)/2 = Σ_n c_{sn} E_n`.
    pub fn eigenprojector(&self, s: Sign) -> CMatrix {
        let mut p = CMatrix::zeros(self.decomposition.dim, self.decomposition.dim);
        for (n, e) in self.decomposition.projectors.iter().enumerate() {
            if self.signs[n] == s {
                p += e;
            }
        }
        p
    }

    /// Lüders measurement of `Q` as a two-outcome decomposition `(P_+, P_-)`.
    pub fn luders_decomposition(&self) -> ProjectiveDecomposition {
        ProjectiveDecomposition {
            dim: self.decomposition.dim,
            projectors: vec![self.eigenprojector(Sign::Plus), self.eigenprojector(Sign::Minus)],
        }
    }

    pub fn label(&self) -> String {
        self.signs.iter().map(|s| s.to_string()).collect()
    }
}

/// Build `Q = Σ ε(n) E_n`; needs at least one `+1` and one `-1`.
pub fn make_dichotomic(dec: &ProjectiveDecomposition, signs: &[i8]) -> Result<DichotomicObservable> {
    if signs.len() != dec.len() {
        return Err(Error::InvalidSigns(format!(
            "{} signs for {} outcomes",
            signs.len(),
            dec.len()
        )));
    }
    let signs = signs
        .iter()
        .map(|&v| Sign::from_i8(v))
        .collect::<Result<Vec<_>>>()?;
    if !signs.contains(&Sign::Plus) || !signs.contains(&Sign::Minus) {
        return Err(Error::InvalidSigns(
            "need at least one +1 and one -1".into(),
        ));
    }
    let mut operator = CMatrix::zeros(dec.dim, dec.dim);
    for (e, s) in dec.projectors.iter().zip(&signs) {
        operator += e * c64(s.value(), 0.0);
    }
    Ok(DichotomicObservable {
        decomposition: dec.clone(),
        signs,
        operator,
    })
}

/// `(P_+, P_-)` with `P_s = Σ_n c_{sn} E_n`.
pub fn coarse_grain(dec: &ProjectiveDecomposition, signs: &[i8]) -> Result<(CMatrix, CMatrix)> {
    let q = make_dichotomic(dec, signs)?;
    Ok((q.eigenprojector(Sign::Plus), q.eigenprojector(Sign::Minus)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fine_decomposition_sums_to_identity() {
        let dec = build_decomposition(3, &[1, 1, 1]).unwrap();
        assert_eq!(dec.len(), 3);
        let sum = dec.projectors().iter().fold(CMatrix::zeros(3, 3), |a, e| a + e);
        assert!(max_abs(&(sum - identity(3))) < 1e-15);
    }

    #[test]
    fn coarse_ranks() {
        let dec = build_decomposition(4, &[2, 2]).unwrap();
        assert_eq!(dec.len(), 2);
        assert_eq!(dec.projector(0).trace().re, 2.0);
        assert!(matches!(build_decomposition(4, &[2, 1]), Err(Error::InvalidRanks(_))));
        assert!(matches!(build_decomposition(2, &[2, 0]), Err(Error::InvalidRanks(_))));
    }

    #[test]
    fn single_plus_is_e_minus_ebar() {
        let dec = ProjectiveDecomposition::fine(3);
        let q = make_dichotomic(&dec, &[1, -1, -1]).unwrap();
        let expected = dec.projector(0) - dec.negation(0);
        assert!(max_abs(&(q.operator() - expected)) < 1e-15);
        assert!(max_abs(&(q.operator() * q.operator() - identity(3))) < 1e-15);
    }

    #[test]
    fn qubit_pair_is_antipodal() {
        let dec = ProjectiveDecomposition::fine(2);
        let q1 = DichotomicObservable::single_plus(&dec, 0).unwrap();
        let q2 = DichotomicObservable::single_plus(&dec, 1).unwrap();
        assert!(max_abs(&(q1.operator() + q2.operator())) < 1e-15);
    }

    #[test]
    fn same_sign_lists_rejected() {
        let dec = ProjectiveDecomposition::fine(3);
        assert!(matches!(make_dichotomic(&dec, &[1, 1, 1]), Err(Error::InvalidSigns(_))));
        assert!(matches!(make_dichotomic(&dec, &[-1, -1, -1]), Err(Error::InvalidSigns(_))));
        assert!(matches!(make_dichotomic(&dec, &[1, 2, -1]), Err(Error::InvalidSigns(_))));
    }

    #[test]
    fn coarse_graining_coefficients() {
        let dec = ProjectiveDecomposition::fine(3);
        let q = make_dichotomic(&dec, &[1, -1, -1]).unwrap();
        assert_eq!(q.coefficient(Sign::Plus, 0), 1.0);
        assert_eq!(q.coefficient(Sign::Minus, 1), 1.0);
        assert_eq!(q.coefficient(Sign::Minus, 2), 1.0);
        assert_eq!(q.coefficient(Sign::Plus, 1), 0.0);
        assert_eq!(q.coefficient(Sign::Minus, 0), 0.0);
        let (pp, pm) = coarse_grain(&dec, &[1, -1, -1]).unwrap();
        assert!(max_abs(&(pp + pm - identity(3))) < 1e-15);
    }

    #[test]
    fn two_block_dichotomic_on_four_levels() {
        let dec = ProjectiveDecomposition::fine(4);
        let (pp, _) = coarse_grain(&dec, &[1, 1, -1, -1]).unwrap();
        assert!(max_abs(&(pp - (dec.projector(0) + dec.projector(1)))) < 1e-15);
    }

    #[test]
    fn sum_of_single_plus_family() {
        for n in 2..6 {
            let dec = ProjectiveDecomposition::fine(n);
            let fam = DichotomicObservable::single_plus_family(&dec).unwrap();
            let sum = fam.iter().fold(CMatrix::zeros(n, n), |a, q| a + q.operator());
            let expected = identity(n) * c64(2.0 - n as f64, 0.0);
            assert!(max_abs(&(sum - expected)) < 1e-14);
        }
    }

    #[test]
    fn rejects_non_orthogonal() {
        let dec = ProjectiveDecomposition::fine(2);
        let mut ps = dec.projectors().to_vec();
        ps[1] = ps[0].clone();
        assert!(ProjectiveDecomposition::new(ps).is_err());
    }
}

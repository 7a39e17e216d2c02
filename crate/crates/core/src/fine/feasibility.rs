use nalgebra::{DMatrix, DVector};

use super::marginals::MarginalSet;
use super::simplex::phase_one;
use crate::error::{Error, Result};
use crate::histories::HistoryTable;
use crate::settings::FEASIBILITY_BAND;

/// Linear system `A x = b` whose nonnegative solutions are joint
/// distributions matching every pair table.
#[derive(Debug, Clone)]
pub struct JointSystem {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// Human-readable meaning of each row, e.g. `p(1,3)[2,1]`.
    pub labels: Vec<String>,
    pub shape: Vec<usize>,
}

impl JointSystem {
    pub fn build(m: &MarginalSet) -> Self {
        let shape = m.outcomes().to_vec();
        let cols: usize = shape.iter().product();
        let joint_index = |flat: usize| -> Vec<usize> {
            let mut out = vec![0; shape.len()];
            let mut f = flat;
            for k in (0..shape.len()).rev() {
                out[k] = f % shape[k];
                f /= shape[k];
            }
            out
        };
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut labels = Vec::new();
        // Normalization first.
        a.extend(std::iter::repeat_n(1.0, cols));
        b.push(1.0);
        labels.push("sum".to_string());
        for ((i, j), t) in m.pairs() {
            for (idx, v) in t.iter() {
                for x in 0..cols {
                    let jx = joint_index(x);
                    a.push(if jx[*i] == idx[0] && jx[*j] == idx[1] { 1.0 } else { 0.0 });
                }
                b.push(v);
                labels.push(format!("p({},{})[{},{}]", i + 1, j + 1, idx[0] + 1, idx[1] + 1));
            }
        }
        Self {
            rows: b.len(),
            cols,
            a,
            b,
            labels,
            shape: shape.clone(),
        }
    }

    pub fn residual(&self, x: &[f64]) -> f64 {
        (0..self.rows)
            .map(|i| {
                let ax: f64 = (0..self.cols).map(|j| self.a[i * self.cols + j] * x[j]).sum();
                (ax - self.b[i]).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Multipliers `y` with `yᵀA ≤ 0` and `yᵀb > 0`: no nonnegative joint can
/// reproduce the combination `Σ y_i (row i)` of input probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct FarkasCertificate {
    pub multipliers: Vec<f64>,
    pub labels: Vec<String>,
    /// `yᵀb`.
    pub gap: f64,
}

impl FarkasCertificate {
    /// Re-check `yᵀA ≤ tol` column-wise and `yᵀb > tol` against a system.
    pub fn verify(&self, sys: &JointSystem, tol: f64) -> bool {
        let yb: f64 = self.multipliers.iter().zip(&sys.b).map(|(y, b)| y * b).sum();
        let cols_ok = (0..sys.cols).all(|j| {
            let ya: f64 = (0..sys.rows)
                .map(|i| self.multipliers[i] * sys.a[i * sys.cols + j])
                .sum();
            ya <= tol
        });
        cols_ok && yb > tol
    }

    /// Nonzero multipliers with their row labels, largest magnitude first.
    pub fn support(&self) -> Vec<(String, f64)> {
        let mut v: Vec<(String, f64)> = self
            .labels
            .iter()
            .zip(&self.multipliers)
            .filter(|(_, y)| y.abs() > 1e-12)
            .map(|(l, y)| (l.clone(), *y))
            .collect();
        v.sort_by(|a, b| b.1.abs().total_cmp(&a.1.abs()).then(a.0.cmp(&b.0)));
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityResult {
    pub feasible: bool,
    pub joint: Option<HistoryTable>,
    pub certificate: Option<FarkasCertificate>,
    /// Phase-1 optimum (total constraint violation of the best point).
    pub phase_one_objective: f64,
    /// Max |A x − b| of the returned point.
    pub residual: f64,
}

/// Decide whether a nonnegative joint distribution reproduces every pair table.
pub fn joint_feasibility(m: &MarginalSet) -> Result<FeasibilityResult> {
    let sys = JointSystem::build(m);
    let res = phase_one(&sys.a, &sys.b, sys.rows, sys.cols);
    let residual = sys.residual(&res.x);
    let feasible = residual <= FEASIBILITY_BAND;
    if feasible {
        let joint = HistoryTable::new(sys.shape.clone(), res.x)?;
        Ok(FeasibilityResult {
            feasible,
            joint: Some(joint),
            certificate: None,
            phase_one_objective: res.objective,
            residual,
        })
    } else {
        Ok(FeasibilityResult {
            feasible,
            joint: None,
            certificate: Some(FarkasCertificate {
                multipliers: res.y,
                labels: sys.labels.clone(),
                gap: res.objective,
            }),
            phase_one_objective: res.objective,
            residual,
        })
    }
}

/// Largest joint (variable count) handled by [`vertex_feasibility`].
pub const VERTEX_ORACLE_MAX_COLS: usize = 16;

/// Independent oracle: enumerate every basic solution of the equality
/// system and report whether one is nonnegative.
pub fn vertex_feasibility(m: &MarginalSet) -> Result<bool> {
    let sys = JointSystem::build(m);
    if sys.cols > VERTEX_ORACLE_MAX_COLS {
        return Err(Error::TooLarge {
            histories: sys.cols,
            limit: VERTEX_ORACLE_MAX_COLS,
        });
    }
    let a = DMatrix::from_row_slice(sys.rows, sys.cols, &sys.a);
    let b = DVector::from_vec(sys.b.clone());
    let rank = a.rank(1e-10);
    let mut subset: Vec<usize> = (0..rank).collect();
    loop {
        let cols: Vec<_> = subset.iter().map(|&j| a.column(j).into_owned()).collect();
        let sub = DMatrix::from_columns(&cols);
        if sub.rank(1e-10) == rank {
            let svd = sub.clone().svd(true, true);
            if let Ok(xb) = svd.solve(&b, 1e-12) {
                let resid = (&sub * &xb - &b).amax();
                if resid <= FEASIBILITY_BAND && xb.iter().all(|&v| v >= -1e-12) {
                    return Ok(true);
                }
            }
        }
        if !next_combination(&mut subset, sys.cols) {
            return Ok(false);
        }
    }
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

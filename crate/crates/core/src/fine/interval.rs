use serde::Serialize;

use crate::error::{Error, Result};
use crate::histories::HistoryTable;
use crate::mrconds::ThreeTimeMoments;

/// Admissible range for `⟨Q₁(n₁)Q₂(n₂)Q₃(n₃)⟩` given the means and pair
/// correlators of one outcome tuple. Reported even when empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TripleBoundInterval {
    /// Zero-based `(n₁, n₂, n₃)`.
    pub outcomes: [usize; 3],
    /// `−F(s)` for the four sign vectors with `s₁s₂s₃ = +1`.
    pub lower_bounds: [f64; 4],
    /// `F(s)` for the four sign vectors with `s₁s₂s₃ = −1`.
    pub upper_bounds: [f64; 4],
    pub lower: f64,
    pub upper: f64,
}

/// Sign vectors with product +1, then with product −1.
const EVEN: [[f64; 3]; 4] = [[1., 1., 1.], [1., -1., -1.], [-1., 1., -1.], [-1., -1., 1.]];
const ODD: [[f64; 3]; 4] = [[-1., -1., -1.], [-1., 1., 1.], [1., -1., 1.], [1., 1., -1.]];

/// `F(s) = 1 + Σ s_k⟨Q_k⟩ + Σ s_i s_j ⟨Q_i Q_j⟩`; eight times the probability
/// of sign pattern `s` with the triple correlator left out.
pub fn f_value(means: [f64; 3], corr: [f64; 3], s: [f64; 3]) -> f64 {
    let [a, b, c] = means;
    let [x, y, z] = corr;
    1.0 + s[0] * a + s[1] * b + s[2] * c + s[0] * s[1] * x + s[1] * s[2] * y + s[0] * s[2] * z
}

impl TripleBoundInterval {
    /// `means = (⟨Q₁⟩, ⟨Q₂⟩, ⟨Q₃⟩)`, `corr = (C₁₂, C₂₃, C₁₃)`.
    pub fn from_moments(outcomes: [usize; 3], means: [f64; 3], corr: [f64; 3]) -> Self {
        let lower_bounds = EVEN.map(|s| -f_value(means, corr, s));
        let upper_bounds = ODD.map(|s| f_value(means, corr, s));
        Self {
            outcomes,
            lower: lower_bounds.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            upper: upper_bounds.iter().copied().fold(f64::INFINITY, f64::min),
            lower_bounds,
            upper_bounds,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lower > self.upper
    }

    /// `upper − lower` (negative when empty).
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Midpoint, used as the triple correlator when building a joint.
    pub fn choice(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

fn means_and_corr(tm: &ThreeTimeMoments, n: [usize; 3]) -> Result<([f64; 3], [f64; 3])> {
    let [a, b, c] = tm.outcomes();
    if n[0] >= a || n[1] >= b || n[2] >= c {
        return Err(Error::MissingInput(format!(
            "no moments for outcome tuple ({}, {}, {})",
            n[0] + 1,
            n[1] + 1,
            n[2] + 1
        )));
    }
    let means = [tm.p12.mean_first[n[0]], tm.p12.mean_second[n[1]], tm.p23.mean_second[n[2]]];
    let corr = [
        tm.p12.corr(n[0], n[1]),
        tm.p23.corr(n[1], n[2]),
        tm.p13.corr(n[0], n[2]),
    ];
    Ok((means, corr))
}

pub fn triple_interval(tm: &ThreeTimeMoments, n: [usize; 3]) -> Result<TripleBoundInterval> {
    let (means, corr) = means_and_corr(tm, n)?;
    Ok(TripleBoundInterval::from_moments(n, means, corr))
}

/// Intervals for every outcome tuple, `n₁` slowest.
pub fn triple_intervals(tm: &ThreeTimeMoments) -> Vec<TripleBoundInterval> {
    let [a, b, c] = tm.outcomes();
    let mut out = Vec::with_capacity(a * b * c);
    for n1 in 0..a {
        for n2 in 0..b {
            for n3 in 0..c {
                out.push(triple_interval(tm, [n1, n2, n3]).expect("indices in range"));
            }
        }
    }
    out
}

/// Two-valued three-time joint built from the interval midpoint:
/// `p(s₁,s₂,s₃) = (F(s) + s₁s₂s₃ D) / 8` over outcome 1 (`Q = +1`) and
/// outcome 2 (`Q = −1`). Only defined for two outcomes per time.
pub fn dichotomic_joint(tm: &ThreeTimeMoments) -> Result<(HistoryTable, TripleBoundInterval)> {
    if tm.outcomes() != [2, 2, 2] {
        return Err(Error::Unsupported(
            "interval joint needs two outcomes at every time".into(),
        ));
    }
    let interval = triple_interval(tm, [0, 0, 0])?;
    let (means, corr) = means_and_corr(tm, [0, 0, 0])?;
    let d = interval.choice();
    let mut t = HistoryTable::zeros(vec![2, 2, 2]);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let s = [i, j, k].map(|x| if x == 0 { 1.0 } else { -1.0 });
                t.set(&[i, j, k], (f_value(means, corr, s) + s[0] * s[1] * s[2] * d) / 8.0);
            }
        }
    }
    Ok((t, interval))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_plus_contains_one() {
        let iv = TripleBoundInterval::from_moments([0, 0, 0], [1.0; 3], [1.0; 3]);
        assert!(!iv.is_empty());
        assert!(iv.lower <= 1.0 && 1.0 <= iv.upper);
    }

    #[test]
    fn anticorrelated_triple_is_empty() {
        let iv = TripleBoundInterval::from_moments([0, 0, 0], [0.0; 3], [-1.0; 3]);
        assert!(iv.is_empty());
    }

    #[test]
    fn eight_f_values_sum_to_eight() {
        let m = [0.3, -0.2, 0.1];
        let c = [0.4, -0.5, 0.2];
        let total: f64 = EVEN.iter().chain(ODD.iter()).map(|s| f_value(m, c, *s)).sum();
        assert!((total - 8.0).abs() < 1e-14);
    }
}

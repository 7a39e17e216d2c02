use super::feasibility::joint_feasibility;
use super::interval::dichotomic_joint;
use super::marginals::MarginalSet;
use crate::error::{Error, Result};
use crate::histories::HistoryTable;
use crate::mrconds::ThreeTimeMoments;
use crate::settings::FEASIBILITY_BAND;

/// Denominators at or below this are treated as exact zeros.
pub const ZERO_DENOMINATOR: f64 = 1e-15;
/// Numerators allowed over a zero denominator.
pub const ZERO_NUMERATOR: f64 = 1e-12;
/// Allowed mismatch of the shared `(n₁, n₃)` marginal.
pub const SHARED_MARGINAL_TOL: f64 = 1e-9;

/// `p(n₁,n₂,n₃,n₄) = p(n₁,n₂,n₃) p(n₁,n₃,n₄) / p(n₁,n₃)`.
///
/// `p134` is indexed `(n₁, n₃, n₄)`. Entries whose shared marginal vanishes
/// are set to zero, provided both numerators vanish too.
pub fn fine_ansatz_join(p123: &HistoryTable, p134: &HistoryTable) -> Result<HistoryTable> {
    if p123.arity() != 3 || p134.arity() != 3 {
        return Err(Error::Arity {
            expected: "two three-time tables".into(),
            found: p123.arity().min(p134.arity()),
        });
    }
    let [a, b, c] = [p123.shape()[0], p123.shape()[1], p123.shape()[2]];
    let d = p134.shape()[2];
    if p134.shape()[0] != a || p134.shape()[1] != c {
        return Err(Error::DimensionMismatch {
            expected: a * c,
            found: p134.shape()[0] * p134.shape()[1],
        });
    }
    let p13 = p123.marginal(&[0, 2])?;
    let p13_other = p134.marginal(&[0, 1])?;
    let dev = p13.max_abs_diff(&p13_other);
    if dev > SHARED_MARGINAL_TOL {
        return Err(Error::InconsistentMarginals(format!(
            "shared (1,3) marginal differs by {dev:.3e}"
        )));
    }
    let mut out = HistoryTable::zeros(vec![a, b, c, d]);
    for n1 in 0..a {
        for n3 in 0..c {
            let den = p13.get(&[n1, n3]);
            if den.abs() <= ZERO_DENOMINATOR {
                for n2 in 0..b {
                    let v = p123.get(&[n1, n2, n3]);
                    if v.abs() > ZERO_NUMERATOR {
                        return Err(Error::NonzeroOverZero { numerator: v, at: vec![n1, n2, n3] });
                    }
                }
                for n4 in 0..d {
                    let v = p134.get(&[n1, n3, n4]);
                    if v.abs() > ZERO_NUMERATOR {
                        return Err(Error::NonzeroOverZero { numerator: v, at: vec![n1, n3, n4] });
                    }
                }
                continue;
            }
            for n2 in 0..b {
                let left = p123.get(&[n1, n2, n3]);
                for n4 in 0..d {
                    out.set(&[n1, n2, n3, n4], left * p134.get(&[n1, n3, n4]) / den);
                }
            }
        }
    }
    Ok(out)
}

/// Three-time joint reproducing the pair tables of `tm`, if one exists.
/// Two-valued inputs use the triple-correlator interval construction; the
/// rest go through the feasibility program.
pub fn three_time_joint(tm: &ThreeTimeMoments) -> Result<Option<HistoryTable>> {
    if tm.outcomes() == [2, 2, 2] {
        let (joint, interval) = dichotomic_joint(tm)?;
        if interval.is_empty() || joint.min() < -FEASIBILITY_BAND {
            return Ok(None);
        }
        return Ok(Some(joint));
    }
    let res = joint_feasibility(&MarginalSet::from_three_time_moments(tm)?)?;
    Ok(res.joint)
}

/// Four-time joint for times (1,2,3,4) from the triples (1,2,3) and
/// (1,3,4), glued along their shared (1,3) marginal. `None` when either
/// triple has no joint.
pub fn four_time_joint(t123: &ThreeTimeMoments, t134: &ThreeTimeMoments) -> Result<Option<HistoryTable>> {
    let (Some(p123), Some(p134)) = (three_time_joint(t123)?, three_time_joint(t134)?) else {
        return Ok(None);
    };
    fine_ansatz_join(&p123, &p134).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product(parts: &[&[f64]]) -> HistoryTable {
        let shape: Vec<usize> = parts.iter().map(|p| p.len()).collect();
        let mut t = HistoryTable::zeros(shape.clone());
        for h in crate::histories::HistoryString::all(&shape) {
            let v: f64 = h.outcomes.iter().enumerate().map(|(k, &n)| parts[k][n]).product();
            t.set(&h.outcomes, v);
        }
        t
    }

    #[test]
    fn product_inputs_give_product_output() {
        let (a, b, c, d): (&[f64], &[f64], &[f64], &[f64]) =
            (&[0.2, 0.8], &[0.5, 0.3, 0.2], &[0.6, 0.4], &[0.1, 0.9]);
        let joint = fine_ansatz_join(&product(&[a, b, c]), &product(&[a, c, d])).unwrap();
        assert!(joint.max_abs_diff(&product(&[a, b, c, d])) < 1e-15);
    }

    #[test]
    fn zero_support_entries_are_zero() {
        let a: &[f64] = &[1.0, 0.0];
        let joint = fine_ansatz_join(&product(&[a, a, a]), &product(&[a, a, a])).unwrap();
        assert_eq!(joint.get(&[1, 1, 1, 1]), 0.0);
        assert!((joint.sum() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn nonzero_over_zero_rejected() {
        let mut p123 = HistoryTable::zeros(vec![2, 2, 2]);
        p123.set(&[0, 0, 0], 1.0);
        let mut p134 = p123.clone();
        // Shared marginal at (1,1) is zero in total but not entrywise.
        p123.set(&[1, 0, 1], 1e-6);
        p123.set(&[1, 1, 1], -1e-6);
        p134.set(&[1, 1, 0], 0.0);
        assert!(matches!(
            fine_ansatz_join(&p123, &p134),
            Err(Error::NonzeroOverZero { .. })
        ));
    }
}

use serde::{Deserialize, Serialize};

use super::ids::{ConditionId, Family};
use super::moments::{FourTimeMoments, PairMoments, ThreeTimeMoments};
use super::report::{Bound, ConditionReport};
use crate::histories::Policy;
use crate::settings::{ALGEBRAIC_FLOOR, LUDERS_BOUND, SATISFACTION_TOL};

fn pair_times(pm: &PairMoments) -> Vec<usize> {
    vec![pm.times.0, pm.times.1]
}

/// `1 + ⟨Q_i(n_i)⟩ + ⟨Q_j(n_j)⟩ + ⟨Q_i(n_i)Q_j(n_j)⟩ ≥ 0` for every outcome pair.
/// For a quasi-probability input the left-hand side equals `4 q(n_i, n_j)`.
pub fn lg2_suite(pm: &PairMoments) -> Vec<ConditionReport> {
    lg2_with_signs(pm, [1, 1])
}

/// Two-time suite with `Q_i(n)` and/or `Q_j(n)` replaced by `−Q(n)`.
pub fn lg2_with_signs(pm: &PairMoments, signs: [i8; 2]) -> Vec<ConditionReport> {
    let (s1, s2) = (signs[0] as f64, signs[1] as f64);
    let mut out = Vec::with_capacity(pm.first_outcomes() * pm.second_outcomes());
    for n1 in 0..pm.first_outcomes() {
        for n2 in 0..pm.second_outcomes() {
            let lhs = 1.0
                + s1 * pm.mean_first[n1]
                + s2 * pm.mean_second[n2]
                + s1 * s2 * pm.corr(n1, n2);
            let mut id = ConditionId::new(Family::Lg2Nvalued, pair_times(pm)).outcomes(&[n1, n2]);
            if signs != [1, 1] {
                id = id.signs(&signs);
            }
            out.push(ConditionReport::lower(id, lhs));
        }
    }
    out
}

/// Every sign variant of the two-time suite (`4 N²` reports).
pub fn lg2_sign_variants(pm: &PairMoments) -> Vec<ConditionReport> {
    [[1, 1], [-1, 1], [1, -1], [-1, -1]]
        .into_iter()
        .flat_map(|s| lg2_with_signs(pm, s))
        .collect()
}

/// Standard dichotomic two-time inequalities `1 + s_i⟨Q_i⟩ + s_j⟨Q_j⟩ + s_i s_j C_ij ≥ 0`.
pub fn lg2_dichotomic(
    times: (usize, usize),
    mean_i: f64,
    mean_j: f64,
    c_ij: f64,
    observable: &str,
) -> Vec<ConditionReport> {
    let mut out = Vec::with_capacity(4);
    for s1 in [1i8, -1] {
        for s2 in [1i8, -1] {
            let (a, b) = (s1 as f64, s2 as f64);
            let lhs = 1.0 + a * mean_i + b * mean_j + a * b * c_ij;
            let id = ConditionId::new(Family::Lg2Dichotomic, vec![times.0, times.1])
                .signs(&[s1, s2])
                .observable(observable);
            out.push(ConditionReport::lower(id, lhs));
        }
    }
    out
}

/// Sign patterns (up to a global flip) for three-time inequalities, in the
/// order of the four familiar dichotomic inequalities.
pub const LG3_PATTERNS: [[i8; 3]; 4] = [[1, 1, 1], [1, -1, 1], [1, 1, -1], [-1, 1, 1]];

/// `1 + ⟨Q₁(n₁)Q₂(n₂)⟩ + ⟨Q₂(n₂)Q₃(n₃)⟩ + ⟨Q₁(n₁)Q₃(n₃)⟩ ≥ 0` for every tuple.
pub fn lg3_suite(tm: &ThreeTimeMoments) -> Vec<ConditionReport> {
    lg3_with_signs(tm, [1, 1, 1])
}

/// Three-time suite with `Q_k(n)` replaced by `s_k Q_k(n)`.
pub fn lg3_with_signs(tm: &ThreeTimeMoments, signs: [i8; 3]) -> Vec<ConditionReport> {
    let [a, b, c] = tm.outcomes();
    let (s1, s2, s3) = (signs[0] as f64, signs[1] as f64, signs[2] as f64);
    let times = vec![tm.p12.times.0, tm.p12.times.1, tm.p23.times.1];
    let mut out = Vec::with_capacity(a * b * c);
    for n1 in 0..a {
        for n2 in 0..b {
            for n3 in 0..c {
                let lhs = 1.0
                    + s1 * s2 * tm.p12.corr(n1, n2)
                    + s2 * s3 * tm.p23.corr(n2, n3)
                    + s1 * s3 * tm.p13.corr(n1, n3);
                let mut id =
                    ConditionId::new(Family::Lg3Nvalued, times.clone()).outcomes(&[n1, n2, n3]);
                if signs != [1, 1, 1] {
                    id = id.signs(&signs);
                }
                out.push(ConditionReport::lower(id, lhs));
            }
        }
    }
    out
}

/// All four inequivalent sign patterns of the three-time suite (`4 N³` reports).
pub fn lg3_sign_variants(tm: &ThreeTimeMoments) -> Vec<ConditionReport> {
    LG3_PATTERNS
        .into_iter()
        .flat_map(|s| lg3_with_signs(tm, s))
        .collect()
}

/// The four dichotomic three-time inequalities, labelled 1 to 4.
pub fn lg3_dichotomic(times: [usize; 3], c12: f64, c23: f64, c13: f64, observable: &str) -> Vec<ConditionReport> {
    LG3_PATTERNS
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let (s1, s2, s3) = (s[0] as f64, s[1] as f64, s[2] as f64);
            let lhs = 1.0 + s1 * s2 * c12 + s2 * s3 * c23 + s1 * s3 * c13;
            let id = ConditionId::new(Family::Lg3Dichotomic, times.to_vec())
                .signs(s)
                .observable(observable)
                .label((k + 1).to_string());
            ConditionReport::lower(id, lhs)
        })
        .collect()
}

/// Four-time CHSH-type sums `±C₁₂ ± C₂₃ ± C₃₄ ± C₁₄` with exactly one term
/// negated, checked against `[−2, 2]`. The sign vector in each id lists the
/// coefficients of (C₁₂, C₂₃, C₃₄, C₁₄).
pub fn lg4_suite(fm: &FourTimeMoments) -> Vec<ConditionReport> {
    let n = [
        fm.p12.first_outcomes(),
        fm.p23.first_outcomes(),
        fm.p34.first_outcomes(),
        fm.p34.second_outcomes(),
    ];
    let times = vec![fm.p12.times.0, fm.p12.times.1, fm.p23.times.1, fm.p34.times.1];
    let mut out = Vec::with_capacity(4 * n.iter().product::<usize>());
    for minus in [3usize, 0, 1, 2] {
        let mut coeffs = [1i8; 4];
        coeffs[minus] = -1;
        let c: Vec<f64> = coeffs.iter().map(|&x| x as f64).collect();
        for n1 in 0..n[0] {
            for n2 in 0..n[1] {
                for n3 in 0..n[2] {
                    for n4 in 0..n[3] {
                        let lhs = c[0] * fm.p12.corr(n1, n2)
                            + c[1] * fm.p23.corr(n2, n3)
                            + c[2] * fm.p34.corr(n3, n4)
                            + c[3] * fm.p14.corr(n1, n4);
                        let id = ConditionId::new(Family::Lg4Chsh, times.clone())
                            .outcomes(&[n1, n2, n3, n4])
                            .signs(&coeffs);
                        out.push(ConditionReport::new(id, lhs, 2.0, Bound::Abs));
                    }
                }
            }
        }
    }
    out
}

/// Position of a three-time margin relative to the quantum bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LudersClass {
    Satisfied,
    /// `−1/2 ≤ margin < 0`.
    StandardViolation,
    /// `−2 ≤ margin < −1/2`.
    BeyondLuders,
    /// Below the algebraic minimum; only possible from inconsistent input.
    BelowAlgebraicFloor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LudersFinding {
    pub id: ConditionId,
    pub margin: f64,
    pub class: LudersClass,
    /// Beyond-Lüders value reported under the Lüders policy, or a value
    /// below the algebraic floor under any policy.
    pub anomalous: bool,
}

pub fn classify_margin(margin: f64) -> LudersClass {
    let tol = SATISFACTION_TOL;
    if margin >= -tol {
        LudersClass::Satisfied
    } else if margin >= LUDERS_BOUND - tol {
        LudersClass::StandardViolation
    } else if margin >= ALGEBRAIC_FLOOR - tol {
        LudersClass::BeyondLuders
    } else {
        LudersClass::BelowAlgebraicFloor
    }
}

/// Classify three-time reports against the Lüders bound and the algebraic floor.
pub fn luders_check(reports: &[ConditionReport], policy: Policy) -> Vec<LudersFinding> {
    reports
        .iter()
        .map(|r| {
            let class = classify_margin(r.margin);
            let anomalous = class == LudersClass::BelowAlgebraicFloor
                || (policy == Policy::Luders && class == LudersClass::BeyondLuders);
            LudersFinding {
                id: r.id.clone(),
                margin: r.margin,
                class,
                anomalous,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(times: (usize, usize), m1: Vec<f64>, m2: Vec<f64>, c: Vec<f64>) -> PairMoments {
        PairMoments::new(times, m1, m2, c).unwrap()
    }

    #[test]
    fn perfect_anticorrelation_is_the_algebraic_floor() {
        let z = vec![0.0, 0.0];
        let anti = vec![-1.0, 1.0, 1.0, -1.0];
        let tm = ThreeTimeMoments {
            p12: pm((1, 2), z.clone(), z.clone(), anti.clone()),
            p23: pm((2, 3), z.clone(), z.clone(), anti.clone()),
            p13: pm((1, 3), z.clone(), z, anti),
        };
        let reports = lg3_suite(&tm);
        let worst = reports.iter().map(|r| r.lhs).fold(f64::INFINITY, f64::min);
        assert_eq!(worst, -2.0);
        let findings = luders_check(&reports, Policy::VonNeumann);
        assert!(findings
            .iter()
            .any(|f| f.class == LudersClass::BeyondLuders && !f.anomalous));
        let findings = luders_check(&reports, Policy::Luders);
        assert!(findings.iter().any(|f| f.anomalous));
    }

    #[test]
    fn margin_classes() {
        assert_eq!(classify_margin(0.1), LudersClass::Satisfied);
        assert_eq!(classify_margin(-0.5), LudersClass::StandardViolation);
        assert_eq!(classify_margin(-0.6), LudersClass::BeyondLuders);
        assert_eq!(classify_margin(-2.1), LudersClass::BelowAlgebraicFloor);
    }

    #[test]
    fn dichotomic_labels() {
        let r = lg3_dichotomic([1, 2, 3], 0.5, 0.5, -0.5, "+-");
        assert_eq!(r.len(), 4);
        assert!((r[0].lhs - 1.5).abs() < 1e-15);
        assert!((r[1].lhs - (1.0 - 0.5 - 0.5 - 0.5)).abs() < 1e-15);
    }
}

use super::ids::{ConditionId, Family};
use super::moments::{PairMoments, ThreeTimeMoments};
use super::report::{Bound, ConditionReport};
use crate::error::{Error, Result};

/// The three single-`+1` variables of a three-outcome measurement:
/// `Q = Q(A)`, `R = Q(B)`, `S = Q(C)`, with `Q + R + S = −1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    Q,
    R,
    S,
}

impl Var {
    pub fn letter(self) -> char {
        match self {
            Var::Q => 'Q',
            Var::R => 'R',
            Var::S => 'S',
        }
    }

    /// Outcome index the variable is `+1` on.
    pub fn outcome(self) -> usize {
        match self {
            Var::Q => 0,
            Var::R => 1,
            Var::S => 2,
        }
    }

    fn parse(c: char) -> Self {
        match c {
            'Q' => Var::Q,
            'R' => Var::R,
            _ => Var::S,
        }
    }
}

/// Two-time moments of `Q` and `R` only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QrPair {
    pub times: (usize, usize),
    /// `⟨Q_i⟩, ⟨R_i⟩`.
    pub first: [f64; 2],
    /// `⟨Q_j⟩, ⟨R_j⟩`.
    pub second: [f64; 2],
    /// `[[⟨Q_iQ_j⟩, ⟨Q_iR_j⟩], [⟨R_iQ_j⟩, ⟨R_iR_j⟩]]`.
    pub corr: [[f64; 2]; 2],
}

impl QrPair {
    /// Keep only the `Q`, `R` entries of three-outcome pair moments.
    pub fn from_pair_moments(pm: &PairMoments) -> Result<Self> {
        if pm.first_outcomes() != 3 || pm.second_outcomes() != 3 {
            return Err(Error::Unsupported(
                "Q/R/S reductions need three outcomes at both times".into(),
            ));
        }
        Ok(Self {
            times: pm.times,
            first: [pm.mean_first[0], pm.mean_first[1]],
            second: [pm.mean_second[0], pm.mean_second[1]],
            corr: [
                [pm.corr(0, 0), pm.corr(0, 1)],
                [pm.corr(1, 0), pm.corr(1, 1)],
            ],
        })
    }

    fn mean_first(&self, v: Var) -> f64 {
        match v {
            Var::S => -1.0 - self.first[0] - self.first[1],
            _ => self.first[v.outcome()],
        }
    }

    fn mean_second(&self, v: Var) -> f64 {
        match v {
            Var::S => -1.0 - self.second[0] - self.second[1],
            _ => self.second[v.outcome()],
        }
    }

    /// `⟨X_i Y_j⟩` with any `S` eliminated through `S = −1 − Q − R`.
    pub fn correlator(&self, x: Var, y: Var) -> f64 {
        match (x, y) {
            (Var::S, Var::S) => {
                1.0 + self.first[0]
                    + self.first[1]
                    + self.second[0]
                    + self.second[1]
                    + self.corr[0][0]
                    + self.corr[0][1]
                    + self.corr[1][0]
                    + self.corr[1][1]
            }
            (Var::S, y) => {
                let k = y.outcome();
                -self.second[k] - self.corr[0][k] - self.corr[1][k]
            }
            (x, Var::S) => {
                let k = x.outcome();
                -self.first[k] - self.corr[k][0] - self.corr[k][1]
            }
            (x, y) => self.corr[x.outcome()][y.outcome()],
        }
    }
}

/// The nine two-time inequalities written with `Q` and `R` only: four lower
/// bounds (`a`–`d`), the `(S,S)` lower bound `e`, and four upper bounds
/// (`f`–`i`).
pub fn lg2_qrs_reduced(m: &QrPair) -> Vec<ConditionReport> {
    let [q1, r1] = m.first;
    let [q2, r2] = m.second;
    let [[qq, qr], [rq, rr]] = m.corr;
    let rows: [(&str, [usize; 2], f64, Bound); 9] = [
        ("a", [0, 0], 1.0 + q1 + q2 + qq, Bound::Lower),
        ("b", [1, 0], 1.0 + r1 + q2 + rq, Bound::Lower),
        ("c", [0, 1], 1.0 + q1 + r2 + qr, Bound::Lower),
        ("d", [1, 1], 1.0 + r1 + r2 + rr, Bound::Lower),
        ("e", [2, 2], qq + qr + rq + rr, Bound::Lower),
        ("f", [2, 0], q1 + r1 + qq + rq, Bound::Upper),
        ("g", [2, 1], q1 + r1 + qr + rr, Bound::Upper),
        ("h", [0, 2], q2 + r2 + qq + qr, Bound::Upper),
        ("i", [1, 2], q2 + r2 + rq + rr, Bound::Upper),
    ];
    rows.into_iter()
        .map(|(label, n, lhs, bound)| {
            let id = ConditionId::new(Family::Lg2Qrs, vec![m.times.0, m.times.1])
                .outcomes(&n)
                .label(label);
            ConditionReport::new(id, lhs, 0.0, bound)
        })
        .collect()
}

/// `Q`/`R` moments at three times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QrTriple {
    pub p12: QrPair,
    pub p23: QrPair,
    pub p13: QrPair,
}

impl QrTriple {
    pub fn from_moments(tm: &ThreeTimeMoments) -> Result<Self> {
        Ok(Self {
            p12: QrPair::from_pair_moments(&tm.p12)?,
            p23: QrPair::from_pair_moments(&tm.p23)?,
            p13: QrPair::from_pair_moments(&tm.p13)?,
        })
    }

    /// `⟨X_k⟩` at time index `k`.
    pub fn mean(&self, k: usize, v: Var) -> f64 {
        match k {
            0 => self.p12.mean_first(v),
            1 => self.p12.mean_second(v),
            _ => self.p23.mean_second(v),
        }
    }
}

/// Variable labels of the twenty-seven three-time inequalities, in the
/// conventional listing order (first letter at `t₁`).
pub const LG3_QRS_ORDER: [&str; 27] = [
    "QQQ", "RQQ", "QRQ", "RRQ", "QQR", "RQR", "QRR", "RRR", "SQQ", "SRQ", "SQR", "SRR", "QSQ",
    "RSQ", "QSR", "RSR", "QQS", "RQS", "QRS", "RRS", "SSR", "SSQ", "QSS", "RSS", "SQS", "SRS",
    "SSS",
];

/// All twenty-seven `N = 3` three-time inequalities evaluated from `Q`, `R`
/// moments alone.
pub fn lg3_qrs_full(m: &QrTriple) -> Vec<ConditionReport> {
    let times = vec![m.p12.times.0, m.p12.times.1, m.p23.times.1];
    LG3_QRS_ORDER
        .iter()
        .map(|label| {
            let v: Vec<Var> = label.chars().map(Var::parse).collect();
            let lhs = 1.0
                + m.p12.correlator(v[0], v[1])
                + m.p23.correlator(v[1], v[2])
                + m.p13.correlator(v[0], v[2]);
            let outcomes: Vec<usize> = v.iter().map(|x| x.outcome()).collect();
            let id = ConditionId::new(Family::Lg3Qrs, times.clone())
                .outcomes(&outcomes)
                .label(*label);
            ConditionReport::lower(id, lhs)
        })
        .collect()
}

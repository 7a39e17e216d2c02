use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::families::evaluate_families;
use super::spec::{generate_with_params, ParamTarget, ScenarioSpec};
use crate::error::{Error, Result};
use crate::mrconds::{ConditionId, ConditionReport, Family};

pub const DEFAULT_GRID_POINTS: usize = 64;

/// One free parameter ranging over `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamRange {
    pub target: ParamTarget,
    pub lo: f64,
    pub hi: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
}

impl ParamRange {
    pub fn new(target: ParamTarget, lo: f64, hi: f64) -> Self {
        Self {
            target,
            lo,
            hi,
            points: None,
        }
    }

    pub fn with_points(mut self, points: usize) -> Self {
        self.points = Some(points);
        self
    }

    pub fn grid(&self) -> Vec<f64> {
        match self.points.unwrap_or(DEFAULT_GRID_POINTS) {
            0 => vec![],
            1 => vec![self.lo],
            n => (0..n)
                .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }

    pub(crate) fn check_bounded(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite()) || self.lo > self.hi {
            return Err(Error::UnboundedBox(format!(
                "{:?} range [{}, {}]",
                self.target, self.lo, self.hi
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyMargin {
    pub family: Family,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub coords: Vec<f64>,
    /// `None` where the parameters do not give a valid scenario
    /// (e.g. times out of order).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub families: Vec<FamilyMargin>,
}

/// Smallest margin found and where.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub value: f64,
    pub coords: Vec<f64>,
    pub seed: u64,
    pub condition: ConditionId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub params: Vec<ParamRange>,
    pub points: Vec<SweepPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extremum: Option<Extremum>,
}

/// Worst report of the requested families at one parameter point.
pub fn evaluate_point(
    spec: &ScenarioSpec,
    targets: &[ParamTarget],
    coords: &[f64],
    families: &[Family],
) -> Result<Vec<ConditionReport>> {
    let params: Vec<(ParamTarget, f64)> = targets.iter().copied().zip(coords.iter().copied()).collect();
    let scenario = generate_with_params(spec, &params)?;
    evaluate_families(&scenario, families)
}

pub(crate) fn worst_report(reports: &[ConditionReport]) -> Option<&ConditionReport> {
    reports.iter().min_by(|a, b| a.margin.total_cmp(&b.margin))
}

/// Total order used for every extremum selection: value first, then
/// coordinates lexicographically.
pub(crate) fn extremum_order(a: (f64, &[f64]), b: (f64, &[f64])) -> std::cmp::Ordering {
    a.0.total_cmp(&b.0).then_with(|| {
        a.1.iter()
            .zip(b.1)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    })
}

/// Grid product, first parameter slowest.
pub(crate) fn grid_points(params: &[ParamRange]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![vec![]];
    for p in params {
        let g = p.grid();
        out = out
            .into_iter()
            .flat_map(|prefix| {
                g.iter().map(move |&v| {
                    let mut c = prefix.clone();
                    c.push(v);
                    c
                })
            })
            .collect();
    }
    out
}

/// Evaluate the requested families on a 1- or 2-parameter grid. Points are
/// evaluated in parallel; the extremum is chosen by value then coordinates.
pub fn sweep(spec: &ScenarioSpec, params: &[ParamRange], families: &[Family]) -> Result<SweepResult> {
    if params.is_empty() || params.len() > 2 {
        return Err(Error::InvalidSpec(format!(
            "sweeps take 1 or 2 parameters, got {}",
            params.len()
        )));
    }
    if families.is_empty() {
        return Err(Error::MissingInput("no condition families requested".into()));
    }
    for p in params {
        if !(p.lo.is_finite() && p.hi.is_finite()) || p.lo > p.hi {
            return Err(Error::InvalidSpec(format!("bad range for {:?}", p.target)));
        }
    }
    let coords = grid_points(params);
    if coords.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let targets: Vec<ParamTarget> = params.iter().map(|p| p.target).collect();
    // Invalid points are skipped; configuration errors surface from the
    // first point so a misspelled family fails fast.
    let evaluated: Vec<(Vec<f64>, Option<Vec<ConditionReport>>)> = coords
        .into_par_iter()
        .map(|c| {
            let r = evaluate_point(spec, &targets, &c, families);
            (c, r)
        })
        .map(|(c, r)| match r {
            Ok(reports) => Ok((c, Some(reports))),
            Err(Error::InvalidSchedule(_)) => Ok((c, None)),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;

    let mut points = Vec::with_capacity(evaluated.len());
    let mut best: Option<Extremum> = None;
    for (coords, reports) in evaluated {
        let Some(reports) = reports else {
            points.push(SweepPoint {
                coords,
                worst: None,
                families: vec![],
            });
            continue;
        };
        let per_family = families
            .iter()
            .filter_map(|&f| {
                reports
                    .iter()
                    .filter(|r| r.family == f)
                    .map(|r| r.margin)
                    .reduce(f64::min)
                    .map(|margin| FamilyMargin { family: f, margin })
            })
            .collect();
        let worst = worst_report(&reports);
        if let Some(w) = worst {
            let better = best
                .as_ref()
                .is_none_or(|b| extremum_order((w.margin, &coords), (b.value, &b.coords)).is_lt());
            if better {
                best = Some(Extremum {
                    value: w.margin,
                    coords: coords.clone(),
                    seed: spec.seed,
                    condition: w.id.clone(),
                });
            }
        }
        points.push(SweepPoint {
            coords,
            worst: worst.map(|w| w.margin),
            families: per_family,
        });
    }
    Ok(SweepResult {
        params: params.to_vec(),
        points,
        extremum: best,
    })
}

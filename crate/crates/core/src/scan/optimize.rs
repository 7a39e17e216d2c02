use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::spec::{ParamTarget, ScenarioSpec};
use super::sweep::{evaluate_point, extremum_order, grid_points, worst_report, Extremum, ParamRange};
use crate::error::{Error, Result};
use crate::mrconds::{ConditionId, Family};

pub const DEFAULT_STARTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NelderMeadOptions {
    pub max_evals: usize,
    /// Stop once the simplex's value spread and diameter both fall below this.
    pub tol: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_evals: 2000,
            tol: 1e-13,
        }
    }
}

/// Minimize `f` over a box with a Nelder–Mead simplex whose trial points
/// are clamped into the box. `step[i]` sets the initial edge lengths.
pub fn nelder_mead<F>(
    f: F,
    x0: &[f64],
    step: &[f64],
    lo: &[f64],
    hi: &[f64],
    opts: NelderMeadOptions,
) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let clamp = |x: &mut Vec<f64>| {
        for i in 0..n {
            x[i] = x[i].clamp(lo[i], hi[i]);
        }
    };
    let evals = std::cell::Cell::new(0usize);
    let eval = |x: &[f64]| {
        evals.set(evals.get() + 1);
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let mut start = x0.to_vec();
    clamp(&mut start);
    let v0 = eval(&start);
    simplex.push((start.clone(), v0));
    for i in 0..n {
        let mut x = start.clone();
        x[i] += step[i];
        if x[i] > hi[i] {
            x[i] = start[i] - step[i];
        }
        clamp(&mut x);
        let v = eval(&x);
        simplex.push((x, v));
    }
    let order = |s: &mut Vec<(Vec<f64>, f64)>| {
        s.sort_by(|a, b| extremum_order((a.1, &a.0), (b.1, &b.0)));
    };
    loop {
        order(&mut simplex);
        let spread = simplex[n].1 - simplex[0].1;
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if (spread.abs() <= opts.tol && diameter <= opts.tol.sqrt()) || evals.get() >= opts.max_evals {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|i| simplex[..n].iter().map(|(x, _)| x[i]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            let mut x: Vec<f64> = (0..n)
                .map(|i| centroid[i] + t * (simplex[n].0[i] - centroid[i]))
                .collect();
            clamp(&mut x);
            x
        };
        let xr = along(-1.0);
        let vr = eval(&xr);
        if vr < simplex[0].1 {
            let xe = along(-2.0);
            let ve = eval(&xe);
            simplex[n] = if ve < vr { (xe, ve) } else { (xr, vr) };
        } else if vr < simplex[n - 1].1 {
            simplex[n] = (xr, vr);
        } else {
            let (xc, vc) = if vr < simplex[n].1 {
                let x = along(-0.5);
                let v = eval(&x);
                (x, v)
            } else {
                let x = along(0.5);
                let v = eval(&x);
                (x, v)
            };
            if vc < simplex[n].1.min(vr) {
                simplex[n] = (xc, vc);
            } else {
                let best = simplex[0].0.clone();
                for item in simplex.iter_mut().skip(1) {
                    let mut x: Vec<f64> = (0..n).map(|i| best[i] + 0.5 * (item.0[i] - best[i])).collect();
                    clamp(&mut x);
                    let v = eval(&x);
                    *item = (x, v);
                }
            }
        }
    }
    order(&mut simplex);
    simplex.swap_remove(0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaximizeOptions {
    #[serde(default = "default_starts")]
    pub starts: usize,
    #[serde(default)]
    pub local: NelderMeadOptions,
}

fn default_starts() -> usize {
    DEFAULT_STARTS
}

impl Default for MaximizeOptions {
    fn default() -> Self {
        Self {
            starts: DEFAULT_STARTS,
            local: NelderMeadOptions::default(),
        }
    }
}

/// Most negative worst margin of the requested families over a bounded box:
/// grid seeding, then Nelder–Mead from the best `starts` grid points.
pub fn maximize_violation(
    spec: &ScenarioSpec,
    params: &[ParamRange],
    families: &[Family],
    opts: &MaximizeOptions,
) -> Result<Extremum> {
    if params.is_empty() {
        return Err(Error::InvalidSpec("no free parameters".into()));
    }
    if families.is_empty() {
        return Err(Error::MissingInput("no condition families requested".into()));
    }
    for p in params {
        p.check_bounded()?;
    }
    let targets: Vec<ParamTarget> = params.iter().map(|p| p.target).collect();
    let objective = |x: &[f64]| -> Result<Option<(f64, ConditionId)>> {
        match evaluate_point(spec, &targets, x, families) {
            Ok(reports) => Ok(worst_report(&reports).map(|r| (r.margin, r.id.clone()))),
            Err(Error::InvalidSchedule(_)) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let coords = grid_points(params);
    if coords.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut seeded: Vec<(f64, Vec<f64>)> = coords
        .into_par_iter()
        .map(|c| objective(&c).map(|o| o.map(|(v, _)| (v, c))))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    seeded.sort_by(|a, b| extremum_order((a.0, &a.1), (b.0, &b.1)));
    seeded.truncate(opts.starts.max(1));
    if seeded.is_empty() {
        return Err(Error::EmptyGrid);
    }

    let lo: Vec<f64> = params.iter().map(|p| p.lo).collect();
    let hi: Vec<f64> = params.iter().map(|p| p.hi).collect();
    let step: Vec<f64> = params
        .iter()
        .map(|p| {
            let n = p.grid().len().max(2);
            ((p.hi - p.lo) / (n - 1) as f64).max(1e-6)
        })
        .collect();
    let refined: Vec<(Vec<f64>, f64)> = seeded
        .par_iter()
        .map(|(_, x0)| {
            nelder_mead(
                |x| objective(x).ok().flatten().map_or(f64::INFINITY, |(v, _)| v),
                x0,
                &step,
                &lo,
                &hi,
                opts.local,
            )
        })
        .collect();
    let (coords, _) = refined
        .into_iter()
        .min_by(|a, b| extremum_order((a.1, &a.0), (b.1, &b.0)))
        .expect("at least one start");
    // Recompute at the chosen point so the record is exactly reproducible.
    let (value, condition) = objective(&coords)?.ok_or(Error::EmptyGrid)?;
    Ok(Extremum {
        value,
        coords,
        seed: spec.seed,
        condition,
    })
}

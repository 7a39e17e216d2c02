use std::f64::consts::PI;

use macroreal::histories::Policy;
use macroreal::mrconds::Family;
use macroreal::scan::{
    applicable_families, evaluate_family, evaluate_point, generate_scenario, random_spec, search_lg3_violation, sweep,
    DecompositionSpec, HamiltonianSpec, ParamRange, ParamTarget, ScenarioSpec, ScheduleSpec,
    StateSpec,
};

fn precessing_qubit() -> ScenarioSpec {
    ScenarioSpec {
        dim: 2,
        state: StateSpec::MaximallyMixed {},
        hamiltonian: HamiltonianSpec::SpinPrecession {
            omega: 1.0,
            axis: [1.0, 0.0, 0.0],
        },
        schedule: ScheduleSpec::Equal {
            count: 3,
            spacing: 0.5,
            start: 0.0,
        },
        decomposition: DecompositionSpec::Fine {},
        policy: Policy::Luders,
        seed: 0,
    }
}

/// Smallest of the four three-time sums for `C(τ) = cos τ` at equal spacing.
fn closed_form(tau: f64) -> f64 {
    let (c, c2) = (tau.cos(), (2.0 * tau).cos());
    [1.0 + 2.0 * c + c2, 1.0 - 2.0 * c + c2, 1.0 - c2].into_iter().fold(f64::INFINITY, f64::min)
}

#[test]
fn qubit_sweep_follows_the_cosine_law() {
    let spec = precessing_qubit();
    let params = [ParamRange::new(ParamTarget::Spacing, 0.05, PI).with_points(64)];
    let res = sweep(&spec, &params, &[Family::Lg3Dichotomic]).unwrap();
    for p in &res.points {
        assert!((p.worst.unwrap() - closed_form(p.coords[0])).abs() < 1e-12);
    }
    let e = res.extremum.unwrap();
    assert!(e.value >= -0.5 - 1e-12 && e.value < -0.49);
    assert!((e.coords[0] - PI / 3.0).abs() < 0.05);
}

#[test]
fn classical_scenarios_satisfy_every_family() {
    let spec = ScenarioSpec {
        dim: 3,
        state: StateSpec::Diagonal {
            populations: vec![0.2, 0.5, 0.3],
        },
        hamiltonian: HamiltonianSpec::Zero {},
        schedule: ScheduleSpec::Equal {
            count: 3,
            spacing: 1.0,
            start: 0.0,
        },
        decomposition: DecompositionSpec::Fine {},
        policy: Policy::VonNeumann,
        seed: 3,
    };
    let params = [ParamRange::new(ParamTarget::Spacing, 0.1, 5.0).with_points(10)];
    let res = sweep(&spec, &params, &applicable_families(3, 3)).unwrap();
    assert!(res.extremum.unwrap().value >= -1e-12);
}

#[test]
fn sweeps_and_searches_are_reproducible() {
    let spec = random_spec(3, 3, 3.0, Policy::VonNeumann, 42);
    let params = [
        ParamRange::new(ParamTarget::T2, 0.5, 1.5).with_points(7),
        ParamRange::new(ParamTarget::T3, 1.6, 2.9).with_points(7),
    ];
    let families = [Family::Lg3Nvalued, Family::NsitFull];
    assert_eq!(sweep(&spec, &params, &families).unwrap(), sweep(&spec, &params, &families).unwrap());
    let a = search_lg3_violation(3, Policy::VonNeumann, 11, 200, 4.0).unwrap();
    let b = search_lg3_violation(3, Policy::VonNeumann, 11, 200, 4.0).unwrap();
    assert_eq!(a, b);
}

#[test]
fn lueders_search_never_passes_the_bound() {
    let hit = search_lg3_violation(3, Policy::Luders, 5, 400, 4.0).unwrap();
    assert!(hit.margin >= -0.5 - 1e-9);
    assert!(hit.margin < 0.0);
}

#[test]
fn qubit_policies_give_identical_reports() {
    for seed in 0..20 {
        let l = generate_scenario(&random_spec(2, 3, 4.0, Policy::Luders, seed)).unwrap();
        let v = l.with_policy(Policy::VonNeumann);
        for family in [Family::Lg2Nvalued, Family::Lg3Nvalued] {
            let a = evaluate_family(&l, family).unwrap();
            let b = evaluate_family(&v, family).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert_eq!(x.id, y.id);
                assert!((x.lhs - y.lhs).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn invalid_schedules_are_skipped_not_fatal() {
    let spec = random_spec(2, 3, 3.0, Policy::Luders, 1);
    // t2 beyond t3 is not a valid schedule.
    assert!(evaluate_point(&spec, &[ParamTarget::T2], &[100.0], &[Family::Lg3Nvalued]).is_err());
    let res = sweep(&spec, &[ParamRange::new(ParamTarget::T2, 0.0, 6.0).with_points(25)], &[Family::Lg3Nvalued]).unwrap();
    assert!(res.points.iter().any(|p| p.worst.is_none()));
    assert!(res.points.iter().any(|p| p.worst.is_some()));
    let finite = res.points.iter().filter_map(|p| p.worst).fold(f64::INFINITY, f64::min);
    assert_eq!(res.extremum.unwrap().value, finite);
}

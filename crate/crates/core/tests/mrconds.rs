use macroreal::histories::{Policy, Scenario};
use macroreal::mrconds::{
    all_satisfied, assess_scenario, lg2_suite, lg2_with_signs, lg3_suite, worst_margin,
    PairMoments, ThreeTimeMoments,
};
use macroreal::qcore::{DensityOperator, Hamiltonian, ProjectiveDecomposition, Schedule};
use macroreal::scan::{generate_scenario, random_spec, StateSpec};
use proptest::prelude::*;

fn qutrit(seed: u64, mixed: bool) -> Scenario {
    let mut spec = random_spec(3, 3, 4.0, Policy::Luders, seed);
    if mixed {
        spec.state = StateSpec::Depolarized { p: 0.5 };
    }
    generate_scenario(&spec).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn two_time_suite_is_four_times_the_quasi_probability(seed in any::<u64>(), mixed in any::<bool>()) {
        let s = qutrit(seed, mixed);
        let q = s.quasi_at(&[0, 1]).unwrap();
        let plus = lg2_suite(&PairMoments::from_scenario(&s, 0, 1).unwrap());
        for r in &plus {
            let (a, b) = (r.id.outcomes[0] - 1, r.id.outcomes[1] - 1);
            prop_assert!((r.lhs - 4.0 * q.get(&[a, b])).abs() < 1e-12);
        }
    }

    #[test]
    fn flipped_two_time_conditions_are_sums_of_unflipped_ones(seed in any::<u64>(), mixed in any::<bool>()) {
        let s = qutrit(seed, mixed);
        let pm = PairMoments::from_scenario(&s, 1, 2).unwrap();
        let plus = lg2_suite(&pm);
        let lhs = |n: usize, m: usize| plus[n * 3 + m].lhs;
        let flipped = lg2_with_signs(&pm, [-1, 1]);
        for r in &flipped {
            let (n, m) = (r.id.outcomes[0] - 1, r.id.outcomes[1] - 1);
            let sum: f64 = (0..3).filter(|&a| a != n).map(|a| lhs(a, m)).sum();
            prop_assert!((r.lhs - sum).abs() < 1e-12);
        }
        // Hence the unflipped suite implies the flipped one.
        if all_satisfied(&plus) {
            prop_assert!(all_satisfied(&flipped));
        }
    }

    #[test]
    fn relabeling_outcomes_permutes_the_three_time_suite(seed in any::<u64>(), perm in Just([2usize, 0, 1]).prop_shuffle()) {
        let s = qutrit(seed, true);
        let dec = s.decomposition();
        let permuted = ProjectiveDecomposition::new(perm.iter().map(|&k| dec.projector(k).clone()).collect()).unwrap();
        let t = Scenario::new(s.rho().clone(), s.hamiltonian().clone(), s.schedule().clone(), permuted, s.policy()).unwrap();
        let a = lg3_suite(&ThreeTimeMoments::from_scenario(&s).unwrap());
        let b = lg3_suite(&ThreeTimeMoments::from_scenario(&t).unwrap());
        for r in &b {
            let orig: Vec<usize> = r.id.outcomes.iter().map(|&o| perm[o - 1] + 1).collect();
            let m = a.iter().find(|x| x.id.outcomes == orig).unwrap();
            prop_assert!((m.lhs - r.lhs).abs() < 1e-12);
        }
    }

    #[test]
    fn lueders_three_time_sums_respect_the_bound(seed in any::<u64>()) {
        let s = qutrit(seed, false);
        let m = worst_margin(&lg3_suite(&ThreeTimeMoments::from_scenario(&s).unwrap()));
        prop_assert!(m >= -0.5 - 1e-12);
    }
}

#[test]
fn diagonal_state_without_dynamics_is_macrorealist() {
    let s = Scenario::new(
        DensityOperator::diagonal(&[0.5, 0.3, 0.2]).unwrap(),
        Hamiltonian::zero(3),
        Schedule::new(vec![0.0, 1.0, 2.0]).unwrap(),
        ProjectiveDecomposition::fine(3),
        Policy::Luders,
    )
    .unwrap();
    let a = assess_scenario(&s).unwrap();
    assert_eq!(a.class.weak, Some(true));
    assert_eq!(a.class.intermediate, Some(true));
    assert_eq!(a.class.strong, Some(true));
    assert_eq!(a.class.hierarchy_consistent, Some(true));
    assert!(a.class.missing.is_empty());
}

#[test]
fn coherent_qutrit_fails_strong_macrorealism() {
    let mut any_fail = false;
    for seed in 0..10 {
        let a = assess_scenario(&qutrit(seed, false)).unwrap();
        assert_eq!(a.class.hierarchy_consistent, Some(true));
        any_fail |= a.class.strong == Some(false);
    }
    assert!(any_fail);
}

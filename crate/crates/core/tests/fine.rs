use macroreal::fine::{
    audit_scenario, fine_ansatz_join, joint_feasibility, triple_intervals, vertex_feasibility,
    JointSystem, MarginalSet,
};
use macroreal::histories::{HistoryTable, Policy, Scenario};
use macroreal::mrconds::ThreeTimeMoments;
use macroreal::scan::{derive_seed, generate_scenario, random_spec, StateSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn qubit_marginals(seed: u64, p: f64) -> (ThreeTimeMoments, MarginalSet) {
    let mut spec = random_spec(2, 3, 3.0, Policy::Luders, seed);
    spec.state = StateSpec::Depolarized { p };
    let s: Scenario = generate_scenario(&spec).unwrap();
    let tm = ThreeTimeMoments::from_scenario(&s).unwrap();
    let m = MarginalSet::from_three_time_moments(&tm).unwrap();
    (tm, m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn simplex_and_vertex_enumeration_agree(seed in any::<u64>(), p in 0.0f64..1.0) {
        let (_, m) = qubit_marginals(seed, p);
        let lp = joint_feasibility(&m).unwrap();
        prop_assert_eq!(lp.feasible, vertex_feasibility(&m).unwrap());
        if let Some(cert) = &lp.certificate {
            prop_assert!(cert.verify(&JointSystem::build(&m), 1e-9));
        }
        if let Some(joint) = &lp.joint {
            prop_assert!(joint.min() >= -1e-12);
            prop_assert!(m.marginal_residual(joint).unwrap() < 1e-9);
        }
    }

    #[test]
    fn qubit_joint_exists_iff_pairs_nonnegative_and_triple_interval_nonempty(seed in any::<u64>(), p in 0.0f64..1.0) {
        let (tm, m) = qubit_marginals(seed, p);
        let iv = triple_intervals(&tm);
        // Skip the measure-zero boundary where either side is within rounding.
        let slack = iv.iter().map(|i| i.width().abs()).fold(f64::INFINITY, f64::min).min(m.min_entry().abs());
        prop_assume!(slack > 1e-7);
        let expected = m.min_entry() >= 0.0 && iv.iter().all(|i| !i.is_empty());
        prop_assert_eq!(joint_feasibility(&m).unwrap().feasible, expected);
    }
}

fn random_distribution(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
    let s: f64 = v.iter().sum();
    v.into_iter().map(|x| x / s).collect()
}

#[test]
fn join_recovers_a_conditionally_independent_joint() {
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 2 + (seed % 2) as usize;
        let p13 = random_distribution(&mut rng, n * n);
        let mut joint = HistoryTable::zeros(vec![n; 4]);
        for a in 0..n {
            for c in 0..n {
                let pb = random_distribution(&mut rng, n);
                let pd = random_distribution(&mut rng, n);
                for b in 0..n {
                    for d in 0..n {
                        joint.set(&[a, b, c, d], p13[a * n + c] * pb[b] * pd[d]);
                    }
                }
            }
        }
        let p123 = joint.marginal(&[0, 1, 2]).unwrap();
        let p134 = joint.marginal(&[0, 2, 3]).unwrap();
        let joined = fine_ansatz_join(&p123, &p134).unwrap();
        assert!(joined.max_abs_diff(&joint) < 1e-12);
        assert!(joined.marginal(&[0, 1, 2]).unwrap().max_abs_diff(&p123) < 1e-12);
        assert!(joined.marginal(&[0, 2, 3]).unwrap().max_abs_diff(&p134) < 1e-12);
    }
}

#[test]
fn join_handles_zero_shared_marginal() {
    let p123 = HistoryTable::new(vec![2, 2, 2], vec![0.5, 0.0, 0.0, 0.0, 0.0, 0.25, 0.0, 0.25]).unwrap();
    let p134 = HistoryTable::new(vec![2, 2, 2], vec![0.25, 0.25, 0.0, 0.0, 0.0, 0.0, 0.3, 0.2]).unwrap();
    let joined = fine_ansatz_join(&p123, &p134).unwrap();
    assert!(joined.values().iter().all(|v| v.is_finite() && *v >= 0.0));
    assert!(joined.marginal(&[0, 1, 2]).unwrap().max_abs_diff(&p123) < 1e-12);
    assert!(joined.marginal(&[0, 2, 3]).unwrap().max_abs_diff(&p134) < 1e-12);
}

#[test]
fn mixed_qutrits_can_pass_every_suite_without_a_joint() {
    let mut spec = random_spec(3, 3, 2.0, Policy::Luders, 0);
    spec.state = StateSpec::Depolarized { p: 0.7 };
    let hit = (0..400u64).find_map(|i| {
        let s = generate_scenario(&macroreal::scan::ScenarioSpec { seed: derive_seed(99, i), ..spec.clone() }).unwrap();
        let e = audit_scenario(i as usize, &s).unwrap();
        e.robust_mismatch().then_some((s, e))
    });
    let (s, e) = hit.expect("a suite-passing infeasible qutrit scenario");
    assert!(e.suite_holds && !e.feasible);
    let m = MarginalSet::from_three_time_moments(&ThreeTimeMoments::from_scenario(&s).unwrap()).unwrap();
    let res = joint_feasibility(&m).unwrap();
    assert!(res.certificate.unwrap().verify(&JointSystem::build(&m), 1e-9));
}

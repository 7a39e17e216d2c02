use macroreal::histories::{
    coherence_witness, correlator_luders, correlator_vn, decoherence_functional,
    interference_terms, quasi_prob, sequential_prob, single_time_prob, witness_from_interference,
    Policy, Scenario,
};
use macroreal::qcore::{make_dichotomic, Schedule};
use macroreal::scan::{generate_scenario, random_spec, StateSpec};
use proptest::prelude::*;

fn scenario(dim: usize, times: usize, seed: u64, mixed: bool) -> Scenario {
    let mut spec = random_spec(dim, times, 4.0, Policy::Luders, seed);
    if mixed {
        spec.state = StateSpec::MixedRandom { rank: 2 };
    }
    generate_scenario(&spec).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sequential_probabilities_are_a_distribution(dim in 2usize..5, times in 2usize..4, seed in any::<u64>(), mixed in any::<bool>()) {
        let s = scenario(dim, times, seed, mixed);
        let p = sequential_prob(s.rho(), s.schedule(), &s.decompositions(), s.hamiltonian()).unwrap();
        prop_assert!((p.sum() - 1.0).abs() < 1e-12);
        prop_assert!(p.min() > -1e-14);
        // The first measurement is never disturbed.
        let first = single_time_prob(s.rho(), s.decomposition(), s.hamiltonian(), s.schedule().time(0)).unwrap();
        let m = p.marginal_vec(0).unwrap();
        for (a, b) in first.iter().zip(&m) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn quasi_probabilities_match_every_marginal(dim in 2usize..5, seed in any::<u64>(), mixed in any::<bool>()) {
        let s = scenario(dim, 3, seed, mixed);
        let decs = s.decompositions();
        let q = quasi_prob(s.rho(), s.schedule(), &decs, s.hamiltonian()).unwrap();
        prop_assert!((q.sum() - 1.0).abs() < 1e-12);
        for k in 0..3 {
            let single = single_time_prob(s.rho(), s.decomposition(), s.hamiltonian(), s.schedule().time(k)).unwrap();
            let m = q.marginal_vec(k).unwrap();
            for (a, b) in single.iter().zip(&m) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
        // Summing out the last time leaves the two-time quasi-probability.
        let pair = Schedule::new(s.schedule().times()[..2].to_vec()).unwrap();
        let q12 = quasi_prob(s.rho(), &pair, &decs[..2], s.hamiltonian()).unwrap();
        prop_assert!(q.marginal(&[0, 1]).unwrap().max_abs_diff(&q12) < 1e-12);
    }

    #[test]
    fn decoherence_functional_is_hermitian_and_normalized(dim in 2usize..5, seed in any::<u64>()) {
        let s = scenario(dim, 2, seed, true);
        let rec = decoherence_functional(s.rho(), s.schedule(), &s.decompositions(), s.hamiltonian()).unwrap();
        prop_assert!(rec.hermiticity_defect() < 1e-13);
        prop_assert!((rec.total().re - 1.0).abs() < 1e-12 && rec.total().im.abs() < 1e-12);
        let it = interference_terms(&rec).unwrap();
        prop_assert_eq!(it.independent_count(), dim * (dim - 1) * (dim - 1) / 2);
        for sum in it.pair_sums() {
            prop_assert!(sum.abs() < 1e-12);
        }
        let direct = coherence_witness(&rec, None).unwrap();
        let from_terms = witness_from_interference(&it, None);
        for (a, b) in direct.iter().zip(&from_terms) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn coarse_witness_sums_only_separated_pairs(seed in any::<u64>()) {
        let s = scenario(4, 2, seed, false);
        let q = make_dichotomic(s.decomposition(), &[1, 1, -1, -1]).unwrap();
        let rec = decoherence_functional(s.rho(), s.schedule(), &s.decompositions(), s.hamiltonian()).unwrap();
        let it = interference_terms(&rec).unwrap();
        let direct = coherence_witness(&rec, Some(&q)).unwrap();
        let expected: Vec<f64> = (0..4)
            .map(|m| 2.0 * [(0, 2), (0, 3), (1, 2), (1, 3)].iter().map(|&(a, b)| it.get(a, b, m)).sum::<f64>())
            .collect();
        for (a, b) in direct.iter().zip(&expected) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn qubit_correlators_do_not_depend_on_policy(seed in any::<u64>(), mixed in any::<bool>()) {
        let s = scenario(2, 2, seed, mixed);
        let q = make_dichotomic(s.decomposition(), &[1, -1]).unwrap();
        let t = s.schedule().times();
        let l = correlator_luders(s.rho(), s.hamiltonian(), t[0], t[1], &q, &q).unwrap();
        let v = correlator_vn(s.rho(), s.hamiltonian(), t[0], t[1], &q, &q).unwrap();
        prop_assert!((l - v).abs() < 1e-12);
    }
}

#[test]
fn two_block_observable_separates_lueders_and_von_neumann() {
    // With Q = P1 − P2 − P3 the two correlators differ by 4 I_23(1).
    let mut found = false;
    for seed in 0..20 {
        let s = scenario(3, 2, seed, false);
        let q = make_dichotomic(s.decomposition(), &[1, -1, -1]).unwrap();
        let t = s.schedule().times();
        let l = correlator_luders(s.rho(), s.hamiltonian(), t[0], t[1], &q, &q).unwrap();
        let v = correlator_vn(s.rho(), s.hamiltonian(), t[0], t[1], &q, &q).unwrap();
        let rec = decoherence_functional(s.rho(), s.schedule(), &s.decompositions(), s.hamiltonian()).unwrap();
        let i23 = interference_terms(&rec).unwrap().get(1, 2, 0);
        assert!((v - l - 4.0 * i23).abs() < 1e-12);
        found |= (v - l).abs() > 1e-3;
    }
    assert!(found);
}

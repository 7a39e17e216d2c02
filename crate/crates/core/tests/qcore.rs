use approx::assert_abs_diff_eq;
use macroreal::histories::Policy;
use macroreal::qcore::{
    build_decomposition, c64, heisenberg_evolve, make_dichotomic, max_abs, random_unitary_from,
    trace, CMatrix, Hamiltonian, ProjectiveDecomposition,
};
use macroreal::scan::{generate_scenario, random_spec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_hamiltonian(dim: usize, seed: u64) -> Hamiltonian {
    generate_scenario(&random_spec(dim, 2, 1.0, Policy::Luders, seed))
        .unwrap()
        .hamiltonian()
        .clone()
}

fn random_unitary(dim: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = CMatrix::from_fn(dim, dim, |_, _| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    random_unitary_from(&g)
}

fn ranks_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..3, 2..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rotated_projectors_stay_a_resolution_of_identity(ranks in ranks_strategy(), seed in any::<u64>()) {
        let dim: usize = ranks.iter().sum();
        let dec = build_decomposition(dim, &ranks).unwrap();
        let rotated = dec.conjugated(&random_unitary(dim, seed)).unwrap();
        let mut total = CMatrix::zeros(dim, dim);
        for (k, p) in rotated.projectors().iter().enumerate() {
            prop_assert!(max_abs(&(p * p - p)) < 1e-12);
            prop_assert!(max_abs(&(p - p.adjoint())) < 1e-12);
            prop_assert!((trace(p).re - ranks[k] as f64).abs() < 1e-12);
            for q in &rotated.projectors()[k + 1..] {
                prop_assert!(max_abs(&(p * q)) < 1e-12);
            }
            total += p;
        }
        prop_assert!(max_abs(&(total - CMatrix::identity(dim, dim))) < 1e-12);
    }

    #[test]
    fn propagator_composes(dim in 2usize..5, seed in any::<u64>(), t in -3.0f64..3.0, s in -3.0f64..3.0) {
        let h = random_hamiltonian(dim, seed);
        let lhs = h.propagator(t + s);
        let rhs = h.propagator(t) * h.propagator(s);
        prop_assert!(max_abs(&(lhs - rhs)) < 1e-11);
        let u = h.propagator(t);
        prop_assert!(max_abs(&(&u * u.adjoint() - CMatrix::identity(dim, dim))) < 1e-12);
    }

    #[test]
    fn dichotomic_operators_square_to_identity(
        signs in prop::collection::vec(prop::bool::ANY, 2..5),
        seed in any::<u64>(),
        t in 0.0f64..5.0,
    ) {
        let n = signs.len();
        let s: Vec<i8> = signs.iter().map(|&b| if b { 1 } else { -1 }).collect();
        prop_assume!(s.contains(&1) && s.contains(&-1));
        let q = make_dichotomic(&ProjectiveDecomposition::fine(n), &s).unwrap();
        let evolved = heisenberg_evolve(q.operator(), &random_hamiltonian(n, seed), t).unwrap();
        prop_assert!(max_abs(&(&evolved * &evolved - CMatrix::identity(n, n))) < 1e-11);
        let expected: f64 = s.iter().map(|&x| x as f64).sum();
        prop_assert!((trace(&evolved).re - expected).abs() < 1e-11);
    }
}

#[test]
fn heisenberg_evolution_matches_explicit_exponential_for_spin_half() {
    let omega = 1.3;
    let h = Hamiltonian::spin_precession(2, omega, [1.0, 0.0, 0.0]).unwrap();
    let sz = CMatrix::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0)]);
    for t in [0.0, 0.4, 1.7, 5.2] {
        let ev = heisenberg_evolve(&sz, &h, t).unwrap();
        // σ_z(t) = cos(ωt) σ_z + sin(ωt) σ_y for precession about x.
        assert_abs_diff_eq!(ev[(0, 0)].re, (omega * t).cos(), epsilon = 1e-12);
        assert_abs_diff_eq!(ev[(0, 1)].im, -(omega * t).sin(), epsilon = 1e-12);
    }
}

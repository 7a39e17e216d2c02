//! Complex linear-algebra substrate: density operators, projective
//! decompositions, dichotomic observables and Heisenberg-picture evolution.
//!
//! All types are immutable after construction and validated against
//! [`crate::settings::structure_tol`].

mod hamiltonian;
mod matrix;
mod projectors;
mod schedule;
mod state;

pub use hamiltonian::{heisenberg_evolve, spin_operators, Hamiltonian};
pub use matrix::{
    c64, dagger, hermitian_deviation, identity, max_abs, random_unitary_from, trace, CMatrix,
};
pub use projectors::{
    build_decomposition, coarse_grain, make_dichotomic, DichotomicObservable,
    ProjectiveDecomposition, Sign,
};
pub use schedule::{Schedule, MAX_TIMES};
pub use state::DensityOperator;

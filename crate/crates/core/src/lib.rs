//! Leggett-Garg and no-signaling-in-time checks for `N`-level quantum
//! systems measured at several times.
//!
//! The crate evaluates Leggett-Garg (LG) inequalities at two, three and four
//! times, no-signaling-in-time (NSIT) conditions, interference terms of the
//! decoherence functional and Lüders / von Neumann correlators for an
//! `N`-level system under unitary evolution and projective measurement. An
//! independent linear-feasibility oracle decides whether a set of pairwise
//! marginals admits a joint probability, which is how the LG suites are
//! audited.
//!
//! Module map:
//!
//! - [`qcore`]: density operators, projective decompositions, dichotomic
//!   observables and Heisenberg-picture evolution.
//! - [`histories`]: sequential probabilities, quasi-probabilities, the
//!   decoherence functional, interference terms and correlators.
//! - [`mrconds`]: LG and NSIT condition suites and the weak/intermediate/strong
//!   macrorealism classifier.
//! - [`fine`]: joint-probability feasibility, triple-correlator intervals and
//!   the four-time join.
//! - [`scan`]: seeded scenario generation, sweeps and violation maximization.

pub mod error;
pub mod fine;
pub mod histories;
pub mod mrconds;
pub mod qcore;
pub mod scan;
pub mod settings;

pub use error::{Error, Result};

//! Scenario generation from seeded specs, grid sweeps, bounded
//! derivative-free maximization of violations, and seeded searches.

mod families;
mod optimize;
mod search;
mod spec;
mod sweep;

pub use families::{applicable_families, evaluate_families, evaluate_family};
pub use optimize::{maximize_violation, nelder_mead, MaximizeOptions, NelderMeadOptions, DEFAULT_STARTS};
pub use search::{
    generate_batch, nsit_null_state, random_spec, search_lg3_violation, search_nsit_without_lg2,
    seeded_batch, NsitLgHit, SearchHit,
};
pub use spec::{
    derive_seed, generate_scenario, generate_with_params, DecompositionSpec, HamiltonianSpec,
    MatrixSpec, ParamTarget, ScenarioSpec, ScheduleSpec, StateSpec,
};
pub use sweep::{
    evaluate_point, sweep, Extremum, FamilyMargin, ParamRange, SweepPoint, SweepResult,
    DEFAULT_GRID_POINTS,
};

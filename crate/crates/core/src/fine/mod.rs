mod ansatz;
mod audit;
mod feasibility;
mod interval;
mod marginals;
mod simplex;

pub use ansatz::{fine_ansatz_join, four_time_joint, three_time_joint};
pub use audit::{audit_scenario, equivalence_audit, AuditEntry, AuditReport, AUDIT_BAND};
pub use feasibility::{
    joint_feasibility, vertex_feasibility, FarkasCertificate, FeasibilityResult, JointSystem,
    VERTEX_ORACLE_MAX_COLS,
};
pub use interval::{
    dichotomic_joint, f_value, triple_interval, triple_intervals, TripleBoundInterval,
};
pub use marginals::MarginalSet;
pub use simplex::{phase_one, PhaseOne};

//! Leggett-Garg inequality families, NSIT condition sets, Lüders-bound
//! classification and the weak / intermediate / strong macrorealism
//! classifier.

mod classify;
mod ids;
mod lg;
mod moments;
mod nsit;
mod qrs;
mod report;

pub use classify::{assess_scenario, classify_mr, nsit3_instruments, MrAssessment, MrClass, MrInputs};
pub use ids::{ConditionId, Family};
pub use lg::{
    classify_margin, lg2_dichotomic, lg2_sign_variants, lg2_suite, lg2_with_signs, lg3_dichotomic,
    lg3_sign_variants, lg3_suite, lg3_with_signs, lg4_suite, luders_check, LudersClass,
    LudersFinding, LG3_PATTERNS,
};
pub use moments::{FourTimeMoments, PairMoments, ThreeTimeMoments};
pub use nsit::{
    complete_nsit_observables, nsit2_suite, nsit3_suite, witness_rank, NsitSuite,
    ThreeTimeTables, COMPLETENESS_TOL,
};
pub use qrs::{lg2_qrs_reduced, lg3_qrs_full, QrPair, QrTriple, Var, LG3_QRS_ORDER};
pub use report::{all_satisfied, worst_margin, Bound, ConditionReport};

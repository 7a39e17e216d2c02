//! Sequential-measurement probabilities, quasi-probabilities, the
//! decoherence functional and its interference terms, coherence witnesses,
//! and Lüders / von Neumann correlators.

mod correlators;
mod decoherence;
mod probabilities;
mod scenario;
mod table;

pub use correlators::{
    correlator_luders, correlator_vn, dressed_moments, moment, quasi_sign_table_at, sign_table_at,
    CorrelatorSet, PAIRS,
};
pub use decoherence::{
    coherence_witness, decoherence_functional, interference_terms, witness_from_interference,
    DecoherenceRecord, InterferenceTable,
};
pub use probabilities::{quasi_prob, sequential_prob, single_time_prob, MAX_HISTORIES};
pub use scenario::{Policy, Scenario};
pub use table::{HistoryString, HistoryTable};

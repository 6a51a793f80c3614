//! Executable forms of the steering results: the pure-state trace-sum
//! contradiction, LHS models for product states, LP feasibility over a
//! candidate ensemble, and the GHZ value-assignment argument.

mod ghz;
mod lhs;
mod paradox;
pub mod simplex;

pub use ghz::{
    count_lhv_assignments, ghz_lhv_bruteforce, ghz_operator_expectations, GhzExpectations,
    GhzLhvReport, GHZ_EIGENVALUES, GHZ_OPERATORS,
};
pub use lhs::{
    default_candidates, hermitian_components, lhs_feasibility_lp, lhs_reconstruct,
    separable_lhs_model, FeasibilityOutcome, FeasibilityStatus, HiddenState, LhsModel, ModelCheck,
    SolverDiagnostics,
};
pub use paradox::{pure_state_paradox, CollapsedAssignment, ParadoxCertificate, Verdict};

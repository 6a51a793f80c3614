//! Numerical toolkit for EPR steering with pure states.
//!
//! Builds bipartite states and Alice's measurement settings, computes Bob's
//! conditional-state assemblages, certifies the `k = 1` trace-sum
//! contradiction for pure entangled states, constructs local-hidden-state
//! models for product states and searches for such models by linear
//! programming over a finite hidden-state ensemble.

pub mod assemblage;
pub mod error;
pub mod linalg;
pub mod measurements;
pub mod states;
pub mod steering;

pub use assemblage::{
    conditional_states, no_signalling_check, purity_profile, Assemblage, PurityProfile,
};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Tolerances};
pub use measurements::MeasurementSetting;
pub use num_complex::Complex64;
pub use states::{BipartitePureState, MultiQubitPureState};
pub use steering::{FeasibilityOutcome, LhsModel, ParadoxCertificate, Verdict};

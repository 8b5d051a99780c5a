//! Sparse recovery from one marginal: sufficient-condition checks, the
//! ascending-value fit core, matching inversion, and the verified pipeline.

mod condition;
mod pipeline;
mod reconstruct;
mod subset;

pub use condition::{
    check_condition1, check_linear_independence, check_unique_witness, Condition1Report, LiVerdict,
    UniqueWitnessReport, EXACT_LI_CAP,
};
pub use pipeline::{
    build_value_groups, recover, sparsest_fit_core, AbortCertificate, AbortStage, CoreOutcome,
    FitComponent, RecoverOptions, RecoveredComponent, RecoveryResult, ValueGroup,
    DEFAULT_SUBSET_BUDGET,
};
pub use reconstruct::reconstruct_permutation;

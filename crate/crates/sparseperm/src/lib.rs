//! Recovery of sparse non-negative functions on the symmetric group from one
//! shape-indexed marginal.
//!
//! A function `f : S_n → ℝ₊` with small support is summarized, for a partition
//! shape λ of n, by the matrix `f̂(λ) = Σ_σ f(σ) M^λ(σ)`, where `M^λ(σ)` is the
//! 0/1 matrix of σ's action on ordered set partitions with block sizes λ. This
//! crate answers: when does that single matrix determine f, and how is f read
//! back out of it?
//!
//! Modules:
//! - [`symgroup`]: permutations, shapes, partition rank/unrank, action matrices.
//! - [`marginals`]: sparse support functions and their marginal matrices.
//! - [`sparsest_fit`]: the identifiability conditions and the ascending-value
//!   decoding algorithm that inverts a marginal back to a sparse function.
//! - [`oracle`]: ground-truth machinery — exhaustive minimal-support search by
//!   exact linear algebra, and constructive equal-mass indistinguishability
//!   witnesses.
//! - [`randmodel`]: seeded random ensembles, recovery/condition trials, and a
//!   deterministic parallel sweep engine with CSV output.
//! - [`analysis`]: closed-form sparsity thresholds, entropy exponents, and the
//!   information-theoretic converse bound.
//!
//! Start with the runnable examples (`cargo run --example <name>`):
//! - `recover_round_trip` — build a function, take its marginal, decode it back.
//! - `degenerate_marginals` — small marginals with sparser or tied explanations.
//! - `mass_shift_witness` — equal-mass rewrites invisible to a first-order marginal.
//! - `phase_transition_sweep` — recovery rate as sparsity crosses its threshold.
//! - `threshold_calculator` — closed-form achievable/converse sparsity bounds.
//! - `partition_action` — the indexing and matrix machinery underneath.

pub mod analysis;
pub mod error;
pub mod files;
pub mod marginals;
pub mod oracle;
pub mod randmodel;
pub mod rng;
pub mod scalar;
pub mod sparsest_fit;
pub mod symgroup;

pub use error::{Error, Result};
pub use scalar::{Scalar, Tolerance, ValueMode};

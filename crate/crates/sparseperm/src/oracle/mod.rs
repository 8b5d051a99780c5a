//! Ground-truth instruments for small problems: exhaustive minimum-support
//! enumeration over exact rationals, and constructive same-marginal
//! same-mass witnesses that certify when a marginal cannot identify its
//! source.

mod l0;
mod linalg;
mod witness;

pub use l0::{l0_oracle, L0_MAX_K, L0_MAX_N};
pub use witness::{l1_witness, single_cycle_probability};

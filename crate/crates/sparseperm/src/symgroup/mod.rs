//! Symmetric-group primitives: permutations, partition shapes with
//! rank/unrank, and the induced action matrices `M^λ(σ)`.

mod induced;
mod perm;
mod shape;

pub use induced::{InducedPermutation, DEFAULT_DLAMBDA_CAP};
pub use perm::{all_permutations, Permutation};
pub use shape::{act, LambdaShape, PartitionWord};

//! The action of a permutation on all partitions of one shape: a `D_λ × D_λ`
//! permutation matrix `M^λ(σ)` with `M[i][j] = 1` iff `σ(t_j) = t_i`, stored
//! as one row index per column.

use crate::error::{Error, Result};
use crate::symgroup::perm::Permutation;
use crate::symgroup::shape::{act, LambdaShape};

/// Default cap on `D_λ` for operations that enumerate all partitions.
pub const DEFAULT_DLAMBDA_CAP: u64 = 1_000_000;

/// Sparse form of `M^λ(σ)`: `rows[j]` is the row of the single 1 in column j.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InducedPermutation {
    rows: Vec<u64>,
}

impl InducedPermutation {
    /// Computes the induced matching of `sigma` at `shape`. Requires
    /// `D_λ <= cap` since it enumerates every partition.
    pub fn compute(shape: &LambdaShape, sigma: &Permutation, cap: u64) -> Result<Self> {
        if sigma.n() != shape.n() {
            return Err(Error::DimensionMismatch(format!(
                "permutation of n={} at shape of n={}",
                sigma.n(),
                shape.n()
            )));
        }
        let d = shape.d_lambda()?;
        if d > cap as u128 {
            return Err(Error::CapExceeded { d, cap });
        }
        let d = d as u64;
        let n = shape.n();

        // Shape (n-1, 1): partition index j holds element n-j alone in the
        // small block, so the action reduces to the permutation itself.
        if shape.parts() == [n - 1, 1] {
            let rows = (0..d)
                .map(|j| (n - sigma.image(n - j as u32)) as u64)
                .collect();
            return Ok(InducedPermutation { rows });
        }

        let mut rows = Vec::with_capacity(d as usize);
        let mut t = shape.first_word();
        loop {
            let u = act(sigma, &t);
            rows.push(shape.rank(&u)? as u64);
            if !t.advance() {
                break;
            }
        }
        debug_assert_eq!(rows.len(), d as usize);
        Ok(InducedPermutation { rows })
    }

    pub fn d(&self) -> u64 {
        self.rows.len() as u64
    }

    /// Row of the 1 in column `j`.
    pub fn row_for_col(&self, j: u64) -> u64 {
        self.rows[j as usize]
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(j, &i)| i == j as u64)
    }

    /// Matrix product `self · other`, again a matching.
    pub fn compose(&self, other: &InducedPermutation) -> InducedPermutation {
        assert_eq!(self.d(), other.d());
        let rows = other.rows.iter().map(|&i| self.rows[i as usize]).collect();
        InducedPermutation { rows }
    }

    /// Number of cycles of the column→row map, fixed points included. This is
    /// the number of connected components of the bipartite graph pairing each
    /// column with its row.
    pub fn cycle_count(&self) -> u64 {
        let d = self.rows.len();
        let mut seen = vec![false; d];
        let mut cycles = 0;
        for start in 0..d {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = self.rows[j] as usize;
            }
        }
        cycles
    }
}

//! Sparse non-negative functions on S_n and their shape-indexed marginals.
//!
//! The marginal of `f` at shape λ is `f̂(λ) = Σ_σ f(σ) M^λ(σ)`, a `D_λ × D_λ`
//! non-negative matrix stored sparsely by (row, col). Every row and column sum
//! equals `‖f‖₁`, and the sum over all cells equals `D_λ · ‖f‖₁`; `verify`
//! checks that internal consistency.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Tolerance, ValueMode};
use crate::symgroup::{InducedPermutation, LambdaShape, Permutation};

/// A function S_n → ℝ with finite support and strictly positive values.
/// Entries are kept sorted by permutation; duplicates merge by summing.
#[derive(Clone, PartialEq, Debug)]
pub struct SparseSupportFunction {
    n: u32,
    mode: ValueMode,
    entries: Vec<(Permutation, Scalar)>,
}

impl SparseSupportFunction {
    pub fn new(n: u32, mode: ValueMode, pairs: Vec<(Permutation, Scalar)>) -> Result<Self> {
        let mut merged: BTreeMap<Permutation, Scalar> = BTreeMap::new();
        for (perm, value) in pairs {
            if perm.n() != n {
                return Err(Error::DimensionMismatch(format!(
                    "permutation of n={} in a function on n={}",
                    perm.n(),
                    n
                )));
            }
            if value.mode() != mode {
                return Err(Error::ModeMismatch(format!(
                    "{} value in a {mode} function",
                    value.mode()
                )));
            }
            if !value.is_finite() {
                return Err(Error::InvalidValue("non-finite value".into()));
            }
            if !value.is_positive() {
                return Err(Error::InvalidValue(format!(
                    "support values must be positive, got {}",
                    value.render()
                )));
            }
            match merged.get_mut(&perm) {
                Some(v) => v.add_assign(&value),
                None => {
                    merged.insert(perm, value);
                }
            }
        }
        Ok(SparseSupportFunction {
            n,
            mode,
            entries: merged.into_iter().collect(),
        })
    }

    pub fn empty(n: u32, mode: ValueMode) -> Self {
        SparseSupportFunction {
            n,
            mode,
            entries: Vec::new(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn mode(&self) -> ValueMode {
        self.mode
    }

    /// Support size ‖f‖₀ (after duplicate merging).
    pub fn sparsity(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(Permutation, Scalar)] {
        &self.entries
    }

    pub fn support(&self) -> impl Iterator<Item = &Permutation> {
        self.entries.iter().map(|(p, _)| p)
    }

    pub fn value_of(&self, perm: &Permutation) -> Option<&Scalar> {
        self.entries
            .binary_search_by(|(p, _)| p.cmp(perm))
            .ok()
            .map(|i| &self.entries[i].1)
    }

    /// ‖f‖₁ = Σ f(σ).
    pub fn total_mass(&self) -> Scalar {
        let mut acc = Scalar::zero(self.mode);
        for (_, v) in &self.entries {
            acc.add_assign(v);
        }
        acc
    }

    /// Same support and mode, values equal under the mode's notion of equality.
    pub fn approx_eq(&self, other: &SparseSupportFunction, tol: &Tolerance) -> bool {
        self.n == other.n
            && self.mode == other.mode
            && self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|((pa, va), (pb, vb))| pa == pb && va.approx_eq(vb, tol))
    }
}

/// Sparse `D_λ × D_λ` marginal matrix. Only non-zero cells are stored, keyed
/// by 0-based (row, col).
#[derive(Clone, PartialEq, Debug)]
pub struct MarginalMatrix {
    shape: LambdaShape,
    mode: ValueMode,
    d: u64,
    cells: BTreeMap<(u64, u64), Scalar>,
}

/// Outcome of `MarginalMatrix::verify`.
#[derive(Clone, Debug)]
pub struct ConsistencyReport {
    pub ok: bool,
    pub detail: Option<String>,
}

impl MarginalMatrix {
    /// Assembles a marginal from raw cells (used by file loading and tests).
    /// Cells must be in range, positive, and in one mode.
    pub fn from_cells(
        shape: LambdaShape,
        mode: ValueMode,
        cap: u64,
        raw: Vec<(u64, u64, Scalar)>,
    ) -> Result<Self> {
        let d = checked_d(&shape, cap)?;
        let mut cells = BTreeMap::new();
        for (i, j, v) in raw {
            if i >= d || j >= d {
                return Err(Error::DimensionMismatch(format!(
                    "cell ({i}, {j}) outside a {d}×{d} marginal"
                )));
            }
            if v.mode() != mode {
                return Err(Error::ModeMismatch(
                    "cell value mode differs from marginal mode".into(),
                ));
            }
            if !v.is_finite() || !v.is_positive() {
                return Err(Error::InvalidValue(format!(
                    "cell value must be positive, got {}",
                    v.render()
                )));
            }
            if cells.insert((i, j), v).is_some() {
                return Err(Error::MalformedFile(format!("cell ({i}, {j}) repeated")));
            }
        }
        Ok(MarginalMatrix {
            shape,
            mode,
            d,
            cells,
        })
    }

    pub fn shape(&self) -> &LambdaShape {
        &self.shape
    }

    pub fn mode(&self) -> ValueMode {
        self.mode
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn get(&self, i: u64, j: u64) -> Option<&Scalar> {
        self.cells.get(&(i, j))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u64, u64), &Scalar)> {
        self.cells.iter()
    }

    /// Σ over all cells; equals `D_λ · ‖f‖₁` for a true marginal.
    pub fn grand_total(&self) -> Scalar {
        let mut acc = Scalar::zero(self.mode);
        for v in self.cells.values() {
            acc.add_assign(v);
        }
        acc
    }

    /// Mode-aware cell-wise equality.
    pub fn approx_eq(&self, other: &MarginalMatrix, tol: &Tolerance) -> bool {
        self.shape == other.shape
            && self.mode == other.mode
            && self.cells.len() == other.cells.len()
            && self
                .cells
                .iter()
                .zip(&other.cells)
                .all(|((ka, va), (kb, vb))| ka == kb && va.approx_eq(vb, tol))
    }

    /// Checks the doubly-balanced structure: every row sum and every column
    /// sum equals the same mass (and `expected_mass` when supplied).
    pub fn verify(&self, expected_mass: Option<&Scalar>, tol: &Tolerance) -> ConsistencyReport {
        let mut row_sums: BTreeMap<u64, Scalar> = BTreeMap::new();
        let mut col_sums: BTreeMap<u64, Scalar> = BTreeMap::new();
        for (&(i, j), v) in &self.cells {
            row_sums
                .entry(i)
                .or_insert_with(|| Scalar::zero(self.mode))
                .add_assign(v);
            col_sums
                .entry(j)
                .or_insert_with(|| Scalar::zero(self.mode))
                .add_assign(v);
        }
        let zero = Scalar::zero(self.mode);
        let reference = match expected_mass {
            Some(m) => m.clone(),
            None => row_sums
                .values()
                .next()
                .cloned()
                .unwrap_or_else(|| zero.clone()),
        };
        let fail = |detail: String| ConsistencyReport {
            ok: false,
            detail: Some(detail),
        };
        if !reference.approx_eq(&zero, tol) {
            for (name, sums) in [("row", &row_sums), ("column", &col_sums)] {
                if sums.len() < self.d as usize {
                    let missing = (0..self.d).find(|k| !sums.contains_key(k)).unwrap();
                    return fail(format!(
                        "{name} {missing} sums to zero, expected {}",
                        reference.render()
                    ));
                }
            }
        }
        for (name, sums) in [("row", row_sums), ("column", col_sums)] {
            for (k, s) in sums {
                if !s.approx_eq(&reference, tol) {
                    return fail(format!(
                        "{name} {k} sums to {}, expected {}",
                        s.render(),
                        reference.render()
                    ));
                }
            }
        }
        ConsistencyReport {
            ok: true,
            detail: None,
        }
    }
}

fn checked_d(shape: &LambdaShape, cap: u64) -> Result<u64> {
    let d = shape.d_lambda()?;
    if d > cap as u128 {
        return Err(Error::CapExceeded { d, cap });
    }
    Ok(d as u64)
}

/// `f̂(λ) = Σ_σ f(σ) M^λ(σ)`.
///
/// Matchings are computed in parallel; accumulation runs in entry order, so
/// the result (including float rounding) is independent of worker count.
pub fn fourier_coefficient(
    f: &SparseSupportFunction,
    shape: &LambdaShape,
    cap: u64,
) -> Result<MarginalMatrix> {
    if f.n() != shape.n() {
        return Err(Error::DimensionMismatch(format!(
            "function on n={} at shape of n={}",
            f.n(),
            shape.n()
        )));
    }
    let d = checked_d(shape, cap)?;
    let matchings: Result<Vec<InducedPermutation>> = f
        .entries()
        .par_iter()
        .map(|(sigma, _)| InducedPermutation::compute(shape, sigma, cap))
        .collect();
    let matchings = matchings?;
    let mut cells: BTreeMap<(u64, u64), Scalar> = BTreeMap::new();
    for ((_, value), m) in f.entries().iter().zip(&matchings) {
        for j in 0..d {
            let key = (m.row_for_col(j), j);
            match cells.get_mut(&key) {
                Some(v) => v.add_assign(value),
                None => {
                    cells.insert(key, value.clone());
                }
            }
        }
    }
    Ok(MarginalMatrix {
        shape: shape.clone(),
        mode: f.mode(),
        d,
        cells,
    })
}

/// Built-in small functions exercising the degenerate corners of marginal
/// identifiability, plus the canonical two-swap collision identity.
pub mod fixtures {
    use super::*;

    pub const BUILTIN_NAMES: &[&str] = &[
        "sparser-alternative",
        "twin-marginal",
        "ambiguous-triple",
        "mass-shift-pair",
    ];

    /// `[(1 2), (3 4), (1 2)(3 4), id]` on `{1,…,n}`, n ≥ 4. The four satisfy
    /// `M^λ(σ1) + M^λ(σ2) = M^λ(σ3) + M^λ(σ4)` at λ = (n-1, 1).
    pub fn double_swap_quad(n: u32) -> Result<[Permutation; 4]> {
        if n < 4 {
            return Err(Error::Precondition("quad fixture needs n >= 4".into()));
        }
        Ok([
            Permutation::transposition(n, 1, 2)?,
            Permutation::transposition(n, 3, 4)?,
            Permutation::from_disjoint_cycles(n, &[vec![1, 2], vec![3, 4]])?,
            Permutation::identity(n),
        ])
    }

    fn exact(v: u64) -> Scalar {
        Scalar::from_u64(v, ValueMode::Exact)
    }

    /// A named exact-mode fixture function on `{1,…,n}`.
    pub fn builtin(name: &str, n: u32) -> Result<SparseSupportFunction> {
        let [s1, s2, s3, s4] = double_swap_quad(n)?;
        let pairs = match name {
            // Four support points whose marginal also has a 3-point explanation.
            "sparser-alternative" => vec![
                (s1, exact(1)),
                (s2, exact(2)),
                (s3, exact(3)),
                (s4, exact(4)),
            ],
            // Equal masses on two disjoint swaps: the marginal has a twin.
            "twin-marginal" => vec![(s1, exact(1)), (s2, exact(1))],
            // Independent action matrices, yet the marginal is still ambiguous.
            "ambiguous-triple" => vec![(s1, exact(1)), (s2, exact(2)), (s3, exact(3))],
            // The minimal pair admitting an equal-mass rewrite.
            "mass-shift-pair" => vec![(s1, exact(1)), (s2, exact(2))],
            _ => {
                return Err(Error::Precondition(format!(
                    "unknown builtin {name:?}; expected one of {BUILTIN_NAMES:?}"
                )))
            }
        };
        SparseSupportFunction::new(n, ValueMode::Exact, pairs)
    }

    /// The two sides of the collision identity at λ = (n-1, 1), as marginals
    /// of unit-weight functions.
    pub fn twin_identity(n: u32, cap: u64) -> Result<(MarginalMatrix, MarginalMatrix)> {
        let [s1, s2, s3, s4] = double_swap_quad(n)?;
        let shape = LambdaShape::new(vec![n - 1, 1])?;
        let lhs =
            SparseSupportFunction::new(n, ValueMode::Exact, vec![(s1, exact(1)), (s2, exact(1))])?;
        let rhs =
            SparseSupportFunction::new(n, ValueMode::Exact, vec![(s3, exact(1)), (s4, exact(1))])?;
        Ok((
            fourier_coefficient(&lhs, &shape, cap)?,
            fourier_coefficient(&rhs, &shape, cap)?,
        ))
    }
}

//! Exhaustive minimum-support solving at desk scale.
//!
//! `l0_oracle` answers the question the fast recovery pipeline cannot: what
//! is the *set* of sparsest non-negative explanations of a marginal? It
//! enumerates candidate supports by increasing size and solves each exact
//! linear system over the rationals, so uniqueness (or its failure) is
//! decided, not guessed. The cost is scale: it is a ground-truth instrument
//! for n ≤ 5, not an algorithm.

use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::marginals::{MarginalMatrix, SparseSupportFunction};
use crate::scalar::{Scalar, ValueMode};
use crate::symgroup::{all_permutations, InducedPermutation, Permutation};

use super::linalg::{solve_exact, SolveOutcome};

/// Largest `n` the oracle accepts (|S_5| = 120 candidate permutations).
pub const L0_MAX_N: u32 = 5;
/// Largest support size the oracle will search for.
pub const L0_MAX_K: usize = 5;
/// Hard ceiling on candidate supports examined at any single size, so a
/// dense marginal fails fast instead of grinding through C(120, 5) systems.
const SUPPORT_BUDGET: u64 = 5_000_000;

/// A permutation that survived cell-coverage filtering, with its matching
/// written three ways: row per column, flat cell indices, coverage bitmask.
struct Candidate {
    perm: Permutation,
    cell_indices: Vec<usize>,
    mask: Vec<u64>,
}

/// All sparsest non-negative functions whose marginal at `m.shape()` equals
/// `m` exactly, searching support sizes `0..=k_max`.
///
/// Solutions are returned for the *first* size at which any exist, so a
/// single-element result is a proof of uniqueness at minimal support and a
/// longer one is a counterexample. An empty result means no function with at
/// most `k_max` support points reproduces `m`; that is an answer, not an
/// error.
pub fn l0_oracle(m: &MarginalMatrix, k_max: usize) -> Result<Vec<SparseSupportFunction>> {
    if m.mode() != ValueMode::Exact {
        return Err(Error::Precondition(
            "l0_oracle needs an exact-rational marginal; float cells cannot anchor equality proofs"
                .into(),
        ));
    }
    let n = m.shape().n();
    if n > L0_MAX_N {
        return Err(Error::Precondition(format!(
            "l0_oracle enumerates all of S_n; n = {n} exceeds the cap of {L0_MAX_N}"
        )));
    }
    if k_max > L0_MAX_K {
        return Err(Error::Precondition(format!(
            "l0_oracle searches supports up to size {L0_MAX_K}; got k_max = {k_max}"
        )));
    }

    // The empty function is the unique explanation of an empty marginal.
    if m.num_cells() == 0 {
        return Ok(vec![SparseSupportFunction::empty(n, ValueMode::Exact)]);
    }

    let cells: Vec<((u64, u64), BigRational)> = m
        .iter()
        .map(|(&cell, v)| {
            (
                cell,
                v.as_exact().expect("exact mode checked above").clone(),
            )
        })
        .collect();
    let rhs: Vec<BigRational> = cells.iter().map(|(_, v)| v.clone()).collect();
    let cell_index: std::collections::BTreeMap<(u64, u64), usize> = cells
        .iter()
        .enumerate()
        .map(|(i, (cell, _))| (*cell, i))
        .collect();
    let words = cells.len().div_ceil(64);

    // A permutation can carry positive mass only if every cell of its
    // matching is present in m: a missing cell would force its equation to
    // 0 = value > 0. Filtering on that cuts the pool far below |S_n|.
    let d = m.d();
    let candidates: Vec<Candidate> = all_permutations(n)
        .into_iter()
        .filter_map(|perm| {
            let matching = InducedPermutation::compute(m.shape(), &perm, d).ok()?;
            let mut cell_indices = Vec::with_capacity(d as usize);
            let mut mask = vec![0u64; words];
            for j in 0..d {
                let idx = *cell_index.get(&(matching.row_for_col(j), j))?;
                cell_indices.push(idx);
                mask[idx / 64] |= 1 << (idx % 64);
            }
            Some(Candidate {
                perm,
                cell_indices,
                mask,
            })
        })
        .collect();

    let mut full_mask = vec![0u64; words];
    for (idx, _) in cells.iter().enumerate() {
        full_mask[idx / 64] |= 1 << (idx % 64);
    }

    for size in 1..=k_max.min(candidates.len()) {
        let count = binomial(candidates.len() as u64, size as u64);
        if count > SUPPORT_BUDGET {
            return Err(Error::Precondition(format!(
                "{count} candidate supports of size {size} exceed the enumeration budget of {SUPPORT_BUDGET}"
            )));
        }
        // Deterministic despite the parallel scan: results carry their
        // lexicographic combination rank and are re-sorted on collection.
        let mut found: Vec<(u64, SparseSupportFunction)> = (0..count)
            .into_par_iter()
            .filter_map(|rank| {
                let picks = combination_unrank(candidates.len(), size, rank);
                solve_support(&candidates, &picks, &rhs, &full_mask, n).map(|f| (rank, f))
            })
            .collect();
        if !found.is_empty() {
            found.sort_by_key(|(rank, _)| *rank);
            return Ok(found.into_iter().map(|(_, f)| f).collect());
        }
    }
    Ok(Vec::new())
}

/// Tries one support set; `Some` iff it admits a strictly positive exact
/// solution.
fn solve_support(
    candidates: &[Candidate],
    picks: &[usize],
    rhs: &[BigRational],
    full_mask: &[u64],
    n: u32,
) -> Option<SparseSupportFunction> {
    // Every cell must be covered by someone, else its equation reads 0 = v.
    let mut union = vec![0u64; full_mask.len()];
    for &p in picks {
        for (w, m) in union.iter_mut().zip(&candidates[p].mask) {
            *w |= m;
        }
    }
    if union != full_mask {
        return None;
    }

    let columns: Vec<Vec<BigRational>> = picks
        .iter()
        .map(|&p| {
            let mut col = vec![BigRational::from_integer(0.into()); rhs.len()];
            for &idx in &candidates[p].cell_indices {
                col[idx] += BigRational::from_integer(1.into());
            }
            col
        })
        .collect();

    match solve_exact(&columns, rhs) {
        SolveOutcome::Unique(x) => {
            if !x.iter().all(|v| v.is_positive()) {
                return None;
            }
            let pairs = picks
                .iter()
                .zip(x)
                .map(|(&p, v)| (candidates[p].perm.clone(), Scalar::Exact(v)))
                .collect();
            // Positivity was just checked, so construction cannot fail.
            Some(
                SparseSupportFunction::new(n, ValueMode::Exact, pairs)
                    .expect("positive exact entries"),
            )
        }
        SolveOutcome::Inconsistent => None,
        // Dependent columns cannot yield a *strictly* positive solution at
        // the first feasible size: sliding along a kernel direction from any
        // positive solution reaches the boundary where a coordinate hits
        // zero, which is a solution on a strictly smaller support — and all
        // smaller sizes were already exhausted without finding one.
        SolveOutcome::Underdetermined => None,
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// The `rank`-th (lexicographic) `size`-subset of `0..pool`.
fn combination_unrank(pool: usize, size: usize, mut rank: u64) -> Vec<usize> {
    let mut picks = Vec::with_capacity(size);
    let mut next = 0usize;
    for remaining in (1..=size).rev() {
        loop {
            let with_next = binomial((pool - next - 1) as u64, (remaining - 1) as u64);
            if rank < with_next {
                picks.push(next);
                next += 1;
                break;
            }
            rank -= with_next;
            next += 1;
        }
    }
    picks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::marginals::{fixtures, fourier_coefficient};
    use crate::rng::{bounded, stream, trial_seed};
    use crate::sparsest_fit::{check_condition1, EXACT_LI_CAP};
    use crate::symgroup::LambdaShape;

    fn exact(v: u64) -> Scalar {
        Scalar::from_u64(v, ValueMode::Exact)
    }

    fn shape31() -> LambdaShape {
        LambdaShape::new(vec![3, 1]).unwrap()
    }

    fn func(n: u32, pairs: Vec<(Permutation, Scalar)>) -> SparseSupportFunction {
        SparseSupportFunction::new(n, ValueMode::Exact, pairs).unwrap()
    }

    fn marginal_of(f: &SparseSupportFunction, shape: &LambdaShape) -> MarginalMatrix {
        fourier_coefficient(f, shape, 1000).unwrap()
    }

    /// Every solution the oracle emits must reproduce the marginal exactly.
    fn assert_solutions_reproduce(solutions: &[SparseSupportFunction], m: &MarginalMatrix) {
        for g in solutions {
            assert_eq!(&marginal_of(g, m.shape()), m);
        }
    }

    #[test]
    fn combination_unranking_is_lexicographic_and_complete() {
        let mut seen = Vec::new();
        for rank in 0..binomial(6, 3) {
            seen.push(combination_unrank(6, 3, rank));
        }
        let mut sorted = seen.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(
            seen, sorted,
            "ranks enumerate subsets in sorted order, no repeats"
        );
        assert_eq!(seen.len(), 20);
        assert_eq!(seen[0], vec![0, 1, 2]);
        assert_eq!(seen[19], vec![3, 4, 5]);
    }

    #[test]
    fn single_support_point_is_found_uniquely() {
        let f = func(
            4,
            vec![(Permutation::transposition(4, 2, 3).unwrap(), exact(7))],
        );
        let m = marginal_of(&f, &shape31());
        let solutions = l0_oracle(&m, 3).unwrap();
        assert_eq!(solutions, vec![f]);
    }

    #[test]
    fn empty_marginal_has_the_empty_solution() {
        let m = MarginalMatrix::from_cells(shape31(), ValueMode::Exact, 1000, vec![]).unwrap();
        let solutions = l0_oracle(&m, 2).unwrap();
        assert_eq!(
            solutions,
            vec![SparseSupportFunction::empty(4, ValueMode::Exact)]
        );
    }

    #[test]
    fn preconditions_are_enforced() {
        let f = fixtures::builtin("twin-marginal", 4).unwrap();
        let m = marginal_of(&f, &shape31());
        assert!(matches!(l0_oracle(&m, 6), Err(Error::Precondition(_))));

        let six = LambdaShape::new(vec![5, 1]).unwrap();
        let g = func(6, vec![(Permutation::identity(6), exact(1))]);
        let m6 = marginal_of(&g, &six);
        assert!(matches!(l0_oracle(&m6, 2), Err(Error::Precondition(_))));

        let float = MarginalMatrix::from_cells(
            shape31(),
            ValueMode::Float,
            1000,
            vec![
                (0, 0, Scalar::Float(1.0)),
                (1, 1, Scalar::Float(1.0)),
                (2, 2, Scalar::Float(1.0)),
                (3, 3, Scalar::Float(1.0)),
            ],
        )
        .unwrap();
        assert!(matches!(l0_oracle(&float, 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn too_small_k_max_returns_no_solutions() {
        let f = fixtures::builtin("sparser-alternative", 4).unwrap();
        let m = marginal_of(&f, &shape31());
        assert!(l0_oracle(&m, 2).unwrap().is_empty());
    }

    /// The four-point collision fixture has exactly two three-point
    /// explanations, each obtained by eliminating one side of the identity
    /// `M(σ1) + M(σ2) = M(σ3) + M(σ4)` from the original weights (1,2,3,4).
    #[test]
    fn four_point_fixture_collapses_to_two_triples() {
        let [s1, s2, s3, s4] = fixtures::double_swap_quad(4).unwrap();
        let f = fixtures::builtin("sparser-alternative", 4).unwrap();
        let m = marginal_of(&f, &shape31());
        let solutions = l0_oracle(&m, 4).unwrap();
        assert_solutions_reproduce(&solutions, &m);

        let expected_a = func(
            4,
            vec![
                (s2.clone(), exact(1)),
                (s3.clone(), exact(4)),
                (s4.clone(), exact(5)),
            ],
        );
        let expected_b = func(4, vec![(s1, exact(4)), (s2, exact(5)), (s4, exact(1))]);
        assert_eq!(solutions.len(), 2);
        assert!(solutions.contains(&expected_a));
        assert!(solutions.contains(&expected_b));
    }

    /// Equal masses on two disjoint swaps: the marginal splits into two
    /// matchings in two different ways, giving two size-2 solutions.
    #[test]
    fn twin_fixture_has_two_size_two_solutions() {
        let [s1, s2, s3, s4] = fixtures::double_swap_quad(4).unwrap();
        let f = fixtures::builtin("twin-marginal", 4).unwrap();
        let m = marginal_of(&f, &shape31());
        let solutions = l0_oracle(&m, 3).unwrap();
        assert_solutions_reproduce(&solutions, &m);

        let expected_a = func(4, vec![(s1, exact(1)), (s2, exact(1))]);
        let expected_b = func(4, vec![(s3, exact(1)), (s4, exact(1))]);
        assert_eq!(solutions.len(), 2);
        assert!(solutions.contains(&expected_a));
        assert!(solutions.contains(&expected_b));
    }

    /// Three support matrices that are linearly independent, yet the
    /// marginal still has a second minimal explanation: independence of the
    /// support alone does not buy uniqueness.
    #[test]
    fn independent_triple_is_still_ambiguous() {
        let [s1, s2, s3, s4] = fixtures::double_swap_quad(4).unwrap();
        let f = fixtures::builtin("ambiguous-triple", 4).unwrap();
        let m = marginal_of(&f, &shape31());

        // First confirm the premise: Σ cᵢ·M(σᵢ) = 0 over the marginal's
        // cells forces c = 0, i.e. the three matchings have full column rank.
        let cell_index: std::collections::BTreeMap<(u64, u64), usize> = m
            .iter()
            .enumerate()
            .map(|(i, (&cell, _))| (cell, i))
            .collect();
        let columns: Vec<Vec<BigRational>> = [&s1, &s2, &s3]
            .iter()
            .map(|s| {
                let matching = InducedPermutation::compute(m.shape(), s, 1000).unwrap();
                let mut col = vec![BigRational::from_integer(0.into()); cell_index.len()];
                for j in 0..m.d() {
                    col[cell_index[&(matching.row_for_col(j), j)]] =
                        BigRational::from_integer(1.into());
                }
                col
            })
            .collect();
        let zeros = vec![BigRational::from_integer(0.into()); cell_index.len()];
        assert!(matches!(
            solve_exact(&columns, &zeros),
            SolveOutcome::Unique(_)
        ));

        let solutions = l0_oracle(&m, 4).unwrap();
        assert_solutions_reproduce(&solutions, &m);
        let expected_b = func(4, vec![(s2, exact(1)), (s3, exact(4)), (s4, exact(1))]);
        assert_eq!(solutions.len(), 2);
        assert!(solutions.contains(&f));
        assert!(solutions.contains(&expected_b));
    }

    /// Random well-conditioned functions are their own unique sparsest
    /// explanation, and the oracle proves it case by case.
    #[test]
    fn well_conditioned_functions_are_unique_minimizers() {
        let shape = shape31();
        let mut qualifying = 0;
        for trial in 0..12u32 {
            let mut rng = stream(trial_seed(9, 4, 3, trial));
            let mut pairs = Vec::new();
            for _ in 0..3 {
                // A wide value range keeps accidental integer relations
                // (v₁ + v₂ = v₃ and the like) out of the draws.
                pairs.push((
                    Permutation::sample_uniform(4, &mut rng),
                    exact(1 + bounded(&mut rng, 1_000_000)),
                ));
            }
            let Ok(f) = SparseSupportFunction::new(4, ValueMode::Exact, pairs) else {
                continue; // duplicate permutations drew the same support point
            };
            if f.sparsity() < 3 {
                continue;
            }
            if !check_condition1(&f, &shape, 1000, EXACT_LI_CAP)
                .unwrap()
                .holds()
            {
                continue;
            }
            qualifying += 1;
            let m = marginal_of(&f, &shape);
            let solutions = l0_oracle(&m, 4).unwrap();
            assert_eq!(solutions, vec![f.clone()], "trial {trial}");
        }
        assert!(qualifying >= 6, "only {qualifying} of 12 trials qualified");
    }
}

//! Equal-mass rewrite witnesses.
//!
//! A recovered function is only as trustworthy as the marginal is
//! informative. `l1_witness` searches for a concrete second function with
//! the *same* marginal and the *same* total mass as the input — a
//! certificate that no procedure, however clever, could have told the two
//! apart from this shape alone. The construction moves mass across a pair
//! of support points whose relative permutation factors into at least two
//! nontrivial cycles; every emitted witness is re-verified from scratch, so
//! a `None` is honest ignorance while a `Some` is proof.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::marginals::{fourier_coefficient, SparseSupportFunction};
use crate::scalar::{Scalar, ValueMode};
use crate::symgroup::{LambdaShape, Permutation};

/// Pairs whose relative permutation has more cycles than this are skipped;
/// the split enumeration is exponential in the cycle count.
const MAX_SPLIT_CYCLES: usize = 16;

/// Searches for a function `g ≠ f` with the same marginal at `shape` and the
/// same total mass, by rewriting mass across support pairs.
///
/// For each ordered support pair `(σ_a, σ_b)`, the relative permutation
/// `π = σ_b ∘ σ_a⁻¹` is factored into nontrivial cycles; every split
/// `π = c₁ ∘ c₂` into two disjoint nonempty halves proposes
///
/// ```text
/// g = f − m·[σ_a] − m·[σ_b] + m·[c₁∘σ_a] + m·[c₂∘σ_a],   m = min(f(σ_a), f(σ_b))
/// ```
///
/// At shape `(n−1, 1)` the proposal is always exact; for other shapes it
/// usually is not. Either way the candidate is accepted only after its
/// marginal is recomputed and found equal, so `Ok(None)` means no *certified*
/// witness was found within the search bounds — not that none exists.
pub fn l1_witness(
    f: &SparseSupportFunction,
    shape: &LambdaShape,
    cap: u64,
) -> Result<Option<SparseSupportFunction>> {
    if f.mode() != ValueMode::Exact {
        return Err(Error::Precondition(
            "l1_witness needs exact-rational values; equality of marginals is not a float question"
                .into(),
        ));
    }
    if f.sparsity() < 2 {
        return Err(Error::Precondition(format!(
            "mass rewriting needs at least two support points; got {}",
            f.sparsity()
        )));
    }
    if f.n() != shape.n() {
        return Err(Error::DimensionMismatch(format!(
            "function on n={} at shape of n={}",
            f.n(),
            shape.n()
        )));
    }

    let n = f.n();
    let fhat = fourier_coefficient(f, shape, cap)?;
    for (sigma_a, value_a) in f.entries() {
        for (sigma_b, value_b) in f.entries() {
            if sigma_a == sigma_b {
                continue;
            }
            let pi = sigma_b.compose(&sigma_a.inverse());
            let cycles = pi.nontrivial_cycles();
            if cycles.len() < 2 || cycles.len() > MAX_SPLIT_CYCLES {
                continue;
            }
            let moved = if value_a.total_cmp(value_b) == Ordering::Less {
                value_a
            } else {
                value_b
            };

            // Enumerate splits with cycles[0] pinned to the c₂ side (its
            // complement would repeat the same split), single-cycle c₁ first.
            let mut masks: Vec<u32> = (1..(1u32 << (cycles.len() - 1))).collect();
            masks.sort_by_key(|m| (m.count_ones(), *m));
            for mask in masks {
                let (mut ones, mut rest) = (Vec::new(), vec![cycles[0].clone()]);
                for (i, cycle) in cycles[1..].iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        ones.push(cycle.clone());
                    } else {
                        rest.push(cycle.clone());
                    }
                }
                let c1 = Permutation::from_disjoint_cycles(n, &ones)?;
                let c2 = Permutation::from_disjoint_cycles(n, &rest)?;
                let g = rewrite(f, sigma_a, sigma_b, &c1, &c2, moved)?;

                // Verify-then-return: nothing below this point is trusted
                // until recomputed. A failed check just discards the split.
                if g == *f || g.sparsity() > f.sparsity() + 2 {
                    continue;
                }
                if g.total_mass().total_cmp(&f.total_mass()) != Ordering::Equal {
                    continue;
                }
                if fourier_coefficient(&g, shape, cap)? != fhat {
                    continue;
                }
                return Ok(Some(g));
            }
        }
    }
    Ok(None)
}

/// `f − m·[σ_a] − m·[σ_b] + m·[c₁∘σ_a] + m·[c₂∘σ_a]`, entries that reach
/// zero dropped.
fn rewrite(
    f: &SparseSupportFunction,
    sigma_a: &Permutation,
    sigma_b: &Permutation,
    c1: &Permutation,
    c2: &Permutation,
    moved: &Scalar,
) -> Result<SparseSupportFunction> {
    let mut map: BTreeMap<Permutation, Scalar> = f
        .entries()
        .iter()
        .map(|(p, v)| (p.clone(), v.clone()))
        .collect();
    for sigma in [sigma_a, sigma_b] {
        let v = map.get_mut(sigma).expect("support entry").sub(moved);
        if v.is_zero() {
            map.remove(sigma);
        } else {
            map.insert(sigma.clone(), v);
        }
    }
    for half in [c1, c2] {
        let target = half.compose(sigma_a);
        match map.get_mut(&target) {
            Some(v) => v.add_assign(moved),
            None => {
                map.insert(target, moved.clone());
            }
        }
    }
    SparseSupportFunction::new(f.n(), ValueMode::Exact, map.into_iter().collect())
}

/// Exact probability that a uniform random permutation of `{1,…,n}` has at
/// most one nontrivial cycle.
///
/// Such permutations are exactly the ones `l1_witness` cannot rewrite when
/// they appear as the relative permutation of a support pair, so this value
/// calibrates how often two-point functions evade the witness construction.
/// Counting: the identity, plus `C(n,l)·(l−1)!` ways to pick and arrange a
/// single cycle of length `l ≥ 2`.
pub fn single_cycle_probability(n: u32) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let mut count = BigInt::one();
    for l in 2..=n {
        count += binomial(n, l) * factorial(l - 1);
    }
    Ok(BigRational::new(count, factorial(n)))
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

fn binomial(n: u32, k: u32) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::marginals::fixtures;
    use crate::oracle::l0_oracle;
    use crate::rng::{bounded, stream, trial_seed};
    use crate::symgroup::all_permutations;
    use num_traits::ToPrimitive;

    fn exact(v: u64) -> Scalar {
        Scalar::from_u64(v, ValueMode::Exact)
    }

    fn shape(parts: &[u32]) -> LambdaShape {
        LambdaShape::new(parts.to_vec()).unwrap()
    }

    /// The invariants every witness must satisfy, recomputed independently.
    fn assert_valid_witness(
        f: &SparseSupportFunction,
        g: &SparseSupportFunction,
        shape: &LambdaShape,
    ) {
        assert_ne!(g, f);
        assert_eq!(
            fourier_coefficient(g, shape, 1000).unwrap(),
            fourier_coefficient(f, shape, 1000).unwrap()
        );
        assert_eq!(g.total_mass().total_cmp(&f.total_mass()), Ordering::Equal);
        assert!(g.sparsity() <= f.sparsity() + 2);
    }

    #[test]
    fn canonical_pair_yields_the_swapped_witness() {
        let [s1, s2, s3, s4] = fixtures::double_swap_quad(4).unwrap();
        let f = fixtures::builtin("mass-shift-pair", 4).unwrap();
        let sh = shape(&[3, 1]);
        let g = l1_witness(&f, &sh, 1000)
            .unwrap()
            .expect("two disjoint swaps must rewrite");
        assert_valid_witness(&f, &g, &sh);

        // min(1, 2) = 1 moves off both swaps: (1 2) drains to zero, and the
        // composed pair {(1 2)(3 4), id} absorbs it.
        let expected = SparseSupportFunction::new(
            4,
            ValueMode::Exact,
            vec![(s2, exact(1)), (s3, exact(1)), (s4, exact(1))],
        )
        .unwrap();
        assert_eq!(g, expected);
        drop(s1);
    }

    #[test]
    fn single_cycle_relative_permutation_has_no_witness() {
        // π = (1 2) is a single transposition: no split exists, and the
        // exhaustive oracle confirms the marginal pins f down uniquely.
        let f = SparseSupportFunction::new(
            4,
            ValueMode::Exact,
            vec![
                (Permutation::identity(4), exact(1)),
                (Permutation::transposition(4, 1, 2).unwrap(), exact(1)),
            ],
        )
        .unwrap();
        let sh = shape(&[3, 1]);
        assert_eq!(l1_witness(&f, &sh, 1000).unwrap(), None);

        let m = fourier_coefficient(&f, &sh, 1000).unwrap();
        assert_eq!(l0_oracle(&m, 4).unwrap(), vec![f]);
    }

    #[test]
    fn two_block_shape_rejects_the_unverifiable_rewrite() {
        // At shape (2, 2) the double-swap rewrite changes the marginal (a
        // word can be moved by both cycles at once), so verification must
        // throw every split away.
        let f = fixtures::builtin("mass-shift-pair", 4).unwrap();
        assert_eq!(l1_witness(&f, &shape(&[2, 2]), 1000).unwrap(), None);
    }

    #[test]
    fn witness_preconditions_are_enforced() {
        let one = SparseSupportFunction::new(
            4,
            ValueMode::Exact,
            vec![(Permutation::identity(4), exact(3))],
        )
        .unwrap();
        assert!(matches!(
            l1_witness(&one, &shape(&[3, 1]), 1000),
            Err(Error::Precondition(_))
        ));

        let float = SparseSupportFunction::new(
            4,
            ValueMode::Float,
            vec![
                (Permutation::identity(4), Scalar::Float(1.0)),
                (
                    Permutation::transposition(4, 1, 2).unwrap(),
                    Scalar::Float(1.0),
                ),
            ],
        )
        .unwrap();
        assert!(matches!(
            l1_witness(&float, &shape(&[3, 1]), 1000),
            Err(Error::Precondition(_))
        ));

        let f = fixtures::builtin("mass-shift-pair", 4).unwrap();
        assert!(matches!(
            l1_witness(&f, &shape(&[4, 1]), 1000),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn random_pairs_rewrite_exactly_when_the_relative_permutation_splits() {
        let sh = shape(&[7, 1]);
        let (mut found, mut missed) = (0, 0);
        for trial in 0..20u32 {
            let mut rng = stream(trial_seed(11, 8, 2, trial));
            let a = Permutation::sample_uniform(8, &mut rng);
            let b = Permutation::sample_uniform(8, &mut rng);
            if a == b {
                continue;
            }
            let f = SparseSupportFunction::new(
                8,
                ValueMode::Exact,
                vec![
                    (a.clone(), exact(1 + bounded(&mut rng, 50))),
                    (b.clone(), exact(1 + bounded(&mut rng, 50))),
                ],
            )
            .unwrap();
            let splittable = b.compose(&a.inverse()).nontrivial_cycles().len() >= 2;
            match l1_witness(&f, &sh, 1000).unwrap() {
                Some(g) => {
                    assert!(
                        splittable,
                        "trial {trial}: witness without a splittable pair"
                    );
                    assert_valid_witness(&f, &g, &sh);
                    found += 1;
                }
                None => {
                    assert!(!splittable, "trial {trial}: splittable pair but no witness");
                    missed += 1;
                }
            }
        }
        assert!(
            found >= 5 && missed >= 2,
            "found {found}, missed {missed}: seeds too lopsided"
        );
    }

    #[test]
    fn cycle_probability_matches_exhaustive_enumeration() {
        assert_eq!(single_cycle_probability(1).unwrap(), BigRational::one());
        assert!(single_cycle_probability(0).is_err());
        for n in 2..=7u32 {
            let hits = all_permutations(n)
                .iter()
                .filter(|p| p.nontrivial_cycles().len() <= 1)
                .count();
            let expected = BigRational::new(BigInt::from(hits), factorial(n));
            assert_eq!(single_cycle_probability(n).unwrap(), expected, "n = {n}");
        }
        // Frozen spot value: 21 of the 24 permutations of 4 points.
        assert_eq!(
            single_cycle_probability(4).unwrap(),
            BigRational::new(21.into(), 24.into())
        );
    }

    #[test]
    fn cycle_probability_decays_and_matches_sampling_at_n30() {
        let mut last = single_cycle_probability(4).unwrap();
        for n in 5..=30u32 {
            let p = single_cycle_probability(n).unwrap();
            assert!(p < last, "not decreasing at n = {n}");
            last = p;
        }

        let exact = single_cycle_probability(30).unwrap().to_f64().unwrap();
        assert!((0.093..0.095).contains(&exact), "p(30) = {exact}");

        // Monte Carlo cross-check: 200k uniform draws, allow four standard
        // deviations around the analytic value.
        let mut rng = stream(17);
        let samples = 200_000;
        let hits = (0..samples)
            .filter(|_| {
                Permutation::sample_uniform(30, &mut rng)
                    .nontrivial_cycles()
                    .len()
                    <= 1
            })
            .count();
        let rate = hits as f64 / samples as f64;
        let sigma = (exact * (1.0 - exact) / samples as f64).sqrt();
        assert!(
            (rate - exact).abs() < 4.0 * sigma,
            "rate {rate} vs exact {exact}"
        );
    }
}

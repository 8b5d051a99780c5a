//! Permutations of `{1, …, n}` in one-line image form.

use crate::error::{Error, Result};
use crate::rng::{self, Stream};

/// A permutation σ of `{1, …, n}`, stored as the image vector
/// `[σ(1), …, σ(n)]` with 1-based values.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("empty image list".into()));
        }
        let mut seen = vec![false; n];
        for &y in &images {
            if y == 0 || y as usize > n {
                return Err(Error::InvalidPermutation(format!(
                    "image {y} out of range 1..={n}"
                )));
            }
            if seen[y as usize - 1] {
                return Err(Error::InvalidPermutation(format!("image {y} repeated")));
            }
            seen[y as usize - 1] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: u32) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    /// The transposition `(a b)` acting on `{1, …, n}`.
    pub fn transposition(n: u32, a: u32, b: u32) -> Result<Self> {
        if a == b || a == 0 || b == 0 || a > n || b > n {
            return Err(Error::InvalidPermutation(format!(
                "bad transposition ({a} {b}) on n={n}"
            )));
        }
        let mut images: Vec<u32> = (1..=n).collect();
        images.swap(a as usize - 1, b as usize - 1);
        Ok(Permutation { images })
    }

    /// Builds a permutation of `{1, …, n}` from disjoint cycles; elements not
    /// mentioned are fixed.
    pub fn from_disjoint_cycles(n: u32, cycles: &[Vec<u32>]) -> Result<Self> {
        let mut images: Vec<u32> = (1..=n).collect();
        let mut touched = vec![false; n as usize];
        for cyc in cycles {
            for (pos, &x) in cyc.iter().enumerate() {
                if x == 0 || x > n {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle element {x} out of range"
                    )));
                }
                if touched[x as usize - 1] {
                    return Err(Error::InvalidPermutation(format!(
                        "element {x} in two cycles"
                    )));
                }
                touched[x as usize - 1] = true;
                let next = cyc[(pos + 1) % cyc.len()];
                images[x as usize - 1] = next;
            }
        }
        Permutation::from_images(images)
    }

    pub fn n(&self) -> u32 {
        self.images.len() as u32
    }

    /// σ(x), 1-based.
    pub fn image(&self, x: u32) -> u32 {
        self.images[x as usize - 1]
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &y)| y == i as u32 + 1)
    }

    /// (self ∘ other)(x) = self(other(x)).
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n(), "composing permutations of different n");
        let images = other.images.iter().map(|&y| self.image(y)).collect();
        Permutation { images }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for (i, &y) in self.images.iter().enumerate() {
            images[y as usize - 1] = i as u32 + 1;
        }
        Permutation { images }
    }

    /// Cycles of length ≥ 2, each starting at its smallest element, ordered by
    /// that element.
    pub fn nontrivial_cycles(&self) -> Vec<Vec<u32>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 1..=n as u32 {
            if seen[start as usize - 1] || self.image(start) == start {
                continue;
            }
            let mut cyc = vec![start];
            seen[start as usize - 1] = true;
            let mut x = self.image(start);
            while x != start {
                seen[x as usize - 1] = true;
                cyc.push(x);
                x = self.image(x);
            }
            out.push(cyc);
        }
        out
    }

    /// Number of cycles including fixed points.
    pub fn cycle_count(&self) -> u32 {
        let fixed = self
            .images
            .iter()
            .enumerate()
            .filter(|(i, &y)| y == *i as u32 + 1)
            .count();
        fixed as u32 + self.nontrivial_cycles().len() as u32
    }

    /// Uniform random permutation (Fisher-Yates over the raw keystream).
    pub fn sample_uniform(n: u32, rng: &mut Stream) -> Permutation {
        let mut images: Vec<u32> = (1..=n).collect();
        rng::shuffle(rng, &mut images);
        Permutation { images }
    }
}

/// Enumerates all of S_n in lexicographic image order. Intended for the small
/// `n` the exhaustive oracle supports.
pub fn all_permutations(n: u32) -> Vec<Permutation> {
    assert!(
        (1..=8).contains(&n),
        "exhaustive enumeration only for small n"
    );
    let mut out = Vec::new();
    let mut images: Vec<u32> = (1..=n).collect();
    loop {
        out.push(Permutation {
            images: images.clone(),
        });
        if !next_lex(&mut images) {
            break;
        }
    }
    out
}

/// Advances to the next lexicographic arrangement; false at the last one.
pub(crate) fn next_lex(xs: &mut [u32]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}


#[cfg(test)]
mod prop_tests {
    use super::*;
    use proptest::prelude::*;

    fn perm_of(n: u32) -> impl Strategy<Value = Permutation> {
        Just((1..=n).collect::<Vec<u32>>())
            .prop_shuffle()
            .prop_map(|images| Permutation::from_images(images).unwrap())
    }

    fn any_perm() -> impl Strategy<Value = Permutation> {
        (1..=9u32).prop_flat_map(perm_of)
    }

    proptest! {
        #[test]
        fn inverses_cancel(p in any_perm()) {
            let id = Permutation::identity(p.n());
            prop_assert_eq!(p.inverse().inverse(), p.clone());
            prop_assert_eq!(p.compose(&p.inverse()), id.clone());
            prop_assert_eq!(p.inverse().compose(&p), id);
        }

        #[test]
        fn composition_is_associative(
            (a, b, c) in (2..=7u32).prop_flat_map(|n| (perm_of(n), perm_of(n), perm_of(n)))
        ) {
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        }

        #[test]
        fn cycle_decomposition_round_trips(p in any_perm()) {
            let cycles = p.nontrivial_cycles();
            // Each cycle is led by its smallest member, cycles sorted by leader.
            for cyc in &cycles {
                prop_assert!(cyc.len() >= 2);
                prop_assert!(cyc.iter().skip(1).all(|&x| x > cyc[0]));
            }
            prop_assert!(cycles.windows(2).all(|w| w[0][0] < w[1][0]));
            let rebuilt = Permutation::from_disjoint_cycles(p.n(), &cycles).unwrap();
            prop_assert_eq!(rebuilt, p);
        }
    }
}

//! Integer-partition shapes λ and the ordered block partitions they index.
//!
//! A shape `λ = (λ1 ≥ … ≥ λr ≥ 1)` with `Σλi = n` and `r ≥ 2` determines the
//! family of ordered set partitions of `{1, …, n}` with block sizes λ. A
//! partition is stored as its block word: entry `x-1` is the 0-based block
//! holding element `x`. Partitions are numbered `0 … D_λ-1` in lexicographic
//! word order; `rank`/`unrank` convert both ways in 128-bit arithmetic using
//! the multinomial number system, and `D_λ = n!/Πλi!` values at or above
//! `2^127` are rejected so the counting arithmetic keeps headroom.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::symgroup::perm::{next_lex, Permutation};

const WIDTH_LIMIT: u128 = 1 << 127;

/// A partition shape of n with at least two parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LambdaShape {
    parts: Vec<u32>,
}

impl LambdaShape {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.len() < 2 {
            return Err(Error::InvalidShape("need at least two parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidShape("zero part".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidShape(format!(
                "parts not non-increasing: {parts:?}"
            )));
        }
        let n: u64 = parts.iter().map(|&p| p as u64).sum();
        if n > u32::MAX as u64 {
            return Err(Error::InvalidShape("n too large".into()));
        }
        Ok(LambdaShape { parts })
    }

    pub fn n(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn num_blocks(&self) -> usize {
        self.parts.len()
    }

    /// `D_λ = n! / Πλi!`, exactly. Errors once the count reaches `2^127`.
    pub fn d_lambda(&self) -> Result<u128> {
        let mut d: u128 = 1;
        let mut m: u64 = 0;
        for &part in &self.parts {
            for i in 1..=part as u64 {
                m += 1;
                d = exact_mul_div(d, m, i)?;
            }
        }
        if d >= WIDTH_LIMIT {
            return Err(Error::Overflow("computing D_lambda (>= 2^127)"));
        }
        Ok(d)
    }

    /// The lexicographically least block word (blocks in ascending order).
    pub fn first_word(&self) -> PartitionWord {
        let mut word = Vec::with_capacity(self.n() as usize);
        for (b, &part) in self.parts.iter().enumerate() {
            word.extend(std::iter::repeat_n(b as u32, part as usize));
        }
        PartitionWord { word }
    }

    fn counts_of(&self, w: &PartitionWord) -> Result<Vec<u64>> {
        let r = self.parts.len();
        let mut counts = vec![0u64; r];
        for &b in &w.word {
            if b as usize >= r {
                return Err(Error::InvalidWord(format!("block {b} out of range")));
            }
            counts[b as usize] += 1;
        }
        for (b, (&have, &want)) in counts.iter().zip(&self.parts).enumerate() {
            if have != want as u64 {
                return Err(Error::InvalidWord(format!(
                    "block {b} has {have} elements, shape wants {want}"
                )));
            }
        }
        Ok(counts)
    }

    /// Lexicographic position of `w` among all block words of this shape.
    pub fn rank(&self, w: &PartitionWord) -> Result<u128> {
        if w.word.len() != self.n() as usize {
            return Err(Error::InvalidWord("word length differs from n".into()));
        }
        let mut rem = self.counts_of(w)?;
        let mut cur = self.d_lambda()?; // multinomial of the remaining suffix
        let mut m = self.n() as u64;
        let mut rank: u128 = 0;
        for &b in &w.word {
            for &earlier in rem.iter().take(b as usize) {
                if earlier > 0 {
                    rank += exact_mul_div(cur, earlier, m)?;
                }
            }
            cur = exact_mul_div(cur, rem[b as usize], m)?;
            rem[b as usize] -= 1;
            m -= 1;
        }
        Ok(rank)
    }

    /// Inverse of `rank`.
    pub fn unrank(&self, idx: u128) -> Result<PartitionWord> {
        let d = self.d_lambda()?;
        if idx >= d {
            return Err(Error::IndexOutOfRange { idx, d });
        }
        let mut rem: Vec<u64> = self.parts.iter().map(|&p| p as u64).collect();
        let mut cur = d;
        let mut m = self.n() as u64;
        let mut idx = idx;
        let mut word = Vec::with_capacity(self.n() as usize);
        for _ in 0..self.n() {
            let mut chosen = None;
            for (b, &avail) in rem.iter().enumerate() {
                if avail == 0 {
                    continue;
                }
                let cnt = exact_mul_div(cur, avail, m)?;
                if idx < cnt {
                    chosen = Some((b, cnt));
                    break;
                }
                idx -= cnt;
            }
            let (b, cnt) = chosen.expect("index within D_lambda always lands in a block");
            word.push(b as u32);
            cur = cnt;
            rem[b] -= 1;
            m -= 1;
        }
        Ok(PartitionWord { word })
    }
}

impl fmt::Display for LambdaShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for LambdaShape {
    type Err = Error;

    /// Parses `"3,1"`-style shape strings.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Result<Vec<u32>> = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidShape(format!("bad part {p:?} in {s:?}")))
            })
            .collect();
        LambdaShape::new(parts?)
    }
}

/// An ordered set partition, as the block index of each element.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PartitionWord {
    word: Vec<u32>,
}

impl PartitionWord {
    pub fn from_word(word: Vec<u32>) -> Self {
        PartitionWord { word }
    }

    /// 0-based block of element `x` (1-based).
    pub fn block_of(&self, x: u32) -> u32 {
        self.word[x as usize - 1]
    }

    pub fn word(&self) -> &[u32] {
        &self.word
    }

    /// Advances in place to the lexicographic successor; false at the last
    /// word of the shape.
    pub fn advance(&mut self) -> bool {
        next_lex(&mut self.word)
    }
}

/// σ(t): the partition sending block b to `{σ(x) : x in block b of t}`.
pub fn act(sigma: &Permutation, t: &PartitionWord) -> PartitionWord {
    let mut word = vec![0u32; t.word.len()];
    for x in 1..=t.word.len() as u32 {
        word[sigma.image(x) as usize - 1] = t.word[x as usize - 1];
    }
    PartitionWord { word }
}

/// `cur * num / den` where the division is exact; checked against u128 range.
///
/// Exactness holds for every call site here because each result is itself a
/// multinomial count. After cancelling g = gcd(cur, den), the remaining
/// denominator is coprime to cur/g and so must divide num.
fn exact_mul_div(cur: u128, num: u64, den: u64) -> Result<u128> {
    let g = gcd(cur, den as u128);
    let cur = cur / g;
    let den = den as u128 / g;
    debug_assert_eq!(num as u128 % den, 0);
    let num = num as u128 / den;
    cur.checked_mul(num)
        .ok_or(Error::Overflow("multinomial counting"))
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

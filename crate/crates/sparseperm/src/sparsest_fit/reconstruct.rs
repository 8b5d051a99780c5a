//! Inverting a matching back to its permutation.
//!
//! The fit core outputs, per support permutation, the set of cells its
//! matching occupies: one (row, col) edge per column. Each edge (i, j) says
//! the permutation carries ordered partition t_j to t_i, which constrains
//! every element's image to land in the matching block. Intersecting those
//! constraints over all edges pins the permutation down.

use crate::error::{Error, Result};
use crate::symgroup::{act, LambdaShape, Permutation};

pub fn reconstruct_permutation(
    edges: &[(u64, u64)],
    shape: &LambdaShape,
    cap: u64,
) -> Result<Permutation> {
    let d = shape.d_lambda()?;
    if d > cap as u128 {
        return Err(Error::CapExceeded { d, cap });
    }
    let d = d as u64;
    if edges.len() as u64 != d {
        return Err(Error::Precondition(format!(
            "matching has {} edges for {d} columns",
            edges.len()
        )));
    }
    let mut seen = vec![false; d as usize];
    for &(i, j) in edges {
        if i >= d || j >= d {
            return Err(Error::Precondition(format!(
                "edge ({i}, {j}) outside a {d}×{d} matrix"
            )));
        }
        if std::mem::replace(&mut seen[j as usize], true) {
            return Err(Error::Precondition(format!("column {j} matched twice")));
        }
    }

    let n = shape.n();
    if shape.parts().len() == 2 && shape.parts()[1] == 1 {
        // Column j is the partition singling out element n − j, so edge
        // (i, j) reads σ(n − j) = n − i directly.
        let mut images = vec![0u32; n as usize];
        for &(i, j) in edges {
            images[(n as u64 - 1 - j) as usize] = (n as u64 - i) as u32;
        }
        return Permutation::from_images(images);
    }

    // General shapes: intersect per-element image candidates over all edges.
    let words: Vec<_> = {
        let mut out = Vec::with_capacity(d as usize);
        let mut w = shape.first_word();
        loop {
            out.push(w.clone());
            if !w.advance() {
                break;
            }
        }
        out
    };
    let slots = (n as usize).div_ceil(64);
    let mut candidates = vec![vec![u64::MAX; slots]; n as usize];
    let mut block_mask = vec![vec![0u64; slots]; shape.parts().len()];
    for &(i, j) in edges {
        let (ti, tj) = (&words[i as usize], &words[j as usize]);
        for mask in block_mask.iter_mut() {
            mask.iter_mut().for_each(|w| *w = 0);
        }
        for y in 1..=n {
            let b = ti.block_of(y) as usize;
            block_mask[b][(y - 1) as usize / 64] |= 1 << ((y - 1) % 64);
        }
        for x in 1..=n {
            let allowed = &block_mask[tj.block_of(x) as usize];
            for (c, a) in candidates[(x - 1) as usize].iter_mut().zip(allowed) {
                *c &= a;
            }
        }
    }
    let mut images = vec![0u32; n as usize];
    for x in 1..=n as usize {
        let set = &candidates[x - 1];
        let count: u32 = set.iter().map(|w| w.count_ones()).sum();
        if count != 1 {
            return Err(Error::Precondition(format!(
                "element {x} has {count} candidate images; the matching does not determine \
                 a permutation"
            )));
        }
        let slot = set.iter().position(|&w| w != 0).unwrap();
        images[x - 1] = (slot * 64) as u32 + set[slot].trailing_zeros() + 1;
    }
    let sigma = Permutation::from_images(images)?;
    // The intersection used each constraint once; confirm the whole matching.
    for &(i, j) in edges {
        if act(&sigma, &words[j as usize]) != words[i as usize] {
            return Err(Error::Precondition(format!(
                "candidate permutation violates edge ({i}, {j})"
            )));
        }
    }
    Ok(sigma)
}

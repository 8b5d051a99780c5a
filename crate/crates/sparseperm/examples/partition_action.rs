//! The combinatorial core: ordered partitions of {1..n} as block words,
//! the permutation action on them, and the induced 0/1 matrix.
//!
//! Run with `cargo run --example partition_action`.

use sparseperm::symgroup::{act, InducedPermutation, LambdaShape, Permutation};

fn main() -> sparseperm::Result<()> {
    // Shape (2,2): split {1,2,3,4} into two ordered blocks of two.
    let shape = LambdaShape::new(vec![2, 2])?;
    println!(
        "shape {:?}: D = {} ordered partitions",
        shape.parts(),
        shape.d_lambda()?
    );

    // Enumerate the six block words; word[x-1] is the block holding x.
    let mut word = shape.first_word();
    loop {
        let idx = shape.rank(&word)?;
        println!("  #{idx}  word {:?}", word.word());
        if !word.advance() {
            break;
        }
    }

    // A permutation relabels elements, carrying one partition to another.
    let sigma = Permutation::from_images(vec![2, 3, 4, 1])?;
    let t = shape.unrank(2)?;
    let image = act(&sigma, &t);
    println!(
        "sigma = {:?} sends word {:?} (#2) to {:?} (#{})",
        sigma.images(),
        t.word(),
        image.word(),
        shape.rank(&image)?
    );

    // Collecting the action over all D partitions gives the matrix M^λ(σ):
    // a permutation matrix on partition indices, stored as one row per column.
    let m = InducedPermutation::compute(&shape, &sigma, 1000)?;
    println!("M(sigma) at (2,2): rows by column = {:?}", m.rows());
    println!("cycle structure on partitions: {} cycles", m.cycle_count());

    // Composition of group elements matches composition of their matrices.
    let tau = Permutation::from_images(vec![2, 1, 4, 3])?;
    let lhs = InducedPermutation::compute(&shape, &sigma.compose(&tau), 1000)?;
    let rhs = m.compose(&InducedPermutation::compute(&shape, &tau, 1000)?);
    assert_eq!(lhs, rhs);
    println!("M(sigma ∘ tau) == M(sigma) ∘ M(tau): the action is a homomorphism");
    Ok(())
}

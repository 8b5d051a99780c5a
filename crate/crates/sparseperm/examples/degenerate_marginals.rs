//! Three small functions showing how a marginal can fail to pin down its
//! sparsest explanation, verified against the exhaustive oracle.
//!
//! Run with `cargo run --example degenerate_marginals`.

use sparseperm::marginals::{fixtures, fourier_coefficient, SparseSupportFunction};
use sparseperm::oracle::l0_oracle;
use sparseperm::symgroup::LambdaShape;

fn describe(f: &SparseSupportFunction) -> String {
    f.entries()
        .iter()
        .map(|(perm, value)| format!("{:?}:{}", perm.images(), value.render()))
        .collect::<Vec<_>>()
        .join("  ")
}

fn main() -> sparseperm::Result<()> {
    let shape = LambdaShape::new(vec![3, 1])?;
    let cases = [
        (
            "sparser-alternative",
            "a 4-point function whose marginal has 3-point explanations",
        ),
        (
            "twin-marginal",
            "two equal-size explanations of one marginal",
        ),
        (
            "ambiguous-triple",
            "ambiguous even with independent action matrices",
        ),
    ];

    for (name, blurb) in cases {
        let f = fixtures::builtin(name, 4)?;
        let m = fourier_coefficient(&f, &shape, 1000)?;
        let solutions = l0_oracle(&m, 4)?;

        println!("{name}: {blurb}");
        println!("  truth (K = {}):  {}", f.sparsity(), describe(&f));
        println!(
            "  oracle: {} minimal solution(s) of size {}",
            solutions.len(),
            solutions.first().map_or(0, SparseSupportFunction::sparsity),
        );
        for (i, g) in solutions.iter().enumerate() {
            let marker = if g == &f { " (the truth)" } else { "" };
            println!("    #{i}{marker}: {}", describe(g));
        }
        println!();
    }
    Ok(())
}

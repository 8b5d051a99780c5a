//! Closed-form answers to "how sparse is recoverable at this shape?" —
//! the achievable thresholds, the recoverability exponent, and the
//! information-theoretic ceiling.
//!
//! Run with `cargo run --example threshold_calculator`.

use sparseperm::analysis::{entropies, threshold_report};
use sparseperm::symgroup::LambdaShape;

fn main() -> sparseperm::Result<()> {
    // One shape per formula regime.
    let shapes: [&[u32]; 4] = [&[199, 1], &[38, 2], &[1995, 5], &[3, 3, 2]];

    for parts in shapes {
        let shape = LambdaShape::new(parts.to_vec())?;
        let report = threshold_report(&shape, 0.5, 100, 3.0, 1.0)?;
        let (h, h_tail) = entropies(&shape);
        println!("shape {:?} (n = {}):", parts, shape.n());
        println!(
            "  case {:<12} K_achievable = {}",
            report.case.to_string(),
            report.k_achievable
        );
        println!(
            "  entropies H = {h:.4}, H' = {h_tail:.4} (ratio {:.4})",
            h_tail / h
        );
        println!(
            "  exponent gamma = {:.4} with M = {}",
            report.gamma, report.m_floor
        );
        println!(
            "  converse: no decoder survives K > {:.1} (values in 1..=100)",
            report.k_converse
        );
        println!();
    }

    println!("full JSON report for one shape:");
    let report = threshold_report(&LambdaShape::new(vec![199, 1])?, 0.5, 100, 3.0, 1.0)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

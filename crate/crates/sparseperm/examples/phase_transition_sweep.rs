//! The sharp threshold in action: below ~0.5·n·ln n random support points
//! almost always each own a marginal cell (so recovery is guaranteed);
//! a few multiples later, almost never.
//!
//! Run with `cargo run --example phase_transition_sweep`.

use sparseperm::randmodel::{run_sweep, CheckMode, Schedule, ShapeFamily, SweepSpec, ValueModel};
use sparseperm::symgroup::DEFAULT_DLAMBDA_CAP;

fn main() -> sparseperm::Result<()> {
    println!("ownership rate at shape (n-1,1), 60 trials per point\n");
    for c in ["0.25", "0.5", "1.0", "1.5", "3.0"] {
        let spec = SweepSpec {
            family: ShapeFamily::parse("n-1,1")?,
            ns: vec![50, 100, 200],
            schedule: Schedule::parse(&format!("{c}*n*log(n)"))?,
            trials: 60,
            mode: CheckMode::Condition1Only,
            value_model: ValueModel::Continuous { a: 1.0, b: 2.0 },
            seed: 2024,
            cap: DEFAULT_DLAMBDA_CAP,
        };
        let result = run_sweep(&spec)?;
        for point in &result.points {
            println!(
                "  c = {c:<4}  n = {:>3}  K = {:>4}  rate = {:.3}",
                point.n, point.k, point.rate
            );
        }
        println!();
    }
    println!("(same seeds => same table, byte for byte, at any worker count)");
    Ok(())
}

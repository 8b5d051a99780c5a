//! Random instance generators and the Monte Carlo sweep engine.
//!
//! Everything here is driven by explicit 64-bit seeds: a trial's generator
//! is derived from `(seed, n, K, trial)` alone, so any single grid point of
//! a sweep can be reproduced in isolation and results are bit-identical
//! regardless of how many workers ran them.

use std::time::Instant;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::marginals::{fourier_coefficient, SparseSupportFunction};
use crate::oracle::{l1_witness, single_cycle_probability};
use crate::rng::{int_in, stream, trial_seed, uniform_in, Stream};
use crate::scalar::{Scalar, Tolerance, ValueMode};
use crate::sparsest_fit::{check_unique_witness, recover, RecoverOptions, RecoveryResult};
use crate::symgroup::{LambdaShape, Permutation};

/// How support values are drawn: i.i.d. uniform on a real interval (float
/// mode) or on the integers `{1..t}` (exact mode).
#[derive(Clone, Debug, PartialEq)]
pub enum ValueModel {
    Continuous { a: f64, b: f64 },
    Integer { t: u64 },
}

impl ValueModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            ValueModel::Continuous { a, b } => {
                if !(0.0 < *a && a < b && b.is_finite()) {
                    return Err(Error::Precondition(format!(
                        "continuous value model needs 0 < a < b, got [{a}, {b}]"
                    )));
                }
            }
            ValueModel::Integer { t } => {
                if *t < 1 {
                    return Err(Error::Precondition(
                        "integer value model needs t >= 1".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn mode(&self) -> ValueMode {
        match self {
            ValueModel::Continuous { .. } => ValueMode::Float,
            ValueModel::Integer { .. } => ValueMode::Exact,
        }
    }

    fn draw(&self, rng: &mut Stream) -> Scalar {
        match self {
            ValueModel::Continuous { a, b } => Scalar::Float(uniform_in(rng, *a, *b)),
            ValueModel::Integer { t } => Scalar::from_u64(int_in(rng, *t), ValueMode::Exact),
        }
    }
}

/// Draws `k` permutations uniformly with replacement and pairs each with a
/// fresh value from the model. Colliding permutations merge (their values
/// add), so the result's sparsity may be below `k`; `k = 0` gives the empty
/// function.
pub fn sample_function(
    n: u32,
    k: u64,
    model: &ValueModel,
    rng: &mut Stream,
) -> Result<SparseSupportFunction> {
    model.validate()?;
    let mut pairs = Vec::with_capacity(k as usize);
    for _ in 0..k {
        pairs.push((Permutation::sample_uniform(n, rng), model.draw(rng)));
    }
    SparseSupportFunction::new(n, model.mode(), pairs)
}

/// Samples a function and reports whether every support permutation keeps a
/// marginal cell of its own.
///
/// This is the cell-ownership half of the recoverability condition; the
/// value-independence half holds almost surely under the continuous model
/// and is deliberately not re-verified here, keeping the trial cheap enough
/// for the large-K regimes.
pub fn trial_condition1(
    n: u32,
    k: u64,
    model: &ValueModel,
    shape: &LambdaShape,
    cap: u64,
    rng: &mut Stream,
) -> Result<bool> {
    let f = sample_function(n, k, model, rng)?;
    Ok(check_unique_witness(&f, shape, cap)?.all_witnessed())
}

/// Samples a function, computes its marginal, runs recovery, and compares
/// the result against the sample — exactly in exact mode, within the default
/// tolerance in float mode. An abort counts as failure.
pub fn trial_full_recovery(
    n: u32,
    k: u64,
    model: &ValueModel,
    shape: &LambdaShape,
    cap: u64,
    rng: &mut Stream,
) -> Result<bool> {
    let f = sample_function(n, k, model, rng)?;
    let m = fourier_coefficient(&f, shape, cap)?;
    let options = RecoverOptions {
        cap,
        ..RecoverOptions::default()
    };
    Ok(match recover(&m, &options)? {
        RecoveryResult::Recovered { function, .. } => match f.mode() {
            ValueMode::Exact => function == f,
            ValueMode::Float => function.approx_eq(&f, &Tolerance::default()),
        },
        RecoveryResult::Aborted(_) => false,
    })
}

/// A shape for every `n` in a sweep: either the `(n−m, m)` family or one
/// fixed explicit shape.
#[derive(Clone, Debug, PartialEq)]
pub enum ShapeFamily {
    TailM { m: u32 },
    Explicit(Vec<u32>),
}

impl ShapeFamily {
    /// Parses `"n-1,1"` / `"n-2,2"` style family strings, or an explicit
    /// comma-separated shape like `"3,1"`.
    pub fn parse(s: &str) -> Result<ShapeFamily> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(rest) = compact.strip_prefix("n-") {
            let (head, tail) = rest.split_once(',').ok_or_else(|| {
                Error::Precondition(format!("family {s:?} should look like n-1,1"))
            })?;
            let m: u32 = head
                .parse()
                .map_err(|_| Error::Precondition(format!("bad family head in {s:?}")))?;
            let m2: u32 = tail
                .parse()
                .map_err(|_| Error::Precondition(format!("bad family tail in {s:?}")))?;
            if m != m2 || m == 0 {
                return Err(Error::Precondition(format!(
                    "family {s:?} should name the (n-m, m) shape with matching m >= 1"
                )));
            }
            return Ok(ShapeFamily::TailM { m });
        }
        let parts: Result<Vec<u32>> = compact
            .split(',')
            .map(|p| {
                p.parse()
                    .map_err(|_| Error::Precondition(format!("bad shape part {p:?} in {s:?}")))
            })
            .collect();
        Ok(ShapeFamily::Explicit(parts?))
    }

    /// The concrete shape at a given `n`.
    pub fn instantiate(&self, n: u32) -> Result<LambdaShape> {
        match self {
            ShapeFamily::TailM { m } => {
                if n <= *m {
                    return Err(Error::Precondition(format!(
                        "family (n-{m}, {m}) needs n > {m}, got n = {n}"
                    )));
                }
                LambdaShape::new(vec![n - m, *m])
            }
            ShapeFamily::Explicit(parts) => {
                let shape = LambdaShape::new(parts.clone())?;
                if shape.n() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "explicit shape sums to {}, sweep point has n = {n}",
                        shape.n()
                    )));
                }
                Ok(shape)
            }
        }
    }
}

/// Sparsity schedule for a sweep: an explicit K list, or a formula of `n`
/// and the shape dimension `D` evaluated per grid point and floored.
#[derive(Clone, Debug, PartialEq)]
pub enum Schedule {
    Explicit(Vec<u64>),
    /// `c·n·ln n`
    CNLogN {
        c: f64,
    },
    /// `(c/m!)·n^m·ln n`
    CNPowMLogN {
        c: f64,
        m: u32,
    },
    /// `c·D·ln ln D`
    CDLogLogD {
        c: f64,
    },
    /// `c·D^g`
    CDPowGamma {
        c: f64,
        g: f64,
    },
}

impl Schedule {
    /// Parses `"0.5*n*log(n)"`, `"(0.5/2!)*n^2*log(n)"`, `"0.9*D*loglog(D)"`,
    /// `"2*D^0.5"`, or an explicit list `"100,200,300"`.
    pub fn parse(s: &str) -> Result<Schedule> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Precondition(format!("unrecognized K-schedule {s:?}"));

        if compact.chars().all(|c| c.is_ascii_digit() || c == ',') && !compact.is_empty() {
            let ks: Result<Vec<u64>> = compact
                .split(',')
                .map(|p| p.parse().map_err(|_| bad()))
                .collect();
            return Ok(Schedule::Explicit(ks?));
        }

        if let Some(rest) = compact.strip_prefix('(') {
            // (c/m!)*n^m*log(n)
            let (inner, rest) = rest.split_once(')').ok_or_else(bad)?;
            let (c, m) = inner.split_once('/').ok_or_else(bad)?;
            let c: f64 = c.parse().map_err(|_| bad())?;
            let m: u32 = m
                .strip_suffix('!')
                .ok_or_else(bad)?
                .parse()
                .map_err(|_| bad())?;
            if rest != format!("*n^{m}*log(n)") {
                return Err(bad());
            }
            return Ok(Schedule::CNPowMLogN { c, m });
        }
        if let Some(c) = compact.strip_suffix("*n*log(n)") {
            return Ok(Schedule::CNLogN {
                c: c.parse().map_err(|_| bad())?,
            });
        }
        if let Some(c) = compact.strip_suffix("*D*loglog(D)") {
            return Ok(Schedule::CDLogLogD {
                c: c.parse().map_err(|_| bad())?,
            });
        }
        if let Some(body) = compact
            .find("*D^")
            .map(|i| (&compact[..i], &compact[i + 3..]))
        {
            let (c, g) = body;
            return Ok(Schedule::CDPowGamma {
                c: c.parse().map_err(|_| bad())?,
                g: g.parse().map_err(|_| bad())?,
            });
        }
        Err(bad())
    }

    /// Canonical rendering, used as the CSV `schedule_tag`.
    pub fn tag(&self) -> String {
        match self {
            Schedule::Explicit(_) => "explicit".into(),
            Schedule::CNLogN { c } => format!("{c}*n*log(n)"),
            Schedule::CNPowMLogN { c, m } => format!("({c}/{m}!)*n^{m}*log(n)"),
            Schedule::CDLogLogD { c } => format!("{c}*D*loglog(D)"),
            Schedule::CDPowGamma { c, g } => format!("{c}*D^{g}"),
        }
    }

    /// Evaluates a formula schedule at one grid point, flooring to an
    /// integer; the result must come out at least 1.
    pub fn evaluate(&self, n: u32, shape: &LambdaShape) -> Result<u64> {
        let nf = n as f64;
        let value = match self {
            Schedule::Explicit(_) => {
                return Err(Error::Precondition(
                    "explicit schedules enumerate their own K values".into(),
                ))
            }
            Schedule::CNLogN { c } => c * nf * nf.ln(),
            Schedule::CNPowMLogN { c, m } => {
                let mfact: f64 = (1..=*m).map(|i| i as f64).product();
                c / mfact * nf.powi(*m as i32) * nf.ln()
            }
            Schedule::CDLogLogD { c } => {
                let d = shape.d_lambda()?.to_f64().unwrap_or(f64::INFINITY);
                c * d * d.ln().ln()
            }
            Schedule::CDPowGamma { c, g } => {
                let d = shape.d_lambda()?.to_f64().unwrap_or(f64::INFINITY);
                c * d.powf(*g)
            }
        };
        if !value.is_finite() || value < 1.0 {
            return Err(Error::Precondition(format!(
                "schedule {} gives K = {value} at n = {n}; need K >= 1",
                self.tag()
            )));
        }
        Ok(value.floor() as u64)
    }
}

/// What a sweep trial checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    /// Cell ownership only — the cheap proxy that drives the large-K plots.
    Condition1Only,
    /// Sample → marginal → recover → compare.
    FullRecovery,
}

/// A full sweep description; two equal specs produce bit-identical results.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub family: ShapeFamily,
    pub ns: Vec<u32>,
    pub schedule: Schedule,
    pub trials: u32,
    pub mode: CheckMode,
    pub value_model: ValueModel,
    pub seed: u64,
    pub cap: u64,
}

/// One evaluated grid point.
#[derive(Clone, Debug, Serialize)]
pub struct SweepPoint {
    pub n: u32,
    pub shape: String,
    #[serde(rename = "K")]
    pub k: u64,
    pub schedule_tag: String,
    pub trials: u32,
    pub successes: u32,
    pub rate: f64,
    pub seconds: f64,
    pub seed: u64,
}

/// All grid points of one sweep, in grid order.
#[derive(Clone, Debug, Serialize)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    /// Writes the result as CSV (`n, shape, K, schedule_tag, trials,
    /// successes, rate, seconds, seed`).
    ///
    /// Wall-clock seconds are zeroed unless `include_timing` is set: timing
    /// is the one nondeterministic column, and the default output is meant
    /// to be byte-identical across reruns and worker counts.
    pub fn write_csv<W: std::io::Write>(&self, writer: W, include_timing: bool) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for point in &self.points {
            let mut row = point.clone();
            if !include_timing {
                row.seconds = 0.0;
            }
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self, include_timing: bool) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf, include_timing)?;
        String::from_utf8(buf).map_err(|e| Error::MalformedFile(e.to_string()))
    }
}

/// Runs every `(n, K)` grid point of the spec, `trials` seeded trials each.
///
/// Trials run in parallel; each owns a generator derived from
/// `(seed, n, K, trial)`, and successes are counted by order-independent
/// summation, so the outcome does not depend on the worker count.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.value_model.validate()?;
    if spec.trials < 1 {
        return Err(Error::Precondition(
            "a sweep needs at least one trial per point".into(),
        ));
    }
    let tag = spec.schedule.tag();
    let mut points = Vec::new();
    for &n in &spec.ns {
        let shape = spec.family.instantiate(n)?;
        let shape_label = shape
            .parts()
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let ks = match &spec.schedule {
            Schedule::Explicit(list) => list.clone(),
            formula => vec![formula.evaluate(n, &shape)?],
        };
        for k in ks {
            let start = Instant::now();
            let successes: u32 = (0..spec.trials)
                .into_par_iter()
                .map(|trial| -> Result<u32> {
                    let mut rng = stream(trial_seed(spec.seed, n, k, trial));
                    let ok = match spec.mode {
                        CheckMode::Condition1Only => {
                            trial_condition1(n, k, &spec.value_model, &shape, spec.cap, &mut rng)?
                        }
                        CheckMode::FullRecovery => trial_full_recovery(
                            n,
                            k,
                            &spec.value_model,
                            &shape,
                            spec.cap,
                            &mut rng,
                        )?,
                    };
                    Ok(u32::from(ok))
                })
                .sum::<Result<u32>>()?;
            points.push(SweepPoint {
                n,
                shape: shape_label.clone(),
                k,
                schedule_tag: tag.clone(),
                trials: spec.trials,
                successes,
                rate: successes as f64 / spec.trials as f64,
                seconds: start.elapsed().as_secs_f64(),
                seed: spec.seed,
            });
        }
    }
    Ok(SweepResult { points })
}

/// Outcome of the two-point identifiability experiment.
#[derive(Clone, Debug, Serialize)]
pub struct L1FailureReport {
    pub n: u32,
    pub trials: u32,
    pub witnessed: u32,
    /// Verified-witness fraction; absent when `trials = 0`.
    pub fraction: Option<f64>,
    /// `1 − single_cycle_probability(n)`: the exact probability that the
    /// relative permutation of two uniform draws splits into two cycles.
    pub predicted: f64,
}

/// Samples `trials` two-point functions on `S_n`, tries to rewrite each at
/// shape `(n−1, 1)`, and reports the verified-witness fraction next to its
/// analytic prediction.
pub fn l1_failure_experiment(n: u32, trials: u32, seed: u64, cap: u64) -> Result<L1FailureReport> {
    if n < 4 {
        return Err(Error::Precondition(format!(
            "the two-point experiment needs n >= 4, got {n}"
        )));
    }
    let shape = LambdaShape::new(vec![n - 1, 1])?;
    let predicted = 1.0
        - single_cycle_probability(n)?
            .to_f64()
            .ok_or(Error::Overflow("converting the cycle probability to float"))?;
    let model = ValueModel::Integer { t: 1000 };
    let witnessed: u32 = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<u32> {
            let mut rng = stream(trial_seed(seed, n, 2, trial));
            let f = sample_function(n, 2, &model, &mut rng)?;
            if f.sparsity() < 2 {
                // The two draws coincided; a one-point function has no
                // equal-mass rewrite at this shape.
                return Ok(0);
            }
            Ok(u32::from(l1_witness(&f, &shape, cap)?.is_some()))
        })
        .sum::<Result<u32>>()?;
    Ok(L1FailureReport {
        n,
        trials,
        witnessed,
        fraction: (trials > 0).then(|| witnessed as f64 / trials as f64),
        predicted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparsest_fit::{check_condition1, EXACT_LI_CAP};

    fn shape(parts: &[u32]) -> LambdaShape {
        LambdaShape::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        for model in [
            ValueModel::Continuous { a: 1.0, b: 2.0 },
            ValueModel::Integer { t: 50 },
        ] {
            let a = sample_function(6, 5, &model, &mut stream(99)).unwrap();
            let b = sample_function(6, 5, &model, &mut stream(99)).unwrap();
            assert_eq!(a, b);
            let c = sample_function(6, 5, &model, &mut stream(100)).unwrap();
            assert_ne!(a, c);
        }
    }

    #[test]
    fn sampling_respects_the_model() {
        let f = sample_function(5, 1, &ValueModel::Integer { t: 7 }, &mut stream(3)).unwrap();
        assert_eq!(f.sparsity(), 1);
        assert_eq!(f.mode(), ValueMode::Exact);

        // k = 0 gives the empty function; collisions merge on a tiny group.
        let empty = sample_function(
            4,
            0,
            &ValueModel::Continuous { a: 1.0, b: 2.0 },
            &mut stream(3),
        )
        .unwrap();
        assert_eq!(empty.sparsity(), 0);
        let crowded = sample_function(
            3,
            50,
            &ValueModel::Continuous { a: 1.0, b: 2.0 },
            &mut stream(4),
        )
        .unwrap();
        assert!(crowded.sparsity() <= 6);

        assert!(ValueModel::Continuous { a: 0.0, b: 1.0 }
            .validate()
            .is_err());
        assert!(ValueModel::Continuous { a: 2.0, b: 1.0 }
            .validate()
            .is_err());
        assert!(ValueModel::Integer { t: 0 }.validate().is_err());
    }

    #[test]
    fn continuous_draws_have_the_right_mean() {
        let (a, b) = (1.0, 3.0);
        let model = ValueModel::Continuous { a, b };
        let mut rng = stream(8);
        let n = 20_000;
        let sum: f64 = (0..n)
            .map(|_| match model.draw(&mut rng) {
                Scalar::Float(v) => v,
                Scalar::Exact(_) => unreachable!(),
            })
            .sum();
        let mean = sum / n as f64;
        let sigma = (b - a) / (12.0 * n as f64).sqrt();
        assert!((mean - 2.0).abs() < 4.0 * sigma, "mean {mean}");
    }

    #[test]
    fn schedule_strings_parse_and_render() {
        assert_eq!(
            Schedule::parse("0.5*n*log(n)").unwrap(),
            Schedule::CNLogN { c: 0.5 }
        );
        assert_eq!(
            Schedule::parse("(0.5/2!)*n^2*log(n)").unwrap(),
            Schedule::CNPowMLogN { c: 0.5, m: 2 }
        );
        assert_eq!(
            Schedule::parse("0.9*D*loglog(D)").unwrap(),
            Schedule::CDLogLogD { c: 0.9 }
        );
        assert_eq!(
            Schedule::parse("2*D^0.5").unwrap(),
            Schedule::CDPowGamma { c: 2.0, g: 0.5 }
        );
        assert_eq!(
            Schedule::parse("100, 200").unwrap(),
            Schedule::Explicit(vec![100, 200])
        );
        assert!(Schedule::parse("n*log(n)*oops").is_err());
        assert!(Schedule::parse("").is_err());

        for s in [
            "0.5*n*log(n)",
            "(0.5/2!)*n^2*log(n)",
            "0.9*D*loglog(D)",
            "2*D^0.5",
        ] {
            assert_eq!(
                Schedule::parse(s).unwrap().tag(),
                s,
                "tag should round-trip"
            );
        }
    }

    #[test]
    fn schedule_formulas_evaluate_to_the_frozen_values() {
        // ⌊0.5 · 200 · ln 200⌋ and ⌊(0.5/2!) · 40² · ln 40⌋.
        let thm3 = Schedule::CNLogN { c: 0.5 };
        assert_eq!(thm3.evaluate(200, &shape(&[199, 1])).unwrap(), 529);
        let thm4 = Schedule::CNPowMLogN { c: 0.5, m: 2 };
        assert_eq!(thm4.evaluate(40, &shape(&[38, 2])).unwrap(), 1475);

        // D-based formulas at (5,1): D = 6.
        let d = Schedule::CDPowGamma { c: 2.0, g: 0.5 };
        assert_eq!(
            d.evaluate(6, &shape(&[5, 1])).unwrap(),
            (2.0 * 6f64.sqrt()) as u64
        );

        // Formulas must land at K >= 1.
        assert!(Schedule::CNLogN { c: 0.5 }
            .evaluate(1, &shape(&[1, 1]))
            .is_err());
        assert!(Schedule::Explicit(vec![3])
            .evaluate(4, &shape(&[3, 1]))
            .is_err());
    }

    #[test]
    fn shape_families_parse_and_instantiate() {
        let tail = ShapeFamily::parse("n-1,1").unwrap();
        assert_eq!(tail.instantiate(200).unwrap(), shape(&[199, 1]));
        let two = ShapeFamily::parse("n-2, 2").unwrap();
        assert_eq!(two.instantiate(40).unwrap(), shape(&[38, 2]));
        assert!(two.instantiate(2).is_err(), "n <= m is rejected");
        assert!(
            two.instantiate(3).is_err(),
            "(1,2) is not weakly decreasing"
        );

        let explicit = ShapeFamily::parse("3,1").unwrap();
        assert_eq!(explicit.instantiate(4).unwrap(), shape(&[3, 1]));
        assert!(explicit.instantiate(5).is_err(), "n mismatch is rejected");

        assert!(ShapeFamily::parse("n-1,2").is_err());
        assert!(ShapeFamily::parse("n-").is_err());
        assert!(ShapeFamily::parse("a,b").is_err());
    }

    #[test]
    fn single_point_functions_always_pass_condition1() {
        let sh = shape(&[7, 1]);
        for seed in 0..5 {
            let mut rng = stream(seed);
            assert!(trial_condition1(
                8,
                1,
                &ValueModel::Continuous { a: 1.0, b: 2.0 },
                &sh,
                1000,
                &mut rng
            )
            .unwrap());
        }
    }

    #[test]
    fn condition1_implies_full_recovery_on_the_same_sample() {
        let sh = shape(&[4, 1]);
        let model = ValueModel::Integer { t: 1_000_000 };
        let mut qualified = 0;
        for trial in 0..15u32 {
            let seed = trial_seed(77, 5, 3, trial);
            let f = sample_function(5, 3, &model, &mut stream(seed)).unwrap();
            if !check_condition1(&f, &sh, 1000, EXACT_LI_CAP)
                .unwrap()
                .holds()
            {
                continue;
            }
            qualified += 1;
            let mut rng = stream(seed);
            assert!(
                trial_full_recovery(5, 3, &model, &sh, 1000, &mut rng).unwrap(),
                "trial {trial}: condition 1 held but recovery missed"
            );
        }
        assert!(qualified >= 8, "only {qualified} of 15 trials qualified");
    }

    #[test]
    fn sweeps_are_reproducible_across_worker_counts() {
        let spec = SweepSpec {
            family: ShapeFamily::TailM { m: 1 },
            ns: vec![6],
            schedule: Schedule::Explicit(vec![2, 4]),
            trials: 8,
            mode: CheckMode::FullRecovery,
            value_model: ValueModel::Integer { t: 1_000_000 },
            seed: 41,
            cap: 1000,
        };
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_sweep(&spec))
            .unwrap();
        let many = rayon::ThreadPoolBuilder::new()
            .num_threads(8)
            .build()
            .unwrap()
            .install(|| run_sweep(&spec))
            .unwrap();
        assert_eq!(
            single.to_csv_string(false).unwrap(),
            many.to_csv_string(false).unwrap()
        );
        // With timing on, the seconds column legitimately differs.
        for (a, b) in single.points.iter().zip(&many.points) {
            assert_eq!(
                (a.n, a.k, a.trials, a.successes),
                (b.n, b.k, b.trials, b.successes)
            );
        }
    }

    #[test]
    fn sweep_csv_has_the_documented_columns() {
        let spec = SweepSpec {
            family: ShapeFamily::TailM { m: 1 },
            ns: vec![5],
            schedule: Schedule::Explicit(vec![2]),
            trials: 3,
            mode: CheckMode::Condition1Only,
            value_model: ValueModel::Continuous { a: 1.0, b: 2.0 },
            seed: 7,
            cap: 1000,
        };
        let csv = run_sweep(&spec).unwrap().to_csv_string(false).unwrap();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n,shape,K,schedule_tag,trials,successes,rate,seconds,seed"
        );
        let row = lines.next().unwrap();
        assert!(row.starts_with("5,\"4,1\",2,explicit,3,"), "{row}");
        assert!(row.ends_with(",0.0,7"), "timing zeroed by default: {row}");
    }

    #[test]
    fn empty_schedule_gives_an_empty_result() {
        let spec = SweepSpec {
            family: ShapeFamily::TailM { m: 1 },
            ns: vec![5, 6],
            schedule: Schedule::Explicit(vec![]),
            trials: 3,
            mode: CheckMode::Condition1Only,
            value_model: ValueModel::Continuous { a: 1.0, b: 2.0 },
            seed: 7,
            cap: 1000,
        };
        assert!(run_sweep(&spec).unwrap().points.is_empty());
    }

    #[test]
    fn ownership_rate_collapses_as_k_grows() {
        // On S_30 at (29,1): 8 draws almost surely all own a cell; 40000
        // draws cannot (there are only 900 cells to own).
        let spec = SweepSpec {
            family: ShapeFamily::TailM { m: 1 },
            ns: vec![30],
            schedule: Schedule::Explicit(vec![8, 40_000]),
            trials: 6,
            mode: CheckMode::Condition1Only,
            value_model: ValueModel::Continuous { a: 1.0, b: 2.0 },
            seed: 13,
            cap: 1000,
        };
        let result = run_sweep(&spec).unwrap();
        assert_eq!(result.points[0].successes, 6);
        assert_eq!(result.points[1].successes, 0);
    }

    #[test]
    fn two_point_experiment_matches_its_prediction_at_n4() {
        let report = l1_failure_experiment(4, 400, 5, 1000).unwrap();
        // Exactly 21 of 24 permutations have at most one nontrivial cycle,
        // so the relative permutation splits with probability 1/8.
        assert!((report.predicted - 0.125).abs() < 1e-12);
        let fraction = report.fraction.unwrap();
        let sigma = (0.125f64 * 0.875 / 400.0).sqrt();
        assert!(
            (fraction - report.predicted).abs() < 4.0 * sigma,
            "fraction {fraction} vs predicted {}",
            report.predicted
        );

        let none = l1_failure_experiment(4, 0, 5, 1000).unwrap();
        assert_eq!(none.fraction, None);
        assert!(l1_failure_experiment(3, 10, 5, 1000).is_err());
    }
}

//! Closed-form calculators: block-profile entropies, the recoverability
//! exponent, achievable sparsity thresholds, and the information-theoretic
//! converse.
//!
//! Everything is a pure function of the shape and a few caller-supplied
//! constants; natural logarithms throughout.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::symgroup::LambdaShape;

/// The block-size profile `α_i = λ_i/n` with its two entropies.
#[derive(Clone, Debug)]
pub struct AlphaProfile {
    /// Exact fractions, weakly decreasing, summing to one.
    pub alpha: Vec<BigRational>,
    /// `H = −Σ α_i ln α_i`.
    pub h: f64,
    /// `H' = −Σ_{i≥2} α_i ln α_i` — the same sum without the largest block.
    pub h_tail: f64,
}

/// Computes the profile and both entropies for a shape.
pub fn alpha_profile(shape: &LambdaShape) -> AlphaProfile {
    let n = shape.n() as f64;
    let alpha = shape
        .parts()
        .iter()
        .map(|&p| BigRational::new(BigInt::from(p), BigInt::from(shape.n())))
        .collect();
    let (mut h, mut h_tail) = (0.0, 0.0);
    for (i, &p) in shape.parts().iter().enumerate() {
        // ln(p/n) written as ln(1 + (p−n)/n): stays accurate when the
        // largest block swallows almost everything (α₁ → 1).
        let term = -(p as f64 / n) * ((p as f64 - n) / n).ln_1p();
        h += term;
        if i > 0 {
            h_tail += term;
        }
    }
    AlphaProfile { alpha, h, h_tail }
}

/// `(H, H')` for a shape.
pub fn entropies(shape: &LambdaShape) -> (f64, f64) {
    let profile = alpha_profile(shape);
    (profile.h, profile.h_tail)
}

/// `H'/H`, the fraction of profile entropy carried by the non-dominant
/// blocks; approaches 1 at both extremes of the shape family.
pub fn entropy_ratio(shape: &LambdaShape) -> f64 {
    let (h, h_tail) = entropies(shape);
    h_tail / h
}

/// `(γ, M)` where `M = ⌊1/(1−α₁)⌋` and
/// `γ = (M/(M+1))·(1 − c′·(H−H')/H)`.
///
/// Sparsity on the order of `D^γ` is recoverable; `c′` is an unpinned
/// analysis constant, so treat the output as an exponent-scale estimate
/// rather than a sharp boundary.
pub fn gamma_exponent(shape: &LambdaShape, c_prime: f64) -> (f64, u64) {
    // 1/(1−α₁) = n/(n−λ₁), floored exactly by integer division.
    let n = shape.n() as u64;
    let m = n / (n - shape.parts()[0] as u64);
    let (h, h_tail) = entropies(shape);
    let gamma = (m as f64 / (m + 1) as f64) * (1.0 - c_prime * (h - h_tail) / h);
    (gamma, m)
}

/// A shape family with a one-sided limit in `α₁`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitFamily {
    /// `(n−1, 1)`: the dominant block absorbs everything as `n` grows.
    Alpha1ToOne,
    /// `(1, 1, …, 1)`: all blocks equal, the dominant share vanishes.
    Alpha1ToZero,
}

/// Tabulates `H'/H` for a limit family at the given `n` values (which must
/// be increasing), verifying on the way that the ratio climbs monotonically
/// toward 1 — the behavior the recoverability exponent relies on.
pub fn entropy_ratio_trend(family: LimitFamily, ns: &[u32]) -> Result<Vec<(u32, f64)>> {
    let mut table = Vec::with_capacity(ns.len());
    for &n in ns {
        if n < 2 {
            return Err(Error::Precondition("limit families need n >= 2".into()));
        }
        let shape = match family {
            LimitFamily::Alpha1ToOne => LambdaShape::new(vec![n - 1, 1])?,
            LimitFamily::Alpha1ToZero => LambdaShape::new(vec![1; n as usize])?,
        };
        table.push((n, entropy_ratio(&shape)));
    }
    for pair in table.windows(2) {
        let ((n_a, a), (n_b, b)) = (pair[0], pair[1]);
        if n_a >= n_b {
            return Err(Error::Precondition(format!(
                "family points must increase: got n = {n_a} then {n_b}"
            )));
        }
        if a > b {
            return Err(Error::Precondition(format!(
                "ratio fell from {a} (n = {n_a}) to {b} (n = {n_b}); not a limit approach"
            )));
        }
    }
    if table.iter().any(|&(_, r)| r >= 1.0) {
        return Err(Error::Precondition("H'/H must stay below 1".into()));
    }
    Ok(table)
}

/// Sparsity level beyond which *no* decoder can keep its error probability
/// vanishing, when values are drawn from `{1..t}`:
/// `constant · x · ln(max(x, t))` with `x = D²/(n ln n)`.
///
/// `constant = 3.0` is the stated bound; `4.0` is the value the underlying
/// derivation actually produces. Both are preserved as caller choices.
pub fn converse_bound(shape: &LambdaShape, t: u64, constant: f64) -> Result<f64> {
    if t < 1 {
        return Err(Error::Precondition(
            "the integer value range needs t >= 1".into(),
        ));
    }
    let n = shape.n() as f64;
    let d = shape.d_lambda()?.to_f64().ok_or(Error::Overflow(
        "converting D to float for the converse bound",
    ))?;
    if d < n {
        return Err(Error::Precondition(format!(
            "converse bound needs D >= n; got D = {d}, n = {n}"
        )));
    }
    let x = d * d / (n * n.ln());
    Ok(constant * x * x.max(t as f64).ln())
}

/// Which achievable-threshold formula applies to a shape.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ThresholdCase {
    /// `(n−1, 1)`: `K = (1−ε)·n·ln n`.
    #[serde(rename = "n-log-n")]
    NLogN,
    /// `(n−m, m)` with small `m`: `K = ((1−ε)/m!)·n^m·ln n`.
    #[serde(rename = "n^m-log-n")]
    NPowMLogN,
    /// Dominant block at least `n − n^{2/9}`: `K = (1−ε)·D·ln ln D`.
    #[serde(rename = "d-loglog-d")]
    DLogLogD,
    /// General shapes: `K = D^γ`.
    #[serde(rename = "d-power-gamma")]
    DPowGamma,
}

impl std::fmt::Display for ThresholdCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ThresholdCase::NLogN => "n-log-n",
            ThresholdCase::NPowMLogN => "n^m-log-n",
            ThresholdCase::DLogLogD => "d-loglog-d",
            ThresholdCase::DPowGamma => "d-power-gamma",
        })
    }
}

/// Largest second block size still treated as the "small-m" two-block case.
pub const DEFAULT_SMALL_M_CAP: u32 = 4;

/// Sparsity achievable with vanishing failure probability, with the case
/// tag explaining which formula fired. `0 < ε < 1`; the `d-power-gamma`
/// fallback uses `c_prime` (and unit leading constant).
pub fn achievable_threshold(
    shape: &LambdaShape,
    epsilon: f64,
    small_m_cap: u32,
    c_prime: f64,
) -> Result<(u64, ThresholdCase)> {
    if !(0.0 < epsilon && epsilon < 1.0) {
        return Err(Error::Precondition(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    let parts = shape.parts();
    let n = shape.n() as f64;
    let two_block = parts.len() == 2;
    let case = if two_block && parts[1] == 1 {
        ThresholdCase::NLogN
    } else if two_block && parts[1] <= small_m_cap {
        ThresholdCase::NPowMLogN
    } else if parts[0] as f64 >= n - n.powf(2.0 / 9.0) {
        ThresholdCase::DLogLogD
    } else {
        ThresholdCase::DPowGamma
    };
    let value = match case {
        ThresholdCase::NLogN => (1.0 - epsilon) * n * n.ln(),
        ThresholdCase::NPowMLogN => {
            let m = parts[1];
            let mfact: f64 = (1..=m).map(|i| i as f64).product();
            (1.0 - epsilon) / mfact * n.powi(m as i32) * n.ln()
        }
        ThresholdCase::DLogLogD => {
            let d = shape
                .d_lambda()?
                .to_f64()
                .ok_or(Error::Overflow("converting D to float for the threshold"))?;
            (1.0 - epsilon) * d * d.ln().ln()
        }
        ThresholdCase::DPowGamma => {
            let d = shape
                .d_lambda()?
                .to_f64()
                .ok_or(Error::Overflow("converting D to float for the threshold"))?;
            let (gamma, _) = gamma_exponent(shape, c_prime);
            d.powf(gamma)
        }
    };
    if !value.is_finite() {
        return Err(Error::Overflow("threshold formula overflowed"));
    }
    Ok((value.max(0.0).floor() as u64, case))
}

/// Everything the calculators say about one shape, bundled for display.
#[derive(Clone, Debug, Serialize)]
pub struct ThresholdReport {
    pub shape: Vec<u32>,
    pub n: u32,
    pub case: ThresholdCase,
    pub epsilon: f64,
    pub k_achievable: u64,
    pub gamma: f64,
    pub m_floor: u64,
    pub t: u64,
    pub converse_constant: f64,
    pub k_converse: f64,
}

/// Runs all calculators on one shape.
pub fn threshold_report(
    shape: &LambdaShape,
    epsilon: f64,
    t: u64,
    converse_constant: f64,
    c_prime: f64,
) -> Result<ThresholdReport> {
    let (k_achievable, case) = achievable_threshold(shape, epsilon, DEFAULT_SMALL_M_CAP, c_prime)?;
    let (gamma, m_floor) = gamma_exponent(shape, c_prime);
    let k_converse = converse_bound(shape, t, converse_constant)?;
    Ok(ThresholdReport {
        shape: shape.parts().to_vec(),
        n: shape.n(),
        case,
        epsilon,
        k_achievable,
        gamma,
        m_floor,
        t,
        converse_constant,
        k_converse,
    })
}

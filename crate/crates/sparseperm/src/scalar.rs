//! Scalar values in one of two modes: exact arbitrary-precision rationals, or
//! IEEE doubles compared under a configurable tolerance.
//!
//! A function or marginal carries a single mode; mixing modes inside one
//! object is a construction error, and arithmetic between modes is a bug
//! (it panics). Exact values parse from decimal strings (`"1"`, `"-0.25"`) or
//! fraction strings (`"p/q"`) and render back losslessly: a finite decimal
//! whenever the reduced denominator is of the form 2^a·5^b, otherwise `p/q`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Which scalar semantics a function/marginal uses.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueMode {
    Exact,
    Float,
}

impl fmt::Display for ValueMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueMode::Exact => write!(f, "exact"),
            ValueMode::Float => write!(f, "float"),
        }
    }
}

/// Float comparison tolerance: `|a - b| <= max(abs, rel * max(|a|, |b|))`.
#[derive(Copy, Clone, Debug)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-12,
            rel: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.abs.max(self.rel * a.abs().max(b.abs()))
    }

    /// Half-width of the acceptance window around a target value.
    pub fn window(&self, target: f64) -> f64 {
        self.abs.max(self.rel * target.abs())
    }
}

/// A value in either mode.
#[derive(Clone, PartialEq, Debug)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn mode(&self) -> ValueMode {
        match self {
            Scalar::Exact(_) => ValueMode::Exact,
            Scalar::Float(_) => ValueMode::Float,
        }
    }

    pub fn zero(mode: ValueMode) -> Self {
        match mode {
            ValueMode::Exact => Scalar::Exact(BigRational::zero()),
            ValueMode::Float => Scalar::Float(0.0),
        }
    }

    pub fn from_u64(v: u64, mode: ValueMode) -> Self {
        match mode {
            ValueMode::Exact => Scalar::Exact(BigRational::from_integer(BigInt::from(v))),
            ValueMode::Float => Scalar::Float(v as f64),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_positive(),
            Scalar::Float(x) => *x > 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Scalar::Exact(_) => true,
            Scalar::Float(x) => x.is_finite(),
        }
    }

    pub fn add_assign(&mut self, other: &Scalar) {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => *a += b,
            (Scalar::Float(a), Scalar::Float(b)) => *a += b,
            _ => panic!("scalar mode mixed in arithmetic"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a - b),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a - b),
            _ => panic!("scalar mode mixed in arithmetic"),
        }
    }

    /// Total order within a mode. Panics across modes.
    pub fn total_cmp(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            (Scalar::Float(a), Scalar::Float(b)) => a.total_cmp(b),
            _ => panic!("scalar mode mixed in comparison"),
        }
    }

    /// Mode-aware equality: exact equality for rationals, tolerance for floats.
    pub fn approx_eq(&self, other: &Scalar, tol: &Tolerance) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Float(a), Scalar::Float(b)) => tol.close(*a, *b),
            _ => panic!("scalar mode mixed in comparison"),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => {
                // Good enough for reporting; exact values stay exact internally.
                let n = bigint_to_f64(r.numer());
                let d = bigint_to_f64(r.denom());
                n / d
            }
            Scalar::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn as_float(&self) -> Option<f64> {
        match self {
            Scalar::Exact(_) => None,
            Scalar::Float(x) => Some(*x),
        }
    }

    /// Parses a value string in the given mode. Exact mode accepts optional
    /// sign, decimal digits with an optional fractional part, or `p/q`.
    pub fn parse(s: &str, mode: ValueMode) -> Result<Scalar> {
        match mode {
            ValueMode::Float => {
                let x: f64 = s
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidValue(format!("not a float: {s:?}")))?;
                if !x.is_finite() {
                    return Err(Error::InvalidValue(format!("non-finite float: {s:?}")));
                }
                Ok(Scalar::Float(x))
            }
            ValueMode::Exact => parse_rational(s).map(Scalar::Exact),
        }
    }

    /// Renders the value so that `parse(render(v), v.mode()) == v`.
    pub fn render(&self) -> String {
        match self {
            Scalar::Float(x) => format!("{x}"),
            Scalar::Exact(r) => render_rational(r),
        }
    }
}

fn bigint_to_f64(v: &BigInt) -> f64 {
    // num-bigint's conversion saturates rather than failing; fine for reports.
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::INFINITY)
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = |m: &str| Error::InvalidValue(format!("{m}: {s:?}"));
    if s.is_empty() {
        return Err(bad("empty value"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad("bad numerator"))?;
        let d: BigInt = den.trim().parse().map_err(|_| bad("bad denominator"))?;
        if d.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok(BigRational::new(n, d));
    }
    let (sign, rest) = match s.strip_prefix('-') {
        Some(r) => (-1, r),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match rest.split_once('.') {
        Some((i, f)) => (i, f),
        None => (rest, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad("no digits"));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad("not a decimal"));
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad("bad digits"))?
    };
    let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
    Ok(BigRational::new(BigInt::from(sign) * numer, denom))
}

fn render_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        return r.numer().to_string();
    }
    // A reduced denominator of the form 2^a * 5^b has a finite decimal form.
    let mut d = r.denom().clone();
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let mut a = 0u32;
    let mut b = 0u32;
    while (&d % &two).is_zero() {
        d /= &two;
        a += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        b += 1;
    }
    if !d.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let m = a.max(b);
    let scale = BigInt::from(10u32).pow(m);
    let scaled = r.numer() * &scale / r.denom();
    let neg = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let digits = if digits.len() <= m as usize {
        format!("{}{}", "0".repeat(m as usize + 1 - digits.len()), digits)
    } else {
        digits
    };
    let split = digits.len() - m as usize;
    let (ip, fp) = digits.split_at(split);
    let fp = fp.trim_end_matches('0');
    let body = if fp.is_empty() {
        ip.to_string()
    } else {
        format!("{ip}.{fp}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

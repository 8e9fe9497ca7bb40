//! Special-function kernel: log-gamma, the regularized incomplete gamma
//! function and log binomial coefficients, plus a small log-domain value type.
//!
//! Everything here works in double precision. Products of probabilities are
//! carried as logarithms and exponentiated only at the end.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::ops::{Add, Mul};

use crate::error::{domain, Result};

const MAX_ITER: usize = 10_000;
const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;

/// Arguments below this are shifted upward before the Stirling series.
const STIRLING_MIN: f64 = 15.0;

/// Bernoulli-number coefficients B_2k / (2k (2k - 1)) of the Stirling series.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Natural logarithm of a nonnegative quantity. `-inf` encodes zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue(f64);

impl LogValue {
    pub const ZERO: LogValue = LogValue(f64::NEG_INFINITY);
    pub const ONE: LogValue = LogValue(0.0);

    /// Wraps a log value. NaN and `+inf` are rejected.
    pub fn from_ln(log_value: f64) -> Result<Self> {
        if log_value.is_nan() || log_value == f64::INFINITY {
            return Err(domain("LogValue::from_ln", format!("got {log_value}")));
        }
        Ok(LogValue(log_value))
    }

    pub fn from_value(value: f64) -> Result<Self> {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(domain("LogValue::from_value", format!("got {value}")));
        }
        Ok(LogValue(value.ln()))
    }

    pub(crate) fn new_unchecked(log_value: f64) -> Self {
        debug_assert!(!log_value.is_nan());
        LogValue(log_value)
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0.exp()
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// Stable `ln(sum exp(x_i))`. An empty iterator yields zero.
    pub fn sum<I: IntoIterator<Item = LogValue>>(values: I) -> LogValue {
        let values: Vec<f64> = values.into_iter().map(|v| v.0).collect();
        let max = values
            .iter()
            .copied()
            .max_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal))
            .unwrap_or(f64::NEG_INFINITY);
        if max == f64::NEG_INFINITY {
            return LogValue::ZERO;
        }
        let acc: f64 = values.iter().map(|v| (v - max).exp()).sum();
        LogValue(max + acc.ln())
    }
}

impl Mul for LogValue {
    type Output = LogValue;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: LogValue) -> LogValue {
        LogValue(self.0 + rhs.0)
    }
}

impl Add for LogValue {
    type Output = LogValue;

    fn add(self, rhs: LogValue) -> LogValue {
        LogValue::sum([self, rhs])
    }
}

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain("log_gamma", format!("requires x > 0, got {x}")));
    }
    Ok(ln_gamma(x))
}

/// Unchecked `ln Γ(x)`: shifts the argument up past [`STIRLING_MIN`] and then
/// applies the Stirling series.
pub(crate) fn ln_gamma(x: f64) -> f64 {
    let mut z = x;
    let mut shift = 1.0;
    while z < STIRLING_MIN {
        shift *= z;
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv_sq = inv * inv;
    let mut series = 0.0;
    let mut power = inv;
    for c in STIRLING_COEFFS {
        series += c * power;
        power *= inv_sq;
    }
    let stirling = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series;
    stirling - shift.ln()
}

/// Regularized lower incomplete gamma `P(a, x) = γ(a, x) / Γ(a)`.
///
/// Uses the power series for `x < a + 1` and Lentz's continued fraction for
/// the upper function otherwise.
pub fn reg_lower_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    check_incomplete_gamma_args("reg_lower_incomplete_gamma", a, x)?;
    Ok(lower_unchecked(a, x))
}

/// Regularized upper incomplete gamma `Q(a, x) = 1 - P(a, x)`, computed
/// without cancellation when `Q` is small.
pub fn reg_upper_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    check_incomplete_gamma_args("reg_upper_incomplete_gamma", a, x)?;
    Ok(upper_unchecked(a, x))
}

fn check_incomplete_gamma_args(function: &'static str, a: f64, x: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(domain(function, format!("requires a > 0, got {a}")));
    }
    if !(x >= 0.0) || x.is_nan() {
        return Err(domain(function, format!("requires x >= 0, got {x}")));
    }
    Ok(())
}

pub(crate) fn lower_unchecked(a: f64, x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if x == f64::INFINITY {
        1.0
    } else if x < a + 1.0 {
        lower_series(a, x)
    } else {
        1.0 - upper_continued_fraction(a, x)
    }
}

pub(crate) fn upper_unchecked(a: f64, x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else if x == f64::INFINITY {
        0.0
    } else if x < a + 1.0 {
        1.0 - lower_series(a, x)
    } else {
        upper_continued_fraction(a, x)
    }
}

fn prefactor(a: f64, x: f64) -> f64 {
    (a * x.ln() - x - ln_gamma(a)).exp()
}

fn lower_series(a: f64, x: f64) -> f64 {
    let mut denom = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..MAX_ITER {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    (sum * prefactor(a, x)).clamp(0.0, 1.0)
}

fn upper_continued_fraction(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    (prefactor(a, x) * h).clamp(0.0, 1.0)
}

/// `ln C(n, k)`.
pub fn log_binomial(n: u64, k: u64) -> Result<f64> {
    if k > n {
        return Err(domain("log_binomial", format!("k = {k} exceeds n = {n}")));
    }
    Ok(ln_binomial(n, k))
}

/// Unchecked `ln C(n, k)` for `k <= n`. Symmetric in `k <-> n - k` bit for bit.
pub(crate) fn ln_binomial(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    match k {
        0 => 0.0,
        1 => (n as f64).ln(),
        _ => {
            let n = n as f64;
            let k = k as f64;
            ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
        }
    }
}

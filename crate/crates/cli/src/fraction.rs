//! Real-number arguments written as decimals or exact ratios (`26/1734`).

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRealError(String);

impl fmt::Display for ParseRealError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParseRealError {}

fn number(s: &str, whole: &str) -> Result<f64, ParseRealError> {
    let s = s.trim();
    let v: f64 = s
        .parse()
        .map_err(|_| ParseRealError(format!("`{whole}` is not a number or fraction")))?;
    if !v.is_finite() {
        return Err(ParseRealError(format!("`{whole}` is not finite")));
    }
    Ok(v)
}

impl FromStr for Real {
    type Err = ParseRealError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once('/') {
            None => number(s, s).map(Real),
            Some((num, den)) => {
                let num = number(num, s)?;
                let den = number(den, s)?;
                if den == 0.0 {
                    return Err(ParseRealError(format!("`{s}` divides by zero")));
                }
                Ok(Real(num / den))
            }
        }
    }
}

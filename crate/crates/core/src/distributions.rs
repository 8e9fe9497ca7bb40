//! Probability mass and upper-tail functions for the Poisson, negative
//! binomial (geometric at shape 1) and hypergeometric distributions.
//!
//! Small tails are summed over the upper support in log space instead of being
//! computed as `1 - cdf`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::numerics::{ln_binomial, ln_gamma, lower_unchecked, LogValue};

const TAIL_EPS: f64 = 1e-17;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoissonParams {
    mean: f64,
}

impl PoissonParams {
    pub fn new(mean: f64) -> Result<Self> {
        if !(mean > 0.0) || !mean.is_finite() {
            return Err(invalid(
                "mean",
                format!("must be positive and finite, got {mean}"),
            ));
        }
        Ok(PoissonParams { mean })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn ln_pmf(&self, k: u64) -> f64 {
        let k = k as f64;
        k * self.mean.ln() - self.mean - ln_gamma(k + 1.0)
    }

    pub fn pmf(&self, k: u64) -> f64 {
        self.ln_pmf(k).exp()
    }

    /// `P(N >= n)`, via the regularized lower incomplete gamma `P(n, mean)`.
    pub fn tail(&self, n: u64) -> f64 {
        if n == 0 {
            1.0
        } else {
            lower_unchecked(n as f64, self.mean)
        }
    }
}

/// Negative binomial counting failures before the `shape`-th success.
///
/// As a Gamma mixture of Poissons with Gamma shape `r` and mean `m`, the
/// success probability is `r / (r + m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegBinomialParams {
    shape: f64,
    success_prob: f64,
}

impl NegBinomialParams {
    pub fn new(shape: f64, success_prob: f64) -> Result<Self> {
        if !(shape > 0.0) || !shape.is_finite() {
            return Err(invalid(
                "shape",
                format!("must be positive and finite, got {shape}"),
            ));
        }
        if !(success_prob > 0.0 && success_prob < 1.0) {
            return Err(invalid(
                "success_prob",
                format!("must lie in (0, 1), got {success_prob}"),
            ));
        }
        Ok(NegBinomialParams {
            shape,
            success_prob,
        })
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn success_prob(&self) -> f64 {
        self.success_prob
    }

    pub fn mean(&self) -> f64 {
        self.shape * (1.0 - self.success_prob) / self.success_prob
    }

    pub fn variance(&self) -> f64 {
        self.mean() / self.success_prob
    }

    pub fn ln_pmf(&self, k: u64) -> f64 {
        let r = self.shape;
        let k = k as f64;
        ln_gamma(k + r) - ln_gamma(r) - ln_gamma(k + 1.0)
            + r * self.success_prob.ln()
            + k * (-self.success_prob).ln_1p()
    }

    pub fn pmf(&self, k: u64) -> f64 {
        self.ln_pmf(k).exp()
    }

    /// `P(N >= n)`. Shape 1 uses the geometric closed form `(1 - p)^n`;
    /// other shapes sum whichever side of `n` keeps the result free of
    /// cancellation.
    pub fn tail(&self, n: u64) -> f64 {
        if n == 0 {
            return 1.0;
        }
        let failure = 1.0 - self.success_prob;
        if self.shape == 1.0 {
            return failure.powf(n as f64);
        }
        let below: f64 = (0..n).map(|k| self.pmf(k)).sum();
        if below <= 0.5 {
            return (1.0 - below).clamp(0.0, 1.0);
        }
        self.upper_sum(n).min(1.0)
    }

    fn upper_sum(&self, n: u64) -> f64 {
        let mode = ((self.shape - 1.0) * (1.0 - self.success_prob) / self.success_prob)
            .max(0.0)
            .floor() as u64;
        let mut k = n;
        let mut term = self.pmf(k);
        let mut sum = 0.0;
        loop {
            sum += term;
            if k >= mode && term <= sum * TAIL_EPS {
                return sum;
            }
            // pmf(k + 1) / pmf(k) = (k + r) / (k + 1) * (1 - p)
            let ratio = (k as f64 + self.shape) / (k as f64 + 1.0) * (1.0 - self.success_prob);
            term *= ratio;
            k += 1;
            if term == 0.0 {
                return sum;
            }
        }
    }
}

/// Number of marked items among `draws` taken without replacement from a
/// `population` containing `successes` marked items.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HypergeomParams {
    population: u64,
    successes: u64,
    draws: u64,
}

impl HypergeomParams {
    pub fn new(population: u64, successes: u64, draws: u64) -> Result<Self> {
        if successes > population {
            return Err(invalid(
                "successes",
                format!("{successes} exceeds population {population}"),
            ));
        }
        if draws > population {
            return Err(invalid(
                "draws",
                format!("{draws} exceeds population {population}"),
            ));
        }
        Ok(HypergeomParams {
            population,
            successes,
            draws,
        })
    }

    pub fn population(&self) -> u64 {
        self.population
    }

    pub fn successes(&self) -> u64 {
        self.successes
    }

    pub fn draws(&self) -> u64 {
        self.draws
    }

    /// Inclusive support bounds `(lo, hi)`.
    pub fn support(&self) -> (u64, u64) {
        let lo = (self.draws + self.successes).saturating_sub(self.population);
        let hi = self.draws.min(self.successes);
        (lo, hi)
    }

    pub fn ln_pmf(&self, k: u64) -> LogValue {
        let (lo, hi) = self.support();
        if k < lo || k > hi {
            return LogValue::ZERO;
        }
        let ln = ln_binomial(self.successes, k)
            + ln_binomial(self.population - self.successes, self.draws - k)
            - ln_binomial(self.population, self.draws);
        LogValue::new_unchecked(ln)
    }

    /// Zero outside the support.
    pub fn pmf(&self, k: u64) -> f64 {
        self.ln_pmf(k).value().min(1.0)
    }

    /// `P(X >= k)`, the one-sided ("greater") exact p-value for an observed `k`.
    pub fn tail(&self, k: u64) -> f64 {
        let (lo, hi) = self.support();
        if k <= lo {
            return 1.0;
        }
        if k > hi {
            return 0.0;
        }
        LogValue::sum((k..=hi).map(|j| self.ln_pmf(j)))
            .value()
            .min(1.0)
    }
}

pub fn poisson_tail(params: PoissonParams, n: u64) -> f64 {
    params.tail(n)
}

pub fn neg_binomial_tail(params: NegBinomialParams, n: u64) -> f64 {
    params.tail(n)
}

pub fn hypergeom_pmf(params: HypergeomParams, k: u64) -> f64 {
    params.pmf(k)
}

pub fn hypergeom_tail(params: HypergeomParams, k: u64) -> f64 {
    params.tail(k)
}

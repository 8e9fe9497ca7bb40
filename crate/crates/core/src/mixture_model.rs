//! Gamma-mixed Poisson incident counts.
//!
//! A subject's incident intensity `L` per unit exposure is drawn from a Gamma
//! distribution with shape `rho` and mean `mu`; given `L` and an exposure `t`,
//! the incident count `N` is Poisson with mean `L * t`. Marginally `N` is
//! negative binomial with success probability `rho / (rho + t * mu)`. At
//! `rho = 1` the intensity is exponential and the upper tail takes the
//! geometric form
//!
//! ```text
//! P(N >= n) = (t mu / (1 + t mu))^n
//! ```
//!
//! The variance splits by the law of total variance into the Poisson part
//! `E var(N | L) = t mu` and the mixing part `var E(N | L) = (t mu)^2 / rho`.

use serde::{Deserialize, Serialize};

use crate::distributions::{NegBinomialParams, PoissonParams};
use crate::error::{domain, invalid, Result};
use crate::numerics::{ln_gamma, upper_unchecked};
use crate::quadrature;

/// Parameters `(rho, mu, t)` of the mixed model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedPoissonModel {
    rho: f64,
    mu: f64,
    t: f64,
}

impl MixedPoissonModel {
    pub fn new(rho: f64, mu: f64, t: f64) -> Result<Self> {
        for (name, value) in [("rho", rho), ("mu", mu), ("t", t)] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(invalid(
                    name,
                    format!("must be positive and finite, got {value}"),
                ));
            }
        }
        Ok(MixedPoissonModel { rho, mu, t })
    }

    /// Exponential mixing (`rho = 1`) with `mu = incidents / shifts`, divided once.
    pub fn from_counts(incidents: u64, shifts: u64, t: f64) -> Result<Self> {
        if shifts == 0 {
            return Err(invalid("shifts", "must be positive"));
        }
        MixedPoissonModel::new(1.0, incidents as f64 / shifts as f64, t)
    }

    pub fn with_rho(self, rho: f64) -> Result<Self> {
        MixedPoissonModel::new(rho, self.mu, self.t)
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Gamma scale of the intensity, `mu / rho`.
    pub fn intensity_scale(&self) -> f64 {
        self.mu / self.rho
    }

    pub fn expected_count(&self) -> f64 {
        self.t * self.mu
    }

    /// The marginal count distribution.
    pub fn marginal(&self) -> NegBinomialParams {
        let p = self.rho / (self.rho + self.expected_count());
        NegBinomialParams::new(self.rho, p).expect("valid model gives p in (0, 1)")
    }

    /// `P(N >= n)`.
    pub fn tail_probability(&self, n: u64) -> f64 {
        if n == 0 {
            return 1.0;
        }
        if self.rho == 1.0 {
            let tm = self.expected_count();
            return (tm / (1.0 + tm)).powf(n as f64);
        }
        self.marginal().tail(n)
    }

    /// `P(N >= k)` for `k = 1..=k_max`.
    pub fn tail_curve(&self, k_max: u64) -> TailCurve {
        let k_values: Vec<u64> = (1..=k_max).collect();
        let probabilities = k_values.iter().map(|&k| self.tail_probability(k)).collect();
        TailCurve {
            k_values,
            probabilities,
        }
    }

    pub fn variance_decomposition(&self) -> VarianceDecomposition {
        let tm = self.expected_count();
        VarianceDecomposition {
            poisson: tm,
            mixing: tm * tm / self.rho,
        }
    }

    pub fn count_variance(&self) -> f64 {
        self.variance_decomposition().total()
    }

    /// `P(N >= n)` by integrating the conditional Poisson tail against the
    /// intensity density. Independent of [`Self::tail_probability`]; used as a
    /// cross-check.
    pub fn tail_by_quadrature(&self, n: u64) -> f64 {
        if n == 0 {
            return 1.0;
        }
        let rho = self.rho;
        let tm = self.expected_count();
        // Intensity in units of its mean: u = L / mu ~ Gamma(shape rho, rate rho).
        let ln_norm = rho * rho.ln() - ln_gamma(rho);
        let density = move |u: f64| {
            if u <= 0.0 {
                return 0.0;
            }
            (ln_norm + (rho - 1.0) * u.ln() - rho * u).exp()
        };
        let mut upper = 8.0;
        while upper_unchecked(rho, rho * upper) > 1e-18 {
            upper *= 2.0;
        }
        let n = n as f64;
        let integrand = move |u: f64| {
            let conditional = if u <= 0.0 {
                0.0
            } else {
                PoissonParams::new(tm * u)
                    .map(|p| p.tail(n as u64))
                    .unwrap_or(0.0)
            };
            conditional * density(u)
        };
        quadrature::integrate(integrand, 0.0, upper, 32, 1e-13)
    }
}

/// `E var(N | L)` and `var E(N | L)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceDecomposition {
    pub poisson: f64,
    pub mixing: f64,
}

impl VarianceDecomposition {
    pub fn total(&self) -> f64 {
        self.poisson + self.mixing
    }
}

/// `P(N >= k)` against `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailCurve {
    pub k_values: Vec<u64>,
    pub probabilities: Vec<f64>,
}

impl TailCurve {
    pub fn len(&self) -> usize {
        self.k_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k_values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.k_values
            .iter()
            .copied()
            .zip(self.probabilities.iter().copied())
    }
}

/// Probability that, of two subjects with independent exponential intensities,
/// one has at least `k` times the rate of the other: `2 / (k + 1)`.
pub fn rate_ratio_exceedance(k: f64) -> Result<f64> {
    if !(k >= 1.0) || !k.is_finite() {
        return Err(domain(
            "rate_ratio_exceedance",
            format!("requires k >= 1, got {k}"),
        ));
    }
    Ok(2.0 / (k + 1.0))
}

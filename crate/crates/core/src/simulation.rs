//! Seeded Monte Carlo checks of the analytic results.
//!
//! Random numbers come from ChaCha8 (`rand_chacha::ChaCha8Rng`). Replications
//! are cut into fixed batches of [`BATCH_SIZE`]; batch `i` runs on the stream
//! `i` of a generator seeded with the configured seed. Batches may run in
//! parallel, and because they are merged by integer counts the estimate does
//! not depend on how they are scheduled.
//!
//! Intensities at `rho = 1` are exponential and drawn by inverse transform,
//! `-mu * ln(1 - U)`. Other shapes use Marsaglia and Tsang's squeeze/rejection
//! Gamma sampler from `rand_distr`. Poisson counts also come from `rand_distr`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::HypergeomParams;
use crate::error::{domain, Error, Result};
use crate::mixture_model::MixedPoissonModel;

pub const DEFAULT_SEED: u64 = 20_100_808;
pub const BATCH_SIZE: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimModel {
    Mixture(MixedPoissonModel),
    Allocation(HypergeomParams),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    replications: u64,
    seed: u64,
    model: SimModel,
}

impl SimConfig {
    pub fn new(replications: u64, seed: u64, model: SimModel) -> Result<Self> {
        if replications == 0 {
            return Err(Error::InvalidParameter {
                name: "replications",
                detail: "must be at least 1".into(),
            });
        }
        Ok(SimConfig {
            replications,
            seed,
            model,
        })
    }

    pub fn mixture(replications: u64, seed: u64, model: MixedPoissonModel) -> Result<Self> {
        SimConfig::new(replications, seed, SimModel::Mixture(model))
    }

    pub fn allocation(replications: u64, seed: u64, params: HypergeomParams) -> Result<Self> {
        SimConfig::new(replications, seed, SimModel::Allocation(params))
    }

    pub fn replications(&self) -> u64 {
        self.replications
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn model(&self) -> SimModel {
        self.model
    }

    fn mixture_model(&self) -> Result<MixedPoissonModel> {
        match self.model {
            SimModel::Mixture(m) => Ok(m),
            SimModel::Allocation(_) => Err(Error::Unsupported(
                "a mixture simulation needs a mixed Poisson model".into(),
            )),
        }
    }

    fn allocation_params(&self) -> Result<HypergeomParams> {
        match self.model {
            SimModel::Allocation(h) => Ok(h),
            SimModel::Mixture(_) => Err(Error::Unsupported(
                "an allocation simulation needs hypergeometric parameters".into(),
            )),
        }
    }

    /// `(batch index, replications in batch)` for every batch.
    fn batches(&self) -> Vec<(u64, u64)> {
        let full = self.replications / BATCH_SIZE;
        let rest = self.replications % BATCH_SIZE;
        let mut out: Vec<(u64, u64)> = (0..full).map(|i| (i, BATCH_SIZE)).collect();
        if rest > 0 {
            out.push((full, rest));
        }
        out
    }

    fn rng_for_batch(&self, batch: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(batch);
        rng
    }

    /// Runs `trial` once per replication and counts successes.
    fn count_successes<F>(&self, trial: F) -> u64
    where
        F: Fn(&mut ChaCha8Rng) -> bool + Sync,
    {
        self.batches()
            .into_par_iter()
            .map(|(batch, reps)| {
                let mut rng = self.rng_for_batch(batch);
                (0..reps).filter(|_| trial(&mut rng)).count() as u64
            })
            .sum()
    }
}

/// A binary-outcome Monte Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimEstimate {
    pub point: f64,
    pub std_error: f64,
    pub replications: u64,
}

impl SimEstimate {
    pub fn from_counts(successes: u64, replications: u64) -> Self {
        let point = successes as f64 / replications as f64;
        SimEstimate {
            point,
            std_error: (point * (1.0 - point) / replications as f64).sqrt(),
            replications,
        }
    }

    /// `|point - target|` in units of the standard error. Zero error with an
    /// exact hit counts as 0; zero error with a miss as infinity.
    pub fn z_score(&self, target: f64) -> f64 {
        let diff = (self.point - target).abs();
        if diff == 0.0 {
            0.0
        } else if self.std_error == 0.0 {
            f64::INFINITY
        } else {
            diff / self.std_error
        }
    }

    pub fn within(&self, target: f64, sigmas: f64) -> bool {
        self.z_score(target) <= sigmas
    }
}

fn exponential<R: Rng>(rng: &mut R, mean: f64) -> f64 {
    let u: f64 = rng.random();
    -mean * (-u).ln_1p()
}

struct IntensitySampler {
    mean: f64,
    gamma: Option<Gamma<f64>>,
}

impl IntensitySampler {
    fn new(model: &MixedPoissonModel) -> Self {
        let gamma = (model.rho() != 1.0).then(|| {
            Gamma::new(model.rho(), model.intensity_scale()).expect("validated model parameters")
        });
        IntensitySampler {
            mean: model.mu(),
            gamma,
        }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match &self.gamma {
            None => exponential(rng, self.mean),
            Some(g) => g.sample(rng),
        }
    }
}

fn poisson_count<R: Rng>(rng: &mut R, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    let p: Poisson<f64> = Poisson::new(mean).expect("positive finite mean");
    p.sample(rng) as u64
}

/// Distribution of simulated incident counts `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountHistogram {
    /// `counts[k]` replications produced `N = k`.
    pub counts: Vec<u64>,
    pub replications: u64,
}

impl CountHistogram {
    fn merge(mut self, other: CountHistogram) -> CountHistogram {
        if other.counts.len() > self.counts.len() {
            self.counts.resize(other.counts.len(), 0);
        }
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self.replications += other.replications;
        self
    }

    pub fn at_least(&self, n: u64) -> u64 {
        self.counts.iter().skip(n as usize).sum()
    }

    pub fn tail(&self, n: u64) -> SimEstimate {
        SimEstimate::from_counts(self.at_least(n), self.replications)
    }

    /// Sample mean and variance with their standard errors.
    pub fn moments(&self) -> MomentEstimate {
        let reps = self.replications as f64;
        let mut sum = 0u128;
        for (k, &c) in self.counts.iter().enumerate() {
            sum += k as u128 * c as u128;
        }
        let mean = sum as f64 / reps;
        let central = |power: i32| -> f64 {
            self.counts
                .iter()
                .enumerate()
                .map(|(k, &c)| c as f64 * (k as f64 - mean).powi(power))
                .sum::<f64>()
                / reps
        };
        let m2 = central(2);
        let m4 = central(4);
        let variance = m2 * reps / (reps - 1.0).max(1.0);
        MomentEstimate {
            mean,
            mean_std_error: (variance / reps).sqrt(),
            variance,
            variance_std_error: ((m4 - m2 * m2).max(0.0) / reps).sqrt(),
            replications: self.replications,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub mean: f64,
    pub mean_std_error: f64,
    pub variance: f64,
    pub variance_std_error: f64,
    pub replications: u64,
}

/// Draws `(L, N)` with `L ~ Gamma(rho, mu / rho)` and `N | L ~ Poisson(L t)`
/// and tabulates `N`.
pub fn simulate_counts(config: &SimConfig) -> Result<CountHistogram> {
    let model = config.mixture_model()?;
    let sampler = IntensitySampler::new(&model);
    let t = model.t();
    let hist = config
        .batches()
        .into_par_iter()
        .map(|(batch, reps)| {
            let mut rng = config.rng_for_batch(batch);
            let mut counts = Vec::new();
            for _ in 0..reps {
                let intensity = sampler.sample(&mut rng);
                let n = poisson_count(&mut rng, intensity * t) as usize;
                if n >= counts.len() {
                    counts.resize(n + 1, 0);
                }
                counts[n] += 1;
            }
            CountHistogram {
                counts,
                replications: reps,
            }
        })
        .reduce(
            || CountHistogram {
                counts: Vec::new(),
                replications: 0,
            },
            CountHistogram::merge,
        );
    Ok(hist)
}

/// Estimates `P(N >= n)` under the mixed model.
pub fn simulate_mixture_tail(config: &SimConfig, n: u64) -> Result<SimEstimate> {
    Ok(simulate_counts(config)?.tail(n))
}

/// Estimates the probability that of two independent exponential intensities
/// one is at least `k` times the other.
pub fn simulate_rate_ratio(config: &SimConfig, k: f64) -> Result<SimEstimate> {
    let model = config.mixture_model()?;
    if model.rho() != 1.0 {
        return Err(Error::Unsupported(format!(
            "rate-ratio simulation needs exponential intensities (rho = 1), got rho = {}",
            model.rho()
        )));
    }
    if !(k >= 1.0) || !k.is_finite() {
        return Err(domain(
            "simulate_rate_ratio",
            format!("requires k >= 1, got {k}"),
        ));
    }
    let mean = model.mu();
    let hits = config.count_successes(|rng| {
        let a = exponential(rng, mean);
        let b = exponential(rng, mean);
        a >= k * b || b >= k * a
    });
    Ok(SimEstimate::from_counts(hits, config.replications))
}

/// Estimates `P(X >= observed)` by drawing the suspect's shifts without
/// replacement from all shifts, `successes` of which carry an incident.
pub fn simulate_allocation(config: &SimConfig, observed: u64) -> Result<SimEstimate> {
    let h = config.allocation_params()?;
    let hits = config.count_successes(|rng| {
        let mut remaining = h.population();
        let mut marked = h.successes();
        let mut found = 0u64;
        for _ in 0..h.draws() {
            if marked == 0 {
                break;
            }
            if rng.random_range(0..remaining) < marked {
                marked -= 1;
                found += 1;
            }
            remaining -= 1;
        }
        found >= observed
    });
    Ok(SimEstimate::from_counts(hits, config.replications))
}
